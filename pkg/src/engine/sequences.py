"""
The three alpha_n families, the convexity condition on them, and
cancellation-free differences used by every downstream computation
"""
import logging
import math
from dataclasses import replace
from typing import Optional

from ..models.enums import SequenceCase
from ..models.errors import ConditionError, SequenceError
from ..models.results import ConditionReport
from ..models.sequence import AlphaSequence

logger = logging.getLogger(__name__)

# Largest construction index per case in binary64 arithmetic
INDEX_CAPS = {
    SequenceCase.A: 10_000,
    SequenceCase.B: 10_000,
    SequenceCase.C: 12,
}
# Squared offsets of the smallest angle must stay representable
MIN_ALPHA = 1e-150
DEFAULT_HORIZON = 60
_SERIES_CUTOFF = 0.1


def make_sequence(case: SequenceCase, lam: Optional[float] = None, q: Optional[float] = None,
                  horizon: int = DEFAULT_HORIZON) -> AlphaSequence:
    """Build a family with alpha_1 = pi/2; the scale c is solved, never supplied"""
    case = SequenceCase(case)
    if case == SequenceCase.A:
        if q is None or not math.isfinite(q) or q <= 0:
            raise SequenceError(f"Case A needs an exponent q > 0, got {q!r}")
        return AlphaSequence(case=case, c=math.pi / 2, q=float(q))

    if lam is None or not math.isfinite(lam) or not 0.0 < lam < 1.0:
        raise SequenceError(f"Case {case.value} needs lambda in (0, 1), got {lam!r}")
    seq = AlphaSequence(case=case, c=math.pi / (2 * lam), lam=float(lam))
    if case == SequenceCase.C:
        n_min = min_valid_index(seq, horizon)
        if n_min > 1:
            logger.info("Case C with lambda=%g: construction starts at n_min=%d", lam, n_min)
        seq = replace(seq, n_min=n_min)
    return seq


def index_cap(seq: AlphaSequence) -> int:
    """Largest build depth whose alpha_{n+1} stays above MIN_ALPHA, within the per-case ceiling"""
    cap = INDEX_CAPS[seq.case]
    while cap > seq.n_min + 2 and alpha(seq, cap + 1) < MIN_ALPHA:
        cap -= 1
    return cap


def alpha(seq: AlphaSequence, n: int) -> float:
    if n < 1:
        raise SequenceError(f"Index must be positive, got {n}")
    if seq.case == SequenceCase.A:
        return seq.c * n ** (-seq.q)
    if seq.case == SequenceCase.B:
        return seq.c * seq.lam ** n
    return seq.c * math.exp(n * n * math.log(seq.lam))


def alpha_ratio(seq: AlphaSequence, m: int, n: int) -> float:
    """alpha_n / alpha_m, free of underflow in the individual terms"""
    if seq.case == SequenceCase.A:
        return (m / n) ** seq.q
    if seq.case == SequenceCase.B:
        return math.exp((n - m) * math.log(seq.lam))
    return math.exp((n * n - m * m) * math.log(seq.lam))


def alpha_diff(seq: AlphaSequence, m: int, n: int) -> float:
    """alpha_m - alpha_n for m < n, to full relative precision"""
    if m >= n:
        raise SequenceError(f"alpha_diff needs m < n, got m={m}, n={n}")
    if seq.case == SequenceCase.A:
        return -alpha(seq, m) * math.expm1(-seq.q * math.log1p((n - m) / m))
    if seq.case == SequenceCase.B:
        return -alpha(seq, m) * math.expm1((n - m) * math.log(seq.lam))
    return -alpha(seq, m) * math.expm1((n * n - m * m) * math.log(seq.lam))


def alpha_diff2(seq: AlphaSequence, n: int) -> float:
    """Second difference alpha_{n-1} - 2 alpha_n + alpha_{n+1}, factored"""
    if n < 2:
        raise SequenceError(f"alpha_diff2 needs n >= 2, got {n}")
    if seq.case == SequenceCase.A:
        return alpha(seq, n) * _symmetric_power_defect(seq.q, 1.0 / n)
    if seq.case == SequenceCase.B:
        return alpha(seq, n - 1) * (1.0 - seq.lam) ** 2
    log_lam = math.log(seq.lam)
    bracket = 1.0 - 2.0 * math.exp((2 * n - 1) * log_lam) + math.exp(4 * n * log_lam)
    return alpha(seq, n - 1) * bracket


def _symmetric_power_defect(q: float, x: float) -> float:
    """(1-x)^(-q) - 2 + (1+x)^(-q) for 0 < x <= 1/2"""
    if x > _SERIES_CUTOFF:
        return math.expm1(-q * math.log1p(-x)) + math.expm1(-q * math.log1p(x))
    # 2 * sum over even k of (q)_k / k! * x^k
    x2 = x * x
    term = 0.5 * q * (q + 1.0) * x2
    total = 0.0
    k = 2
    while term > 1e-18 * total or total == 0.0:
        total += term
        term *= (q + k) * (q + k + 1.0) / ((k + 1.0) * (k + 2.0)) * x2
        k += 2
        if k > 200:
            break
    return 2.0 * total


def convexity_margin(seq: AlphaSequence, n: int) -> float:
    """(alpha_n - 2 alpha_{n+1} + alpha_{n+2}) / alpha_n; nonnegative iff the midpoint condition holds at n"""
    if seq.case == SequenceCase.A:
        return alpha_diff2(seq, n + 1) / alpha(seq, n)
    if seq.case == SequenceCase.B:
        return (1.0 - seq.lam) ** 2
    log_lam = math.log(seq.lam)
    return 1.0 - 2.0 * math.exp((2 * n + 1) * log_lam) + math.exp((4 * n + 4) * log_lam)


def check_condition_c1(seq: AlphaSequence, n_max: int) -> ConditionReport:
    """Check strict decrease and midpoint convexity of alpha_n for n_min <= n <= n_max"""
    if n_max < seq.n_min + 2:
        raise SequenceError(f"n_max must be at least n_min + 2 = {seq.n_min + 2}, got {n_max}")
    for n in range(seq.n_min, n_max):
        if alpha_ratio(seq, n, n + 1) >= 1.0:
            return ConditionReport(n_max=n_max, first_failure=n, failure_kind="monotone")
        if n + 2 <= n_max and convexity_margin(seq, n) < 0.0:
            return ConditionReport(n_max=n_max, first_failure=n, failure_kind="convexity")
    return ConditionReport(n_max=n_max)


def min_valid_index(seq: AlphaSequence, horizon: int = DEFAULT_HORIZON) -> int:
    """Smallest N such that the midpoint condition holds for every N <= n <= horizon"""
    if seq.case != SequenceCase.C:
        return 1
    last_failure = 0
    first_failure = None
    for n in range(1, horizon - 1):
        if convexity_margin(seq, n) < 0.0:
            last_failure = n
            if first_failure is None:
                first_failure = n
    if last_failure >= horizon - 2:
        raise ConditionError(
            f"Convexity condition still fails at n={last_failure} within horizon {horizon}",
            first_failure=first_failure,
        )
    return last_failure + 1


def b_gap(seq: AlphaSequence, n: int) -> float:
    """b_n = alpha_{n-1} - alpha_n"""
    return alpha_diff(seq, n - 1, n)
