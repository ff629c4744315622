"""
Difference quotients of the projection along the radius-2 circle and the
numeric verifiers built on them
"""
import logging
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..models.enums import BoundaryVariant, SequenceCase, SmoothnessClass, Verdict
from ..models.errors import ConfigError, GeometryError, TruncationError
from ..models.geometry import BoundaryModel, Point2
from ..models.results import LemmaReport, LipschitzReport, OscillationReport, QuotientSample
from ..models.sequence import AlphaSequence
from .geometry import arc_radius, boundary_offset_x, boundary_x_prime, half_angle, midpoint_offset
from .projection import arc_param_gap, chord_param_gap, param_t, project_circle, project_offset, solve_param_s
from .sequences import alpha_diff

logger = logging.getLogger(__name__)

NOISE_FLOOR = 1e-14
TAIL_SLACK = 1.1


def tail_converges(deviations: Sequence[float], tolerance: float, slack: float = TAIL_SLACK,
                   noise_floor: float = NOISE_FLOOR) -> bool:
    """
    Accept a limit when the last deviation is within tolerance and the final
    third of the deviations does not grow beyond the slack
    """
    if not deviations:
        return False
    if not deviations[-1] <= tolerance:
        return False
    tail = list(deviations[-max(2, len(deviations) // 3):])
    return all(b <= slack * a + noise_floor for a, b in zip(tail, tail[1:]))


def validate_range(model: BoundaryModel, n_range: Tuple[int, int], offset: int = 1) -> List[int]:
    """Indices of n_range, checked against n_min + offset and the depth guard"""
    n0, n1 = n_range
    if n0 > n1:
        raise ConfigError(f"Empty index range {n0}:{n1}")
    if n0 < model.seq.n_min + offset:
        raise ConfigError(f"Range start {n0} below n_min + {offset} = {model.seq.n_min + offset}")
    if n1 > model.depth - 2:
        raise TruncationError(f"Range end {n1} exceeds depth - 2 = {model.depth - 2}")
    return list(range(n0, n1 + 1))


def _require_smooth(model: BoundaryModel) -> None:
    if model.variant != BoundaryVariant.SMOOTH:
        raise GeometryError("This analysis needs the smooth boundary variant")


# Quotients

def projected_offset(model: BoundaryModel, theta: float) -> Point2:
    """Pi(2e^{i theta/2}) - (1,0), refusing answers touched by the truncation"""
    result = project_circle(theta, model)
    if not result.truncation_safe:
        raise TruncationError(f"theta={theta:.6g} projects onto a piece within two of the closure")
    return result.displacement


def quotient(model: BoundaryModel, theta: float, label: str = "grid", n: Optional[int] = None) -> QuotientSample:
    if not 0.0 < theta <= math.pi:
        raise GeometryError(f"theta must lie in (0, pi], got {theta}")
    displacement = projected_offset(model, theta)
    return QuotientSample(
        theta=theta,
        projected=Point2(1.0 + displacement.x, displacement.y),
        quotient=displacement.scale(1.0 / theta),
        label=label,
        n=n,
    )


def quotient_sweep(model: BoundaryModel, exponents: Optional[Tuple[int, int]] = None,
                   n_range: Optional[Tuple[int, int]] = None) -> List[QuotientSample]:
    """Samples at theta = 2^-k for k in exponents, then at t_n and s_n for n in n_range"""
    samples = []
    if exponents is not None:
        for k in range(exponents[0], exponents[1] + 1):
            samples.append(quotient(model, math.ldexp(1.0, -k), label="dyadic"))
    if n_range is not None:
        seq = model.seq
        for n in validate_range(model, n_range):
            samples.append(quotient(model, param_t(seq, n), label="t", n=n))
            samples.append(quotient(model, solve_param_s(seq, n, model), label="s", n=n))
    return samples


def tangent_gap_bound(theta: float) -> float:
    """||2e^{i theta/2} - 2 - i theta|| / theta"""
    dx = -4.0 * math.sin(0.25 * theta) ** 2
    if theta < 1e-3:
        dy = -theta ** 3 / 24.0 + theta ** 5 / 1920.0
    else:
        dy = 2.0 * math.sin(0.5 * theta) - theta
    return math.hypot(dx, dy) / theta


def tangent_vs_circle_gap(model: BoundaryModel, theta: float) -> float:
    """||Pi(2e^{i theta/2}) - Pi((2,0) + theta (0,1))|| / theta"""
    if not 0.0 < theta <= 1.0:
        raise GeometryError(f"theta must lie in (0, 1], got {theta}")
    on_circle = projected_offset(model, theta)
    tangent = project_offset(Point2(1.0, theta), model)
    if not tangent.truncation_safe:
        raise TruncationError(f"Tangent query at theta={theta:.6g} is truncation-unsafe")
    return (on_circle - tangent.displacement).norm() / theta


# Speeds along the boundary

def chord_speed(model: BoundaryModel, n: int) -> Point2:
    """(Pi(2e^{i t_{n-1}/2}) - Pi(2e^{i s_n/2})) / (t_{n-1} - s_n)"""
    _require_smooth(model)
    seq = model.seq
    upper = projected_offset(model, param_t(seq, n - 1))
    lower = projected_offset(model, solve_param_s(seq, n, model))
    return (upper - lower).scale(1.0 / chord_param_gap(seq, n))


def arc_speed(model: BoundaryModel, n: int) -> Point2:
    """(Pi(2e^{i s_n/2}) - Pi(2e^{i t_n/2})) / (s_n - t_n)"""
    _require_smooth(model)
    seq = model.seq
    upper = projected_offset(model, solve_param_s(seq, n, model))
    lower = projected_offset(model, param_t(seq, n))
    return (upper - lower).scale(1.0 / arc_param_gap(seq, n))


def arc_speed_target(seq: AlphaSequence, n: int) -> float:
    """2 (alpha_n - alpha_{n+1}) / (alpha_{n-1} + 2 alpha_n - 3 alpha_{n+1})"""
    step = alpha_diff(seq, n, n + 1)
    return 2.0 * step / (alpha_diff(seq, n - 1, n + 1) + 2.0 * step)


def arc_speed_limit(seq: AlphaSequence) -> float:
    if seq.case == SequenceCase.A:
        return 0.5
    if seq.case == SequenceCase.B:
        return 2.0 * seq.lam / (3.0 * seq.lam + 1.0)
    return 0.0


def s_quotient_limit(seq: AlphaSequence) -> float:
    """Limit of Im D(s_n)"""
    if seq.case == SequenceCase.A:
        return 0.5
    if seq.case == SequenceCase.B:
        lam = seq.lam
        return lam * (3.0 - lam) / (1.0 + 4.0 * lam - lam * lam)
    return 0.0


def radius_limit(seq: AlphaSequence) -> float:
    if seq.case == SequenceCase.A:
        return 1.0
    if seq.case == SequenceCase.B:
        return 2.0 * seq.lam / (1.0 + seq.lam)
    return 0.0


# Asymptotic equivalence

def asympt_equiv_check(f: Callable[[int], float], g: Callable[[int], float], h: Callable[[int], float],
                       c: float, n_range: Tuple[int, int], tolerance: float = 1e-6,
                       lemma: str = "asymptotic-helpers", case: str = "") -> LemmaReport:
    """
    Check (f - g) / (f - h) -> 1 given g ~ h and |f/h - 1| >= c. Indices where
    the hypotheses fail are listed in details and fail the report.
    """
    indices, ratios, deviations = [], [], []
    c_bounds, g_over_h = [], []
    violations: List[Dict] = []
    for n in range(n_range[0], n_range[1] + 1):
        fn, gn, hn = f(n), g(n), h(n)
        top, bottom = fn - gn, fn - hn
        if bottom == 0.0:
            if top == 0.0:
                ratio = 1.0
            else:
                ratio = math.inf
                violations.append({"n": n, "reason": "f - h vanishes"})
        else:
            ratio = top / bottom
        if hn == 0.0:
            violations.append({"n": n, "reason": "h vanishes"})
        else:
            bound = abs(fn / hn - 1.0)
            c_bounds.append(bound)
            g_over_h.append(abs(gn / hn - 1.0))
            if bound < c:
                violations.append({"n": n, "reason": f"|f/h - 1| = {bound:.6g} < c = {c}"})
        indices.append(n)
        ratios.append(ratio)
        deviations.append(abs(ratio - 1.0))

    if violations:
        logger.warning("%s: %d hypothesis violation(s), first at n=%d", lemma, len(violations), violations[0]["n"])
    passed = not violations and tail_converges(deviations, tolerance)
    return LemmaReport(
        lemma=lemma,
        case=case,
        n_range=tuple(n_range),
        indices=indices,
        observed=ratios,
        target=1.0,
        deviations=deviations,
        tolerance=tolerance,
        passed=passed,
        details={
            "c": c,
            "min_c_bound": min(c_bounds) if c_bounds else None,
            "g_over_h_deviation": g_over_h,
            "hypothesis_violations": violations,
        },
    )


# Weighted-mean identities

def weighted_mean_decomposition(model: BoundaryModel, n: int) -> Dict:
    """
    D(t_{n-1}) as the weighted mean of chord speed, arc speed and D(t_n), and
    D(s_n) as the weighted mean of arc speed and D(t_n)
    """
    _require_smooth(model)
    seq = model.seq
    t_prev, t_n, s_n = param_t(seq, n - 1), param_t(seq, n), solve_param_s(seq, n, model)
    chord_gap, arc_gap = chord_param_gap(seq, n), arc_param_gap(seq, n)
    p_prev = projected_offset(model, t_prev)
    p_s = projected_offset(model, s_n)
    p_t = projected_offset(model, t_n)

    chord = (p_prev - p_s).scale(1.0 / chord_gap)
    arc = (p_s - p_t).scale(1.0 / arc_gap)
    tail = p_t.scale(1.0 / t_n)
    weights3 = (chord_gap / t_prev, arc_gap / t_prev, t_n / t_prev)
    weights2 = (arc_gap / s_n, t_n / s_n)

    mean3 = chord.scale(weights3[0]) + arc.scale(weights3[1]) + tail.scale(weights3[2])
    mean2 = arc.scale(weights2[0]) + tail.scale(weights2[1])
    return {
        "n": n,
        "d_t_prev": p_prev.scale(1.0 / t_prev),
        "d_s": p_s.scale(1.0 / s_n),
        "chord_speed": chord,
        "arc_speed": arc,
        "d_t": tail,
        "weights3": weights3,
        "weights2": weights2,
        "mean3": mean3,
        "mean2": mean2,
    }


def weighted_mean_residual(model: BoundaryModel, n: int) -> float:
    parts = weighted_mean_decomposition(model, n)
    return max((parts["d_t_prev"] - parts["mean3"]).norm(), (parts["d_s"] - parts["mean2"]).norm())


# Non-existence of the directional derivative

def oscillation_threshold(seq: AlphaSequence) -> float:
    """Half of the expected gap between the two sub-limits"""
    if seq.case == SequenceCase.B:
        lam = seq.lam
        return (1.0 - lam) ** 2 / (4.0 * (1.0 + 4.0 * lam - lam * lam))
    if seq.case == SequenceCase.C:
        return 0.25
    return 0.02


def oscillation_report(model: BoundaryModel, n_range: Tuple[int, int]) -> OscillationReport:
    _require_smooth(model)
    seq = model.seq
    indices = validate_range(model, n_range)
    d_t, d_s, gaps = [], [], []
    for n in indices:
        at_t = quotient(model, param_t(seq, n), label="t", n=n).quotient
        at_s = quotient(model, solve_param_s(seq, n, model), label="s", n=n).quotient
        d_t.append((at_t.x, at_t.y))
        d_s.append((at_s.x, at_s.y))
        gaps.append((at_t - at_s).norm())

    tail = gaps[-max(1, len(gaps) // 3):]
    gap_estimate = min(tail)
    threshold = oscillation_threshold(seq)
    verdict = Verdict.NONCONVERGENT if gap_estimate > threshold else Verdict.NO_GAP
    logger.info("%s: gap estimate %.6g against threshold %.6g -> %s", seq.label, gap_estimate, threshold,
                verdict.value)
    return OscillationReport(
        case=seq.case.value,
        indices=indices,
        d_t=d_t,
        d_s=d_s,
        gaps=gaps,
        t_limit_estimate=d_t[-1],
        s_limit_estimate=d_s[-1],
        gap_estimate=gap_estimate,
        threshold=threshold,
        verdict=verdict,
        exploratory=seq.case == SequenceCase.A,
    )


# Smoothness of x(y) near y = 0

def shell_bound(seq: AlphaSequence, n: int) -> float:
    """sup |x''| over the arc C_{n+1}, reached at its steep end S_{n+1}"""
    return 1.0 / (arc_radius(seq, n + 1) * math.cos(half_angle(seq, n)) ** 3)


def window_indices(model: BoundaryModel, y_window: Tuple[float, float]) -> Tuple[int, int]:
    """Index range n whose windows [-y_n, y_n], y_n = Im T_n, have y_inner <= y_n <= y_outer"""
    y_inner, y_outer = sorted(abs(y) for y in y_window)
    seq = model.seq
    inside = [n for n in range(seq.n_min + 1, model.depth - 1)
              if y_inner <= midpoint_offset(seq, n).y <= y_outer]
    if not inside:
        raise ConfigError(f"No resolved window between y={y_inner:.6g} and y={y_outer:.6g}")
    return inside[0], inside[-1]


def lipschitz_diagnostics(model: BoundaryModel, n_range: Tuple[int, int]) -> LipschitzReport:
    """
    Local bound of x'' as the window [-y_n, y_n], y_n = Im T_n, shrinks.
    The bound at step n covers every arc resolved down to y_{n+1}.
    Windows are addressed by index; window_indices turns an ordinate
    interval around 0 into the matching n_range.
    """
    seq = model.seq
    indices = validate_range(model, n_range)
    ordinates, shells, windows = [], [], []
    running = 0.0
    for n in indices:
        shell = shell_bound(seq, n)
        running = max(running, shell)
        ordinates.append(midpoint_offset(seq, n).y)
        shells.append(shell)
        windows.append(running)

    classification = SmoothnessClass.UNDETERMINED
    growth = 1.0
    if len(windows) >= 4:
        last = windows[-4:]
        growth = min(b / a for a, b in zip(last, last[1:]))
        if growth >= 2.0:
            classification = SmoothnessClass.C1_NOT_C11
        elif max(last) <= 1.1 * min(last):
            classification = SmoothnessClass.C11
    logger.info("%s: x'' bound %.6g, growth %.3g per shrink -> %s", seq.label, windows[-1], growth,
                classification.value)
    return LipschitzReport(
        case=seq.case.value,
        indices=indices,
        window_ordinates=ordinates,
        shell_bounds=shells,
        window_bounds=windows,
        classification=classification,
        growth_factor=growth,
    )


def slope_limit_check(model: BoundaryModel, n_range: Tuple[int, int], tolerance: float = 1e-2) -> LemmaReport:
    """
    Chord slopes s(y_n) = (x(y_n) - x(0)) / y_n and tangent slopes x'(y_n)
    at y_n = Im T_n, both tending to 0
    """
    seq = model.seq
    indices = validate_range(model, n_range, offset=0)
    chord_slopes, deviations, identity_errors = [], [], []
    for n in indices:
        y_n = midpoint_offset(seq, n).y
        chord_slope = boundary_offset_x(model, y_n) / y_n
        tangent_slope = boundary_x_prime(model, y_n)
        identity_errors.append(abs(tangent_slope + math.tan(half_angle(seq, n))))
        chord_slopes.append(chord_slope)
        deviations.append(max(abs(chord_slope), abs(tangent_slope)))

    monotone = all(b >= a - NOISE_FLOOR for a, b in zip(chord_slopes, chord_slopes[1:]))
    identity = max(identity_errors) <= 1e-12
    passed = monotone and identity and tail_converges(deviations, tolerance)
    return LemmaReport(
        lemma="smoothness",
        case=seq.case.value,
        n_range=tuple(n_range),
        indices=indices,
        observed=chord_slopes,
        target=0.0,
        deviations=deviations,
        tolerance=tolerance,
        passed=passed,
        details={
            "slope_identity_max_error": max(identity_errors),
            "chord_slopes_monotone": monotone,
        },
    )


def param_ratio_limits(seq: AlphaSequence) -> Dict[str, Optional[float]]:
    """Limits of t_n / t_{n-1}, (s_n - t_n) / s_n and (s_n - t_n) / t_n"""
    if seq.case == SequenceCase.A:
        return {"t_ratio": 1.0, "arc_share_of_s": 0.0, "arc_share_of_t": 0.0}
    if seq.case == SequenceCase.B:
        lam = seq.lam
        arc = (1.0 - lam) * (1.0 + 3.0 * lam)
        return {
            "t_ratio": lam,
            "arc_share_of_s": arc / (1.0 + 4.0 * lam - lam * lam),
            "arc_share_of_t": arc / (2.0 * lam * (1.0 + lam)),
        }
    # (s_n - t_n) / t_n diverges in Case C
    return {"t_ratio": 0.0, "arc_share_of_s": 1.0, "arc_share_of_t": None}


def param_ratio_report(model: BoundaryModel, n_range: Tuple[int, int], tolerance: float = 1e-6) -> LemmaReport:
    """Ratios of consecutive circle parameters that drive the non-existence argument"""
    _require_smooth(model)
    seq = model.seq
    indices = validate_range(model, n_range)
    limits = param_ratio_limits(seq)
    t_ratios, arc_of_s, t_of_s, s_of_t_prev, arc_of_t = [], [], [], [], []
    for n in indices:
        t_prev, t_n = param_t(seq, n - 1), param_t(seq, n)
        s_n = solve_param_s(seq, n, model)
        arc = arc_param_gap(seq, n)
        t_ratios.append(t_n / t_prev)
        arc_of_s.append(arc / s_n)
        t_of_s.append(t_n / s_n)
        s_of_t_prev.append(s_n / t_prev)
        arc_of_t.append(arc / t_n)
    deviations = [abs(r - limits["t_ratio"]) for r in t_ratios]
    return LemmaReport(
        lemma="ratios",
        case=seq.case.value,
        n_range=tuple(n_range),
        indices=indices,
        observed=t_ratios,
        target=limits["t_ratio"],
        deviations=deviations,
        tolerance=tolerance,
        passed=tail_converges(deviations, tolerance),
        details={
            "arc_share_of_s": arc_of_s,
            "t_over_s": t_of_s,
            "s_over_t_prev": s_of_t_prev,
            "arc_share_of_t": arc_of_t,
            "limits": limits,
        },
    )
