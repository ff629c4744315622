"""
Verifiers reachable through `verify --lemma <id>`. Each one runs a sweep
over the configured index range and returns a LemmaReport.
"""
import logging
import math
from typing import Callable, Dict, List, Optional

from ..engine.analysis import (arc_speed, arc_speed_limit, arc_speed_target, asympt_equiv_check, chord_speed,
                               lipschitz_diagnostics, oscillation_report, param_ratio_report, radius_limit,
                               s_quotient_limit, slope_limit_check, tail_converges, tangent_gap_bound,
                               tangent_vs_circle_gap, validate_range, weighted_mean_decomposition)
from ..engine.geometry import arc_radius, radius_asymptotic_gap
from ..engine.projection import (annulus_pairs, chord_param_gap, nonexpansiveness_check, param_t, project,
                                 round_trip_errors)
from ..engine.sequences import alpha_diff, alpha_diff2, check_condition_c1, convexity_margin
from ..models.config import RunConfig
from ..models.enums import SequenceCase, SmoothnessClass, Verdict
from ..models.errors import ConfigError
from ..models.geometry import BoundaryModel, Point2
from ..models.results import LemmaReport

logger = logging.getLogger(__name__)

Verifier = Callable[[BoundaryModel, RunConfig], LemmaReport]

LEMMAS: Dict[str, Verifier] = {}

EXPECTED_SMOOTHNESS = {
    SequenceCase.A: SmoothnessClass.C11,
    SequenceCase.B: SmoothnessClass.C11,
    SequenceCase.C: SmoothnessClass.C1_NOT_C11,
}


def register(lemma_id: str):
    def decorator(func: Verifier) -> Verifier:
        LEMMAS[lemma_id] = func
        return func
    return decorator


def get_verifier(lemma_id: str) -> Verifier:
    if lemma_id not in LEMMAS:
        raise ConfigError(f"Unknown lemma id {lemma_id!r}; known: {', '.join(sorted(LEMMAS))}")
    return LEMMAS[lemma_id]


def case_tolerance(model: BoundaryModel, n_end: int, a: Optional[float] = None, b: float = 1e-6,
                   c: float = 1e-6) -> float:
    """Per-case tolerance; Case A limits converge like 1/n, so its default scales with the range end"""
    case = model.seq.case
    if case == SequenceCase.A:
        return 2.0 / n_end if a is None else a
    return b if case == SequenceCase.B else c


def _report(lemma: str, model: BoundaryModel, config: RunConfig, indices: List[int], observed: List[float],
            target, deviations: List[float], tolerance: float, passed: bool, **details) -> LemmaReport:
    logger.info("%s on %s: max deviation %.3e, tolerance %.3e -> %s", lemma, model.seq.label,
                max(deviations) if deviations else 0.0, tolerance, "pass" if passed else "fail")
    return LemmaReport(
        lemma=lemma,
        case=model.seq.case.value,
        n_range=tuple(config.n_range),
        indices=indices,
        observed=observed,
        target=target,
        deviations=deviations,
        tolerance=tolerance,
        passed=passed,
        details=details,
    )


@register("radius-limit")
def verify_radius_limit(model: BoundaryModel, config: RunConfig) -> LemmaReport:
    seq = model.seq
    indices = validate_range(model, config.n_range)
    target = radius_limit(seq)
    radii = [arc_radius(seq, n) for n in indices]
    deviations = [abs(r - target) for r in radii]
    tolerance = case_tolerance(model, indices[-1], b=1e-8, c=1e-3)
    return _report("radius-limit", model, config, indices, radii, target, deviations, tolerance,
                   tail_converges(deviations, tolerance))


@register("radius-gap")
def verify_radius_gap(model: BoundaryModel, config: RunConfig) -> LemmaReport:
    seq = model.seq
    indices = validate_range(model, config.n_range)
    gaps = [radius_asymptotic_gap(seq, n) for n in indices]
    tolerance = case_tolerance(model, indices[-1], a=1e-6, b=1e-12, c=1e-10)
    return _report("radius-gap", model, config, indices, gaps, 0.0, gaps, tolerance,
                   tail_converges(gaps, tolerance))


@register("condition")
def verify_condition(model: BoundaryModel, config: RunConfig) -> LemmaReport:
    seq = model.seq
    indices = validate_range(model, config.n_range, offset=0)
    condition = check_condition_c1(seq, indices[-1] + 2)
    margins = [convexity_margin(seq, n) for n in indices]
    deviations = [max(0.0, -m) for m in margins]
    return _report("condition", model, config, indices, margins, None, deviations, 0.0, condition.passed,
                   n_min=seq.n_min, first_failure=condition.first_failure, failure_kind=condition.failure_kind)


@register("smoothness")
def verify_smoothness(model: BoundaryModel, config: RunConfig) -> LemmaReport:
    indices = validate_range(model, config.n_range)
    tolerance = case_tolerance(model, indices[-1], b=1e-2, c=1e-2)
    slopes = slope_limit_check(model, config.n_range, tolerance=tolerance)
    lipschitz = lipschitz_diagnostics(model, config.n_range)
    expected = EXPECTED_SMOOTHNESS[model.seq.case]
    passed = slopes.passed and lipschitz.classification == expected
    return _report("smoothness", model, config, slopes.indices, slopes.observed, 0.0, slopes.deviations,
                   tolerance, passed, slopes=slopes.details, lipschitz=lipschitz.to_dict(),
                   expected_class=expected.value)


@register("lipschitz")
def verify_lipschitz(model: BoundaryModel, config: RunConfig) -> LemmaReport:
    lipschitz = lipschitz_diagnostics(model, config.n_range)
    expected = EXPECTED_SMOOTHNESS[model.seq.case]
    bounds = lipschitz.window_bounds
    deviations = [abs(b - bounds[0]) / bounds[0] for b in bounds]
    return _report("lipschitz", model, config, lipschitz.indices, bounds, None, deviations, 0.1,
                   lipschitz.classification == expected, classification=lipschitz.classification.value,
                   expected_class=expected.value, growth_factor=lipschitz.growth_factor,
                   shell_bounds=lipschitz.shell_bounds, window_ordinates=lipschitz.window_ordinates)


@register("tangent-circle")
def verify_tangent_circle(model: BoundaryModel, config: RunConfig) -> LemmaReport:
    """The range is read as dyadic exponents: theta = 2^-k"""
    k0, k1 = config.n_range
    exponents = list(range(k0, k1 + 1))
    thetas = [math.ldexp(1.0, -k) for k in exponents]
    gaps, bounds = [], []
    for theta in thetas:
        if theta > 1.0:
            raise ConfigError("tangent-circle needs exponents k >= 0")
        gaps.append(tangent_vs_circle_gap(model, theta))
        bounds.append(tangent_gap_bound(theta))
    within = all(g <= b + 1e-12 for g, b in zip(gaps, bounds))
    tolerance = bounds[-1] + 1e-12
    return _report("tangent-circle", model, config, thetas, gaps, 0.0, gaps, tolerance,
                   within and tail_converges(gaps, tolerance), exponents=exponents, bounds=bounds)


@register("chord-speed")
def verify_chord_speed(model: BoundaryModel, config: RunConfig) -> LemmaReport:
    seq = model.seq
    indices = validate_range(model, config.n_range)
    norms, deviations, arg_errors = [], [], []
    for n in indices:
        z = chord_speed(model, n)
        norms.append(z.norm())
        deviations.append((z - Point2(0.0, 1.0)).norm())
        arg_errors.append(abs(z.angle() - 0.5 * (math.pi + param_t(seq, n - 1))))
    tolerance = case_tolerance(model, indices[-1])
    passed = tail_converges(deviations, tolerance) and max(arg_errors) <= 1e-10
    return _report("chord-speed", model, config, indices, norms, 1.0, deviations, tolerance, passed,
                   target_vector=[0.0, 1.0], max_argument_error=max(arg_errors))


@register("arc-speed")
def verify_arc_speed(model: BoundaryModel, config: RunConfig) -> LemmaReport:
    seq = model.seq
    indices = validate_range(model, config.n_range)
    limit = arc_speed_limit(seq)
    norms, deviations, arg_errors, expression_gaps = [], [], [], []
    for n in indices:
        v = arc_speed(model, n)
        expected_arg = 0.5 * math.pi + 0.5 * param_t(seq, n) + 0.25 * alpha_diff(seq, n - 1, n + 1)
        norms.append(v.norm())
        deviations.append(abs(v.norm() - limit))
        arg_errors.append(abs(v.angle() - expected_arg))
        expression_gaps.append(abs(v.norm() - arc_speed_target(seq, n)))
    tolerance = case_tolerance(model, indices[-1], b=1e-6, c=1e-3)
    passed = tail_converges(deviations, tolerance) and max(arg_errors) <= 1e-8
    return _report("arc-speed", model, config, indices, norms, limit, deviations, tolerance, passed,
                   max_argument_error=max(arg_errors), expression_gaps=expression_gaps)


@register("asymptotic-helpers")
def verify_asymptotic_helpers(model: BoundaryModel, config: RunConfig) -> LemmaReport:
    seq = model.seq
    validate_range(model, config.n_range)
    report = asympt_equiv_check(
        f=lambda n: alpha_diff(seq, n - 1, n + 1),
        g=lambda n: chord_param_gap(seq, n),
        h=lambda n: 0.5 * alpha_diff2(seq, n),
        c=1.0,
        n_range=config.n_range,
        tolerance=1e-6,
        case=seq.case.value,
    )
    logger.info("asymptotic-helpers on %s -> %s", seq.label, "pass" if report.passed else "fail")
    return report


@register("weighted-mean")
def verify_weighted_mean(model: BoundaryModel, config: RunConfig) -> LemmaReport:
    indices = validate_range(model, config.n_range)
    residuals, weight_errors = [], []
    for n in indices:
        parts = weighted_mean_decomposition(model, n)
        residuals.append(max((parts["d_t_prev"] - parts["mean3"]).norm(), (parts["d_s"] - parts["mean2"]).norm()))
        weight_errors.append(max(abs(sum(parts["weights3"]) - 1.0), abs(sum(parts["weights2"]) - 1.0)))
    passed = max(residuals) <= 1e-12 and max(weight_errors) <= 1e-14
    return _report("weighted-mean", model, config, indices, residuals, 0.0, residuals, 1e-12, passed,
                   max_weight_sum_error=max(weight_errors))


@register("nonexistence")
def verify_nonexistence(model: BoundaryModel, config: RunConfig) -> LemmaReport:
    seq = model.seq
    oscillation = oscillation_report(model, config.n_range)
    expected_gap = 0.5 - s_quotient_limit(seq)
    deviations = [abs(gap - expected_gap) for gap in oscillation.gaps]
    if oscillation.exploratory:
        passed = True
    else:
        passed = oscillation.verdict == Verdict.NONCONVERGENT
    return _report("nonexistence", model, config, oscillation.indices, oscillation.gaps, expected_gap, deviations,
                   oscillation.threshold, passed, verdict=oscillation.verdict.value,
                   exploratory=oscillation.exploratory, oscillation=oscillation.to_dict())


@register("projection")
def verify_projection(model: BoundaryModel, config: RunConfig) -> LemmaReport:
    indices = validate_range(model, config.n_range)
    errors = [max(round_trip_errors(model, n)) for n in indices]
    pairs = annulus_pairs(1000, seed=config.seed)
    expansion = nonexpansiveness_check(model, pairs)
    idempotence = 0.0
    for p, _ in pairs[:200]:
        first = project(p, model)
        second = project(first.point, model)
        idempotence = max(idempotence, (second.point - first.point).norm(), second.distance)
    passed = max(errors) <= 1e-10 and expansion.passed and idempotence <= 1e-12
    return _report("projection", model, config, indices, errors, 0.0, errors, 1e-10, passed,
                   nonexpansiveness_max_residual=expansion.max_residual, pair_count=expansion.pair_count,
                   idempotence_max_error=idempotence)


@register("ratios")
def verify_ratios(model: BoundaryModel, config: RunConfig) -> LemmaReport:
    indices = validate_range(model, config.n_range)
    tolerance = case_tolerance(model, indices[-1], b=1e-12, c=1e-6)
    report = param_ratio_report(model, config.n_range, tolerance=tolerance)
    logger.info("ratios on %s -> %s", model.seq.label, "pass" if report.passed else "fail")
    return report
