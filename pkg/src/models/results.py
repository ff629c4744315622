from dataclasses import dataclass, field, asdict
from typing import Dict, List, Optional, Tuple
from .geometry import Point2
from .enums import Verdict, SmoothnessClass

@dataclass(frozen=True)
class ProjectionResult:
    """Nearest point of K to a query"""
    point: Point2  # Pi(x)
    displacement: Point2  # Pi(x) - (1,0), exact near the anchor
    piece_index: int  # chain position of the owning piece, -1 for interior queries
    distance: float  # d(x; K)
    truncation_safe: bool  # owning piece is a true piece of dK below the depth guard
    tie: bool = False  # query sat on an arc center, endpoint chosen

    def to_dict(self) -> Dict:
        return {
            "point": self.point.to_list(),
            "distance": self.distance,
            "piece_index": self.piece_index,
            "truncation_safe": self.truncation_safe,
        }


@dataclass(frozen=True)
class QuotientSample:
    """Difference quotient D(theta) = (Pi(2e^{i theta/2}) - Pi(2,0)) / theta"""
    theta: float
    projected: Point2
    quotient: Point2
    label: str = "grid"  # grid, t or s
    n: Optional[int] = None  # index for t_n / s_n rows


@dataclass(frozen=True)
class ConditionReport:
    """Result of checking monotonicity and midpoint convexity of alpha_n"""
    n_max: int
    first_failure: Optional[int] = None
    failure_kind: Optional[str] = None  # "monotone" or "convexity"

    @property
    def passed(self) -> bool:
        return self.first_failure is None


@dataclass
class LemmaReport:
    """Per-index observations of one verifiable claim with its verdict"""
    lemma: str
    case: str
    n_range: Tuple[int, int]
    indices: List[float]
    observed: List[float]
    target: Optional[float]
    deviations: List[float]
    tolerance: float
    passed: bool
    details: Dict = field(default_factory=dict)

    @property
    def max_deviation(self) -> float:
        return max(self.deviations) if self.deviations else 0.0

    def to_dict(self) -> Dict:
        payload = asdict(self)
        payload["n_range"] = list(self.n_range)
        payload["max_deviation"] = self.max_deviation
        return payload


@dataclass
class NonexpansivenessReport:
    """Worst violation of ||Pi(x) - Pi(y)|| <= ||x - y|| over sampled pairs"""
    pair_count: int
    max_residual: float  # max of ||Pi(x) - Pi(y)|| - ||x - y||
    tolerance: float = 1e-10

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance


@dataclass
class OscillationReport:
    """Sub-limit estimates of D along t_n and s_n and the nonconvergence verdict"""
    case: str
    indices: List[int]
    d_t: List[Tuple[float, float]]
    d_s: List[Tuple[float, float]]
    gaps: List[float]
    t_limit_estimate: Tuple[float, float]
    s_limit_estimate: Tuple[float, float]
    gap_estimate: float  # smallest gap over the final third of the range
    threshold: float
    verdict: Verdict
    exploratory: bool = False  # Case A: no pass/fail gate

    def to_dict(self) -> Dict:
        payload = asdict(self)
        payload["verdict"] = self.verdict.value
        return payload


@dataclass
class LipschitzReport:
    """Curvature bound of x'' on shrinking windows around y = 0"""
    case: str
    indices: List[int]
    window_ordinates: List[float]  # y_n = Im T_n
    shell_bounds: List[float]  # sup |x''| over the arcs between y_{n+1} and y_n
    window_bounds: List[float]  # running sup over the arcs resolved down to y_{n+1}
    classification: SmoothnessClass
    growth_factor: float

    def to_dict(self) -> Dict:
        payload = asdict(self)
        payload["classification"] = self.classification.value
        return payload
