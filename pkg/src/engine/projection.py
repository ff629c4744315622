"""
Metric projection onto the truncated boundary model, and the parameters
t_n, s_n at which the radius-2 circle projects onto T_n and S_n
"""
import logging
import math
from typing import Iterable, List, Optional, Tuple

import numpy as np

from ..models.enums import BoundaryVariant, PieceKind
from ..models.errors import GeometryError
from ..models.geometry import ANCHOR, ArcPiece, BoundaryModel, PieceTable, Point2, SegmentPiece
from ..models.results import NonexpansivenessReport, ProjectionResult
from ..models.sequence import AlphaSequence
from .geometry import boundary_offset_x, midpoint_offset, tangency_offset
from .sequences import alpha, alpha_diff, alpha_diff2

logger = logging.getLogger(__name__)

# Relative slack of the normal-cone membership test
_CONE_SLACK = 1e-9
# Relative window inside which two candidate distances count as tied
_TIE_RTOL = 1e-12


def project_segment(p: Point2, seg: SegmentPiece) -> Point2:
    """Closest point of the closed segment to p, measured from the nearer endpoint"""
    direction = seg.direction
    ta = (p - seg.start).dot(direction)
    tb = (seg.end - p).dot(direction)
    if ta <= 0.0:
        return seg.start
    if tb <= 0.0:
        return seg.end
    if ta <= tb:
        return seg.start + direction.scale(ta)
    return seg.end - direction.scale(tb)


def arc_foot(p: Point2, arc: ArcPiece) -> Tuple[Point2, bool]:
    """Closest point of the closed arc to p, and whether p sat on the center"""
    v = p - arc.center
    if v.x == 0.0 and v.y == 0.0:
        return arc.start, True
    e = Point2.polar(1.0, arc.end_angle)
    delta = math.atan2(e.cross(v), e.dot(v))
    if 0.0 <= delta <= arc.span:
        return arc.point_at(delta), False
    # Outside the sweep the nearer endpoint is the one on the same side of the midpoint direction
    if _midpoint_side(delta, arc.span) < 0.0:
        return arc.end, False
    return arc.start, False


def _midpoint_side(delta, span):
    """Signed angle from the arc's midpoint direction, wrapped to stay above -pi"""
    side = delta - 0.5 * span
    return np.where(side < -math.pi, side + 2.0 * math.pi, side)


def project_arc(p: Point2, arc: ArcPiece) -> Point2:
    return arc_foot(p, arc)[0]


def circle_offset(theta: float) -> Point2:
    """2 e^{i theta/2} - (1,0), without cancellation in the abscissa"""
    return Point2(1.0 - 4.0 * math.sin(0.25 * theta) ** 2, 2.0 * math.sin(0.5 * theta))


def _select_piece(model: BoundaryModel, v: Point2) -> int:
    table = model.table
    rel_x = v.x - table.sx
    rel_y = v.y - table.sy
    with np.errstate(invalid="ignore", divide="ignore"):
        # Segments: foot parameter from the start point, offset along the outward normal
        along = rel_x * table.dx + rel_y * table.dy
        offset = rel_y * table.dx - rel_x * table.dy
        seg_cone = (along >= -_CONE_SLACK * table.length) & (along <= (1.0 + _CONE_SLACK) * table.length) \
            & (offset >= 0.0)
        clamped = np.clip(along, 0.0, table.length)
        seg_dist = np.hypot(rel_x - clamped * table.dx, rel_y - clamped * table.dy)

        # Arcs: angle measured from the T_n end, radial distance
        cvx = v.x - table.cx
        cvy = v.y - table.cy
        rho = np.hypot(cvx, cvy)
        delta = np.arctan2(table.ux * cvy - table.uy * cvx, table.ux * cvx + table.uy * cvy)
        inside = (delta >= -_CONE_SLACK * table.span) & (delta <= (1.0 + _CONE_SLACK) * table.span)
        arc_cone = inside & (rho >= table.radius)
        endpoint = np.minimum(np.hypot(v.x - table.sx, v.y - table.sy), np.hypot(v.x - table.ex, v.y - table.ey))
        arc_dist = np.where(inside, np.abs(rho - table.radius), endpoint)

        # Which end of each piece the query lies beyond
        side = _midpoint_side(delta, table.span)
        past_end = np.where(table.is_arc, ~inside & (side < 0.0), along > (1.0 + _CONE_SLACK) * table.length)
        before_start = np.where(table.is_arc, ~inside & (side >= 0.0), along < -_CONE_SLACK * table.length)

    dist = np.where(table.is_arc, arc_dist, seg_dist)
    cone = np.where(table.is_arc, arc_cone, seg_cone)
    if not cone.any():
        return _corner(table, past_end, before_start, dist)
    best = dist[cone].min()
    close = cone & (dist <= best * (1.0 + _TIE_RTOL))
    # Junctions belong to the arc
    preferred = close & table.is_arc
    return int(np.flatnonzero(preferred if preferred.any() else close)[0])


def _corner(table: PieceTable, past_end: np.ndarray, before_start: np.ndarray, dist: np.ndarray) -> int:
    """
    Owner of the corner whose normal cone holds the query: the query lies
    beyond the end of one piece and before the start of the next. Near the
    anchor every candidate sits at distance ~1, so the corner is found by
    direction and distance only breaks rounding ties.
    """
    last = len(dist) - 1
    joins = np.append(past_end[:-1] & before_start[1:], past_end[last])
    candidates = [int(i) for i in np.flatnonzero(joins)]
    if before_start[0]:
        candidates.append(-1)
    if not candidates:
        logger.warning("Query matched no corner cone; falling back to the nearest piece")
        return int(np.argmin(dist))

    # -1 stands for the top corner, owned by the first piece
    owner = min(candidates, key=lambda i: dist[max(i, 0)])
    if owner < 0:
        return 0
    if owner < last and not table.is_arc[owner] and table.is_arc[owner + 1]:
        # Junctions belong to the arc
        return owner + 1
    return owner


def project_offset(v: Point2, model: BoundaryModel) -> ProjectionResult:
    """
    Project the point ANCHOR + v onto the model. The query is folded into
    the first quadrant, projected onto the stored chain, and unfolded.
    """
    mirror_x = model.mirror_imaginary_axis and 1.0 + v.x < 0.0
    mirror_y = model.mirror_real_axis and v.y < 0.0
    q = Point2(-2.0 - v.x if mirror_x else v.x, -v.y if mirror_y else v.y)

    tie = False
    safe = True
    if q.y == 0.0 and q.x >= 0.0:
        # The anchor is fixed by both reflections
        position, foot = len(model.pieces) - 1, Point2(0.0, 0.0)
    elif q.x == -1.0 and q.y >= model.top:
        position, foot = 0, Point2(-1.0, model.top)
    elif q.y <= model.top and q.x <= boundary_offset_x(model, q.y):
        return ProjectionResult(point=ANCHOR + v, displacement=v, piece_index=-1, distance=0.0,
                                truncation_safe=True)
    else:
        position = _select_piece(model, q)
        piece = model.pieces[position]
        if piece.kind == PieceKind.ARC:
            foot, tie = arc_foot(q, piece)
        else:
            foot = project_segment(q, piece)
        safe = model.is_truncation_safe(position)

    distance = (q - foot).norm()
    if not safe:
        logger.debug("Projection of offset %s lands on truncation-unsafe piece %d", v, position)

    displacement = Point2(-2.0 - foot.x if mirror_x else foot.x, -foot.y if mirror_y else foot.y)
    return ProjectionResult(point=ANCHOR + displacement, displacement=displacement, piece_index=position,
                            distance=distance, truncation_safe=safe, tie=tie)


def project(p: Point2, model: BoundaryModel) -> ProjectionResult:
    return project_offset(p - ANCHOR, model)


def project_circle(theta: float, model: BoundaryModel) -> ProjectionResult:
    """Projection of 2 e^{i theta/2}"""
    return project_offset(circle_offset(theta), model)


# Circle parameters

def param_t(seq: AlphaSequence, n: int) -> float:
    """t_n = alpha_n + alpha_{n+1}, the parameter with Pi(2e^{i t_n/2}) = T_n"""
    if n < seq.n_min:
        raise GeometryError(f"t_n needs n >= {seq.n_min}, got {n}")
    return alpha(seq, n) + alpha(seq, n + 1)


def _normal_ray(seq: AlphaSequence, n: int) -> Tuple[float, float, float]:
    if n < seq.n_min + 1:
        raise GeometryError(f"s_n needs n >= {seq.n_min + 1}, got {n}")
    b_n = alpha_diff(seq, n - 1, n)
    b_next = alpha_diff(seq, n, n + 1)
    # sin(b_n / 2) - sin(b_{n+1} / 2), factored
    g = 2.0 * math.cos(0.25 * (b_n + b_next)) * math.sin(0.25 * alpha_diff2(seq, n))
    base = math.cos(0.5 * b_n)
    # Positive root of (base + mu)^2 + g^2 = 4
    mu = (4.0 - base * base - g * g) / (base + math.sqrt(4.0 - g * g))
    return g, base, mu


def chord_param_gap(seq: AlphaSequence, n: int) -> float:
    """
    t_{n-1} - s_n. In the frame rotated by -(alpha_{n-1} + alpha_n)/2, S_n
    sits at (cos(b_n/2), -g_n) and the normal ray through it is horizontal,
    so the gap is twice the polar angle where that ray meets the circle.
    """
    g, base, mu = _normal_ray(seq, n)
    return 2.0 * math.atan2(g, base + mu)


def arc_param_gap(seq: AlphaSequence, n: int) -> float:
    """s_n - t_n"""
    return alpha_diff(seq, n - 1, n + 1) - chord_param_gap(seq, n)


def solve_param_s(seq: AlphaSequence, n: int, model: Optional[BoundaryModel] = None) -> float:
    """s_n, the parameter with Pi(2e^{i s_n/2}) = S_n, in closed form"""
    if model is not None and model.variant != BoundaryVariant.SMOOTH:
        raise GeometryError("s_n is defined for the smooth boundary only")
    return param_t(seq, n) + arc_param_gap(seq, n)


def normal_ray_length(seq: AlphaSequence, n: int) -> float:
    """mu_n > 0 with S_n + mu_n u_n on the radius-2 circle"""
    return _normal_ray(seq, n)[2]


# Property checks

def annulus_pairs(count: int, inner: float = 1.5, outer: float = 3.0,
                  seed: Optional[int] = None) -> List[Tuple[Point2, Point2]]:
    """Random pairs of points, uniform by area in inner <= |p| <= outer"""
    rng = np.random.default_rng(seed)
    radii = np.sqrt(rng.uniform(inner * inner, outer * outer, size=(count, 2)))
    angles = rng.uniform(0.0, 2.0 * math.pi, size=(count, 2))
    xs, ys = radii * np.cos(angles), radii * np.sin(angles)
    return [(Point2(float(xs[i, 0]), float(ys[i, 0])), Point2(float(xs[i, 1]), float(ys[i, 1])))
            for i in range(count)]


def nonexpansiveness_check(model: BoundaryModel, pairs: Iterable[Tuple[Point2, Point2]],
                           tolerance: float = 1e-10) -> NonexpansivenessReport:
    worst = -math.inf
    count = 0
    for p, q in pairs:
        moved = (project(p, model).displacement - project(q, model).displacement).norm()
        worst = max(worst, moved - (p - q).norm())
        count += 1
    report = NonexpansivenessReport(pair_count=count, max_residual=worst if count else 0.0, tolerance=tolerance)
    if not report.passed:
        logger.warning("Nonexpansiveness violated: residual %.3e over %d pairs", report.max_residual, count)
    return report


def brute_force_distance(samples: np.ndarray, p: Point2) -> float:
    """Distance from p to the nearest of the sampled boundary points"""
    return float(np.min(np.hypot(samples[:, 0] - p.x, samples[:, 1] - p.y)))


def round_trip_errors(model: BoundaryModel, n: int) -> Tuple[float, float]:
    """(||Pi(2e^{i t_n/2}) - T_n||, ||Pi(2e^{i s_n/2}) - S_n||), absolute"""
    seq = model.seq
    at_t = project_circle(param_t(seq, n), model).displacement
    at_s = project_circle(solve_param_s(seq, n, model), model).displacement
    return (at_t - midpoint_offset(seq, n)).norm(), (at_s - tangency_offset(seq, n)).norm()
