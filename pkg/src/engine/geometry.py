"""
Vertices, tangency points and arcs of K, the truncated boundary chain,
and the boundary function x(y) with its derivatives
"""
import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from ..models.enums import BoundaryVariant, PieceKind
from ..models.errors import GeometryError
from ..models.geometry import ANCHOR, ArcPiece, BoundaryModel, Point2, SegmentPiece
from ..models.sequence import AlphaSequence
from .sequences import alpha, alpha_diff, alpha_diff2, index_cap

logger = logging.getLogger(__name__)

_JUNCTION_RTOL = 1e-12


def _require_index(seq: AlphaSequence, n: int, offset: int) -> None:
    if n < seq.n_min + offset:
        raise GeometryError(f"Index {n} needs n >= {seq.n_min + offset} for {seq.label}")


def half_angle(seq: AlphaSequence, n: int) -> float:
    """Polar angle (alpha_n + alpha_{n+1}) / 2 of T_n; half of t_n"""
    return 0.5 * (alpha(seq, n) + alpha(seq, n + 1))


def half_chord(seq: AlphaSequence, n: int) -> float:
    """||A_n - T_n|| = ||A_n - S_n|| = sin((alpha_n - alpha_{n+1}) / 2)"""
    return math.sin(0.5 * alpha_diff(seq, n, n + 1))


# Absolute coordinates

def vertex_A(seq: AlphaSequence, n: int) -> Point2:
    _require_index(seq, n, 0)
    return Point2.polar(1.0, alpha(seq, n))


def midpoint_T(seq: AlphaSequence, n: int) -> Point2:
    _require_index(seq, n, 0)
    return Point2.polar(math.cos(0.5 * alpha_diff(seq, n, n + 1)), half_angle(seq, n))


def tangency_S(seq: AlphaSequence, n: int) -> Point2:
    _require_index(seq, n, 1)
    return ANCHOR + tangency_offset(seq, n)


def arc_center(seq: AlphaSequence, n: int) -> Point2:
    _require_index(seq, n, 1)
    offset = math.cos(0.5 * alpha_diff(seq, n, n + 1)) - arc_radius(seq, n)
    if offset <= 0.0:
        raise GeometryError(f"Degenerate kite at n={n}: r_n >= ||T_n||")
    return Point2.polar(offset, half_angle(seq, n))


# Displacements from the anchor (1,0), exact near the anchor

def vertex_offset(seq: AlphaSequence, n: int) -> Point2:
    a = alpha(seq, n)
    return Point2(-2.0 * math.sin(0.5 * a) ** 2, math.sin(a))


def midpoint_offset(seq: AlphaSequence, n: int) -> Point2:
    return (vertex_offset(seq, n) + vertex_offset(seq, n + 1)).scale(0.5)


def tangency_offset(seq: AlphaSequence, n: int) -> Point2:
    # S_n = A_n + L_n * i e^{i tau_{n-1}}, the unit vector pointing from A_n to A_{n-1}
    tau_prev = half_angle(seq, n - 1)
    length = half_chord(seq, n)
    return vertex_offset(seq, n) + Point2(-length * math.sin(tau_prev), length * math.cos(tau_prev))


def center_offset(seq: AlphaSequence, n: int) -> Point2:
    return midpoint_offset(seq, n) - Point2.polar(arc_radius(seq, n), half_angle(seq, n))


# Kite relations

def kite_angles(seq: AlphaSequence, n: int) -> Tuple[float, float]:
    """(phi_n, psi_n) with phi_n = 2 pi - (alpha_{n-1} - alpha_{n+1}) and psi_n = phi_n / 2"""
    _require_index(seq, n, 1)
    phi = 2.0 * math.pi - alpha_diff(seq, n - 1, n + 1)
    return phi, 0.5 * phi


def arc_span(seq: AlphaSequence, n: int) -> float:
    """Central angle of C_n, pi - psi_n = (alpha_{n-1} - alpha_{n+1}) / 2"""
    return 0.5 * alpha_diff(seq, n - 1, n + 1)


def arc_radius(seq: AlphaSequence, n: int) -> float:
    _require_index(seq, n, 1)
    return half_chord(seq, n) / math.tan(0.25 * alpha_diff(seq, n - 1, n + 1))


def radius_ratio(seq: AlphaSequence, n: int) -> float:
    """Leading-order radius 2 (alpha_n - alpha_{n+1}) / (alpha_{n-1} - alpha_{n+1})"""
    return 2.0 * alpha_diff(seq, n, n + 1) / alpha_diff(seq, n - 1, n + 1)


def radius_asymptotic_gap(seq: AlphaSequence, n: int) -> float:
    return abs(arc_radius(seq, n) - radius_ratio(seq, n))


def chord_length(seq: AlphaSequence, n: int) -> float:
    """||T_{n-1} - S_n|| = sin(b_n / 2) - sin(b_{n+1} / 2), factored"""
    b_n = alpha_diff(seq, n - 1, n)
    b_next = alpha_diff(seq, n, n + 1)
    return 2.0 * math.cos(0.25 * (b_n + b_next)) * math.sin(0.25 * alpha_diff2(seq, n))


# Boundary chain

def _arc(seq: AlphaSequence, n: int) -> ArcPiece:
    return ArcPiece(
        center=center_offset(seq, n),
        radius=arc_radius(seq, n),
        end_angle=half_angle(seq, n),
        span=arc_span(seq, n),
        start=tangency_offset(seq, n),
        end=midpoint_offset(seq, n),
        index=n,
    )


def _apex_arc(seq: AlphaSequence) -> ArcPiece:
    # Virtual A_0 is the mirror of A_2, so T_0 mirrors T_1 and the arc is centered at the origin
    end_angle = half_angle(seq, 1)
    return ArcPiece(
        center=Point2(-1.0, 0.0),
        radius=math.cos(0.5 * alpha_diff(seq, 1, 2)),
        end_angle=end_angle,
        span=0.5 * math.pi - end_angle,
        start=Point2(-1.0, math.cos(0.5 * alpha_diff(seq, 1, 2))),
        end=midpoint_offset(seq, 1),
        index=1,
    )


def build_boundary(seq: AlphaSequence, depth: int, variant: BoundaryVariant = BoundaryVariant.SMOOTH,
                   smooth_apex: bool = False) -> BoundaryModel:
    """
    Build the first-quadrant chain of dK truncated at depth N:
    apex segment A_{n0} -> S_{n0+1}, then arc C_n and segment T_n -> S_{n+1}
    for n = n0+1 .. N, closed by the chord T_N -> (1,0)
    """
    n0 = seq.n_min
    variant = BoundaryVariant(variant)
    if depth < n0 + 2:
        raise GeometryError(f"Depth {depth} below the minimum {n0 + 2} for {seq.label}")
    if depth > index_cap(seq):
        raise GeometryError(f"Depth {depth} exceeds the binary64 index cap {index_cap(seq)} for {seq.label}")
    if smooth_apex and (n0 != 1 or variant != BoundaryVariant.SMOOTH):
        raise GeometryError("Apex smoothing needs n_min = 1 and the smooth variant")

    pieces: List = []
    if n0 > 1:
        # Flat top: hull of A_{n0} and its mirror image
        apex = vertex_offset(seq, n0)
        pieces.append(SegmentPiece(start=Point2(-1.0, apex.y), end=apex, index=0))

    if variant == BoundaryVariant.POLYGON:
        for n in range(n0, depth):
            pieces.append(SegmentPiece(start=vertex_offset(seq, n), end=vertex_offset(seq, n + 1), index=n))
        last = vertex_offset(seq, depth)
    else:
        if smooth_apex:
            pieces.append(_apex_arc(seq))
            pieces.append(SegmentPiece(start=midpoint_offset(seq, 1), end=tangency_offset(seq, 2), index=1))
        else:
            pieces.append(SegmentPiece(start=vertex_offset(seq, n0), end=tangency_offset(seq, n0 + 1), index=n0))
        for n in range(n0 + 1, depth + 1):
            arc = _arc(seq, n)
            pieces.append(arc)
            if n < depth:
                pieces.append(SegmentPiece(start=arc.end, end=tangency_offset(seq, n + 1), index=n))
        last = midpoint_offset(seq, depth)

    pieces.append(SegmentPiece(start=last, end=Point2(0.0, 0.0), index=depth, kind=PieceKind.CLOSURE))
    logger.debug("Built %s boundary for %s: depth=%d, %d pieces", variant.value, seq.label, depth, len(pieces))
    return BoundaryModel(seq=seq, depth=depth, pieces=tuple(pieces), variant=variant, smooth_apex=smooth_apex)


# Boundary function x(y)

def _check_ordinate(model: BoundaryModel, y: float) -> float:
    if abs(y) > 1.0:
        raise GeometryError(f"Ordinate {y} outside [-1, 1]")
    if abs(y) > model.top:
        raise GeometryError(f"Ordinate {y} above the top {model.top} of the boundary")
    return abs(y)


def boundary_offset_x(model: BoundaryModel, y: float) -> float:
    """x(y) - 1 for 0 <= y <= top, computed in the anchored frame"""
    piece = model.pieces[model.locate(y)]
    if piece.kind == PieceKind.ARC:
        sin_phi = (y - piece.end.y) / piece.radius + math.sin(piece.end_angle)
        phi = math.asin(min(1.0, sin_phi))
        half = 0.5 * (phi - piece.end_angle)
        return piece.end.x - 2.0 * piece.radius * math.sin(half) * math.sin(piece.end_angle + half)
    rise = piece.end.y - piece.start.y
    if rise == 0.0:
        return piece.end.x
    return piece.end.x + (y - piece.end.y) * (piece.end.x - piece.start.x) / rise


def boundary_x(model: BoundaryModel, y: float) -> float:
    return 1.0 + boundary_offset_x(model, _check_ordinate(model, y))


def boundary_x_prime(model: BoundaryModel, y: float) -> float:
    level = _check_ordinate(model, y)
    if level == 0.0:
        # x'(0) = 0 by the reflection symmetry of K
        return 0.0
    piece = model.pieces[model.locate(level)]
    if piece.kind == PieceKind.ARC:
        sin_phi = (level - piece.end.y) / piece.radius + math.sin(piece.end_angle)
        slope = -math.tan(math.asin(min(1.0, sin_phi)))
    else:
        rise = piece.end.y - piece.start.y
        slope = -math.inf if rise == 0.0 else (piece.end.x - piece.start.x) / rise
    return slope if y > 0 else -slope


def boundary_x_second(model: BoundaryModel, y: float) -> Optional[float]:
    """x''(y), or None at a junction of two pieces"""
    level = _check_ordinate(model, y)
    if level == 0.0:
        return None
    piece = model.pieces[model.locate(level)]
    for junction in (piece.start.y, piece.end.y):
        if math.isclose(level, junction, rel_tol=_JUNCTION_RTOL, abs_tol=0.0):
            return None
    if piece.kind != PieceKind.ARC:
        return 0.0
    slope = boundary_x_prime(model, level)
    return -(1.0 + slope * slope) ** 1.5 / piece.radius


# Sampling

def sample_boundary(model: BoundaryModel, count: int, unfold: bool = True) -> Tuple[np.ndarray, float]:
    """
    Roughly arc-length uniform samples of dK in absolute coordinates,
    reflected into all four quadrants when unfold is set. Returns the
    samples and the largest spacing along the boundary.
    """
    step = model.length / count
    chunks = []
    for piece in model.pieces:
        k = max(2, int(math.ceil(piece.length / step)) + 1)
        if piece.kind == PieceKind.ARC:
            angles = piece.end_angle + np.linspace(0.0, piece.span, k)
            xs = 1.0 + piece.center.x + piece.radius * np.cos(angles)
            ys = piece.center.y + piece.radius * np.sin(angles)
        else:
            t = np.linspace(0.0, 1.0, k)
            xs = 1.0 + piece.start.x + t * (piece.end.x - piece.start.x)
            ys = piece.start.y + t * (piece.end.y - piece.start.y)
        chunks.append(np.column_stack([xs, ys]))
    points = np.vstack(chunks)
    if unfold:
        points = np.vstack([
            points,
            points * np.array([1.0, -1.0]),
            points * np.array([-1.0, 1.0]),
            points * np.array([-1.0, -1.0]),
        ])
    return points, step
