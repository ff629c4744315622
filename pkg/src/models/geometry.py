import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Tuple, Union

import numpy as np

from .enums import PieceKind, BoundaryVariant
from .sequence import AlphaSequence

@dataclass(frozen=True)
class Point2:
    """Point of the plane, identified with the complex number x + iy"""
    x: float
    y: float

    @staticmethod
    def polar(radius: float, angle: float) -> "Point2":
        return Point2(radius * math.cos(angle), radius * math.sin(angle))

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def scale(self, k: float) -> "Point2":
        return Point2(k * self.x, k * self.y)

    def dot(self, other: "Point2") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Point2") -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def angle(self) -> float:
        return math.atan2(self.y, self.x)

    def rotate90(self) -> "Point2":
        return Point2(-self.y, self.x)

    def to_list(self):
        return [self.x, self.y]


# Pieces of a BoundaryModel store displacements from this point
ANCHOR = Point2(1.0, 0.0)


@dataclass(frozen=True)
class SegmentPiece:
    """Straight piece of the boundary, traversed from start to end"""
    start: Point2
    end: Point2
    index: int  # construction index n
    kind: PieceKind = PieceKind.SEGMENT

    @property
    def length(self) -> float:
        return (self.end - self.start).norm()

    @property
    def direction(self) -> Point2:
        chord = self.end - self.start
        return chord.scale(1.0 / chord.norm())

    @property
    def normal(self) -> Point2:
        # Outward for a clockwise traversal of the convex boundary
        return self.direction.rotate90()

    @property
    def normal_angle(self) -> float:
        return self.normal.angle()


@dataclass(frozen=True)
class ArcPiece:
    """
    Circular arc C_n from S_n (at start_angle, seen from the center) down to
    T_n (at end_angle). The span is stored separately so that it keeps full
    relative precision when both angles are close together.
    """
    center: Point2
    radius: float
    end_angle: float
    span: float
    start: Point2
    end: Point2
    index: int
    kind: PieceKind = field(default=PieceKind.ARC)

    @property
    def start_angle(self) -> float:
        return self.end_angle + self.span

    @property
    def length(self) -> float:
        return self.radius * self.span

    @property
    def normal_angle(self) -> float:
        return self.end_angle + 0.5 * self.span

    def point_at(self, delta: float) -> Point2:
        """Point at angle end_angle + delta, measured from the T_n end"""
        half = 0.5 * delta
        mid = self.end_angle + half
        chord = 2.0 * self.radius * math.sin(half)
        return self.end + Point2(-chord * math.sin(mid), chord * math.cos(mid))


Piece = Union[SegmentPiece, ArcPiece]


class PieceTable(NamedTuple):
    """Column view of a chain for vectorized distance evaluation"""
    is_arc: np.ndarray
    sx: np.ndarray
    sy: np.ndarray
    ex: np.ndarray
    ey: np.ndarray
    dx: np.ndarray  # unit direction, segments only
    dy: np.ndarray
    length: np.ndarray
    cx: np.ndarray  # center, arcs only
    cy: np.ndarray
    radius: np.ndarray
    ux: np.ndarray  # unit vector at end_angle, arcs only
    uy: np.ndarray
    span: np.ndarray


@dataclass(frozen=True)
class BoundaryModel:
    """
    Truncated first-quadrant boundary of K, from the imaginary axis down to
    (1,0). Coordinates of every piece are displacements from ANCHOR = (1,0).
    The reflections in the real and imaginary axes are
    implied by the symmetry flags rather than stored as pieces.
    """
    seq: AlphaSequence
    depth: int
    pieces: Tuple[Piece, ...]
    variant: BoundaryVariant = BoundaryVariant.SMOOTH
    smooth_apex: bool = False
    mirror_real_axis: bool = True
    mirror_imaginary_axis: bool = True

    @property
    def closure(self) -> SegmentPiece:
        return self.pieces[-1]

    @property
    def top(self) -> float:
        """Ordinate where the chain meets the imaginary axis"""
        return self.pieces[0].start.y

    @property
    def length(self) -> float:
        return sum(piece.length for piece in self.pieces)

    def arcs(self):
        return [piece for piece in self.pieces if piece.kind == PieceKind.ARC]

    @cached_property
    def table(self) -> PieceTable:
        columns = {name: np.zeros(len(self.pieces)) for name in PieceTable._fields}
        columns["is_arc"] = np.zeros(len(self.pieces), dtype=bool)
        for i, piece in enumerate(self.pieces):
            columns["sx"][i], columns["sy"][i] = piece.start.x, piece.start.y
            columns["ex"][i], columns["ey"][i] = piece.end.x, piece.end.y
            columns["length"][i] = piece.length
            if piece.kind == PieceKind.ARC:
                columns["is_arc"][i] = True
                columns["cx"][i], columns["cy"][i] = piece.center.x, piece.center.y
                columns["radius"][i] = piece.radius
                columns["ux"][i], columns["uy"][i] = math.cos(piece.end_angle), math.sin(piece.end_angle)
                columns["span"][i] = piece.span
            else:
                direction = piece.direction
                columns["dx"][i], columns["dy"][i] = direction.x, direction.y
        return PieceTable(**columns)

    def locate(self, y: float) -> int:
        """Chain position of the piece covering ordinate 0 <= y <= top"""
        lo, hi = 0, len(self.pieces) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if self.pieces[mid].end.y <= y:
                hi = mid
            else:
                lo = mid + 1
        # Junctions belong to the arc
        if lo + 1 < len(self.pieces) and self.pieces[lo].kind != PieceKind.ARC \
                and self.pieces[lo].end.y == y and self.pieces[lo + 1].kind == PieceKind.ARC:
            return lo + 1
        return lo

    def is_truncation_safe(self, position: int) -> bool:
        piece = self.pieces[position]
        return piece.kind != PieceKind.CLOSURE and piece.index <= self.depth - 2
