from enum import Enum

class SequenceCase(Enum):
    A = "A"  # alpha_n = c n^(-q)
    B = "B"  # alpha_n = c lambda^n
    C = "C"  # alpha_n = c lambda^(n^2)

class PieceKind(Enum):
    SEGMENT = "segment"
    ARC = "arc"
    CLOSURE = "closure"

class BoundaryVariant(Enum):
    SMOOTH = "smooth"    # corners at A_n replaced by tangent arcs
    POLYGON = "polygon"  # plain hull of 0, 1 and the vertices A_n

class PrecisionMode(Enum):
    STANDARD = "standard"
    EXTENDED = "extended"

class OutputFormat(Enum):
    CSV = "csv"
    JSON = "json"
    SVG = "svg"

class Verdict(Enum):
    NONCONVERGENT = "nonconvergent"
    NO_GAP = "no gap detected"

class SmoothnessClass(Enum):
    C11 = "C^{1,1}"
    C1_NOT_C11 = "C^1 but not C^{1,1}"
    UNDETERMINED = "undetermined"
