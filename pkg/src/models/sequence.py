from dataclasses import dataclass
from typing import Optional
from .enums import SequenceCase

@dataclass(frozen=True)
class AlphaSequence:
    """One of the three angle families alpha_n, normalized so that alpha_1 = pi/2"""
    case: SequenceCase
    c: float  # scale (radians), solved from alpha_1 = pi/2
    q: Optional[float] = None  # Case A exponent
    lam: Optional[float] = None  # Cases B and C decay rate
    n_min: int = 1  # first index from which the convexity condition holds

    @property
    def label(self) -> str:
        if self.case == SequenceCase.A:
            return f"A(q={self.q:g})"
        return f"{self.case.value}(lambda={self.lam:g})"
