from dataclasses import dataclass, field
from typing import Optional, Tuple
from .enums import SequenceCase, PrecisionMode, OutputFormat, BoundaryVariant

@dataclass(frozen=True)
class RunConfig:
    """Fully resolved settings for one CLI command"""
    case: SequenceCase
    lam: Optional[float] = None  # Cases B and C
    q: Optional[float] = None  # Case A
    depth: int = 32  # build depth N_build
    n_range: Tuple[int, int] = (10, 30)  # analyzed indices, inclusive
    output: str = "output"  # directory for artifacts
    formats: Tuple[OutputFormat, ...] = field(default=(OutputFormat.JSON,))
    precision_mode: PrecisionMode = PrecisionMode.STANDARD
    variant: BoundaryVariant = BoundaryVariant.SMOOTH
    smooth_apex: bool = False
    horizon: int = 60  # scan horizon for the Case C valid index
    seed: int = 1234  # random pairs for projection checks

    def sequence_params(self) -> dict:
        params = {"case": self.case.value}
        if self.case == SequenceCase.A:
            params["q"] = self.q
        else:
            params["lambda"] = self.lam
        return params

    def to_dict(self) -> dict:
        return {
            **self.sequence_params(),
            "depth": self.depth,
            "range": [self.n_range[0], self.n_range[1]],
            "output": self.output,
            "formats": [fmt.value for fmt in self.formats],
            "precision_mode": self.precision_mode.value,
            "variant": self.variant.value,
            "smooth_apex": self.smooth_apex,
            "horizon": self.horizon,
            "seed": self.seed,
        }
