import json
import os
from typing import Any, Dict, Mapping, Optional, Tuple

from ..engine.sequences import INDEX_CAPS, DEFAULT_HORIZON
from ..models.config import RunConfig
from ..models.enums import BoundaryVariant, OutputFormat, PrecisionMode, SequenceCase
from ..models.errors import ConfigError, TruncationError
from ..models.geometry import Point2

# Analyzed index range when none is given
DEFAULT_RANGES = {
    SequenceCase.A: (10, 200),
    SequenceCase.B: (10, 30),
    SequenceCase.C: (4, 10),
}

ENV_OUT_DIR = "SMOOTHPROJ_OUT_DIR"
ENV_DEPTH = "SMOOTHPROJ_DEPTH"

_FILE_KEYS = {
    "case", "lambda", "q", "depth", "range", "output", "formats",
    "precision_mode", "variant", "smooth_apex", "horizon", "seed",
}


class ConfigParser:
    """Resolves a RunConfig from defaults, environment, a JSON file and flags"""

    @staticmethod
    def parse_range(text: Any) -> Tuple[int, int]:
        """
        Parse an inclusive index range

        Args:
            text: "n0:n1" or a two-element list

        Returns:
            Tuple (n0, n1)
        """
        try:
            if isinstance(text, (list, tuple)):
                n0, n1 = (int(v) for v in text)
            else:
                head, tail = str(text).split(":")
                n0, n1 = int(head), int(tail)
        except (TypeError, ValueError):
            raise ConfigError(f"Malformed range {text!r}, expected n0:n1")
        if n0 < 1 or n1 < n0:
            raise ConfigError(f"Range {n0}:{n1} must satisfy 1 <= n0 <= n1")
        return n0, n1

    @staticmethod
    def parse_grid(text: str) -> Tuple[int, int]:
        """Parse "dyadic:k0:k1" into the exponent range of theta = 2^-k"""
        parts = str(text).split(":")
        if len(parts) != 3 or parts[0] != "dyadic":
            raise ConfigError(f"Malformed grid {text!r}, expected dyadic:k0:k1")
        try:
            k0, k1 = int(parts[1]), int(parts[2])
        except ValueError:
            raise ConfigError(f"Malformed grid exponents in {text!r}")
        if k0 < 0 or k1 < k0:
            raise ConfigError(f"Grid exponents {k0}:{k1} must satisfy 0 <= k0 <= k1")
        return k0, k1

    @staticmethod
    def parse_point(text: str) -> Point2:
        try:
            x, y = (float(v) for v in str(text).split(","))
        except ValueError:
            raise ConfigError(f"Malformed point {text!r}, expected X,Y")
        return Point2(x, y)

    @staticmethod
    def parse_formats(value: Any) -> Tuple[OutputFormat, ...]:
        items = value if isinstance(value, (list, tuple)) else str(value).split(",")
        formats = []
        for item in items:
            try:
                fmt = OutputFormat(str(item).strip().lower())
            except ValueError:
                raise ConfigError(f"Unknown output format {item!r}")
            if fmt not in formats:
                formats.append(fmt)
        return tuple(formats)

    @staticmethod
    def load_file(path: str) -> Dict:
        """
        Read a JSON config file

        Args:
            path: location of the file

        Returns:
            Dictionary restricted to the recognized keys
        """
        try:
            with open(path) as handle:
                data = json.load(handle)
        except OSError as e:
            raise ConfigError(f"Cannot read config file {path}: {e}")
        except json.JSONDecodeError as e:
            raise ConfigError(f"Config file {path} is not valid JSON: {e}")
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {path} must hold a JSON object")
        unknown = set(data) - _FILE_KEYS
        if unknown:
            raise ConfigError(f"Unknown config keys: {', '.join(sorted(unknown))}")
        return data

    @staticmethod
    def from_environment(environ: Mapping[str, str]) -> Dict:
        settings = {}
        if environ.get(ENV_OUT_DIR):
            settings["output"] = environ[ENV_OUT_DIR]
        if environ.get(ENV_DEPTH):
            settings["depth"] = environ[ENV_DEPTH]
        return settings

    @staticmethod
    def resolve(flags: Dict, environ: Optional[Mapping[str, str]] = None,
                default_formats: str = OutputFormat.JSON.value) -> RunConfig:
        """
        Merge the configuration sources, later ones winning

        Args:
            flags: command-line values keyed like the config file, None when absent;
                   "config" names an optional JSON file
            environ: environment mapping, os.environ by default
            default_formats: artifact formats when neither file nor flags name any

        Returns:
            Validated RunConfig
        """
        environ = os.environ if environ is None else environ
        merged: Dict[str, Any] = {}
        merged.update(ConfigParser.from_environment(environ))
        if flags.get("config"):
            merged.update(ConfigParser.load_file(flags["config"]))
        merged.update({key: value for key, value in flags.items() if value is not None and key != "config"})

        if "case" not in merged:
            raise ConfigError("A sequence case (A, B or C) is required")
        try:
            case = SequenceCase(str(merged["case"]).upper())
        except ValueError:
            raise ConfigError(f"Unknown case {merged['case']!r}")

        try:
            lam = float(merged["lambda"]) if merged.get("lambda") is not None else None
            q = float(merged["q"]) if merged.get("q") is not None else None
            horizon = int(merged.get("horizon", DEFAULT_HORIZON))
            seed = int(merged.get("seed", RunConfig.seed))
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Malformed numeric setting: {e}")

        try:
            precision_mode = PrecisionMode(merged.get("precision_mode", PrecisionMode.STANDARD.value))
            variant = BoundaryVariant(merged.get("variant", BoundaryVariant.SMOOTH.value))
        except ValueError as e:
            raise ConfigError(str(e))
        if precision_mode == PrecisionMode.EXTENDED:
            raise ConfigError("precision_mode 'extended' is not available; binary64 only")

        n_range = ConfigParser.parse_range(merged["range"]) if "range" in merged else DEFAULT_RANGES[case]
        if "depth" in merged:
            try:
                depth = int(merged["depth"])
            except (TypeError, ValueError):
                raise ConfigError(f"Malformed depth {merged['depth']!r}")
        else:
            depth = n_range[1] + 2
        if depth > INDEX_CAPS[case]:
            raise ConfigError(f"Depth {depth} exceeds the case {case.value} cap {INDEX_CAPS[case]}")
        if n_range[1] > depth - 2:
            raise TruncationError(f"Range end {n_range[1]} exceeds depth - 2 = {depth - 2}")

        formats = ConfigParser.parse_formats(merged.get("formats", default_formats))
        return RunConfig(
            case=case,
            lam=lam,
            q=q,
            depth=depth,
            n_range=n_range,
            output=str(merged.get("output", RunConfig.output)),
            formats=formats,
            precision_mode=precision_mode,
            variant=variant,
            smooth_apex=bool(merged.get("smooth_apex", False)),
            horizon=horizon,
            seed=seed,
        )
