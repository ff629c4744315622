"""
Exception hierarchy; each class carries the CLI exit code it maps to
"""

EXIT_OK = 0
EXIT_CONDITION_FAILURE = 2
EXIT_LEMMA_FAILURE = 3
EXIT_USAGE = 64
EXIT_DEPTH_GUARD = 65
EXIT_INTERNAL = 70
EXIT_IO = 74


class SmoothProjectionError(Exception):
    """Base class for all errors raised by the engine"""
    exit_code = EXIT_INTERNAL


class SequenceError(SmoothProjectionError):
    """Invalid sequence parameters or index"""
    exit_code = EXIT_USAGE


class ConditionError(SequenceError):
    """The convexity condition on alpha_n cannot be established"""
    exit_code = EXIT_CONDITION_FAILURE

    def __init__(self, message: str, first_failure: int):
        super().__init__(message)
        self.first_failure = first_failure


class GeometryError(SmoothProjectionError):
    """Construction request outside the valid range of the boundary model"""
    exit_code = EXIT_USAGE


class TruncationError(SmoothProjectionError):
    """Query or index range touches the truncated end of the boundary"""
    exit_code = EXIT_DEPTH_GUARD


class ConfigError(SmoothProjectionError):
    """Malformed configuration file or command-line flags"""
    exit_code = EXIT_USAGE


class ExportError(SmoothProjectionError):
    """Failure while writing or reading an artifact"""
    exit_code = EXIT_IO
