"""Exception types raised by wavematch."""


class WavematchError(Exception):
    """Base class for all wavematch errors."""


class InvalidParameterError(WavematchError, ValueError):
    """A parameter is non-finite, out of range or otherwise malformed."""


class ShapeError(WavematchError, ValueError):
    """Array lengths are incompatible with the requested operation."""


class PlanError(WavematchError, ValueError):
    """The number of decomposition levels is out of range for the signal."""


class DistortionError(WavematchError, ValueError):
    """Distortion is undefined, e.g. the reference signal has zero energy."""


class NumericalError(WavematchError, ArithmeticError):
    """A numerical procedure produced a degenerate result."""


class NoMinimumError(WavematchError, ValueError):
    """A surface has no finite value to minimize over."""


class RecordingParseError(WavematchError, ValueError):
    """A recording file could not be parsed."""
