"""Exception hierarchy for the mfscale library.

Everything raised on bad input or a failed analysis derives from
:class:`MfscaleError`, so callers can catch one type at the boundary.
"""


class MfscaleError(Exception):
    """Base class for all mfscale domain errors."""


class NonPositiveValue(MfscaleError):
    """A value that must be strictly positive (e.g. a price) is not."""


class WrongRepresentation(MfscaleError):
    """A series with the wrong representation was passed to a transform."""


class TooShort(MfscaleError):
    """The series has too few samples for the requested operation."""


class OutOfRange(MfscaleError):
    """An index or interval falls outside the target series."""


class InvalidParams(MfscaleError):
    """Generator or analysis parameters violate their constraints."""


class CsvFormatError(MfscaleError):
    """A CSV record could not be parsed; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class WindowTooLarge(MfscaleError):
    """A box size exceeds one quarter of the series length."""


class RankDeficient(MfscaleError):
    """The detrending normal system is numerically singular."""


class AllBoxesDegenerate(MfscaleError):
    """Every box at some window size has (near-)zero variance."""

    def __init__(self, message: str, window_size: int | None = None):
        super().__init__(message)
        self.window_size = window_size


class TooFewPoints(MfscaleError):
    """A scaling fit has fewer surface points than the minimum."""


class NoAdmissibleRange(MfscaleError):
    """No contiguous scaling range meets the auto-selection policy."""


class GridTooSmall(MfscaleError):
    """The q grid is too small for finite differencing."""


class BaselineLengthMismatch(MfscaleError):
    """No calibration entry within a factor of two of the series length."""


class OverlappingIntervals(MfscaleError):
    """Excision intervals overlap."""
