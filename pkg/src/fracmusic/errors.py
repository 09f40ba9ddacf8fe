"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: FormatError subclasses exit 3, config
problems exit 4, IoFailure exits 2, NonFiniteLoss exits 5.
"""


class FracmusicError(Exception):
    """Base class for all package errors."""


class IoFailure(FracmusicError):
    """File could not be read or written."""


class FormatError(FracmusicError):
    """A binary container violated its documented layout."""


# --- audio_io ---

class MalformedRiff(FormatError):
    """Bad RIFF/WAVE magic or inconsistent chunk sizes."""


class UnsupportedFormat(FormatError):
    """Valid RIFF but not in the supported subset (16-bit PCM, mono/stereo)."""


class TruncatedData(FormatError):
    """Data chunk shorter than its declared size."""


class EmptyInput(FracmusicError):
    """Operation requires at least one sample/element."""


# --- transforms ---

class LengthTooSmall(FracmusicError):
    """Signal shorter than the transform's minimum length."""


class LengthTooLarge(FracmusicError):
    """Signal exceeds the O(N^2) guard of the brute-force oracle."""


class OrderOutOfRange(FracmusicError):
    """Fractional order outside [-2, 2)."""


class SignalTooShort(FracmusicError):
    """Clip shorter than an analysis window."""


# --- dataset ---

class ConstantChannel(FracmusicError):
    """Channel has max == min; min-max normalization is undefined."""


class IntervalTooShort(FracmusicError):
    """Index interval cannot hold a single window + horizon."""


class ResultingIntervalTooShort(IntervalTooShort):
    """A train/test split would leave an interval with no complete window."""


class BadMagic(FormatError):
    """Serialized file does not start with the expected magic bytes."""


class VersionMismatch(FormatError):
    """Serialized file has an unsupported version byte."""


# --- neural ---

class DimensionMismatch(FracmusicError):
    """Model/parameter/input dimensions are inconsistent."""


class ShapeMismatch(DimensionMismatch):
    """Two arrays that must agree elementwise have different shapes."""


class CacheMismatch(FracmusicError):
    """Backward pass received caches from a different forward pass/model."""


class NonFiniteLoss(FracmusicError):
    """Training produced NaN/Inf; aborted to keep comparisons valid."""


# --- pipeline ---

class SeedOutOfRange(FracmusicError):
    """Generation seed window does not fit inside the dataset."""


class ConfigError(FracmusicError):
    """Invalid configuration value or unknown config key."""
