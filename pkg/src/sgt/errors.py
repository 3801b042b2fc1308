"""Exception types raised across the toolkit."""


class SgtError(Exception):
    """Base class for all toolkit errors."""


class DegeneratePose(SgtError):
    """A bone's parent and child joints coincide, so no direction exists."""


class EmptyDataset(SgtError):
    pass


class SequenceTooShort(SgtError):
    pass


class DegenerateVariance(SgtError):
    """A style statistic has (near-)zero variance on the fitting set."""


class RangeOutOfBounds(SgtError):
    pass


class LengthMismatch(SgtError):
    pass


class EmptyAudio(SgtError):
    pass


class TtsUnavailable(SgtError):
    """A real TTS backend is configured but did not answer."""


class ShapeMismatch(SgtError):
    pass


class CorruptCheckpoint(SgtError):
    pass


class VersionMismatch(SgtError):
    pass


class NonFiniteLoss(SgtError):
    """Training produced NaN/inf; carries the step diagnostics message."""


class EmptySet(SgtError):
    pass


class NoMaskedFrames(SgtError):
    pass


class DuplicateKeyIndex(SgtError):
    pass


class IndexOutOfRange(SgtError):
    pass


class UnknownGesture(SgtError):
    pass


class InvalidSpeedLevel(SgtError):
    pass


class ModelNotLoaded(SgtError):
    pass


class DimensionMismatch(SgtError):
    pass
