"""Exception taxonomy shared by all codec stages."""


class HaarCodecError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(HaarCodecError, ValueError):
    """A caller-supplied value violates an operation contract."""


class DegenerateParameterError(ParameterError):
    """Generator parameters hit a degenerate configuration (e.g. a zero denominator)."""


class ConstructionError(HaarCodecError):
    """A wavelet bank could not be built (singular analysis matrix)."""


class FormatError(HaarCodecError):
    """Unsupported or malformed image file."""


class ContainerError(HaarCodecError):
    """Base class for compressed-container parsing failures."""


class BadMagicError(ContainerError):
    """The stream does not start with the container magic."""


class UnsupportedVersionError(ContainerError):
    """The container declares a format version this build cannot decode."""


class TruncatedStreamError(ContainerError):
    """The stream ends before a declared field or payload is complete."""


class CorruptStreamError(ContainerError):
    """A structurally complete stream carries inconsistent or out-of-range data."""
