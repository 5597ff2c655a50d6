"""Exception hierarchy shared by all modules and mapped to CLI exit codes."""


class SyscowError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ValidationError(SyscowError, ValueError):
    """Malformed input: wrong shape, not antisymmetric, singular basis, ..."""

    exit_code = 2


class DimensionError(ValidationError):
    """Dimensions are out of range or do not match."""


class UnsupportedNormError(ValidationError):
    """A dual norm was requested for a norm with no certified dual."""


class UnsupportedError(ValidationError):
    """The requested computation is outside the supported family."""


class ResourceError(SyscowError, RuntimeError):
    """An enumeration exceeded its configured candidate budget."""

    exit_code = 3
