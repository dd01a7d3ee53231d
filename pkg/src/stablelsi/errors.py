"""Exception hierarchy shared across the toolkit."""


class StableLSIError(Exception):
    """Base class for all errors raised by stablelsi."""


class DimensionError(StableLSIError, ValueError):
    pass


class FactorizationError(StableLSIError, ArithmeticError):
    pass


class ConfigError(StableLSIError, ValueError):
    pass


class DivergenceError(StableLSIError, ArithmeticError):
    """A simulation or training loop produced non-finite values.

    ``step`` is the index at which the failure was detected. ``partial``
    carries whatever was computed before the failure (a trajectory prefix,
    or the last good parameters during training).
    """

    def __init__(self, message, step, partial=None):
        super().__init__(message)
        self.step = step
        self.partial = partial


class FormatError(StableLSIError, ValueError):
    """Base class for file format problems; ``offset`` is a byte offset."""

    def __init__(self, message, offset=0):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class MalformedHeaderError(FormatError):
    pass


class TruncatedPayloadError(FormatError):
    pass


class VersionMismatchError(FormatError):
    pass


class ChecksumError(FormatError):
    pass
