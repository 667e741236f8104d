"""Exception types raised by dimscale."""


class DimScaleError(Exception):
    """Base class for all library errors."""


class PreconditionError(DimScaleError, ValueError):
    """An operation was called outside its domain."""


class SizeGuardError(DimScaleError):
    """A carrier exceeds the configured exhaustive-search bound."""


class NoExtremumError(DimScaleError):
    """A largest/least element was requested but does not exist.

    ``reason`` is ``"empty"`` when the candidate family is empty and
    ``"no-maximum"`` / ``"no-minimum"`` / ``"not-unique"`` otherwise.
    """

    def __init__(self, message, reason, witness=None):
        super().__init__(message)
        self.reason = reason
        self.witness = witness


class DecompositionError(DimScaleError):
    """A direct decomposition S = A (+) B failed; ``witness`` is the element."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(DimScaleError):
    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line
