"""Exception types shared across latlab."""


class LatticeError(ValueError):
    """Base class for all latlab input and precondition errors."""


class DegenerateLatticeError(LatticeError):
    pass


class NotTwoElementaryError(LatticeError):
    pass


class NotEvenError(LatticeError):
    pass


class OutOfScopeError(LatticeError):
    """A request falls outside what the exact routines can certify."""


class ParseError(LatticeError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class ConfigError(LatticeError):
    """Malformed configuration or manifest file."""


class ConsistencyError(AssertionError):
    """Two independent computations of the same quantity disagree."""
