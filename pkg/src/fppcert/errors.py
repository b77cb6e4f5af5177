"""Exception types shared across the package."""


class FppError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(FppError):
    """Malformed presentation text."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class CosetLimitExceeded(FppError):
    """Coset enumeration hit the coset cap without closing."""

    def __init__(self, limit, defined):
        self.limit = limit
        self.defined = defined
        super().__init__(
            f"coset enumeration exceeded the cap of {limit} cosets "
            f"({defined} cosets defined); the group may be infinite"
        )


class NoSolution(FppError):
    """An integer linear system has no solution over the integers."""


class CompositionNotZero(FppError):
    """The two maps handed to a homology computation do not compose to zero."""


class OrderTooLarge(FppError):
    """Group order exceeds the cap of the bar-complex oracle."""


class ConsistencyError(FppError):
    """An internal cross-check failed; indicates a bug, never bad input."""
