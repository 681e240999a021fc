"""Exception types raised across the package."""


class TeleportError(Exception):
    pass


class DimensionMismatch(TeleportError, ValueError):
    pass


class ZeroProbabilityOutcome(TeleportError):
    """The requested outcome has (numerically) zero probability, so the
    conditional state is undefined."""


class SingularSharedState(TeleportError):
    """The shared resource operator is not invertible."""


class NonUnitaryArgument(TeleportError, ValueError):
    pass


class NotMatching(TeleportError):
    """A measurement outcome is not in the matching set of the shared state."""
