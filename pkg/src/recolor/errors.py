"""Exception hierarchy shared by every module in the package."""


class RecolorError(Exception):
    """Base class for all errors raised by this package."""


class InstanceError(RecolorError, ValueError):
    """An instance, edge, or parameter violates its preconditions."""


class UnknownColorError(RecolorError, KeyError):
    pass


class NotBipartiteError(RecolorError):
    """An odd cycle was found. ``edge`` is an edge that closes it."""

    def __init__(self, message: str, edge: tuple[int, int] | None = None):
        super().__init__(message)
        self.edge = edge


class NoFreeColorError(RecolorError):
    """No free color exists where the algorithm's analysis guarantees one."""

    def __init__(self, message: str, diagnostic: dict | None = None):
        super().__init__(message)
        self.diagnostic = diagnostic or {}


class LevelCapError(RecolorError):
    pass


class InvariantViolation(RecolorError, AssertionError):
    pass


class AuditPreconditionError(RecolorError):
    pass
