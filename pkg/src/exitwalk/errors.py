"""Exception types shared across the package."""


class RegionError(ValueError):
    """A column description does not define a usable region."""


class EmptyColumn(RegionError):
    def __init__(self, column: int):
        self.column = column
        super().__init__(f"column {column} has lo > hi")


class DisconnectedColumns(RegionError):
    def __init__(self, column: int):
        self.column = column
        super().__init__(
            f"columns {column} and {column + 1} share no height; region is disconnected"
        )


class BadShiftUnit(ValueError):
    """Vertical shift is not a multiple of the path's vertical unit."""


class InvalidInstance(ValueError):
    """Injection instance parameters violate a precondition."""


class NoIntersection(ValueError):
    """The loop-erased first path never meets the second path inside the mask."""


class ConstructionFailure(RuntimeError):
    """The suffix-swap construction could not be completed for this input pair.

    Carries the stage that failed and, when available, the partial trace.
    """

    def __init__(self, stage: str, reason: str, trace=None):
        self.stage = stage
        self.reason = reason
        self.trace = trace
        super().__init__(f"{stage}: {reason}")


class EnumerationTooLarge(RuntimeError):
    """Requested exhaustive enumeration exceeds the configured work budget."""


class DimensionMismatch(ValueError):
    """Model width or step usage does not match the region."""


class SingularSystem(RuntimeError):
    """The absorption system has no unique solution (mass can cycle forever)."""


class UnreachableB(ValueError):
    """No admissible path reaches the requested target point."""


class NoConvergence(RuntimeError):
    """Iterative scheme failed to reach the requested tolerance."""
