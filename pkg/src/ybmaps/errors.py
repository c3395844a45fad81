"""Exception types shared by all modules."""


class YBError(Exception):
    pass


class InvalidPointError(YBError, ValueError):
    pass


class SingularMapError(YBError):
    """A map was evaluated on its singular set; ``pivot`` holds the offending value."""

    def __init__(self, message, pivot=None, where=None):
        super().__init__(message)
        self.pivot = pivot
        self.where = where


class DegenerateSamplesError(YBError, ValueError):
    pass


class IllConditionedError(YBError):
    def __init__(self, message, cond=None):
        super().__init__(message)
        self.cond = cond


class BranchError(YBError, ValueError):
    pass


class DimensionError(YBError, ValueError):
    pass


class QuadratureError(YBError):
    pass


class ProbeError(YBError):
    """Function evaluation failed at a finite-difference probe point."""

    def __init__(self, message, probe=None):
        super().__init__(message)
        self.probe = probe


class GenericityError(YBError, ValueError):
    """q is (numerically) a root of unity where a generic value is required."""
