"""Exception hierarchy shared by the drcr modules."""


class DrcrError(Exception):
    pass


class ValidationError(DrcrError, ValueError):
    """Input data does not satisfy a domain invariant."""


class HierarchyViolation(ValidationError):
    pass


class RangeError(ValidationError):
    pass


class UnboundedInterval(ValidationError):
    pass


class EmptyShellMass(DrcrError):
    pass


class InfeasibleInput(ValidationError):
    pass


class SolverError(DrcrError):
    """The LP solver could not produce a usable answer."""


class NumericalFailure(SolverError):
    pass
