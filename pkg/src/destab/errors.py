"""Exception hierarchy.

Every error carries a CLI exit code: 2 for invalid input, 3 for capacity.
"""


class DestabError(Exception):
    exit_code = 2


class InputError(DestabError):
    """Malformed or inconsistent problem data."""


class DimensionMismatch(InputError):
    pass


class LengthMismatch(InputError):
    pass


class NotPositiveDefinite(InputError):
    pass


class ZeroRay(InputError):
    pass


class DivergentFlow(InputError):
    """The flow along the ray leaves every compact set."""


class NotDestabilizable(InputError):
    """The point is semistable, so there is nothing to destabilize."""


class AlreadySemistable(NotDestabilizable):
    pass


class SemistableType(NotDestabilizable):
    pass


class TopologicalConditionViolated(InputError):
    pass


class InvalidBreakpoint(InputError):
    pass


class NotALattice(InputError):
    pass


class AmbiguousLattice(InputError):
    pass


class NoFiltrationFound(InputError):
    pass


class MultipleFiltrationsFound(InputError):
    pass


class CapacityExceeded(DestabError):
    exit_code = 3
