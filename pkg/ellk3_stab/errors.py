"""
Exception types raised by ellk3_stab
"""


class StabilityError(ValueError):
    """Base class for every domain error; the CLI maps it to exit code 2"""


class ZeroThetaComponent(StabilityError):
    """A pure-fiber divisor has no RDV view"""


class KThreeOnly(StabilityError):
    """The operation is only defined on a K3 surface (e = 2)"""


class ZeroRank(StabilityError):
    """A rank-zero class was passed where a rank is divided by"""


class KernelWithoutTable(StabilityError):
    """Z(v) = 0 but the charge family carries no kernel phase table"""


class NotWeakFamily(StabilityError):
    """Kernel data was requested for a non-weak charge family"""


class UnknownLimit(StabilityError):
    """No closed-form limit phase is known for the class and path"""


class NotAmple(StabilityError):
    """A class that must be ample is not"""


class DegenerateTarget(StabilityError):
    """The solved target charge has a vanishing denominator"""


class HypothesisViolated(StabilityError):
    """Inputs violate a hypothesis of the requested computation"""


class ParallelSlopes(StabilityError):
    """Two g-lines on a volume ray are parallel, so no mini-wall exists"""


class WindowEmpty(StabilityError):
    """A raster window has zero area or an empty grid"""


class UnsupportedName(StabilityError):
    """An unknown named object, map or family was requested"""


class ParseError(Exception):
    """Malformed command-line input; the CLI maps it to exit code 3"""
