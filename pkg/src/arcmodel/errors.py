"""Exception hierarchy shared by all arcmodel modules."""


class ArcModelError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(ArcModelError):
    """Operands have incompatible shapes, rings, or variable sets."""


class ParseError(ArcModelError):
    """Malformed descriptor, expression, or input file."""


class NotAUnit(ArcModelError):
    """Inversion was requested for an element with zero residue."""


class NotMonic(ArcModelError):
    """Division was requested modulo a polynomial that is not monic."""


class NotEnumerable(ArcModelError):
    """Exhaustive enumeration requires a finite base field."""


class ResidueZero(ArcModelError):
    """The series to factor is identically zero modulo the maximal ideal."""


class PrecisionExhausted(ArcModelError):
    """Not enough known coefficients to carry out the operation."""


class ObstructedLift(ArcModelError):
    """The model-side data admits no solution; the adjugate product is not
    divisible by the required power of q."""


class InconsistentInput(ArcModelError):
    """Lift input fails its entry conditions (divisibility or residue data)."""


class ArcNotOnVariety(ArcModelError):
    """The base arc does not satisfy the defining equations."""


class ArcInDegeneracyLocus(ArcModelError):
    """The Jacobian determinant vanishes identically along the base arc."""


class Refused(ArcModelError):
    """The requested exhaustive search is larger than the configured guard."""

    def __init__(self, message, size=None):
        super().__init__(message)
        self.size = size
