"""Exception types shared across the package."""


class CoxwallError(Exception):
    """Base class for all package errors."""


class MatrixShape(CoxwallError):
    """Coxeter matrix is malformed: not square, not symmetric, bad diagonal,
    or an off-diagonal label below 2."""


class UnknownGenerator(CoxwallError):
    """A word refers to a generator the system does not have."""


class SystemMismatch(CoxwallError):
    """Two elements (or an element and a ball) belong to different systems."""


class ResourceLimit(CoxwallError):
    """A configured bound (ball vertices, automorphism search rank) was hit."""


class RadiusTooSmall(CoxwallError):
    """The requested construction needs a larger ball radius."""


class NotFinite(CoxwallError):
    """Operation requires a finite Coxeter system."""


class BadRank(CoxwallError):
    """Rank outside the supported range for this operation."""


class UnknownCellulation(CoxwallError):
    """Cellulation id not in the fixed catalog."""


class AngleRange(CoxwallError):
    """An angle is outside (0, pi/2] or is not a rational multiple of pi."""


class OddK(CoxwallError):
    """Polygon parameter k must be even."""


class KTooSmall(CoxwallError):
    """Polygon parameter k must be at least 4."""


class OddP(CoxwallError):
    """Bourdon parameter p must be even."""


class NotAWitness(CoxwallError):
    """The supplied (generator, automorphism) pair is not a star-fixing witness."""


class ParseError(CoxwallError):
    """Input file failed to parse or validate."""
