"""Exception types shared across the package."""


class HomoglabError(Exception):
    """Base class for all package errors."""


class ExhaustedStream(HomoglabError):
    """The byte stream has fewer than two unread bytes."""


class OutOfDomain(HomoglabError):
    """A coefficient or window was evaluated outside its domain."""


class NonpositiveCoefficient(HomoglabError):
    """A coefficient evaluation returned a value <= 0."""


class DegenerateGrid(HomoglabError):
    """A grid has too few nodes for the requested operation."""


class GridMismatch(HomoglabError):
    """Two nodal fields do not live on compatible grids."""


class NonSpdCoefficient(HomoglabError):
    """A per-square tensor coefficient is not symmetric positive definite."""


class NoConvergence(HomoglabError):
    """An iterative solve failed to reach the residual contract."""


class BoundsViolation(HomoglabError):
    """An effective tensor escaped its harmonic/arithmetic-mean bounds."""


class ZeroReference(HomoglabError):
    """Relative errors were requested against a zero reference field."""


class QueryOutsideDomain(HomoglabError):
    """A correction query point lies outside the unit square."""
