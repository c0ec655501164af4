"""Exception hierarchy used across the package."""


class GaussLocError(Exception):
    """Base class for all errors raised by gaussloc."""


class DimensionError(GaussLocError, ValueError):
    """Matrix has the wrong shape, is not symmetric, or indices are out of range."""


class DomainError(GaussLocError, ValueError):
    """A scalar parameter lies outside its admissible range."""


class PhysicalityError(GaussLocError, ValueError):
    """Covariance matrix violates the uncertainty relation."""


class PurityError(GaussLocError, ValueError):
    """A pure state was required but the input is mixed."""


class NumericalRankError(GaussLocError, ArithmeticError):
    """A matrix that must be invertible is numerically singular."""


class GridSizeError(GaussLocError, ValueError):
    """Requested oracle grid exceeds the combinatorial limit."""
