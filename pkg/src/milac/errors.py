"""Exception types raised by the milac package."""


class MilacError(Exception):
    """Base class for all package errors."""


class DimensionError(MilacError, ValueError):
    """Shape, size, or index precondition violated."""


class RankDeficientError(MilacError, ValueError):
    """Channel matrix is numerically rank deficient."""


class AsymmetricComponentError(MilacError, ValueError):
    """Two-port component map gives conflicting values for (i, v) and (v, i)."""


class SingularNetworkError(MilacError, ValueError):
    """Admittance-to-scattering conversion hit an ill-conditioned system."""


class NotRealizableError(MilacError, ValueError):
    """Scattering matrix has no lossless reciprocal susceptance realization."""


class ResidueTooLargeError(MilacError, ValueError):
    """Recovered susceptance has a non-negligible imaginary or asymmetric part."""


class NegativeEntryError(MilacError, ValueError):
    """Diagonal gain matrix has a negative entry."""


class InconsistentSolutionError(MilacError, ValueError):
    """Stored beamformer blocks disagree with the scattering matrices."""


class DegenerateProjectionError(MilacError, ArithmeticError):
    """Projection target is the zero matrix; the power sphere has no nearest point."""


class NonFiniteObjectiveError(MilacError, ArithmeticError):
    """Objective became NaN or infinite during iteration."""


class DimensionTooLargeError(MilacError, ValueError):
    """Problem too large for exhaustive search."""


class MatrixFormatError(MilacError, ValueError):
    """Text matrix file is malformed."""
