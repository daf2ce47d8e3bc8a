"""Exception types raised across the package."""


class TrendletError(Exception):
    """Base class for all trendlet errors."""


class UnknownWavelet(TrendletError):
    """Requested wavelet name is not in the registry."""


class InvalidInput(TrendletError):
    """Input violates a precondition (shape, range, finiteness)."""


class InsufficientDepth(TrendletError):
    """Decomposition too shallow to select the coarse bands c0, d0, d1."""


class IndexOutOfRange(TrendletError):
    """Coefficient address outside the pyramid."""


class ParseError(TrendletError):
    """Malformed CSV cell or row."""


class GapError(TrendletError):
    """Date column is not gap-free at daily frequency."""


class EmptyInput(TrendletError):
    """No data rows found."""


class DegenerateSeries(TrendletError):
    """A series is constant and cannot be normalized."""


class Degenerate(TrendletError):
    """Fewer distinct points than requested clusters."""


class AnchorCollision(TrendletError):
    """Two anchor entities fell into the same cluster."""


class RequiresTwoComponents(TrendletError):
    """Biplot needs at least two principal components."""
