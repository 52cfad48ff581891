"""Exception types raised by the library."""


class LcdunklError(Exception):
    """Base class for all library errors."""


class DomainError(LcdunklError, ValueError):
    """Argument outside the domain of a special function."""


class KernelOverflowError(LcdunklError, OverflowError):
    """Exponential growth of a continued kernel exceeds double range."""


class NonConvergence(LcdunklError):
    """Quadrature refinement hit its panel ceiling without meeting tolerance."""


class ZeroSignal(LcdunklError):
    """A ratio was requested whose denominator is the norm of a zero signal."""


class DegenerateMatrix(LcdunklError, ValueError):
    """Matrix is singular for the requested operation (b = 0 or bad determinant)."""


class ParameterOutOfRange(LcdunklError, ValueError):
    """Exponent or weight parameter outside the range of a theorem."""


class ConcentrationSaturated(LcdunklError):
    """A measured concentration ratio is too close to 1 for the bound to apply."""


class FitFailure(LcdunklError):
    """Polynomial fit residual exceeded its tolerance."""
