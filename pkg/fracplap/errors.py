"""
Exception hierarchy for fracplap.

Every error carries a short ``code`` used to annotate table rows when a batch
command records a failure instead of aborting.
"""


class FracPLapError(Exception):
    """Base class for all fracplap errors."""

    code = "error"


class HypothesisError(FracPLapError, ValueError):
    """The evaluation point violates the hypotheses of the representation."""

    code = "hypothesis"


class DegenerateGradientError(HypothesisError):
    """Gradient vanishes where the small-p regime requires it not to."""

    code = "degenerate_gradient"


class PoleError(FracPLapError, ValueError):
    """Gamma function evaluated at a nonpositive integer."""

    code = "pole"


class BesselOverflowError(FracPLapError, OverflowError):
    """Unscaled modified Bessel function exceeds the float range."""

    code = "bessel_overflow"


class QuadratureError(FracPLapError, ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    code = "quadrature"


class IntegralDivergenceError(QuadratureError):
    """The integral does not have a finite value."""

    code = "divergence"


class WeightsDivergeError(IntegralDivergenceError):
    """Discrete weights requested with delta = 0 while sp >= 2."""

    code = "weights_diverge"


class NonIntegrableSingularityError(QuadratureError):
    """The radial integrand does not decay fast enough at the origin."""

    code = "non_integrable"


class ExtrapolationError(QuadratureError):
    """The y -> 0 extrapolation sequence did not settle."""

    code = "extrapolation"


class RepresentationMismatchError(FracPLapError):
    """Two formulas for the same quantity disagree beyond their error estimates."""

    code = "mismatch"


class UnsupportedFunctionError(FracPLapError, ValueError):
    """Unknown catalog name or an operation the function does not support."""

    code = "unsupported"
