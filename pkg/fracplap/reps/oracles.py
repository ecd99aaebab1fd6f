"""
Fourier-side oracles at p = 2, where the operator is the multiplier |xi|^{2s}.
"""

import math
from typing import Optional

from scipy import special

from fracplap.config import QuadConfig
from fracplap.errors import UnsupportedFunctionError
from fracplap.funcs import TestFunction, as_point
from fracplap.quad import Estimate, adaptive_quad

GAUSSIAN_FAMILY = ("gaussian", "shifted_gaussian")


def _gaussian_parameters(u: TestFunction):
    if u.name not in GAUSSIAN_FAMILY or u.n != 1:
        raise UnsupportedFunctionError(f"no Fourier oracle for {u.name} in n = {u.n}")
    return u.spec["amplitude"], u.spec["dilation"], u.spec["center"][0]


def gaussian_multiplier_integral(
    u: TestFunction, x: float, s: float, cfg: Optional[QuadConfig] = None
) -> Estimate:
    """
    (-Delta)^s of A exp(-k^2 (x - c)^2) as the cosine transform

        A / (k sqrt(pi)) int_0^inf xi^{2s} e^{-xi^2 / 4k^2} cos(xi (x - c)) d xi.
    """
    cfg = cfg or QuadConfig()
    amplitude, k, c = _gaussian_parameters(u)
    shift = float(as_point(x, 1)[0]) - c

    def integrand(xi: float) -> float:
        return xi ** (2.0 * s) * math.exp(-xi * xi / (4.0 * k * k)) * math.cos(xi * shift)

    # the Gaussian factor is below 1e-18 past 2 k * 6.5
    integral = adaptive_quad(integrand, 0.0, 13.0 * k, cfg)
    return integral.scaled(amplitude / (k * math.sqrt(math.pi)))


def gaussian_multiplier_closed_form(u: TestFunction, x: float, s: float) -> float:
    """The same cosine transform through Kummer's function 1F1."""
    amplitude, k, c = _gaussian_parameters(u)
    shift = float(as_point(x, 1)[0]) - c
    a = s + 0.5
    return (
        amplitude
        / (k * math.sqrt(math.pi))
        * 0.5
        * special.gamma(a)
        * (4.0 * k * k) ** a
        * special.hyp1f1(a, 0.5, -k * k * shift * shift)
    )


def fractional_laplacian_oracle(
    u: TestFunction, x, s: float, cfg: Optional[QuadConfig] = None
) -> float:
    """
    Reference value of (-Delta)^s u (x) for catalog functions with a known symbol.

    Raises:
        UnsupportedFunctionError: For functions without a Fourier oracle
    """
    if u.name == "constant":
        return 0.0
    if u.name == "cosine":
        k = u.spec["dilation"]
        return k ** (2.0 * s) * float(u.value(as_point(x, u.n)[None, :])[0])
    return gaussian_multiplier_integral(u, x, s, cfg).value


def plancherel_seminorm(u: TestFunction, s: float) -> float:
    """
    [u]_{s,2} of a one-dimensional Gaussian from Plancherel,

        [u]^2 = A^2 (2k^2)^{s+1/2} Gamma(s + 1/2) / k^2.
    """
    amplitude, k, _ = _gaussian_parameters(u)
    square = amplitude**2 * (2.0 * k * k) ** (s + 0.5) * special.gamma(s + 0.5) / (k * k)
    return math.sqrt(square)
