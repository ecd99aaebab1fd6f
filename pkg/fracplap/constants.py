"""
Special functions and the normalization constants C1-C4 of the fractional
p-Laplacian and its representations.

All constants are assembled in log space from log-Gamma terms and exponentiated
once, so large n or p do not overflow intermediate Gamma values.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Union

import numpy as np
from scipy import special

from fracplap.config import FracParams
from fracplap.errors import BesselOverflowError, PoleError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def _check_pole(x: float) -> None:
    if x <= 0.0 and float(x).is_integer():
        raise PoleError(f"Gamma has a pole at {x}")


def gamma(x: float) -> float:
    """
    Gamma function of a real argument.

    Args:
        x: Argument, not a nonpositive integer

    Returns:
        Gamma(x)

    Raises:
        PoleError: If x is 0, -1, -2, ...
    """
    _check_pole(x)
    return float(special.gamma(x))


def log_abs_gamma(x: float) -> float:
    """log|Gamma(x)|, with the same pole check as gamma."""
    _check_pole(x)
    return float(special.gammaln(x))


def bessel_i(m: int, z: float) -> float:
    """
    Modified Bessel function of the first kind I_m(z).

    Args:
        m: Nonnegative integer order
        z: Nonnegative argument

    Returns:
        I_m(z)

    Raises:
        ValueError: If m or z is negative
        BesselOverflowError: If I_m(z) is not representable; use bessel_ie
    """
    if m < 0 or z < 0.0:
        raise ValueError("bessel_i needs m >= 0 and z >= 0")
    value = float(special.iv(m, z))
    if not math.isfinite(value):
        raise BesselOverflowError(f"I_{m}({z}) overflows; use the scaled variant")
    return value


def bessel_ie(m: ArrayLike, z: ArrayLike) -> ArrayLike:
    """Exponentially scaled Bessel function e^{-z} I_m(z), vectorized."""
    return special.ive(m, z)


def c1(params: FracParams) -> float:
    """
    Normalization of the direct integral,

        C1 = (sp/2)(1-s) 2^{2s-1} pi^{-(n-1)/2} Gamma((n+sp)/2)
             / (Gamma((p+1)/2) Gamma(2-s)),

    which reduces to the classical c_{n,s} at p = 2.
    """
    n, s, p = params.n, params.s, params.p
    sp = params.sp
    log_value = (
        math.log(sp / 2.0)
        + math.log(1.0 - s)
        + (2.0 * s - 1.0) * math.log(2.0)
        - 0.5 * (n - 1) * math.log(math.pi)
        + log_abs_gamma((n + sp) / 2.0)
        - log_abs_gamma((p + 1.0) / 2.0)
        - log_abs_gamma(2.0 - s)
    )
    return math.exp(log_value)


def c_ns(n: int, s: float) -> float:
    """Classical constant of the fractional Laplacian, 4^s Gamma((n+2s)/2) / (pi^{n/2} |Gamma(-s)|)."""
    log_value = (
        2.0 * s * math.log(2.0)
        + log_abs_gamma((n + 2.0 * s) / 2.0)
        - 0.5 * n * math.log(math.pi)
        - log_abs_gamma(-s)
    )
    return math.exp(log_value)


@dataclass(frozen=True)
class ConstantSet:
    """Normalizations of the direct, semigroup, extension and resolvent forms."""

    c1: float
    c2: float
    c3: float
    c4: float

    def as_dict(self) -> Dict[str, float]:
        return {"c1": self.c1, "c2": self.c2, "c3": self.c3, "c4": self.c4}


@lru_cache(maxsize=256)
def constant_set(params: FracParams) -> ConstantSet:
    """
    All four constants for the given parameters.

    C2, C3 and C4 follow from C1 and do not depend on n.

    Args:
        params: Operator parameters

    Returns:
        ConstantSet with c1..c4
    """
    n, sp = params.n, params.sp
    log_c1 = math.log(c1(params))
    half_n_log_pi = 0.5 * n * math.log(math.pi)
    log_gamma_mid = log_abs_gamma((n + sp) / 2.0)
    log_2sp = sp * math.log(2.0)

    log_c2 = log_c1 + half_n_log_pi - log_2sp - log_gamma_mid
    log_c3 = log_c1 + half_n_log_pi + log_abs_gamma(sp / 2.0) - log_gamma_mid
    log_c4 = (
        log_c1 + half_n_log_pi - log_2sp - log_abs_gamma((2.0 + sp) / 2.0) - log_gamma_mid
    )
    constants = ConstantSet(
        c1=math.exp(log_c1),
        c2=math.exp(log_c2),
        c3=math.exp(log_c3),
        c4=math.exp(log_c4),
    )
    logger.debug("constants for %s: %s", params, constants)
    return constants


def dimension_residuals(s: float, p: float, n_max: int = 5) -> Dict[str, float]:
    """
    Largest relative deviation of C2, C3, C4 over n = 1..n_max from their n = 1 values.

    Args:
        s: Fractional order
        p: Growth exponent
        n_max: Largest dimension checked

    Returns:
        Dictionary with keys 'c2_residual', 'c3_residual', 'c4_residual'
    """
    reference = constant_set(FracParams(n=1, s=s, p=p))
    residuals = {"c2_residual": 0.0, "c3_residual": 0.0, "c4_residual": 0.0}
    for n in range(2, n_max + 1):
        current = constant_set(FracParams(n=n, s=s, p=p))
        for key in ("c2", "c3", "c4"):
            ref = getattr(reference, key)
            deviation = abs(getattr(current, key) - ref) / ref
            name = f"{key}_residual"
            residuals[name] = max(residuals[name], deviation)
    return residuals
