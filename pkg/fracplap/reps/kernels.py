"""
Explicit kernels of the extension and resolvent representations.

    P(xi, y)  = Gamma((n+sp)/2) / (pi^{n/2} Gamma(sp/2)) * y^{sp} / (|xi|^2 + y^2)^{(n+sp)/2}
    R_t(x)    = t^{n/2} W(t^{1/2} |x|)
    W(rho)    = rho^{2-n} (4 pi)^{-n/2} int_0^inf e^{-rho^2 w} w^{-n/2} e^{-1/(4w)} dw

In one dimension W(rho) = e^{-rho}/2; in two dimensions W is tabulated once
on a log grid and interpolated.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import special
from scipy.interpolate import CubicSpline

from fracplap.config import FracParams, QuadConfig
from fracplap.constants import log_abs_gamma
from fracplap.errors import RepresentationMismatchError, UnsupportedFunctionError
from fracplap.funcs import TestFunction, as_point
from fracplap.quad import (
    Estimate,
    adaptive_quad,
    heat_apply_radial,
    integrate_log_substituted,
    integrate_time_singular,
    periodic_power_tail,
    reduce_to_half_period,
    sphere_area,
)
from fracplap.reps.base import ErrorTracker, RingAverage

logger = logging.getLogger(__name__)

ScalarFunction = Callable[[float], float]

# W(rho) < 1e-19 beyond this radius
RESOLVENT_CUTOFF = 45.0
PROFILE_GRID = (1e-4, 50.0, 241)

_PROFILE_CFG = QuadConfig(rel_tol=1e-12, abs_tol=1e-15, max_subdivisions=400)


# ------------------- Poisson kernel -------------------


def poisson_constant(params: FracParams) -> float:
    n, sp = params.n, params.sp
    return math.exp(
        log_abs_gamma(0.5 * (n + sp)) - 0.5 * n * math.log(math.pi) - log_abs_gamma(0.5 * sp)
    )


def poisson_kernel(xi, y: float, params: FracParams):
    """
    Poisson kernel of the extension problem.

    Args:
        xi: Offset, a scalar in one dimension or an array of shape (..., n)
        y: Positive height
        params: Operator parameters

    Returns:
        P(xi, y), with the shape of the offsets
    """
    if y <= 0.0:
        raise ValueError("height must be positive")
    xi = np.asarray(xi, dtype=float)
    if params.n == 1 and (xi.ndim == 0 or xi.shape[-1] != 1):
        distance2 = xi * xi
    else:
        distance2 = np.sum(xi * xi, axis=-1)
    exponent = 0.5 * (params.n + params.sp)
    result = poisson_constant(params) * y**params.sp * (distance2 + y * y) ** (-exponent)
    return float(result) if np.ndim(result) == 0 else result


def poisson_tail_mass(radius: float, y: float, params: FracParams) -> float:
    """Mass of P(., y) outside the ball of the given radius (a regularized incomplete beta)."""
    w = radius / y
    return float(special.betainc(0.5 * params.sp, 0.5 * params.n, 1.0 / (1.0 + w * w)))


def poisson_convolution(
    profile: ScalarFunction,
    y: float,
    params: FracParams,
    cfg: QuadConfig,
    hints: Sequence[float] = (),
    tail_radius: float = 40.0,
    period: Optional[float] = None,
) -> Estimate:
    """
    int P(x - xi, y) f(xi) d xi from the ring average A of f around x.

    Args:
        profile: r -> A(r)
        y: Height
        params: Operator parameters
        cfg: Quadrature settings
        hints: Radii where A is not smooth
        tail_radius: Radius beyond which A is taken constant
        period: Period of A (one-dimensional periodic f)

    Returns:
        Estimate of the Poisson extension at (x, y)
    """
    n = params.n
    area = sphere_area(n)
    constant = poisson_constant(params) * y**params.sp
    exponent = 0.5 * (n + params.sp)

    def integrand(r: float) -> float:
        return area * constant * r ** (n - 1) * (r * r + y * y) ** (-exponent) * profile(r)

    points = list(hints) + [y]
    if period is not None:
        start = max(1.0, 4.0 * y)
        body = integrate_log_substituted(integrand, 0.0, start, cfg, points)
        tail = periodic_power_tail(profile, start, period, n + params.sp, cfg, y=y, hints=hints)
        return body.plus(tail.scaled(area * constant))

    radius = max(cfg.tail_radius or tail_radius, 4.0 * y)
    body = integrate_log_substituted(integrand, 0.0, radius, cfg, points)
    mass = poisson_tail_mass(radius, y, params)
    far, mid = profile(radius), profile(0.5 * radius)
    return body.plus(Estimate(far * mass, abs(far - mid) * mass))


def subordination_extension(
    profile: ScalarFunction,
    y: float,
    params: FracParams,
    cfg: QuadConfig,
    hints: Sequence[float] = (),
    period: Optional[float] = None,
) -> Estimate:
    """
    The same extension as the heat-semigroup average

        y^{sp} / (2^{sp} Gamma(sp/2)) int_0^inf e^{t Delta} f (x) e^{-y^2/4t} dt / t^{1+sp/2}.
    """
    sp = params.sp
    tracker = ErrorTracker(cfg)

    def weighted_heat(t: float) -> float:
        damping = math.exp(-y * y / (4.0 * t))
        if damping == 0.0:
            return 0.0
        return damping * tracker.track(heat_apply_radial(profile, t, params.n, cfg, hints, period))

    outer = integrate_time_singular(weighted_heat, 0.5 * sp, cfg, split=0.25 * y * y)
    factor = math.exp(sp * math.log(y) - sp * math.log(2.0) - log_abs_gamma(0.5 * sp))
    return tracker.combine(outer).scaled(factor)


def extension_apply(
    f: TestFunction, x, y: float, params: FracParams, cfg: Optional[QuadConfig] = None
) -> Estimate:
    """
    The fractional extension E[f](x, y), computed as a Poisson convolution and
    cross-checked against the subordination form.

    Args:
        f: Bounded continuous function
        x: Point of R^n
        y: Positive height
        params: Operator parameters
        cfg: Quadrature settings

    Returns:
        Estimate of the Poisson convolution

    Raises:
        RepresentationMismatchError: If the two forms disagree beyond ten times
            their combined error estimates
    """
    cfg = cfg or QuadConfig()
    if y <= 0.0:
        raise ValueError("height must be positive")
    point = as_point(x, f.n)
    if f.planar and f.n > 1:
        f, point, params = f.restrict_to_line(), point[:1], params.replace(n=1)
    ring = RingAverage(f.value, point, cfg.angular_nodes)
    hints = f.radial_hints(point)
    period = f.period if f.n == 1 else None
    tail_radius = f.tail_radius + float(np.linalg.norm(point))

    convolution = poisson_convolution(ring, y, params, cfg, hints, tail_radius, period)
    subordinated = subordination_extension(ring, y, params, cfg, hints, period)
    gap = abs(convolution.value - subordinated.value)
    budget = 10.0 * (convolution.error + subordinated.error) + cfg.tolerance(convolution.value)
    if gap > budget:
        raise RepresentationMismatchError(
            f"Poisson {convolution.value:.10g} vs subordination {subordinated.value:.10g} "
            f"at y = {y}: gap {gap:.2e} > {budget:.2e}"
        )
    return convolution


# ------------------- Resolvent kernel -------------------


def profile_quadrature(rho: float, n: int, cfg: QuadConfig = _PROFILE_CFG) -> float:
    """
    W(rho) by quadrature of its defining integral in w = e^sigma.

    The integrand is scaled by e^{rho}, which makes its peak (at w = 1/(2 rho))
    of order one.
    """
    if rho <= 0.0:
        raise ValueError("the profile integral needs rho > 0")

    def scaled(w: float) -> float:
        exponent = -rho * rho * w - 0.25 / w + rho
        return math.exp(exponent) if exponent > -745.0 else 0.0

    integral = integrate_time_singular(scaled, 0.5 * n - 1.0, cfg, split=0.5 / rho)
    log_prefactor = (2.0 - n) * math.log(rho) - 0.5 * n * math.log(4.0 * math.pi) - rho
    return integral.value * math.exp(log_prefactor)


@lru_cache(maxsize=4)
def _profile_table(n: int):
    """Cubic spline of log W against log rho with fitted end asymptotics."""
    lo, hi, count = PROFILE_GRID
    rho = np.geomspace(lo, hi, count)
    values = np.array([profile_quadrature(r, n) for r in rho])
    spline = CubicSpline(np.log(rho), np.log(values))
    # W ~ a + b ln rho near 0 and W ~ c rho^{-1/2} e^{-rho} at infinity
    slope = (values[1] - values[0]) / (math.log(rho[1]) - math.log(rho[0]))
    intercept = values[0] - slope * math.log(rho[0])
    far = values[-1] * math.sqrt(rho[-1]) * math.exp(rho[-1])
    logger.debug("tabulated resolvent profile for n=%d on %d radii", n, count)
    return spline, intercept, slope, far


def resolvent_profile(rho, n: int):
    """
    The radial profile W of R_t, vectorized over rho.

    Raises:
        UnsupportedFunctionError: For n > 2
    """
    rho = np.asarray(rho, dtype=float)
    if n == 1:
        result = 0.5 * np.exp(-rho)
    elif n == 2:
        spline, intercept, slope, far = _profile_table(n)
        lo, hi, _ = PROFILE_GRID
        clipped = np.clip(rho, lo, hi)
        inner = np.exp(spline(np.log(clipped)))
        with np.errstate(divide="ignore"):
            small = intercept + slope * np.log(rho)
        large = far * np.exp(-rho) / np.sqrt(np.maximum(rho, hi))
        result = np.where(rho < lo, small, np.where(rho > hi, large, inner))
    else:
        raise UnsupportedFunctionError("the resolvent profile is tabulated for n = 1, 2")
    return float(result) if result.ndim == 0 else result


def resolvent_kernel(x, t: float, params: FracParams):
    """R_t(x) = t^{n/2} W(t^{1/2} |x|)."""
    if t <= 0.0:
        raise ValueError("t must be positive")
    x = np.asarray(x, dtype=float)
    if params.n == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        distance = np.abs(x)
    else:
        distance = np.linalg.norm(x, axis=-1)
    return t ** (0.5 * params.n) * resolvent_profile(math.sqrt(t) * distance, params.n)


def periodic_resolvent_kernel(z: float, t: float, period: float) -> float:
    """One-dimensional R_t summed over periods, for z in [0, T/2]."""
    root = math.sqrt(t)
    return 0.5 * root * math.cosh(root * (0.5 * period - z)) / math.sinh(0.5 * root * period)


def resolvent_convolution(
    profile: ScalarFunction,
    t: float,
    n: int,
    cfg: QuadConfig,
    hints: Sequence[float] = (),
    period: Optional[float] = None,
) -> Estimate:
    """
    (R_t * f)(x) from the ring average A of f around x.

    Integrated in rho = sqrt(t) r, or over half a period with the periodized
    kernel when the kernel is wider than half a period.
    """
    root = math.sqrt(t)
    if period is not None and RESOLVENT_CUTOFF / root > 0.5 * period:
        if n != 1:
            raise ValueError("periodic profiles are one-dimensional")

        def periodic_integrand(z: float) -> float:
            return 2.0 * profile(z) * periodic_resolvent_kernel(z, t, period)

        points = reduce_to_half_period(hints, period)
        return adaptive_quad(periodic_integrand, 0.0, 0.5 * period, cfg, points)

    area = sphere_area(n)

    def integrand(rho: float) -> float:
        if rho == 0.0:
            return 0.0 if n > 1 else area * 0.5 * profile(0.0)
        return area * rho ** (n - 1) * resolvent_profile(rho, n) * profile(rho / root)

    points = [root * h for h in hints if root * h < RESOLVENT_CUTOFF]
    return adaptive_quad(integrand, 0.0, RESOLVENT_CUTOFF, cfg, points)


@dataclass(frozen=True)
class KernelSet:
    """Poisson and resolvent kernels for one parameter triple."""

    params: FracParams

    @property
    def resolvent_1d_closed_form(self) -> bool:
        return self.params.n == 1

    def poisson(self, xi, y: float):
        return poisson_kernel(xi, y, self.params)

    def resolvent_profile(self, rho):
        return resolvent_profile(rho, self.params.n)

    def resolvent(self, x, t: float):
        return resolvent_kernel(x, t, self.params)

    def poisson_mass(self, y: float, cfg: Optional[QuadConfig] = None) -> Estimate:
        """int P(xi, y) d xi by radial quadrature."""
        cfg = cfg or QuadConfig()
        n = self.params.n
        area = sphere_area(n)
        constant = poisson_constant(self.params) * y**self.params.sp
        exponent = 0.5 * (n + self.params.sp)
        return integrate_log_substituted(
            lambda r: area * constant * r ** (n - 1) * (r * r + y * y) ** (-exponent),
            0.0,
            math.inf,
            cfg,
            [y],
        )

    def resolvent_mass(self, t: float, cfg: Optional[QuadConfig] = None) -> Estimate:
        """int R_t(x) dx by radial quadrature."""
        cfg = cfg or QuadConfig()
        n = self.params.n
        area = sphere_area(n)
        root = math.sqrt(t)
        return integrate_log_substituted(
            lambda r: area * r ** (n - 1) * t ** (0.5 * n) * resolvent_profile(root * r, n),
            0.0,
            math.inf,
            cfg,
            [1.0 / root],
        )


def kernel_set(params: FracParams) -> KernelSet:
    return KernelSet(params)
