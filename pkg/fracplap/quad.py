"""
Quadrature engine for the three integral shapes that every representation
reduces to:

    - radial singular integrals  int_0^inf g(r) dr / r^{1+sp}
    - singular time integrals    int_0^inf f(t) dt / t^{1+alpha}
    - Gaussian convolutions      e^{t Delta} f (x)

Adaptive integration is QUADPACK (scipy.integrate.quad, Gauss-Kronrod) with
every routine returning an ``Estimate`` (value, error).
"""

import logging
import math
import warnings
from functools import lru_cache
from typing import Callable, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, special

from fracplap.config import QuadConfig
from fracplap.errors import (
    IntegralDivergenceError,
    NonIntegrableSingularityError,
    QuadratureError,
)

logger = logging.getLogger(__name__)

ScalarFunction = Callable[[float], float]

# Gaussian weights beyond this many standard units are below 1e-18
GAUSS_CUTOFF = 6.5
# exp() arguments outside this window under- or overflow
_EXP_FLOOR = -745.0
_EXP_CEIL = 709.0


class Estimate(NamedTuple):
    """A computed value and an estimate of its absolute error."""

    value: float
    error: float

    def plus(self, other: "Estimate") -> "Estimate":
        return Estimate(self.value + other.value, self.error + other.error)

    def scaled(self, factor: float) -> "Estimate":
        return Estimate(factor * self.value, abs(factor) * self.error)


ZERO = Estimate(0.0, 0.0)


def total(estimates: Iterable[Estimate]) -> Estimate:
    """Sum of estimates with added errors."""
    result = ZERO
    for estimate in estimates:
        result = result.plus(estimate)
    return result


def sphere_area(n: int) -> float:
    """Surface area of the unit sphere in R^n (2 for n = 1, 2 pi for n = 2)."""
    return 2.0 * math.pi ** (0.5 * n) / special.gamma(0.5 * n)


# ------------------- Adaptive Gauss-Kronrod -------------------


def adaptive_quad(
    func: ScalarFunction,
    a: float,
    b: float,
    cfg: QuadConfig,
    points: Sequence[float] = (),
) -> Estimate:
    """
    Adaptive Gauss-Kronrod quadrature of func over [a, b].

    Infinite limits are allowed. Interior points where the integrand is not
    smooth are passed to QUADPACK on finite intervals and split off by hand
    on infinite ones.

    Args:
        func: Scalar integrand
        a, b: Limits, possibly infinite
        cfg: Tolerances and subdivision limit
        points: Interior break points

    Returns:
        Estimate of the integral

    Raises:
        IntegralDivergenceError: If the result is not finite or QUADPACK
            reports divergence with an unusable error
        QuadratureError: If QUADPACK stopped with an unusable error
    """
    if a == b:
        return ZERO
    inner = sorted({float(pt) for pt in points if a < pt < b})
    if inner and not (math.isfinite(a) and math.isfinite(b)):
        edges = [a] + inner + [b]
        return total(adaptive_quad(func, lo, hi, cfg) for lo, hi in zip(edges, edges[1:]))

    options = {
        "epsabs": cfg.abs_tol,
        "epsrel": cfg.rel_tol,
        "limit": max(cfg.max_subdivisions, 4 * len(inner) + 10),
        "full_output": 1,
    }
    if inner:
        options["points"] = inner
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(func, a, b, **options)
    value, error = float(out[0]), float(out[1])
    if not math.isfinite(value):
        raise IntegralDivergenceError(f"integral over [{a}, {b}] is not finite")

    if len(out) > 3:
        message = str(out[3]).strip().splitlines()[0]
        usable = error <= max(1e-3 * abs(value), 1e3 * cfg.tolerance(value))
        if not usable:
            if "divergent" in message:
                raise IntegralDivergenceError(
                    f"integral over [{a}, {b}] appears divergent: {message}"
                )
            raise QuadratureError(
                f"quadrature over [{a}, {b}] failed: {message} (error {error:.2e})"
            )
        logger.warning("quadrature over [%g, %g]: %s (error %.2e)", a, b, message, error)
    logger.debug("quad [%g, %g] -> %.12g +- %.2e (%d evals)", a, b, value, error, out[2]["neval"])
    return Estimate(value, error)


def integrate_log_substituted(
    h: ScalarFunction,
    lower: float,
    upper: float,
    cfg: QuadConfig,
    points: Sequence[float] = (),
) -> Estimate:
    """
    int_lower^upper h(r) dr after the substitution r = e^rho.

    A lower limit of 0 maps to rho = -inf, which turns power laws at the
    origin into exponentially decaying integrands.
    """
    a = -math.inf if lower <= 0.0 else math.log(lower)
    b = math.inf if math.isinf(upper) else math.log(upper)
    log_points = [math.log(pt) for pt in points if lower < pt < upper]

    def integrand(rho: float) -> float:
        if rho < _EXP_FLOOR or rho > _EXP_CEIL:
            return 0.0
        r = math.exp(rho)
        return h(r) * r

    return adaptive_quad(integrand, a, b, cfg, log_points)


# ------------------- Time integrals -------------------


def integrate_time_singular(
    f: ScalarFunction,
    alpha: float,
    cfg: QuadConfig,
    lower: float = 0.0,
    upper: float = math.inf,
    split: Optional[float] = None,
) -> Estimate:
    """
    Compute int_lower^upper f(t) dt / t^{1+alpha}.

    Both pieces around the split point are integrated in tau = ln t, where the
    power singularities at t = 0 and t = inf become exponential decay.

    Args:
        f: Integrand numerator, continuous on (0, inf)
        alpha: Exponent; negative values give dt / t^{1-|alpha|}
        cfg: Quadrature settings (t_split is the default split point)
        lower: Lower limit, 0 for the full half line
        upper: Upper limit
        split: Split point overriding cfg.t_split

    Returns:
        Estimate of the integral

    Raises:
        IntegralDivergenceError: If the integral does not converge
    """
    if not lower < upper:
        return ZERO
    split_at = cfg.t_split if split is None else split
    a = -math.inf if lower <= 0.0 else math.log(lower)
    b = math.inf if math.isinf(upper) else math.log(upper)
    c = min(max(math.log(split_at), a), b)

    def integrand(tau: float) -> float:
        if tau < _EXP_FLOOR or tau > _EXP_CEIL:
            return 0.0
        value = f(math.exp(tau))
        if value == 0.0:
            return 0.0
        log_magnitude = math.log(abs(value)) - alpha * tau
        if log_magnitude < _EXP_FLOOR:
            return 0.0
        return math.copysign(math.exp(min(log_magnitude, _EXP_CEIL)), value)

    pieces = [(lo, hi) for lo, hi in ((a, c), (c, b)) if lo < hi]
    return total(adaptive_quad(integrand, lo, hi, cfg) for lo, hi in pieces)


# ------------------- Heat semigroup -------------------


def comparison_nodes(nodes: int) -> int:
    """Node count of the coarser rule that error estimates compare against."""
    return max(nodes // 2, 1)


@lru_cache(maxsize=16)
def _hermite_rule(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.hermite.hermgauss(nodes)
    return x, w / math.sqrt(math.pi)


def _hermite_sum(f: Callable[[np.ndarray], np.ndarray], x: np.ndarray, t: float, nodes: int) -> float:
    r, w = _hermite_rule(nodes)
    n = x.shape[0]
    grid = np.stack(np.meshgrid(*([r] * n), indexing="ij"), axis=-1).reshape(-1, n)
    weights = np.prod(np.stack(np.meshgrid(*([w] * n), indexing="ij"), axis=-1), axis=-1).ravel()
    values = f(x + 2.0 * math.sqrt(t) * grid)
    return float(np.dot(weights, values))


def heat_apply(
    f: Callable[[np.ndarray], np.ndarray], x: np.ndarray, t: float, cfg: QuadConfig
) -> Estimate:
    """
    Gaussian convolution e^{t Delta} f (x) by tensorized Gauss-Hermite quadrature.

    Args:
        f: Bounded function, vectorized over points of shape (..., n)
        x: Point of shape (n,)
        t: Nonnegative time
        cfg: hermite_nodes per axis

    Returns:
        Estimate whose error is the change against the rule with half the nodes
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    if t == 0.0:
        return Estimate(float(f(x[None, :])[0]), 0.0)
    fine = _hermite_sum(f, x, t, cfg.hermite_nodes)
    coarse = _hermite_sum(f, x, t, comparison_nodes(cfg.hermite_nodes))
    return Estimate(fine, abs(fine - coarse))


def periodic_heat_kernel(z: np.ndarray, t: float, period: float) -> np.ndarray:
    """
    Heat kernel on the circle of the given period.

    Uses the Fourier series once 4 pi^2 t / T^2 >= 1 and the image sum below.
    """
    z = np.asarray(z, dtype=float)
    frequency = 2.0 * math.pi / period
    if t * frequency**2 >= 1.0:
        count = int(math.ceil(math.sqrt(40.0 / t) / frequency)) + 1
        k = np.arange(1, count + 1)
        decay = np.exp(-((frequency * k) ** 2) * t)
        series = np.cos(frequency * np.multiply.outer(z, k)) @ decay
        return (1.0 + 2.0 * series) / period
    images = int(math.ceil(math.sqrt(160.0 * t) / period)) + 1
    m = np.arange(-images, images + 1)
    shifted = np.add.outer(z, m * period)
    return np.sum(np.exp(-shifted**2 / (4.0 * t)), axis=-1) / math.sqrt(4.0 * math.pi * t)


def reduce_to_half_period(hints: Sequence[float], period: float) -> List[float]:
    """Map radii onto [0, T/2] using evenness and periodicity of a ring average."""
    reduced = []
    for h in hints:
        phase = math.fmod(h, period)
        reduced.append(min(phase, period - phase))
    return reduced


def heat_apply_radial(
    profile: ScalarFunction,
    t: float,
    n: int,
    cfg: QuadConfig,
    hints: Sequence[float] = (),
    period: Optional[float] = None,
) -> Estimate:
    """
    Heat semigroup at the center of a ring-averaged function.

    With A(r) the average of f over the sphere of radius r around x,

        e^{t Delta} f (x) = int_0^inf omega_n r^{n-1} (4 pi t)^{-n/2} e^{-r^2/4t} A(r) dr.

    Adaptive integration in rho = r / (2 sqrt t) resolves the kink a
    difference function has at its center, which Gauss-Hermite does not.
    For periodic one-dimensional profiles and wide Gaussians the periodized
    kernel is integrated over half a period instead.

    Args:
        profile: r -> A(r)
        t: Positive time
        n: Space dimension
        cfg: Quadrature settings
        hints: Radii where the profile is not smooth
        period: Period of A in r (one-dimensional only)

    Returns:
        Estimate of e^{t Delta} f (x)
    """
    if t <= 0.0:
        return Estimate(profile(0.0), 0.0)
    scale = 2.0 * math.sqrt(t)
    if period is not None and scale * GAUSS_CUTOFF > 0.5 * period:
        if n != 1:
            raise ValueError("periodic profiles are one-dimensional")
        half = 0.5 * period

        def periodic_integrand(z: float) -> float:
            return 2.0 * profile(z) * float(periodic_heat_kernel(z, t, period))

        points = reduce_to_half_period(hints, period)
        return adaptive_quad(periodic_integrand, 0.0, half, cfg, points)

    weight = 2.0 / special.gamma(0.5 * n)

    def integrand(rho: float) -> float:
        return weight * rho ** (n - 1) * math.exp(-rho * rho) * profile(scale * rho)

    points = [h / scale for h in hints if h / scale < GAUSS_CUTOFF]
    return adaptive_quad(integrand, 0.0, GAUSS_CUTOFF, cfg, points)


# ------------------- Radial singular integrals -------------------


def _radial_head(g: ScalarFunction, sp: float, r0: float, noise: float = 0.0) -> Estimate:
    """
    int_0^r0 g(r) dr / r^{1+sp} from the local power law g ~ c r^gamma.

    The power is measured from g at r0, r0/2 and r0/4; its variation between
    the two measurements bounds the error. Samples below the noise level carry
    no power law and only contribute to the error.
    """
    g0, g1, g2 = g(r0), g(0.5 * r0), g(0.25 * r0)
    scale = r0 ** (-sp)
    peak = max(abs(g0), abs(g1), abs(g2))
    if g0 == 0.0 and g1 == 0.0:
        return ZERO
    if g0 * g1 <= 0.0 or g1 * g2 <= 0.0:
        # no sign-definite power law: the samples are round-off
        return Estimate(0.0, peak * scale)
    gamma_outer = math.log2(g0 / g1)
    gamma_inner = math.log2(g1 / g2)
    if gamma_outer <= sp and peak <= noise:
        return Estimate(0.0, peak * scale)
    if gamma_outer <= sp:
        raise NonIntegrableSingularityError(
            f"integrand decays like r^{gamma_outer:.3f} at the origin, "
            f"not faster than r^{sp:.3f}"
        )
    value = g0 * scale / (gamma_outer - sp)
    if gamma_inner > sp:
        error = 2.0 * abs(value - g0 * scale / (gamma_inner - sp))
    else:
        error = abs(value)
    logger.debug("radial head: power %.6f, value %.6g +- %.2e", gamma_outer, value, error)
    return Estimate(value, error)


def _binomial_series(exponent: float, terms: int) -> np.ndarray:
    """Coefficients of (1 + q)^{-exponent/2}."""
    coefficients = np.empty(terms)
    coefficients[0] = 1.0
    half = 0.5 * exponent
    for j in range(1, terms):
        coefficients[j] = coefficients[j - 1] * (-(half + j - 1) / j)
    return coefficients


def periodic_power_tail(
    g: ScalarFunction,
    start: float,
    period: float,
    exponent: float,
    cfg: QuadConfig,
    y: float = 0.0,
    hints: Sequence[float] = (),
) -> Estimate:
    """
    int_start^inf g(r) (r^2 + y^2)^{-exponent/2} dr for a periodic g.

    The sum over periods of the kernel is carried out exactly with Hurwitz
    zeta functions (expanded binomially in (y/r)^2 when y > 0), leaving a
    single integral over one period.
    """
    if y >= start:
        raise ValueError("the periodic tail needs start > y")
    if y > 0.0:
        terms = int(math.ceil(39.2 / (2.0 * math.log(start / y)))) + 1
    else:
        terms = 1
    coefficients = _binomial_series(exponent, terms)
    j = np.arange(terms)
    exponents = exponent + 2.0 * j
    factors = coefficients * (y * y) ** j * period ** (-exponents)

    def integrand(sigma: float) -> float:
        r = start + sigma
        return g(r) * float(np.dot(factors, special.zeta(exponents, r / period)))

    points = sorted({math.fmod(h - start, period) % period for h in hints if h > start})
    return adaptive_quad(integrand, 0.0, period, cfg, points)


def integrate_radial_outer(
    g: ScalarFunction,
    sp: float,
    cfg: QuadConfig,
    start: float = 1.0,
    hints: Sequence[float] = (),
    tail_radius: Optional[float] = None,
    period: Optional[float] = None,
) -> Estimate:
    """
    int_start^inf g(r) dr / r^{1+sp} for bounded g.

    Periodic profiles are summed exactly over periods. Otherwise the integral
    is cut at R, g is taken constant beyond it, and the change of g between
    R/2 and R bounds that tail correction.
    """
    if period is not None:
        return periodic_power_tail(g, start, period, 1.0 + sp, cfg, hints=hints)
    radius = cfg.tail_radius or tail_radius or 40.0
    if radius <= start:
        radius = 2.0 * start
    body = integrate_log_substituted(
        lambda r: g(r) * r ** (-1.0 - sp), start, radius, cfg, hints
    )
    g_far, g_mid = g(radius), g(0.5 * radius)
    tail = g_far * radius ** (-sp) / sp
    bound = abs(g_far - g_mid) * radius ** (-sp) / sp
    logger.debug("radial tail beyond %g: %.3g +- %.2e", radius, tail, bound)
    return body.plus(Estimate(tail, bound))


def integrate_radial_symmetrized(
    g: ScalarFunction,
    sp: float,
    n: int,
    cfg: QuadConfig,
    hints: Sequence[float] = (),
    tail_radius: Optional[float] = None,
    period: Optional[float] = None,
    upper: Optional[float] = None,
    head_radius: float = 1e-4,
    noise: float = 0.0,
) -> Estimate:
    """
    int_0^inf g(r) dr / r^{1+sp} for a symmetrized ring-average numerator g.

    The half line is split at head_radius and at r = 1:

        [0, r0]   local power law of g, measured numerically
        [r0, 1]   adaptive quadrature in ln r
        [1, inf)  see integrate_radial_outer

    With cfg.epsilon_pv > 0 the integral starts at epsilon instead, the
    explicit principal-value cutoff.

    Args:
        g: Angular average of the symmetrized numerator (sphere area included
            by the caller)
        sp: Kernel exponent s * p
        n: Space dimension of the underlying integral
        cfg: Quadrature settings
        hints: Radii where g is not smooth
        tail_radius: Function's own truncation radius
        period: Period of g in r (one-dimensional periodic functions)
        upper: Optional upper limit (the integral is truncated there)
        head_radius: Radius of the power-law head
        noise: Round-off level of g near the origin

    Returns:
        Estimate of the integral

    Raises:
        NonIntegrableSingularityError: If g does not decay faster than r^{sp}
    """
    if n < 1:
        raise ValueError("dimension must be positive")
    epsilon = cfg.epsilon_pv
    pieces: List[Estimate] = []
    if epsilon > 0.0:
        lower = epsilon
    else:
        lower = head_radius
        pieces.append(_radial_head(g, sp, head_radius, noise))

    stop = 1.0 if upper is None else min(upper, 1.0)
    if lower < stop:
        pieces.append(
            integrate_log_substituted(lambda r: g(r) * r ** (-1.0 - sp), lower, stop, cfg, hints)
        )
    if upper is not None and upper <= 1.0:
        return total(pieces)

    start = max(lower, 1.0)
    if upper is None:
        pieces.append(integrate_radial_outer(g, sp, cfg, start, hints, tail_radius, period))
    else:
        pieces.append(
            integrate_log_substituted(lambda r: g(r) * r ** (-1.0 - sp), start, upper, cfg, hints)
        )
    return total(pieces)
