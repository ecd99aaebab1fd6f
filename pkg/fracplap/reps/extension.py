"""
Extension representation

    (-Delta)_p^s u (x) = C3 lim_{y -> 0} E[v_x](x, y) / y^{sp},

computed from the reduced identity

    C3 E[v_x](x, y) / y^{sp} = C1 int v_x(xi) (|x - xi|^2 + y^2)^{-(n+sp)/2} d xi,

on a geometric sequence of heights, extrapolated to y = 0.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from fracplap.config import FracParams, QuadConfig
from fracplap.constants import constant_set
from fracplap.errors import ExtrapolationError
from fracplap.funcs import TestFunction
from fracplap.quad import (
    Estimate,
    integrate_log_substituted,
    periodic_power_tail,
    sphere_area,
)
from fracplap.reps.base import DifferenceFunctor, Representation

logger = logging.getLogger(__name__)

ScalarFunction = Callable[[float], float]


def regularized_integral(
    profile: ScalarFunction,
    y: float,
    n: int,
    exponent: float,
    cfg: QuadConfig,
    hints: Sequence[float] = (),
    tail_radius: float = 40.0,
    period: Optional[float] = None,
) -> Estimate:
    """
    int_0^inf omega_n r^{n-1} A(r) (r^2 + y^2)^{-exponent/2} dr.

    Args:
        profile: Ring average r -> A(r)
        y: Positive height
        n: Space dimension
        exponent: Kernel exponent, larger than n
        cfg: Quadrature settings
        hints: Radii where A is not smooth
        tail_radius: Radius beyond which A is taken constant
        period: Period of A (one-dimensional)

    Returns:
        Estimate of the integral
    """
    area = sphere_area(n)
    half = 0.5 * exponent

    def integrand(r: float) -> float:
        return area * r ** (n - 1) * profile(r) * (r * r + y * y) ** (-half)

    split = 1.0 if y < 0.25 else 4.0 * y
    inner = integrate_log_substituted(integrand, 0.0, split, cfg, list(hints) + [y])
    if period is not None:
        outer = periodic_power_tail(profile, split, period, exponent, cfg, y=y, hints=hints)
        return inner.plus(outer.scaled(area))

    radius = max(cfg.tail_radius or tail_radius, 2.0 * split)
    body = integrate_log_substituted(integrand, split, radius, cfg, hints)
    far, mid = profile(radius), profile(0.5 * radius)
    decay = area * radius ** (n - exponent) / (exponent - n)
    tail = Estimate(far * decay, abs(far - mid) * decay + abs(far) * decay * half * (y / radius) ** 2)
    return inner.plus(body).plus(tail)


@dataclass
class ExtrapolationResult:
    """
    Limit of a sequence sampled at geometrically shrinking heights.

    Attributes:
        value: Accepted limit
        error: Error estimate of the limit
        method: 'richardson' when the linear and quadratic intercepts agree,
            'converged' when the samples already agree, 'measured_power'
            when the intercepts disagree
        linear: Intercept of a + b y through the last two samples
        quadratic: Intercept of a + b y^2 through the last two samples
        rate: Observed power gamma in y^gamma
        flagged: True when the linear and quadratic intercepts disagree
        heights: The heights
        samples: Sampled values
    """

    value: float
    error: float
    method: str
    linear: float
    quadratic: float
    rate: float
    flagged: bool = False
    heights: List[float] = field(default_factory=list)
    samples: List[float] = field(default_factory=list)

    @property
    def estimate(self) -> Estimate:
        return Estimate(self.value, self.error)


def _measured_power_estimates(values: np.ndarray, noise: float):
    """Richardson estimates at the power measured from each triple of consecutive samples."""
    estimates = []
    q = math.nan
    for k in range(2, len(values)):
        d1 = values[k - 1] - values[k - 2]
        d2 = values[k] - values[k - 1]
        if d1 != 0.0 and 0.0 < d2 / d1 < 1.0 and abs(d2) > noise:
            q = d2 / d1
            estimates.append(values[k] + d2 * q / (1.0 - q))
        else:
            estimates.append(values[k])
    return estimates, q


def _acceptance(value: float, noise: float, cfg: QuadConfig) -> float:
    return max(1e-5 * abs(value), 10.0 * cfg.tolerance(value), 100.0 * noise)


def extrapolate_to_zero(
    heights: Sequence[float], samples: Sequence[Estimate], cfg: QuadConfig
) -> ExtrapolationResult:
    """
    Extrapolate samples F(y_k), y_k = y0 r^k, to y = 0.

    The last two samples fix the intercepts of a + b y and of a + b y^2. When
    the two agree within the acceptance tolerance, their midpoint is the limit
    and half their distance the error. Otherwise the leading power is neither
    1 nor 2: the result is flagged, and the limit is the Richardson value at
    the power measured from consecutive differences, which has to be the same
    for the last two triples.

    Raises:
        ExtrapolationError: If the intercepts disagree and the measured-power
            estimates do not settle
    """
    values = np.array([s.value for s in samples])
    noise = max(s.error for s in samples)
    ratio = heights[1] / heights[0]
    if np.all(values == 0.0):
        return ExtrapolationResult(
            0.0, 0.0, "converged", 0.0, 0.0, math.nan, False, list(heights), [0.0] * len(values)
        )

    last, previous = values[-1], values[-2]
    linear = (last - ratio * previous) / (1.0 - ratio)
    quadratic = (last - ratio**2 * previous) / (1.0 - ratio**2)
    estimates, q = _measured_power_estimates(values, noise)
    rate = math.log(q) / math.log(ratio) if q == q else math.nan

    centre = 0.5 * (linear + quadratic)
    spread = abs(linear - quadratic)
    if spread <= _acceptance(centre, noise, cfg):
        method = "converged" if abs(last - previous) <= 10.0 * noise else "richardson"
        logger.debug(
            "extrapolated %s: %.10g +- %.2e (linear %.10g, quadratic %.10g)",
            method, centre, 0.5 * spread + noise, linear, quadratic,
        )
        return ExtrapolationResult(
            centre, 0.5 * spread + noise, method, linear, quadratic, rate, False,
            list(heights), values.tolist(),
        )

    value = estimates[-1]
    gap = abs(estimates[-1] - estimates[-2])
    accept = _acceptance(value, noise, cfg)
    tail = ", ".join(f"{v:.10g}" for v in values[-4:])
    if gap > accept:
        raise ExtrapolationError(
            f"y -> 0 sequence did not settle: intercepts {linear:.10g} and {quadratic:.10g} "
            f"disagree, measured-power gap {gap:.2e} > {accept:.2e}; tail {tail}"
        )
    logger.warning(
        "linear and quadratic intercepts disagree (%.10g vs %.10g); using observed power %.4f: "
        "%.10g +- %.2e; tail %s",
        linear, quadratic, rate, value, gap + noise, tail,
    )
    return ExtrapolationResult(
        value, gap + noise, "measured_power", linear, quadratic, rate, True,
        list(heights), values.tolist(),
    )


def height_sequence(cfg: QuadConfig) -> List[float]:
    return [cfg.y0 * cfg.y_ratio**k for k in range(cfg.y_count)]


class ExtensionRepresentation(Representation):
    """Limit of the weighted extension of v_x as y -> 0."""

    def limit(
        self, functor: DifferenceFunctor, params: FracParams, cfg: QuadConfig
    ) -> ExtrapolationResult:
        ring = functor.ring_average(cfg.angular_nodes)
        c1 = constant_set(params).c1
        exponent = params.n + params.sp
        heights = height_sequence(cfg)
        samples = [
            regularized_integral(
                ring, y, params.n, exponent, cfg,
                functor.hints, functor.tail_radius, functor.period,
            ).scaled(c1)
            for y in heights
        ]
        return extrapolate_to_zero(heights, samples, cfg)

    def compute(self, functor: DifferenceFunctor, params: FracParams, cfg: QuadConfig) -> Estimate:
        return self.limit(functor, params, cfg).estimate


def eval_extension(
    u: TestFunction, x, params: FracParams, cfg: Optional[QuadConfig] = None
) -> Estimate:
    """(-Delta)_p^s u (x) by the extension limit."""
    return ExtensionRepresentation().evaluate(u, x, params, cfg)


class DerivativeExtensionRepresentation(Representation):
    """
    The L'Hopital form of the same limit: d/dy E[v_x] / (sp y^{sp-1}).

    Differentiating the reduced identity in y gives

        C1 [ I(y) - ((n+sp)/sp) y^2 J(y) ],

    with I the regularized integral and J the same integral with the kernel
    exponent raised by two.
    """

    def compute(self, functor: DifferenceFunctor, params: FracParams, cfg: QuadConfig) -> Estimate:
        ring = functor.ring_average(cfg.angular_nodes)
        c1 = constant_set(params).c1
        n, sp = params.n, params.sp
        heights = height_sequence(cfg)
        samples = []
        for y in heights:
            args = (functor.hints, functor.tail_radius, functor.period)
            first = regularized_integral(ring, y, n, n + sp, cfg, *args)
            second = regularized_integral(ring, y, n, n + sp + 2.0, cfg, *args)
            samples.append(first.plus(second.scaled(-(n + sp) / sp * y * y)).scaled(c1))
        return extrapolate_to_zero(heights, samples, cfg).estimate


def extension_derivative_check(
    u: TestFunction, x, params: FracParams, cfg: Optional[QuadConfig] = None
) -> float:
    """
    Relative gap between the derivative form and the limit form of the
    extension representation.
    """
    primary = eval_extension(u, x, params, cfg)
    derivative = DerivativeExtensionRepresentation().evaluate(u, x, params, cfg)
    scale = max(abs(primary.value), (cfg or QuadConfig()).abs_tol)
    return abs(derivative.value - primary.value) / scale

