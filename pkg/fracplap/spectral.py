"""
Spectral-type fractional p-Laplacian on an interval (0, L): the semigroup
representation with the Dirichlet heat semigroup of the interval, compared
with the whole-space operator applied to the zero extension.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Optional, Tuple

import numpy as np

from fracplap.config import FracParams, QuadConfig
from fracplap.constants import constant_set
from fracplap.funcs import TestFunction, as_point
from fracplap.quad import Estimate, comparison_nodes, integrate_time_singular
from fracplap.reps.base import DifferenceFunctor, ErrorTracker, check_hypotheses
from fracplap.reps.direct import eval_direct

logger = logging.getLogger(__name__)

VectorFunction = Callable[[np.ndarray], np.ndarray]

# exp(-40) is below double precision relative to order-one values
_DECAY_EXPONENT = 40.0


@dataclass(frozen=True)
class Interval:
    """
    The interval (0, L) with its Dirichlet eigendata.

    Attributes:
        length: L > 0
        eigen_count: Optional cap on the number of sine modes
    """

    length: float
    eigen_count: Optional[int] = None

    def __post_init__(self):
        if self.length <= 0.0:
            raise ValueError("interval length must be positive")

    @property
    def lambda1(self) -> float:
        """First Dirichlet eigenvalue (pi / L)^2."""
        return (math.pi / self.length) ** 2

    def uses_series(self, t: float) -> bool:
        """Sine series for lambda_1 t >= 1/4, images below."""
        return self.lambda1 * t >= 0.25

    def series_terms(self, t: float, tol: float = 1e-16) -> int:
        """Smallest M with M e^{-lambda_M t} <= tol (the series tail is below that)."""
        m = max(1, int(math.ceil(math.sqrt(_DECAY_EXPONENT / (self.lambda1 * t)))))
        while m * math.exp(-self.lambda1 * m * m * t) > tol:
            m += 1
        if self.eigen_count is not None:
            m = min(m, self.eigen_count)
        return m


def dirichlet_kernel(t: float, x: float, y: np.ndarray, dom: Interval) -> np.ndarray:
    """
    Dirichlet heat kernel K(t, x, y) of (0, L), vectorized in y.

    Args:
        t: Positive time
        x: Source point in (0, L)
        y: Target points
        dom: The interval

    Returns:
        Kernel values with the shape of y
    """
    if t <= 0.0:
        raise ValueError("t must be positive")
    y = np.asarray(y, dtype=float)
    L = dom.length
    if dom.uses_series(t):
        k = np.arange(1, dom.series_terms(t) + 1)
        decay = np.exp(-dom.lambda1 * k * k * t) * np.sin(k * math.pi * x / L)
        modes = np.sin(np.multiply.outer(y, k) * math.pi / L)
        return (2.0 / L) * (modes @ decay)
    images = int(math.ceil(math.sqrt(4.0 * t * _DECAY_EXPONENT) / (2.0 * L))) + 1
    m = np.arange(-images, images + 1) * 2.0 * L
    direct = np.add.outer(x - y, m)
    reflected = np.add.outer(x + y, m)
    gauss = lambda z: np.exp(-z * z / (4.0 * t))
    return np.sum(gauss(direct) - gauss(reflected), axis=-1) / math.sqrt(4.0 * math.pi * t)


@lru_cache(maxsize=8)
def _legendre(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(nodes)


def _panel_edges(x: float, t: float, L: float) -> np.ndarray:
    """Panels graded geometrically towards x, where the integrand has a kink."""
    width = min(8.0 * math.sqrt(t), L)
    graded = width * 0.5 ** np.arange(24)
    edges = np.concatenate([[0.0, L, x], x + graded, x - graded, np.linspace(0.0, L, 17)])
    return np.unique(edges[(edges >= 0.0) & (edges <= L)])


def _composite_legendre(values: VectorFunction, edges: np.ndarray, nodes: int) -> float:
    r, w = _legendre(nodes)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    points = (0.5 * (hi + lo))[:, None] + half[:, None] * r[None, :]
    return float(np.sum(half[:, None] * w[None, :] * values(points)))


def dirichlet_heat_apply(
    f: VectorFunction, x: float, t: float, dom: Interval, cfg: Optional[QuadConfig] = None
) -> Estimate:
    """
    e^{t Delta_Omega} f (x) = int_0^L K(t, x, y) f(y) dy by composite Gauss-Legendre.

    Args:
        f: Bounded function on (0, L), vectorized over arrays of points
        x: Point in (0, L)
        t: Positive time
        dom: The interval
        cfg: legendre_nodes per panel

    Returns:
        Estimate whose error is the change against half the nodes
    """
    cfg = cfg or QuadConfig()
    edges = _panel_edges(x, t, dom.length)
    integrand = lambda y: dirichlet_kernel(t, x, y, dom) * f(y)
    fine = _composite_legendre(integrand, edges, cfg.legendre_nodes)
    coarse = _composite_legendre(integrand, edges, comparison_nodes(cfg.legendre_nodes))
    return Estimate(fine, abs(fine - coarse))


def _check_inside(x: float, dom: Interval) -> float:
    point = float(as_point(x, 1)[0])
    if not 0.0 < point < dom.length:
        raise ValueError(f"x = {point} is not inside (0, {dom.length})")
    return point


def eval_spectral(
    u: TestFunction, x: float, params: FracParams, dom: Interval, cfg: Optional[QuadConfig] = None
) -> Estimate:
    """
    Spectral-type operator C2 int_0^inf e^{t Delta_Omega}[v_x](x) dt / t^{1+sp/2}.

    The time integral stops at T with lambda_1 T = 40; the remainder is bounded
    by the e^{-lambda_1 t} decay of the Dirichlet semigroup and added to the
    error.

    Args:
        u: Function on the interval (C^2 on its closure)
        x: Point in (0, L)
        params: Operator parameters (n = 1)
        dom: The interval
        cfg: Quadrature settings

    Returns:
        Estimate of the operator value

    Raises:
        DegenerateGradientError: In the small-p regime at a critical point
    """
    cfg = cfg or QuadConfig()
    if params.n != 1 or u.n != 1:
        raise ValueError("the spectral operator is implemented on intervals")
    point = _check_inside(x, dom)
    check_hypotheses(u, np.array([point]), params)
    functor = DifferenceFunctor(u, np.array([point]), params.p)
    profile = lambda y: functor(y[..., None])
    tracker = ErrorTracker(cfg)

    def semigroup_image(t: float) -> float:
        return tracker.track(dirichlet_heat_apply(profile, point, t, dom, cfg))

    alpha = 0.5 * params.sp
    horizon = max(cfg.t_split, _DECAY_EXPONENT / dom.lambda1)
    body = integrate_time_singular(
        semigroup_image, alpha, cfg, upper=horizon, split=min(cfg.t_split, 0.25 / dom.lambda1)
    )
    # |e^{t Delta_Omega} v|(x) <= 2 sup|v| e^{-lambda_1 t} once lambda_1 t >= 1
    sup_v = (2.0 * u.sup_norm) ** (params.p - 1.0)
    remainder = 2.0 * sup_v * horizon ** (-1.0 - alpha) * math.exp(-dom.lambda1 * horizon) / dom.lambda1
    result = tracker.combine(body).plus(Estimate(0.0, remainder))
    return result.scaled(constant_set(params).c2)


def zero_extension(u: TestFunction, dom: Interval) -> TestFunction:
    """u on (0, L), zero outside; not smooth at the endpoints unless u vanishes there."""
    L = dom.length

    def inside(y):
        y = np.asarray(y, dtype=float)
        return (y[..., 0] > 0.0) & (y[..., 0] < L)

    def value(y):
        return np.where(inside(y), u.value(y), 0.0)

    def gradient(y):
        return np.where(inside(y)[..., None], u.gradient(y), 0.0)

    def hessian(y):
        return np.where(inside(y)[..., None, None], u.hessian(y), 0.0)

    def breaks(x) -> List[float]:
        x1 = float(np.asarray(x)[0])
        return [abs(x1), abs(L - x1)]

    return TestFunction(
        name=f"{u.name}_on_interval",
        n=1,
        value=value,
        gradient=gradient,
        hessian=hessian,
        sup_norm=u.sup_norm,
        grad_sup_norm=u.grad_sup_norm,
        hess_sup_norm=u.hess_sup_norm,
        center=np.array([0.5 * L]),
        length_scale=min(u.length_scale, 0.5 * L),
        tail_radius=L + 1.0,
        outer_radius=L,
        breaks=breaks,
        spec={**u.spec, "interval": L},
    )


def eval_restricted(
    u: TestFunction, x: float, params: FracParams, dom: Interval, cfg: Optional[QuadConfig] = None
) -> Estimate:
    """
    Whole-space operator applied to the zero extension of u, at x in (0, L).

    Extensions that jump at the boundary are still integrable away from it;
    set cfg.epsilon_pv for the explicit cutoff form.
    """
    _check_inside(x, dom)
    return eval_direct(zero_extension(u, dom), x, params, cfg)
