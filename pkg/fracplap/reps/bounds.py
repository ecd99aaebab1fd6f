"""
Pointwise bounds on the truncated symmetrized integral over the unit ball.

For p >= 2 (mean value theorem on Phi_p):

    |int_{|z|<1} v_x(x+z) |z|^{-n-sp} dz| <= (p-1) |grad u|^{p-2} |D^2 u| omega_n / (p - sp)

For 1 < p < 2 (Hoelder continuity of Phi_p):

    |...| <= 2^{2-p} |D^2 u|^{p-1} omega_n / (2p - 2 - sp),   finite only if 2p - 2 > sp.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

from fracplap.config import FracParams, QuadConfig
from fracplap.funcs import TestFunction, as_point
from fracplap.quad import integrate_radial_symmetrized, sphere_area
from fracplap.reps.base import DifferenceFunctor, check_hypotheses

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundCheck:
    lhs: float
    rhs: float
    error: float
    regime: str

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + self.error


def pointwise_bound_rhs(u: TestFunction, params: FracParams) -> float:
    """Right-hand side of the applicable bound from the analytic sup norms."""
    p, sp = params.p, params.sp
    area = sphere_area(params.n)
    hess = u.hess_sup_norm
    if p >= 2.0:
        grad_factor = u.grad_sup_norm ** (p - 2.0) if p > 2.0 else 1.0
        return (p - 1.0) * grad_factor * hess * area / (p - sp)
    if 2.0 * p - 2.0 <= sp:
        return math.inf
    return 2.0 ** (2.0 - p) * hess ** (p - 1.0) * area / (2.0 * p - 2.0 - sp)


def pointwise_bound_check(
    u: TestFunction, x, params: FracParams, cfg: Optional[QuadConfig] = None
) -> BoundCheck:
    """
    Compare the truncated symmetrized integral at x with its analytic bound.

    Args:
        u: Test function with sup-norm fields
        x: Evaluation point
        params: Operator parameters
        cfg: Quadrature settings

    Returns:
        BoundCheck with lhs, rhs, quadrature error and the regime used

    Raises:
        DegenerateGradientError: In the small-p regime at a critical point
    """
    cfg = cfg or QuadConfig()
    point = as_point(x, params.n)
    check_hypotheses(u, point, params)
    functor = DifferenceFunctor(u, point, params.p)
    ring = functor.ring_average(cfg.angular_nodes)
    area = sphere_area(params.n)
    truncated = integrate_radial_symmetrized(
        lambda r: area * ring(r),
        params.sp,
        params.n,
        cfg.replace(epsilon_pv=0.0),
        hints=functor.hints,
        upper=1.0,
        head_radius=functor.head_radius,
        noise=area * functor.noise_floor,
    )
    regime = "mean_value" if params.p >= 2.0 else "hoelder"
    check = BoundCheck(abs(truncated.value), pointwise_bound_rhs(u, params), truncated.error, regime)
    if not check.holds:
        logger.warning("bound %s violated at %s: %.6g > %.6g", regime, point.tolist(), check.lhs, check.rhs)
    return check
