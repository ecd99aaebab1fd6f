"""
Direct principal-value definition

    (-Delta)_p^s u (x) = C1 PV int Phi_p(u(x) - u(y)) |x - y|^{-n-sp} dy,

evaluated through the symmetrized radial integrand, which is absolutely
integrable under the regime hypotheses.
"""

from typing import Optional

from fracplap.config import FracParams, QuadConfig
from fracplap.constants import constant_set
from fracplap.funcs import TestFunction
from fracplap.quad import Estimate, integrate_radial_symmetrized, sphere_area
from fracplap.reps.base import DifferenceFunctor, Representation


class DirectRepresentation(Representation):
    """Singular-integral definition of the operator."""

    def compute(self, functor: DifferenceFunctor, params: FracParams, cfg: QuadConfig) -> Estimate:
        ring = functor.ring_average(cfg.angular_nodes)
        area = sphere_area(params.n)
        integral = integrate_radial_symmetrized(
            lambda r: area * ring(r),
            params.sp,
            params.n,
            cfg,
            hints=functor.hints,
            tail_radius=functor.tail_radius,
            period=functor.period,
            head_radius=functor.head_radius,
            noise=area * functor.noise_floor,
        )
        return integral.scaled(constant_set(params).c1)


def eval_direct(
    u: TestFunction, x, params: FracParams, cfg: Optional[QuadConfig] = None
) -> Estimate:
    """(-Delta)_p^s u (x) by the direct definition."""
    return DirectRepresentation().evaluate(u, x, params, cfg)
