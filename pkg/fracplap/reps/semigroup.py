"""
Heat-semigroup (Bochner subordination) representation

    (-Delta)_p^s u (x) = C2 int_0^inf e^{t Delta}[v_x](x) dt / t^{1+sp/2}.
"""

from typing import Optional

from fracplap.config import FracParams, QuadConfig
from fracplap.constants import constant_set
from fracplap.funcs import TestFunction
from fracplap.quad import Estimate, heat_apply_radial, integrate_time_singular
from fracplap.reps.base import DifferenceFunctor, ErrorTracker, Representation


class SemigroupRepresentation(Representation):
    """Subordination of the heat semigroup applied to v_x."""

    def compute(self, functor: DifferenceFunctor, params: FracParams, cfg: QuadConfig) -> Estimate:
        ring = functor.ring_average(cfg.angular_nodes)
        hints, period = functor.hints, functor.period
        tracker = ErrorTracker(cfg)

        def heat_image(t: float) -> float:
            return tracker.track(heat_apply_radial(ring, t, params.n, cfg, hints, period))

        outer = integrate_time_singular(
            heat_image, 0.5 * params.sp, cfg, split=functor.time_split
        )
        return tracker.combine(outer).scaled(constant_set(params).c2)


def eval_semigroup(
    u: TestFunction, x, params: FracParams, cfg: Optional[QuadConfig] = None
) -> Estimate:
    """(-Delta)_p^s u (x) by heat-semigroup subordination."""
    return SemigroupRepresentation().evaluate(u, x, params, cfg)
