"""
Resolvent (Balakrishnan) representation

    (-Delta)_p^s u (x) = C4 int_0^inf [ (R_t * v_x)(x) - v_x(x) ] dt / t^{1-sp/2},

where R_t * f - f = Delta (t - Delta)^{-1} f and v_x(x) = 0.
"""

from typing import Optional

from fracplap.config import FracParams, QuadConfig
from fracplap.constants import constant_set
from fracplap.funcs import TestFunction
from fracplap.quad import Estimate, integrate_time_singular
from fracplap.reps.base import DifferenceFunctor, ErrorTracker, Representation
from fracplap.reps.kernels import resolvent_convolution


class BalakrishnanRepresentation(Representation):
    """Resolvent integral applied to v_x."""

    def compute(self, functor: DifferenceFunctor, params: FracParams, cfg: QuadConfig) -> Estimate:
        ring = functor.ring_average(cfg.angular_nodes)
        hints, period = functor.hints, functor.period
        tracker = ErrorTracker(cfg)

        def resolvent_image(t: float) -> float:
            return tracker.track(resolvent_convolution(ring, t, params.n, cfg, hints, period))

        # resolvent times scale like inverse squared lengths
        outer = integrate_time_singular(
            resolvent_image, -0.5 * params.sp, cfg, split=1.0 / functor.time_split
        )
        return tracker.combine(outer).scaled(constant_set(params).c4)


def eval_balakrishnan(
    u: TestFunction, x, params: FracParams, cfg: Optional[QuadConfig] = None
) -> Estimate:
    """(-Delta)_p^s u (x) by the resolvent integral."""
    return BalakrishnanRepresentation().evaluate(u, x, params, cfg)
