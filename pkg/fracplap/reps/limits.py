"""
Limit experiments: s -> 1 towards the local p-Laplacian and p -> 2 towards the
linear fractional Laplacian.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from fracplap.config import FracParams, QuadConfig
from fracplap.errors import DegenerateGradientError, UnsupportedFunctionError
from fracplap.funcs import TestFunction, as_point, p_laplacian_1d
from fracplap.reps.direct import eval_direct

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LimitPoint:
    """One step of a limit experiment (parameter is s or p)."""

    parameter: float
    value: float
    error: float
    target: float

    @property
    def gap(self) -> float:
        return abs(self.value - self.target)


def limit_experiment_s_to_1(
    u: TestFunction, x, p: float, s_list: Sequence[float], cfg: Optional[QuadConfig] = None
) -> List[LimitPoint]:
    """
    Gaps between (-Delta)_p^s u (x) and -Delta_p u (x) as s -> 1.

    Args:
        u: One-dimensional test function
        x: Evaluation point
        p: Growth exponent
        s_list: Orders, returned sorted increasingly
        cfg: Quadrature settings

    Returns:
        LimitPoint per order

    Raises:
        DegenerateGradientError: If p < 2 and u'(x) = 0
    """
    if u.n != 1:
        raise UnsupportedFunctionError("limit experiments are one-dimensional")
    point = as_point(x, 1)
    if p < 2.0 and float(np.abs(u.gradient(point[None, :])[0, 0])) == 0.0:
        raise DegenerateGradientError("the s -> 1 limit needs p >= 2 or u'(x) != 0")
    target = -p_laplacian_1d(u, point, p)
    results = []
    for s in sorted(s_list):
        estimate = eval_direct(u, point, FracParams(n=1, s=s, p=p), cfg)
        results.append(LimitPoint(s, estimate.value, estimate.error, target))
        logger.info("s=%.6g: value %.10g, target %.10g", s, estimate.value, target)
    return results


def limit_experiment_p_to_2(
    u: TestFunction, x, s: float, p_list: Sequence[float], cfg: Optional[QuadConfig] = None
) -> List[LimitPoint]:
    """
    Gaps between (-Delta)_p^s u (x) and (-Delta)^s u (x) as p -> 2.

    p = 2 in the grid reuses the reference evaluation, so its gap is zero.
    """
    if u.n != 1:
        raise UnsupportedFunctionError("limit experiments are one-dimensional")
    point = as_point(x, 1)
    reference = eval_direct(u, point, FracParams(n=1, s=s, p=2.0), cfg)
    results = []
    for p in p_list:
        if p == 2.0:
            results.append(LimitPoint(p, reference.value, reference.error, reference.value))
            continue
        estimate = eval_direct(u, point, FracParams(n=1, s=s, p=p), cfg)
        results.append(LimitPoint(p, estimate.value, estimate.error, reference.value))
    return results
