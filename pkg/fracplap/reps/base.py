"""
Base class for representations of the fractional p-Laplacian and the shared
difference functor v_x(y) = Phi_p(u(x) - u(y)).

Every representation is a linear nonlocal operator applied to v_x at x; only
the operator changes between subclasses.
"""

import logging
import math
from abc import ABC, abstractmethod
from typing import Callable, List, Optional, Tuple

import numpy as np

from fracplap.config import FracParams, QuadConfig
from fracplap.errors import DegenerateGradientError, UnsupportedFunctionError
from fracplap.funcs import TestFunction, as_point, phi_p
from fracplap.quad import Estimate

logger = logging.getLogger(__name__)

# |grad u(x)| below this counts as a vanishing gradient
GRADIENT_FLOOR = 1e-10


class RingAverage:
    """
    r -> mean of a field over the sphere of radius r around x.

    In one dimension the sphere is {x - r, x + r}; in two dimensions the
    circle is sampled by the trapezoid rule.
    """

    def __init__(self, field: Callable[[np.ndarray], np.ndarray], x: np.ndarray, angular_nodes: int = 64):
        self.field = field
        self.x = x
        n = x.shape[0]
        if n == 1:
            self.directions = np.array([[1.0], [-1.0]])
        elif n == 2:
            theta = 2.0 * math.pi * np.arange(angular_nodes) / angular_nodes
            self.directions = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        else:
            raise UnsupportedFunctionError("ring averages are implemented for n = 1, 2")

    def __call__(self, r: float) -> float:
        if r == 0.0:
            return float(self.field(self.x[None, :])[0])
        return float(np.mean(self.field(self.x + r * self.directions)))


class DifferenceFunctor:
    """
    v_x(y) = N(u(x) - u(y)) for a fixed evaluation point x.

    N is Phi_p for the operator and |.|^p for the Gagliardo seminorm.

    Attributes:
        u: The test function
        x: Evaluation point, shape (n,)
        p: Growth exponent
        even: Use |.|^p instead of Phi_p
    """

    def __init__(self, u: TestFunction, x: np.ndarray, p: float, even: bool = False):
        self.u = u
        self.x = x
        self.p = p
        self.even = even
        self.center_value = float(u.value(x[None, :])[0])

    def __call__(self, y: np.ndarray) -> np.ndarray:
        diff = self.center_value - self.u.value(y)
        if self.even:
            return np.abs(diff) ** self.p
        return phi_p(diff, self.p)

    def ring_average(self, angular_nodes: int = 64) -> RingAverage:
        return RingAverage(self, self.x, angular_nodes)

    @property
    def hints(self) -> List[float]:
        return self.u.radial_hints(self.x)

    @property
    def period(self) -> Optional[float]:
        return self.u.period if self.u.n == 1 else None

    @property
    def tail_radius(self) -> float:
        return self.u.tail_radius + float(np.linalg.norm(self.x))

    @property
    def head_radius(self) -> float:
        return 1e-4 * min(1.0, self.u.length_scale)

    @property
    def noise_floor(self) -> float:
        """Round-off level of v_x values near x."""
        exponent = self.p if self.even else self.p - 1.0
        return 64.0 * float(np.finfo(float).eps) * (2.0 * self.u.sup_norm) ** exponent

    @property
    def time_split(self) -> float:
        """Time at which heat spreads over the function's features."""
        return self.u.length_scale**2


class ErrorTracker:
    """Largest relative error among the inner estimates of a nested quadrature."""

    def __init__(self, cfg: QuadConfig):
        self.cfg = cfg
        self.worst = 0.0

    def track(self, estimate: Estimate) -> float:
        scale = max(abs(estimate.value), self.cfg.abs_tol)
        self.worst = max(self.worst, estimate.error / scale)
        return estimate.value

    def combine(self, outer: Estimate) -> Estimate:
        return Estimate(outer.value, outer.error + self.worst * abs(outer.value))


def reduce_planar(
    u: TestFunction, x: np.ndarray, params: FracParams
) -> Tuple[TestFunction, np.ndarray, FracParams]:
    """
    Exact reduction of a function of x_1 alone to one dimension.

    Every radial kernel in use has its one-dimensional analogue as marginal,
    and C1 changes with n exactly so that the operator value is unchanged.
    """
    if params.n == 1 or not u.planar:
        return u, x, params
    logger.debug("reducing planar %s from n=%d to n=1", u.name, params.n)
    return u.restrict_to_line(), x[:1], params.replace(n=1)


def check_hypotheses(u: TestFunction, x: np.ndarray, params: FracParams) -> None:
    """
    Raise if x violates the hypotheses of the representation theorems.

    Raises:
        DegenerateGradientError: If p < 2/(2-s) and grad u(x) vanishes
    """
    if not params.small_p_regime:
        return
    gradient = float(np.linalg.norm(u.gradient(x[None, :])[0]))
    if gradient < GRADIENT_FLOOR:
        raise DegenerateGradientError(
            f"|grad u| = {gradient:.1e} at x = {x.tolist()} with p = {params.p} "
            f"< 2/(2-s) = {2.0 / (2.0 - params.s):.4f}"
        )


class Representation(ABC):
    """
    Abstract base class for the representations of (-Delta)_p^s.

    Subclasses implement ``compute`` on a prepared difference functor.
    """

    def __init__(self, name: Optional[str] = None):
        """
        Args:
            name: Optional custom name, defaults to the class name without
                the 'representation' suffix
        """
        self.name = name or self.__class__.__name__.lower().replace("representation", "")

    def validate_inputs(self, u: TestFunction, x, params: FracParams) -> np.ndarray:
        """
        Validate the function, point and parameters.

        Returns:
            The point as an array of shape (n,)

        Raises:
            ValueError: If the dimensions disagree
            DegenerateGradientError: If the small-p hypothesis fails at x
        """
        if u.n != params.n:
            raise ValueError(f"function dimension {u.n} != params.n = {params.n}")
        point = as_point(x, params.n)
        check_hypotheses(u, point, params)
        return point

    def evaluate(
        self, u: TestFunction, x, params: FracParams, cfg: Optional[QuadConfig] = None
    ) -> Estimate:
        """
        Evaluate (-Delta)_p^s u (x).

        Args:
            u: Test function
            x: Evaluation point
            params: Operator parameters
            cfg: Quadrature settings, defaults to QuadConfig()

        Returns:
            Estimate (value, error)
        """
        cfg = cfg or QuadConfig()
        point = self.validate_inputs(u, x, params)
        u, point, params = reduce_planar(u, point, params)
        if params.n > 2:
            raise UnsupportedFunctionError(
                f"{self.name} supports n <= 2 for non-planar functions, got n = {params.n}"
            )
        functor = DifferenceFunctor(u, point, params.p)
        estimate = self.compute(functor, params, cfg)
        logger.debug(
            "%s %s at %s, %s -> %.10g +- %.2e",
            self.name, u.name, point.tolist(), params, estimate.value, estimate.error,
        )
        return estimate

    @abstractmethod
    def compute(self, functor: DifferenceFunctor, params: FracParams, cfg: QuadConfig) -> Estimate:
        """
        Apply the representation's linear operator to v_x at x.

        Args:
            functor: The difference functor v_x
            params: Operator parameters (already reduced)
            cfg: Quadrature settings

        Returns:
            Estimate of the operator value
        """
        pass
