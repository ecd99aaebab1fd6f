"""
Finite-difference fractional p-Laplacian on the lattice h Z^n.

The weights subordinate the discrete heat semigroup,

    G(beta, t) = prod_i e^{-2t} I_{|beta_i|}(2t),
    K_{beta,h,delta} = C2 h^{-sp} int_delta^inf G(beta, tau) d tau / tau^{1+sp/2},

and the operator is sum_{beta != 0} Phi_p(u(x) - u(x + h beta)) K_beta.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import special

from fracplap.config import FracParams, QuadConfig
from fracplap.constants import bessel_ie, constant_set
from fracplap.errors import UnsupportedFunctionError, WeightsDivergeError
from fracplap.funcs import GridFunction, TestFunction, phi_p
from fracplap.quad import Estimate, adaptive_quad, integrate_time_singular
from fracplap.reps.direct import eval_direct

logger = logging.getLogger(__name__)

DEFAULT_STENCIL = {1: 128, 2: 48}


def discrete_laplacian(g: GridFunction, x: Sequence[int]) -> float:
    """
    Second-difference Laplacian sum_i (g(x + h e_i) + g(x - h e_i) - 2 g(x)) / h^2.

    Args:
        g: Grid function
        x: Lattice index

    Returns:
        Delta_h g (x)
    """
    idx = np.asarray(x, dtype=int)
    n = g.n
    unit = np.eye(n, dtype=int)
    neighbours = np.concatenate([idx + unit, idx - unit])
    center = g.at(idx[None, :])[0]
    return float(np.sum(g.at(neighbours)) - 2 * n * center) / g.h**2


def semigroup_weight(beta, t: float, n: Optional[int] = None):
    """
    Discrete heat kernel G(beta, t) from exponentially scaled Bessel functions.

    Args:
        beta: Offset of shape (n,) or (..., n); a scalar means n = 1
        t: Nonnegative time
        n: Dimension check (optional)

    Returns:
        G(beta, t), vectorized over leading axes of beta
    """
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    beta = np.abs(np.asarray(beta, dtype=float))
    if beta.ndim == 0:
        beta = beta[None]
    if n is not None and beta.shape[-1] != n:
        raise ValueError(f"offset dimension {beta.shape[-1]} != {n}")
    result = np.prod(bessel_ie(beta, 2.0 * t), axis=-1)
    return float(result) if np.ndim(result) == 0 else result


def closed_form_weights(m: np.ndarray, params: FracParams) -> np.ndarray:
    """
    One-dimensional unit-spacing weights for delta = 0, valid for m > sp/2:

        K_m = C2 4^a Gamma(1/2 + a) Gamma(m - a) / (sqrt(pi) Gamma(m + 1 + a)),  a = sp/2.
    """
    a = 0.5 * params.sp
    m = np.asarray(m, dtype=float)
    c2 = constant_set(params.replace(n=1)).c2
    log_weight = (
        math.log(c2)
        + 2.0 * a * math.log(2.0)
        + special.gammaln(0.5 + a)
        - 0.5 * math.log(math.pi)
        + special.gammaln(m - a)
        - special.gammaln(m + 1.0 + a)
    )
    return np.exp(log_weight)


def closed_form_total_mass(params: FracParams) -> float:
    """sum_{m != 0} K_m for delta = 0 in one dimension (a telescoping sum)."""
    a = 0.5 * params.sp
    c2 = constant_set(params.replace(n=1)).c2
    return (
        2.0 * c2 * 4.0**a * special.gamma(0.5 + a) / math.sqrt(math.pi)
        * special.gamma(1.0 - a) / (2.0 * a * special.gamma(1.0 + a))
    )


def _quadrature_weight(
    beta: Tuple[int, ...], params: FracParams, delta: float, cfg: QuadConfig
) -> float:
    a = 0.5 * params.sp
    peak = sum(b * b for b in beta) / (6.0 + 4.0 * a)
    integral = integrate_time_singular(
        lambda tau: semigroup_weight(beta, tau),
        a,
        cfg,
        lower=delta,
        split=max(cfg.t_split, peak),
    )
    return constant_set(params).c2 * integral.value


def _short_time_correction(m: int, params: FracParams, delta: float, cfg: QuadConfig) -> float:
    """C2 int_0^delta G(m, tau) d tau / tau^{1+sp/2}, finite for m > sp/2."""
    a = 0.5 * params.sp
    integral = adaptive_quad(
        lambda tau: float(special.ive(m, 2.0 * tau)) * tau ** (-1.0 - a) if tau > 0.0 else 0.0,
        0.0,
        delta,
        cfg,
    )
    return constant_set(params).c2 * integral.value


def _total_mass(params: FracParams, delta: float, cfg: QuadConfig) -> float:
    n = params.n
    integral = integrate_time_singular(
        lambda tau: 1.0 - float(special.ive(0, 2.0 * tau)) ** n,
        0.5 * params.sp,
        cfg,
        lower=delta,
    )
    return constant_set(params).c2 * integral.value


@lru_cache(maxsize=32)
def _unit_weights(
    params: FracParams, delta: float, radius: int, cfg: QuadConfig, method: str
) -> Tuple[np.ndarray, np.ndarray, float]:
    """Offsets, weights and total mass on the unit lattice (h = 1)."""
    a = 0.5 * params.sp
    if params.n == 1:
        m = np.arange(1, radius + 1)
        if method == "quadrature":
            half = np.array([_quadrature_weight((k,), params, delta, cfg) for k in m])
            total_mass = _total_mass(params, delta, cfg)
        else:
            half = np.empty(radius)
            closed = m > a
            half[closed] = closed_form_weights(m[closed], params)
            for k in m[~closed]:
                half[k - 1] = _quadrature_weight((int(k),), params, delta, cfg)
            if delta > 0.0:
                for k in m[closed]:
                    # int_0^delta G(k, tau) tau^{-1-a} <= delta^{k-a} / (k! (k-a))
                    log_bound = (k - a) * math.log(delta) - special.gammaln(k + 1.0) - math.log(k - a)
                    if log_bound < math.log(1e-17 * half[k - 1]):
                        break
                    half[k - 1] -= _short_time_correction(int(k), params, delta, cfg)
                total_mass = _total_mass(params, delta, cfg)
            else:
                total_mass = closed_form_total_mass(params)
        offsets = np.concatenate([m, -m])[:, None]
        weights = np.concatenate([half, half])
        return offsets, weights, total_mass

    if params.n != 2:
        raise UnsupportedFunctionError("discrete weights are implemented for n = 1, 2")
    # one quadrature per orbit of the coordinate symmetries
    orbit: Dict[Tuple[int, int], float] = {}
    for b1 in range(radius + 1):
        for b2 in range(b1 + 1):
            if b1 == 0:
                continue
            orbit[(b1, b2)] = _quadrature_weight((b1, b2), params, delta, cfg)
    axis = np.arange(-radius, radius + 1)
    grid = np.stack(np.meshgrid(axis, axis, indexing="ij"), axis=-1).reshape(-1, 2)
    grid = grid[np.any(grid != 0, axis=1)]
    weights = np.array([orbit[tuple(sorted(np.abs(b), reverse=True))] for b in grid])
    return grid, weights, _total_mass(params, delta, cfg)


@dataclass(frozen=True, eq=False)
class DiscreteWeights:
    """
    Weights K_{beta,h,delta} on the box 0 < |beta|_inf <= B.

    Attributes:
        params: Operator parameters
        h: Lattice spacing
        delta: Short-time cutoff in the rescaled time tau = t / h^2
        radius: Stencil radius B
        offsets: Integer offsets, shape (m, n)
        weights: Weight per offset, nonnegative
        tail_mass: sum of the weights outside the stencil
    """

    params: FracParams
    h: float
    delta: float
    radius: int
    offsets: np.ndarray
    weights: np.ndarray
    tail_mass: float

    def tail_bound(self, sup_norm: float = 1.0) -> float:
        """Bound on the neglected terms for |u| <= sup_norm."""
        return self.tail_mass * (2.0 * sup_norm) ** (self.params.p - 1.0)

    def as_table(self) -> pd.DataFrame:
        table = pd.DataFrame(
            self.offsets, columns=[f"beta_{i + 1}" for i in range(self.offsets.shape[1])]
        )
        table["weight"] = self.weights
        return table


def default_stencil(n: int, h: float, cfg: QuadConfig) -> int:
    """Stencil radius: the dimension default, or the far-field radius in 1-D."""
    if n == 1:
        return max(DEFAULT_STENCIL[1], int(math.ceil(cfg.far_radius / h)))
    return DEFAULT_STENCIL.get(n, DEFAULT_STENCIL[2])


def build_weights(
    params: FracParams,
    h: float,
    delta: float,
    radius: int,
    cfg: Optional[QuadConfig] = None,
    method: str = "auto",
) -> DiscreteWeights:
    """
    Assemble the weights of the discrete operator.

    Args:
        params: Operator parameters
        h: Lattice spacing
        delta: Short-time cutoff (0 only when sp < 2)
        radius: Stencil radius B
        cfg: Quadrature settings
        method: 'auto' (closed forms where available) or 'quadrature'

    Returns:
        DiscreteWeights

    Raises:
        WeightsDivergeError: If delta = 0 and sp >= 2
    """
    cfg = cfg or QuadConfig()
    if h <= 0.0 or delta < 0.0 or radius < 1:
        raise ValueError("need h > 0, delta >= 0 and a positive stencil radius")
    if delta == 0.0 and params.sp_ge_2:
        raise WeightsDivergeError(
            f"weights diverge for delta = 0 with sp = {params.sp:.4g} >= 2"
        )
    if method not in ("auto", "quadrature"):
        raise ValueError(f"unknown weight method '{method}'")
    offsets, unit, total_mass = _unit_weights(params, float(delta), int(radius), cfg, method)
    scale = h ** (-params.sp)
    tail = max(total_mass - float(np.sum(unit)), 0.0)
    logger.debug(
        "weights n=%d B=%d delta=%g: total mass %.10g, tail %.3e", params.n, radius, delta, total_mass, tail
    )
    return DiscreteWeights(
        params=params,
        h=h,
        delta=delta,
        radius=radius,
        offsets=offsets,
        weights=unit * scale,
        tail_mass=tail * scale,
    )


def apply_discrete(
    u_grid: GridFunction, x: Sequence[int], w: DiscreteWeights, far_field: bool = True
) -> Estimate:
    """
    Discrete fractional p-Laplacian at a lattice point.

    The stencil sum is completed by the tail mass times the mean of the
    terms on the outer half of the stencil. The returned error is the spread
    of those terms times the tail mass, or the crude tail bound without the
    far-field correction.

    Args:
        u_grid: Samples with an extension rule
        x: Lattice index
        w: Weights built for the same spacing
        far_field: Add the tail correction

    Returns:
        Estimate (value, tail error)
    """
    if not math.isclose(u_grid.h, w.h):
        raise ValueError(f"grid spacing {u_grid.h} != weight spacing {w.h}")
    idx = np.asarray(x, dtype=int)
    center = u_grid.at(idx[None, :])[0]
    terms = phi_p(center - u_grid.at(idx + w.offsets), w.params.p)
    value = float(np.dot(w.weights, terms))
    if not far_field or w.tail_mass == 0.0:
        return Estimate(value, w.tail_bound(u_grid.sup_norm))
    shell = np.max(np.abs(w.offsets), axis=1) > w.radius // 2
    far = terms[shell]
    correction = w.tail_mass * float(np.mean(far))
    spread = w.tail_mass * float(np.max(far) - np.min(far))
    return Estimate(value + correction, spread)


@dataclass(frozen=True)
class ConvergenceRow:
    h: float
    delta: float
    value: float
    tail_error: float
    continuum: float
    continuum_error: float
    kappa: float

    @property
    def error(self) -> float:
        return abs(self.value - self.continuum)


def delta_rule(h: float, kappa: float, zero: bool = False) -> float:
    """delta = h^kappa, or 0 when requested."""
    return 0.0 if zero else h**kappa


def convergence_study(
    u: TestFunction,
    x,
    params: FracParams,
    h_list: Sequence[float],
    kappa: float = 1.0,
    delta_zero: bool = False,
    stencil: Optional[int] = None,
    cfg: Optional[QuadConfig] = None,
) -> List[ConvergenceRow]:
    """
    Discrete values against the continuum operator for a sequence of spacings.

    Args:
        u: Test function sampled on the lattice through x
        x: Evaluation point
        params: Operator parameters
        h_list: Spacings
        kappa: Exponent of the delta rule
        delta_zero: Use delta = 0
        stencil: Stencil radius override
        cfg: Quadrature settings

    Returns:
        One ConvergenceRow per spacing
    """
    cfg = cfg or QuadConfig()
    continuum = eval_direct(u, x, params, cfg)
    rows = []
    for h in h_list:
        delta = delta_rule(h, kappa, delta_zero)
        radius = stencil or default_stencil(params.n, h, cfg)
        weights = build_weights(params, h, delta, radius, cfg)
        grid, index = GridFunction.sample(u, x, h, half_width=8)
        result = apply_discrete(grid, index, weights)
        rows.append(
            ConvergenceRow(h, delta, result.value, result.error, continuum.value, continuum.error, kappa)
        )
    return rows


def observed_orders(rows: Sequence[ConvergenceRow]) -> List[float]:
    """log(e_k / e_{k+1}) / log(h_k / h_{k+1}) for consecutive rows (NaN first)."""
    orders = [math.nan]
    for coarse, fine in zip(rows, rows[1:]):
        if coarse.error > 0.0 and fine.error > 0.0:
            orders.append(math.log(coarse.error / fine.error) / math.log(coarse.h / fine.h))
        else:
            orders.append(math.nan)
    return orders
