"""
The W^{s,p} Gagliardo seminorm of a one-dimensional function in three forms:

    direct        [u]^p = C1 int int |u(x) - u(y)|^p |x - y|^{-1-sp} dy dx
    semigroup     [u]^p = C2 int int_0^inf e^{t Delta}[|u(x) - u|^p](x) dt / t^{1+sp/2} dx
    balakrishnan  [u]^p = C4 int int_0^inf (R_t * |u(x) - u|^p)(x) dt / t^{1-sp/2} dx

The inner integral over y (or t) is the matching representation applied to
the even difference |u(x) - u(y)|^p, so the three forms share the operator
code and differ only in their linear part. The outer x-integral runs over
|x - c| <= R with composite Gauss-Legendre, and the region |x - c| > R is
added from the decay of u.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, Optional

import numpy as np

from fracplap.config import FracParams, QuadConfig
from fracplap.constants import constant_set
from fracplap.errors import UnsupportedFunctionError
from fracplap.funcs import TestFunction
from fracplap.quad import ZERO, Estimate, adaptive_quad
from fracplap.reps.balakrishnan import BalakrishnanRepresentation
from fracplap.reps.base import DifferenceFunctor, Representation
from fracplap.reps.direct import DirectRepresentation
from fracplap.reps.semigroup import SemigroupRepresentation

logger = logging.getLogger(__name__)

OUTER_NODES = 8

SEMINORM_FORMS: Dict[str, Representation] = {
    "direct": DirectRepresentation(),
    "semigroup": SemigroupRepresentation(),
    "balakrishnan": BalakrishnanRepresentation(),
}


@dataclass(frozen=True)
class SeminormReport:
    """The three seminorm values with their error estimates."""

    direct: Estimate
    semigroup: Estimate
    balakrishnan: Estimate

    def values(self) -> Dict[str, Estimate]:
        return {"direct": self.direct, "semigroup": self.semigroup, "balakrishnan": self.balakrishnan}

    @property
    def gaps(self) -> Dict[str, float]:
        """Pairwise relative discrepancies, keyed 'a_vs_b'."""
        gaps = {}
        for (a, ea), (b, eb) in combinations(self.values().items(), 2):
            scale = max(abs(ea.value), abs(eb.value))
            gaps[f"{a}_vs_{b}"] = abs(ea.value - eb.value) / scale if scale > 0.0 else 0.0
        return gaps

    @property
    def max_gap(self) -> float:
        return max(self.gaps.values())

    def as_row(self) -> Dict[str, float]:
        row: Dict[str, float] = {}
        for name, estimate in self.values().items():
            row[f"{name}_value"] = estimate.value
            row[f"{name}_error"] = estimate.error
        row.update({f"gap_{key}": gap for key, gap in self.gaps.items()})
        return row


def _check_function(u: TestFunction, params: FracParams) -> None:
    if u.n != 1 or params.n != 1:
        raise UnsupportedFunctionError("seminorms are implemented in one dimension")
    if u.outer_radius is None:
        raise UnsupportedFunctionError(f"{u.name} does not decay; its seminorm is infinite")


def _outer_edges(u: TestFunction) -> np.ndarray:
    """Panel edges around the center, doubling outwards up to the outer radius."""
    c = float(u.center[0])
    radius = u.outer_radius - abs(c)
    offsets = [0.0]
    step = 0.5 * u.length_scale
    while step < radius:
        offsets.append(step)
        step *= 2.0
    offsets.append(radius)
    offsets = np.array(offsets)
    return np.unique(np.concatenate([c - offsets, c + offsets]))


def _composite_rule(inner: Callable[[float], Estimate], edges: np.ndarray, nodes: int) -> Estimate:
    r, w = np.polynomial.legendre.leggauss(nodes)
    value = error = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
        for node, weight in zip(r, w):
            estimate = inner(mid + half * node)
            value += half * weight * estimate.value
            error += half * weight * estimate.error
    return Estimate(value, error)


def _inner(form: Representation, u: TestFunction, params: FracParams, cfg: QuadConfig):
    def integrand(x: float) -> Estimate:
        functor = DifferenceFunctor(u, np.array([x]), params.p, even=True)
        return form.compute(functor, params, cfg)

    return integrand


def _outer_tail(u: TestFunction, params: FracParams, cfg: QuadConfig) -> Estimate:
    """
    Contribution of |x - c| > R, where u(x) is negligible:

        (C1 / sp) int |u(y)|^p [ (c + R - y)^{-sp} + (y - c + R)^{-sp} ] dy.

    The y-range is |y - c| < R/2; the change against |y - c| < R/4 is the error.
    """
    c = float(u.center[0])
    radius = u.outer_radius - abs(c)
    sp = params.sp

    def integrand(y: float) -> float:
        mass = abs(float(u.value(np.array([[y]]))[0])) ** params.p
        return mass * ((c + radius - y) ** (-sp) + (y - c + radius) ** (-sp))

    wide = adaptive_quad(integrand, c - 0.5 * radius, c + 0.5 * radius, cfg, [c])
    narrow = adaptive_quad(integrand, c - 0.25 * radius, c + 0.25 * radius, cfg, [c])
    factor = constant_set(params).c1 / sp
    return Estimate(factor * wide.value, factor * (wide.error + abs(wide.value - narrow.value)))


def outer_rule_error(u: TestFunction, params: FracParams, cfg: Optional[QuadConfig] = None) -> float:
    """Change of the direct p-th power between OUTER_NODES and half as many nodes per panel."""
    cfg = cfg or QuadConfig()
    edges = _outer_edges(u)
    inner = _inner(SEMINORM_FORMS["direct"], u, params, cfg)
    fine = _composite_rule(inner, edges, OUTER_NODES)
    coarse = _composite_rule(inner, edges, OUTER_NODES // 2)
    return abs(fine.value - coarse.value)


def seminorm_power(
    u: TestFunction,
    params: FracParams,
    form: str = "direct",
    cfg: Optional[QuadConfig] = None,
    rule_error: Optional[float] = None,
) -> Estimate:
    """
    [u]^p in the given form.

    Args:
        u: Decaying one-dimensional catalog function
        params: Operator parameters (n = 1)
        form: 'direct', 'semigroup' or 'balakrishnan'
        cfg: Quadrature settings
        rule_error: Outer discretization error, computed from the direct form if None

    Returns:
        Estimate of the p-th power of the seminorm

    Raises:
        UnsupportedFunctionError: For non-decaying or multi-dimensional functions
    """
    cfg = cfg or QuadConfig()
    if u.sup_norm == 0.0:
        return ZERO
    _check_function(u, params)
    if form not in SEMINORM_FORMS:
        raise ValueError(f"unknown seminorm form {form!r}")
    if rule_error is None:
        rule_error = outer_rule_error(u, params, cfg)
    edges = _outer_edges(u)
    body = _composite_rule(_inner(SEMINORM_FORMS[form], u, params, cfg), edges, OUTER_NODES)
    tail = _outer_tail(u, params, cfg)
    power = body.plus(tail).plus(Estimate(0.0, rule_error))
    logger.debug(
        "%s seminorm^p of %s, %s: body %.10g, tail %.3g, error %.2e",
        form, u.name, params, body.value, tail.value, power.error,
    )
    return power


def _root(power: Estimate, p: float) -> Estimate:
    if power.value <= 0.0:
        return Estimate(0.0, power.error ** (1.0 / p))
    value = power.value ** (1.0 / p)
    return Estimate(value, value * power.error / (p * power.value))


def seminorm_direct(u: TestFunction, params: FracParams, cfg: Optional[QuadConfig] = None) -> Estimate:
    """[u]_{W^{s,p}} from the double integral."""
    return _root(seminorm_power(u, params, "direct", cfg), params.p)


def seminorm_semigroup(u: TestFunction, params: FracParams, cfg: Optional[QuadConfig] = None) -> Estimate:
    """[u]_{W^{s,p}} from the heat semigroup."""
    return _root(seminorm_power(u, params, "semigroup", cfg), params.p)


def seminorm_balakrishnan(u: TestFunction, params: FracParams, cfg: Optional[QuadConfig] = None) -> Estimate:
    """[u]_{W^{s,p}} from the resolvent integral."""
    return _root(seminorm_power(u, params, "balakrishnan", cfg), params.p)


def seminorm_report(u: TestFunction, params: FracParams, cfg: Optional[QuadConfig] = None) -> SeminormReport:
    """All three forms, sharing one outer discretization error estimate."""
    cfg = cfg or QuadConfig()
    if u.sup_norm == 0.0:
        return SeminormReport(ZERO, ZERO, ZERO)
    _check_function(u, params)
    rule_error = outer_rule_error(u, params, cfg)
    estimates = {
        form: _root(seminorm_power(u, params, form, cfg, rule_error), params.p)
        for form in SEMINORM_FORMS
    }
    report = SeminormReport(**estimates)
    if report.max_gap > 1e-3:
        logger.warning("seminorm forms of %s disagree at %s: gaps %s", u.name, params, report.gaps)
    return report
