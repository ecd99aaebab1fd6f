import math

import numpy as np
import pytest
from scipy import special

from fracplap.config import FracParams
from fracplap.errors import ExtrapolationError
from fracplap.funcs import catalog
from fracplap.quad import Estimate
from fracplap.reps import extension_apply, kernel_set, poisson_kernel, resolvent_kernel
from fracplap.reps.extension import extrapolate_to_zero, height_sequence, regularized_integral
from fracplap.reps.kernels import poisson_tail_mass, profile_quadrature, resolvent_profile

HALF = FracParams(n=1, s=0.5, p=2.0)


def test_poisson_kernel_values():
    # the half Laplacian has the Cauchy kernel y / (pi (xi^2 + y^2))
    assert poisson_kernel(0.0, 1.0, HALF) == pytest.approx(1.0 / math.pi)
    assert poisson_kernel(2.0, 0.5, HALF) == pytest.approx(0.5 / (math.pi * 4.25))
    xi = np.array([-1.5, -0.2, 0.7])
    np.testing.assert_allclose(poisson_kernel(xi, 0.3, HALF), poisson_kernel(-xi, 0.3, HALF))
    with pytest.raises(ValueError):
        poisson_kernel(0.0, 0.0, HALF)


@pytest.mark.parametrize("n,s,p", [(1, 0.5, 2.0), (1, 0.3, 3.0), (2, 0.6, 2.5)])
@pytest.mark.parametrize("y", [0.1, 1.0, 10.0])
def test_poisson_mass(cfg, n, s, p, y):
    mass = kernel_set(FracParams(n=n, s=s, p=p)).poisson_mass(y, cfg)
    assert mass.value == pytest.approx(1.0, rel=1e-8)


def test_poisson_tail_mass():
    params = FracParams(n=1, s=0.5, p=2.0)
    assert poisson_tail_mass(0.0, 1.0, params) == pytest.approx(1.0)
    # Cauchy: mass outside [-R, R] is 1 - (2/pi) arctan(R / y)
    assert poisson_tail_mass(3.0, 1.5, params) == pytest.approx(1.0 - 2.0 / math.pi * math.atan(2.0))


def test_resolvent_profile_one_dimension():
    assert resolvent_profile(0.0, 1) == pytest.approx(0.5)
    assert resolvent_profile(1.0, 1) == pytest.approx(0.5 * math.exp(-1.0))
    for rho in (0.05, 1.0, 7.0):
        assert profile_quadrature(rho, 1) == pytest.approx(0.5 * math.exp(-rho), rel=1e-9)
    # R_t(x) = sqrt(t) e^{-sqrt(t) |x|} / 2
    assert resolvent_kernel(0.8, 4.0, HALF) == pytest.approx(math.exp(-1.6))


def test_resolvent_profile_two_dimensions():
    # W is the Green function of 1 - Delta in the plane, K0 / (2 pi)
    for rho in (0.1, 1.0, 5.0):
        assert profile_quadrature(rho, 2) == pytest.approx(special.k0(rho) / (2.0 * math.pi), rel=1e-8)
    rho = np.geomspace(1e-6, 40.0, 25)
    np.testing.assert_allclose(resolvent_profile(rho, 2), special.k0(rho) / (2.0 * math.pi), rtol=1e-5)


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("t", [0.1, 1.0, 10.0])
def test_resolvent_mass(cfg, n, t):
    kernels = kernel_set(FracParams(n=n, s=0.5, p=2.0))
    assert kernels.resolvent_1d_closed_form == (n == 1)
    mass = kernels.resolvent_mass(t, cfg)
    assert mass.value == pytest.approx(1.0, rel=1e-8 if n == 1 else 1e-5)


@pytest.mark.parametrize("y", [0.1, 0.5, 2.0])
def test_extension_of_cosine(cfg, y):
    # the Poisson extension of cos for s = 1/2 is e^{-y} cos x
    for x in (0.0, 0.9):
        result = extension_apply(catalog("cosine"), x, y, HALF, cfg)
        assert result.value == pytest.approx(math.exp(-y) * math.cos(x), rel=1e-7, abs=1e-10)


def test_extension_of_constant(cfg):
    params = FracParams(n=2, s=0.4, p=3.0)
    result = extension_apply(catalog("constant", n=2, amplitude=2.0), [0.3, 0.1], 0.7, params, cfg)
    assert result.value == pytest.approx(2.0, rel=1e-8)
    with pytest.raises(ValueError):
        extension_apply(catalog("constant"), 0.0, 0.0, HALF, cfg)


def test_extension_of_gaussian_is_bounded_and_smooths(cfg):
    params = FracParams(n=1, s=0.5, p=2.5)
    u = catalog("gaussian")
    values = [extension_apply(u, 0.0, y, params, cfg).value for y in (0.05, 0.5, 2.0)]
    assert 1.0 > values[0] > values[1] > values[2] > 0.0


def test_regularized_integral_of_constant_profile(cfg):
    # int_R 1 / (r^2 + y^2) dr = pi / y
    y = 0.5
    result = regularized_integral(lambda r: 1.0, y, 1, 2.0, cfg, tail_radius=1000.0)
    assert result.value == pytest.approx(math.pi / y, rel=1e-7)


def test_extrapolation_of_fractional_power_is_flagged(cfg):
    heights = height_sequence(cfg)
    assert heights[0] == cfg.y0
    assert heights[1] / heights[0] == pytest.approx(cfg.y_ratio)
    samples = [Estimate(1.0 + 0.3 * y**0.7, 1e-15) for y in heights]
    result = extrapolate_to_zero(heights, samples, cfg)
    # a + b y and a + b y^2 miss a y^0.7 term by different amounts
    assert abs(result.linear - result.quadratic) > 1e-5
    assert result.flagged
    assert result.method == "measured_power"
    assert result.value == pytest.approx(1.0, abs=1e-10)
    assert result.rate == pytest.approx(0.7, rel=1e-6)
    assert result.estimate.value == result.value


@pytest.mark.parametrize("power", [1.0, 2.0])
def test_extrapolation_accepts_agreeing_intercepts(cfg, power):
    heights = height_sequence(cfg)
    samples = [Estimate(1.0 + 0.3 * y**power, 1e-15) for y in heights]
    result = extrapolate_to_zero(heights, samples, cfg)
    assert result.method == "richardson"
    assert not result.flagged
    assert result.value == pytest.approx(1.0, abs=1e-6)
    assert abs(result.value - 1.0) <= result.error + 1e-12
    assert result.error >= 0.5 * abs(result.linear - result.quadratic)


def test_extrapolation_of_settled_sequence(cfg):
    heights = height_sequence(cfg)
    samples = [Estimate(2.5 + 1e-14 * k, 1e-12) for k in range(len(heights))]
    result = extrapolate_to_zero(heights, samples, cfg)
    assert result.method == "converged"
    assert result.value == pytest.approx(2.5, abs=1e-11)


def test_extrapolation_of_zero_sequence(cfg):
    heights = height_sequence(cfg)
    result = extrapolate_to_zero(heights, [Estimate(0.0, 0.0)] * len(heights), cfg)
    assert (result.value, result.error, result.method) == (0.0, 0.0, "converged")


def test_extrapolation_that_does_not_settle(cfg):
    heights = height_sequence(cfg)
    samples = [Estimate((-1.0) ** k, 1e-12) for k in range(len(heights))]
    with pytest.raises(ExtrapolationError):
        extrapolate_to_zero(heights, samples, cfg)
