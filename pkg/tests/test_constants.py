import math

import mpmath
import pytest
from scipy import special

from fracplap.config import FracParams
from fracplap.constants import (
    bessel_i,
    bessel_ie,
    c1,
    c_ns,
    constant_set,
    dimension_residuals,
    gamma,
    log_abs_gamma,
)
from fracplap.errors import BesselOverflowError, PoleError

GRID = [(n, s, p) for n in (1, 2, 3) for s in (0.1, 0.5, 0.9) for p in (1.5, 2.0, 3.0)]


def _reference(n, s, p):
    """C1..C4 in high precision."""
    mpmath.mp.dps = 30
    n, s, p = mpmath.mpf(n), mpmath.mpf(s), mpmath.mpf(p)
    sp = s * p
    first = (
        sp / 2 * (1 - s) * 2 ** (2 * s - 1) * mpmath.pi ** (-(n - 1) / 2)
        * mpmath.gamma((n + sp) / 2) / (mpmath.gamma((p + 1) / 2) * mpmath.gamma(2 - s))
    )
    common = first * mpmath.pi ** (n / 2) / mpmath.gamma((n + sp) / 2)
    second = common / 2**sp
    third = common * mpmath.gamma(sp / 2)
    fourth = second / mpmath.gamma(1 + sp / 2)
    return [float(v) for v in (first, second, third, fourth)]


@pytest.mark.parametrize("n,s,p", GRID)
def test_constants_against_mpmath(n, s, p):
    constants = constant_set(FracParams(n=n, s=s, p=p))
    expected = _reference(n, s, p)
    actual = [constants.c1, constants.c2, constants.c3, constants.c4]
    for got, want in zip(actual, expected):
        assert got == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("s", [0.1, 0.5, 0.9])
def test_linear_case_matches_classical_constants(n, s):
    params = FracParams(n=n, s=s, p=2.0)
    constants = constant_set(params)
    assert c1(params) == pytest.approx(c_ns(n, s), rel=1e-12)
    assert constants.c2 == pytest.approx(1.0 / abs(special.gamma(-s)), rel=1e-12)
    assert constants.c4 == pytest.approx(math.sin(math.pi * s) / math.pi, rel=1e-12)


def test_half_laplacian_constant_in_one_dimension():
    assert c_ns(1, 0.5) == pytest.approx(1.0 / math.pi, rel=1e-14)


@pytest.mark.parametrize("s,p", [(0.25, 1.5), (0.5, 2.0), (0.75, 3.0), (0.9, 4.0)])
def test_dimension_independence(s, p):
    residuals = dimension_residuals(s, p, n_max=5)
    assert set(residuals) == {"c2_residual", "c3_residual", "c4_residual"}
    assert max(residuals.values()) < 1e-12


def test_gamma_poles():
    for x in (0.0, -1.0, -3.0):
        with pytest.raises(PoleError):
            gamma(x)
        with pytest.raises(PoleError):
            log_abs_gamma(x)
    assert gamma(-0.5) == pytest.approx(-2.0 * math.sqrt(math.pi))
    assert log_abs_gamma(-0.5) == pytest.approx(math.log(2.0 * math.sqrt(math.pi)))


def test_bessel_i_against_mpmath():
    for m, z in [(0, 0.5), (1, 2.0), (5, 10.0), (20, 3.0)]:
        assert bessel_i(m, z) == pytest.approx(float(mpmath.besseli(m, z)), rel=1e-12)
    assert bessel_ie(3, 50.0) == pytest.approx(math.exp(-50.0) * float(mpmath.besseli(3, 50)), rel=1e-12)


def test_bessel_i_overflow_and_domain():
    with pytest.raises(BesselOverflowError):
        bessel_i(0, 1000.0)
    with pytest.raises(ValueError):
        bessel_i(-1, 1.0)
    # the scaled variant stays finite
    assert math.isfinite(bessel_ie(0, 1000.0))
