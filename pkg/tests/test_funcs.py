import math

import numpy as np
import pytest

from fracplap.errors import DegenerateGradientError, UnsupportedFunctionError
from fracplap.funcs import (
    CATALOG_NAMES,
    GridFunction,
    catalog,
    constant_function,
    heat_apply_closed_form,
    p_laplacian_1d,
    phi_p,
)

POINTS_1D = [[-0.7], [0.1], [0.45], [1.3]]
POINTS_2D = [[0.2, -0.3], [0.5, 0.1], [-0.1, 0.6]]


def _numeric_gradient(f, y, step=1e-6):
    y = np.asarray(y, dtype=float)
    grad = np.zeros_like(y)
    for i in range(y.size):
        e = np.zeros_like(y)
        e[i] = step
        grad[i] = (f(y + e) - f(y - e)) / (2.0 * step)
    return grad


@pytest.mark.parametrize("name", CATALOG_NAMES)
@pytest.mark.parametrize("n,points", [(1, POINTS_1D), (2, POINTS_2D)])
def test_derivatives_match_finite_differences(name, n, points):
    u = catalog(name, n=n, dilation=1.3)
    for y in points:
        y = np.asarray(y)
        np.testing.assert_allclose(
            u.gradient(y), _numeric_gradient(u.value, y), rtol=1e-6, atol=1e-8
        )
        hessian = np.stack(
            [_numeric_gradient(lambda z: u.gradient(z)[i], y) for i in range(n)]
        )
        np.testing.assert_allclose(u.hessian(y), hessian, rtol=1e-5, atol=1e-7)


@pytest.mark.parametrize("name", ["gaussian", "rational_bump", "compact_bump", "cosine"])
def test_sup_norms_bound_samples(name):
    u = catalog(name, amplitude=2.0, dilation=1.7)
    y = np.linspace(-6.0, 6.0, 4001)[:, None]
    assert np.max(np.abs(u.value(y))) <= u.sup_norm * (1.0 + 1e-12)
    assert np.max(np.abs(u.gradient(y))) <= u.grad_sup_norm * (1.0 + 1e-9)
    assert np.max(np.abs(u.hessian(y))) <= u.hess_sup_norm * (1.0 + 1e-9)


def test_gradient_sup_norms_are_attained():
    gaussian = catalog("gaussian", dilation=2.0)
    assert gaussian.grad_sup_norm == pytest.approx(2.0 * math.sqrt(2.0) * math.exp(-0.5))
    peak = 1.0 / (math.sqrt(2.0) * 2.0)
    assert abs(gaussian.gradient(np.array([peak]))[0]) == pytest.approx(gaussian.grad_sup_norm)

    rational = catalog("rational_bump")
    peak = 1.0 / math.sqrt(3.0)
    assert abs(rational.gradient(np.array([peak]))[0]) == pytest.approx(rational.grad_sup_norm)


def test_catalog_parameters():
    shifted = catalog("shifted_gaussian")
    assert shifted.center.tolist() == [1.0]
    assert shifted.value(np.array([1.0])) == pytest.approx(1.0)

    bump = catalog("compact_bump", center=[2.0], radius=0.5)
    assert bump.value(np.array([2.0])) == pytest.approx(1.0)
    assert bump.value(np.array([2.5])) == 0.0
    assert bump.value(np.array([1.4])) == 0.0

    cosine = catalog("cosine", n=2, dilation=2.0)
    assert cosine.planar
    assert cosine.period == pytest.approx(math.pi)
    assert cosine.spec == {
        "name": "cosine", "n": 2, "center": [0.0, 0.0], "amplitude": 1.0, "dilation": 2.0, "radius": 1.0,
    }
    assert catalog(**cosine.spec).value(np.array([0.3, 5.0])) == pytest.approx(math.cos(0.6))

    assert constant_function(3.0).value(np.array([[1.0], [7.0]])).tolist() == [3.0, 3.0]


def test_catalog_rejects_bad_input():
    with pytest.raises(UnsupportedFunctionError):
        catalog("sawtooth")
    with pytest.raises(ValueError):
        catalog("gaussian", dilation=0.0)
    with pytest.raises(ValueError):
        catalog("gaussian", n=2, center=[1.0])


def test_restrict_to_line():
    cosine = catalog("cosine", n=3, dilation=1.5)
    line = cosine.restrict_to_line()
    assert line.n == 1
    for y in (-1.0, 0.2, 2.4):
        assert line.value(np.array([y])) == pytest.approx(cosine.value(np.array([y, 4.0, -2.0])))
    with pytest.raises(UnsupportedFunctionError):
        catalog("gaussian", n=2).restrict_to_line()


@pytest.mark.parametrize("t", [0.0, 0.1, 1.0, 5.0])
def test_closed_form_heat(t):
    gaussian = catalog("gaussian", n=1, dilation=1.5, amplitude=2.0)
    k2 = 2.25
    expected = 2.0 / math.sqrt(1.0 + 4.0 * k2 * t) * math.exp(-k2 * 0.16 / (1.0 + 4.0 * k2 * t))
    assert heat_apply_closed_form(gaussian, [0.4], t) == pytest.approx(expected, rel=1e-14)

    cosine = catalog("cosine", dilation=2.0)
    assert heat_apply_closed_form(cosine, [0.3], t) == pytest.approx(math.exp(-4.0 * t) * math.cos(0.6))


def test_closed_form_heat_unavailable():
    with pytest.raises(UnsupportedFunctionError):
        heat_apply_closed_form(catalog("rational_bump"), [0.0], 1.0)
    with pytest.raises(ValueError):
        heat_apply_closed_form(catalog("gaussian"), [0.0], -1.0)


def test_p_laplacian_1d():
    u = catalog("gaussian")
    assert p_laplacian_1d(u, 0.0, 2.0) == pytest.approx(-2.0)
    x = 0.5
    d1 = -2.0 * x * math.exp(-x * x)
    d2 = (4.0 * x * x - 2.0) * math.exp(-x * x)
    assert p_laplacian_1d(u, x, 3.0) == pytest.approx(2.0 * abs(d1) * d2)
    assert p_laplacian_1d(u, x, 1.5) == pytest.approx(0.5 * abs(d1) ** -0.5 * d2)
    with pytest.raises(DegenerateGradientError):
        p_laplacian_1d(u, 0.0, 1.5)


def test_phi_p_is_odd():
    t = np.array([-2.0, -0.5, 0.0, 0.5, 2.0])
    np.testing.assert_allclose(phi_p(t, 3.0), np.sign(t) * t**2)
    np.testing.assert_allclose(phi_p(t, 1.5), -phi_p(-t, 1.5))


def test_grid_function_sampling_and_extension():
    u = catalog("gaussian", n=2)
    grid, index = GridFunction.sample(u, [0.3, -0.2], 0.1, half_width=4)
    assert index == (4, 4)
    assert grid.values.shape == (9, 9)
    assert grid.at(np.array([index]))[0] == pytest.approx(u.value(np.array([0.3, -0.2])))
    far = np.array([[30, 4], [-5, 2]])
    np.testing.assert_allclose(grid.at(far), u.value(grid.point(far)))
    assert grid.sup_norm == 1.0

    bare = GridFunction(origin=np.zeros(1), h=0.5, values=np.ones(3))
    assert bare.at(np.array([[1], [7]])).tolist() == [1.0, 0.0]
    with pytest.raises(ValueError):
        GridFunction(origin=np.zeros(1), h=0.0, values=np.ones(3))
