"""
Catalog of analytic test functions with closed-form derivatives, the classical
1-D p-Laplacian and lattice samples of test functions.

Every callable takes points as arrays of shape (..., n) and is vectorized over
the leading axes: ``value`` returns shape (...), ``gradient`` (..., n) and
``hessian`` (..., n, n).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from fracplap.errors import DegenerateGradientError, UnsupportedFunctionError

logger = logging.getLogger(__name__)

Field = Callable[[np.ndarray], np.ndarray]
HeatImage = Callable[[np.ndarray, float], np.ndarray]

CATALOG_NAMES = (
    "gaussian",
    "cosine",
    "rational_bump",
    "shifted_gaussian",
    "compact_bump",
    "constant",
)


def phi_p(t: Any, p: float) -> Any:
    """The odd power nonlinearity |t|^{p-2} t."""
    return np.sign(t) * np.abs(t) ** (p - 1.0)


def as_point(x: Any, n: int) -> np.ndarray:
    """Coerce a scalar or sequence to a point of shape (n,)."""
    point = np.atleast_1d(np.asarray(x, dtype=float))
    if point.shape != (n,):
        raise ValueError(f"expected a point of dimension {n}, got shape {point.shape}")
    return point


@dataclass(frozen=True, eq=False)
class TestFunction:
    """
    An analytic bounded C^2 function on R^n with its derivatives.

    Attributes:
        name: Catalog identifier
        n: Space dimension
        value, gradient, hessian: Vectorized callables
        sup_norm, grad_sup_norm, hess_sup_norm: Analytic bounds of |u|, |grad u|, ||D^2 u||
        closed_form_heat: Optional (x, t) -> e^{t Delta} u (x)
        center: Point around which the function's features sit
        length_scale: Width of those features
        period: Period along x_1 for periodic functions
        planar: True when the function depends on x_1 only
        tail_radius: Radius beyond which the function is effectively at its limit
        outer_radius: Radius containing the essential support (None if not decaying)
        breaks: Optional x -> radii around x where the function is not smooth
        spec: Keyword arguments that rebuild this function through ``catalog``
    """

    __test__ = False

    name: str
    n: int
    value: Field
    gradient: Field
    hessian: Field
    sup_norm: float
    grad_sup_norm: float
    hess_sup_norm: float
    closed_form_heat: Optional[HeatImage] = None
    center: np.ndarray = field(default_factory=lambda: np.zeros(1))
    length_scale: float = 1.0
    period: Optional[float] = None
    planar: bool = False
    tail_radius: float = 40.0
    outer_radius: Optional[float] = None
    breaks: Optional[Callable[[np.ndarray], List[float]]] = None
    spec: Dict[str, Any] = field(default_factory=dict)

    def __call__(self, y: np.ndarray) -> np.ndarray:
        return self.value(y)

    def radial_hints(self, x: np.ndarray) -> List[float]:
        """Radii around x where the integrand of a radial quadrature changes character."""
        distance = float(np.linalg.norm(np.asarray(x, dtype=float) - self.center))
        hints = [distance, distance + self.length_scale]
        if distance > self.length_scale:
            hints.append(distance - self.length_scale)
        if self.breaks is not None:
            hints.extend(self.breaks(x))
        return sorted({h for h in hints if h > 1e-12})

    def restrict_to_line(self) -> "TestFunction":
        """
        The same function seen as a function of x_1 alone.

        Only valid for planar functions.

        Raises:
            UnsupportedFunctionError: If the function depends on more than x_1
        """
        if not self.planar:
            raise UnsupportedFunctionError(f"{self.name} is not planar")
        if self.n == 1:
            return self
        n = self.n

        def embed(y: np.ndarray) -> np.ndarray:
            y = np.asarray(y, dtype=float)
            padded = np.zeros(y.shape[:-1] + (n,))
            padded[..., 0] = y[..., 0]
            return padded

        heat = None
        if self.closed_form_heat is not None:
            full_heat = self.closed_form_heat
            heat = lambda y, t: full_heat(embed(y), t)

        return TestFunction(
            name=self.name,
            n=1,
            value=lambda y: self.value(embed(y)),
            gradient=lambda y: self.gradient(embed(y))[..., :1],
            hessian=lambda y: self.hessian(embed(y))[..., :1, :1],
            sup_norm=self.sup_norm,
            grad_sup_norm=self.grad_sup_norm,
            hess_sup_norm=self.hess_sup_norm,
            closed_form_heat=heat,
            center=self.center[:1],
            length_scale=self.length_scale,
            period=self.period,
            planar=True,
            tail_radius=self.tail_radius,
            outer_radius=self.outer_radius,
            breaks=self.breaks,
            spec={**self.spec, "n": 1},
        )


# ------------------- Canonical profiles -------------------
# Each profile is written in the scaled coordinate z = k (y - c) and returns
# (value, gradient, hessian) as functions of z.


def _sq(z: np.ndarray) -> np.ndarray:
    return np.sum(z * z, axis=-1)


def _outer(z: np.ndarray) -> np.ndarray:
    return z[..., :, None] * z[..., None, :]


def _gaussian_profile() -> Tuple[Field, Field, Field]:
    def value(z):
        return np.exp(-_sq(z))

    def gradient(z):
        return -2.0 * z * value(z)[..., None]

    def hessian(z):
        n = z.shape[-1]
        return (4.0 * _outer(z) - 2.0 * np.eye(n)) * value(z)[..., None, None]

    return value, gradient, hessian


def _cosine_profile() -> Tuple[Field, Field, Field]:
    def value(z):
        return np.cos(z[..., 0])

    def gradient(z):
        grad = np.zeros_like(z)
        grad[..., 0] = -np.sin(z[..., 0])
        return grad

    def hessian(z):
        n = z.shape[-1]
        hess = np.zeros(z.shape + (n,))
        hess[..., 0, 0] = -np.cos(z[..., 0])
        return hess

    return value, gradient, hessian


def _rational_profile() -> Tuple[Field, Field, Field]:
    def value(z):
        return 1.0 / (1.0 + _sq(z))

    def gradient(z):
        return -2.0 * z * (value(z) ** 2)[..., None]

    def hessian(z):
        n = z.shape[-1]
        f = value(z)[..., None, None]
        return 8.0 * _outer(z) * f**3 - 2.0 * np.eye(n) * f**2

    return value, gradient, hessian


def _compact_profile() -> Tuple[Field, Field, Field]:
    # exp(1 - 1/(1 - |z|^2)) inside the unit ball, zero outside
    def parts(z):
        q = _sq(z)
        inside = q < 1.0
        qs = np.where(inside, q, 0.0)
        w = 1.0 / (1.0 - qs)
        phi = np.where(inside, np.exp(1.0 - w), 0.0)
        d1 = -phi * w**2
        d2 = phi * (w**4 - 2.0 * w**3)
        return phi, d1, d2

    def value(z):
        return parts(z)[0]

    def gradient(z):
        _, d1, _ = parts(z)
        return 2.0 * z * d1[..., None]

    def hessian(z):
        n = z.shape[-1]
        _, d1, d2 = parts(z)
        return 4.0 * _outer(z) * d2[..., None, None] + 2.0 * np.eye(n) * d1[..., None, None]

    return value, gradient, hessian


def _constant_profile() -> Tuple[Field, Field, Field]:
    def value(z):
        return np.ones(z.shape[:-1])

    def gradient(z):
        return np.zeros_like(z)

    def hessian(z):
        return np.zeros(z.shape + (z.shape[-1],))

    return value, gradient, hessian


def _compact_sup_norms() -> Tuple[float, float]:
    """Radial derivative bounds of the compact profile, sampled with a 1% margin."""
    r = np.linspace(0.0, 1.0, 20001)[:-1]
    q = r * r
    w = 1.0 / (1.0 - q)
    phi = np.exp(1.0 - w)
    d1 = -phi * w**2
    d2 = phi * (w**4 - 2.0 * w**3)
    radial_first = np.abs(2.0 * r * d1)
    radial_second = np.abs(2.0 * d1 + 4.0 * q * d2)
    tangential = np.abs(2.0 * d1)
    return 1.01 * float(radial_first.max()), 1.01 * float(
        max(radial_second.max(), tangential.max())
    )


# (profile, sup, grad sup, hess sup) in the canonical coordinate
_GAUSS_GRAD = math.sqrt(2.0) * math.exp(-0.5)
_RATIONAL_GRAD = 9.0 / (8.0 * math.sqrt(3.0))


def catalog(
    name: str,
    n: int = 1,
    center: Optional[Sequence[float]] = None,
    amplitude: float = 1.0,
    dilation: float = 1.0,
    radius: float = 1.0,
) -> TestFunction:
    """
    Build a catalog function u(y) = amplitude * f(dilation * (y - center)).

    Args:
        name: One of gaussian, cosine, rational_bump, shifted_gaussian,
            compact_bump, constant
        n: Space dimension
        center: Translation; shifted_gaussian defaults to x_0 = (1, 0, ...)
        amplitude: Value scaling factor
        dilation: Argument scaling factor (u(h.) has dilation h)
        radius: Support radius of compact_bump

    Returns:
        The TestFunction

    Raises:
        UnsupportedFunctionError: If the name is unknown
    """
    if name not in CATALOG_NAMES:
        raise UnsupportedFunctionError(
            f"unknown function '{name}', expected one of {', '.join(CATALOG_NAMES)}"
        )
    if n < 1:
        raise ValueError("dimension must be positive")
    if dilation <= 0.0 or radius <= 0.0:
        raise ValueError("dilation and radius must be positive")

    if center is None:
        c = np.zeros(n)
        if name == "shifted_gaussian":
            c[0] = 1.0
    else:
        c = as_point(center, n)

    spec = {
        "name": name,
        "n": n,
        "center": [float(v) for v in c],
        "amplitude": float(amplitude),
        "dilation": float(dilation),
        "radius": float(radius),
    }

    k = dilation
    heat_k: Optional[Callable[[np.ndarray, float], np.ndarray]] = None
    period = None
    planar = False
    length = 1.0 / k
    tail_radius = 40.0 / k
    outer_radius: Optional[float] = None

    if name in ("gaussian", "shifted_gaussian"):
        profile = _gaussian_profile()
        sups = (1.0, _GAUSS_GRAD, 2.0)
        outer_radius = 12.0 / k

        def heat_k(y, t):
            scale = 1.0 + 4.0 * k * k * t
            d2 = _sq(y - c)
            return scale ** (-0.5 * n) * np.exp(-k * k * d2 / scale)

    elif name == "cosine":
        profile = _cosine_profile()
        sups = (1.0, 1.0, 1.0)
        period = 2.0 * math.pi / k
        planar = True

        def heat_k(y, t):
            return math.exp(-k * k * t) * np.cos(k * (y[..., 0] - c[0]))

    elif name == "rational_bump":
        profile = _rational_profile()
        sups = (1.0, _RATIONAL_GRAD, 2.0)
        tail_radius = 1.0e4 / k
        outer_radius = 200.0 / k
    elif name == "compact_bump":
        k = dilation / radius
        profile = _compact_profile()
        grad_sup, hess_sup = _compact_sup_norms()
        sups = (1.0, grad_sup, hess_sup)
        length = 1.0 / k
        tail_radius = 2.0 / k
        outer_radius = 2.0 / k
    else:
        profile = _constant_profile()
        sups = (1.0, 0.0, 0.0)
        planar = True

        def heat_k(y, t):
            return np.ones(np.shape(y)[:-1])

    f, df, d2f = profile
    a = float(amplitude)

    def value(y):
        return a * f(k * (np.asarray(y, dtype=float) - c))

    def gradient(y):
        return a * k * df(k * (np.asarray(y, dtype=float) - c))

    def hessian(y):
        return a * k * k * d2f(k * (np.asarray(y, dtype=float) - c))

    heat = None
    if heat_k is not None:
        base_heat = heat_k

        def heat(y, t):
            return a * base_heat(np.asarray(y, dtype=float), t)

    if outer_radius is not None:
        outer_radius += float(np.linalg.norm(c))

    return TestFunction(
        name=name,
        n=n,
        value=value,
        gradient=gradient,
        hessian=hessian,
        sup_norm=abs(a) * sups[0],
        grad_sup_norm=abs(a) * k * sups[1],
        hess_sup_norm=abs(a) * k * k * sups[2],
        closed_form_heat=heat,
        center=c,
        length_scale=length,
        period=period,
        planar=planar,
        tail_radius=tail_radius + float(np.linalg.norm(c)),
        outer_radius=outer_radius,
        spec=spec,
    )


def heat_apply_closed_form(f: TestFunction, x: Any, t: float) -> float:
    """
    Closed-form heat semigroup image e^{t Delta} f (x).

    Args:
        f: Function with a known heat image (gaussian family, cosine, constant)
        x: Evaluation point
        t: Nonnegative time

    Returns:
        The heat image at x

    Raises:
        UnsupportedFunctionError: If f has no closed-form heat image
    """
    if f.closed_form_heat is None:
        raise UnsupportedFunctionError(f"{f.name} has no closed-form heat image")
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    return float(f.closed_form_heat(as_point(x, f.n), t))


def p_laplacian_1d(f: TestFunction, x: float, p: float) -> float:
    """
    Classical 1-D p-Laplacian (p-1) |f'(x)|^{p-2} f''(x).

    Args:
        f: One-dimensional test function
        x: Evaluation point
        p: Growth exponent

    Returns:
        Delta_p f (x)

    Raises:
        DegenerateGradientError: If p < 2 and f'(x) = 0
    """
    if f.n != 1:
        raise UnsupportedFunctionError("p_laplacian_1d needs a one-dimensional function")
    point = as_point(x, 1)
    d1 = float(f.gradient(point)[0])
    d2 = float(f.hessian(point)[0, 0])
    if p < 2.0 and d1 == 0.0:
        raise DegenerateGradientError(f"f'({x}) = 0 with p = {p} < 2")
    return (p - 1.0) * abs(d1) ** (p - 2.0) * d2


def constant_function(level: float, n: int = 1) -> TestFunction:
    """Shorthand for the constant catalog entry at the given level."""
    return catalog("constant", n=n, amplitude=level)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """
    Samples of a function on a full box of the lattice origin + h Z^n.

    Values at lattice points outside the box come from the extension function,
    or are zero when no extension is given.
    """

    origin: np.ndarray
    h: float
    values: np.ndarray
    extension: Optional[TestFunction] = None

    def __post_init__(self):
        if self.h <= 0.0:
            raise ValueError("lattice spacing must be positive")
        if self.values.ndim != self.origin.shape[0]:
            raise ValueError("values must form a full box of the lattice")

    @property
    def n(self) -> int:
        return self.origin.shape[0]

    @property
    def sup_norm(self) -> float:
        stored = float(np.max(np.abs(self.values))) if self.values.size else 0.0
        if self.extension is not None:
            return max(stored, self.extension.sup_norm)
        return stored

    @classmethod
    def sample(
        cls, f: TestFunction, center_index_point: Any, h: float, half_width: int
    ) -> Tuple["GridFunction", Tuple[int, ...]]:
        """
        Sample f on a box of 2*half_width+1 points per axis centered at a point.

        Args:
            f: Function to sample; also used as the extension rule
            center_index_point: Point that becomes a lattice point
            h: Lattice spacing
            half_width: Number of points on each side of the center

        Returns:
            The grid function and the lattice index of the center point
        """
        center = as_point(center_index_point, f.n)
        origin = center - half_width * h
        axis = np.arange(2 * half_width + 1)
        mesh = np.stack(np.meshgrid(*([axis] * f.n), indexing="ij"), axis=-1)
        values = f.value(origin + h * mesh)
        return cls(origin=origin, h=h, values=values, extension=f), (half_width,) * f.n

    def point(self, index: Any) -> np.ndarray:
        """Coordinates of lattice indices of shape (..., n)."""
        return self.origin + self.h * np.asarray(index, dtype=float)

    def at(self, index: Any) -> np.ndarray:
        """
        Values at integer lattice indices of shape (..., n).

        Indices outside the stored box use the extension rule.
        """
        idx = np.asarray(index, dtype=int)
        shape = np.array(self.values.shape)
        inside = np.all((idx >= 0) & (idx < shape), axis=-1)
        result = np.zeros(idx.shape[:-1])
        if np.any(inside):
            inner = idx[inside]
            result[inside] = self.values[tuple(inner.T)]
        outside = ~inside
        if np.any(outside) and self.extension is not None:
            result[outside] = self.extension.value(self.point(idx[outside]))
        return result
