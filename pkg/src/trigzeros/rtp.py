"""Random trigonometric polynomials, partial-sum paths, and the maps Theta, Theta_m.

A degree-``m`` polynomial is

    X_m(t) = m^{-1/2} sum_{r<m} [x_r cos(pi r t / m) + y_r sin(pi r t / m)],

which we evaluate as ``Re sum_r c_r exp(-i w_r t)`` with ``c_r = (x_r + i y_r)/sqrt(m)``
and ``w_r = pi r / m``.  The partial-sum path ``S^m`` is the piecewise-linear
complex path with increments ``c_r`` at knots ``k/m``; ``theta_m`` applied to it
reproduces ``X_m`` exactly.
"""
from __future__ import annotations

import math
from typing import Callable, Union

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import CubicHermiteSpline

from .errors import InvalidArgumentError

__all__ = [
    "TrigPolynomial",
    "PathPL",
    "C1Path",
    "build_partial_sum",
    "deriv_sup_bound",
    "theta",
    "theta_m",
    "holder_seminorm",
    "lip11_battery",
    "sup_grid",
]

# cap on the number of complex exponentials materialised at once
_CHUNK_ELEMS = 1 << 21


def _as_times(t, check=True):
    arr = np.asarray(t, dtype=np.float64)
    if check and arr.size and (np.any(arr < 0.0) or np.any(arr > 1.0) or np.any(np.isnan(arr))):
        raise InvalidArgumentError("evaluation times must lie in [0, 1]")
    return arr


class TrigPolynomial:
    """Polynomial ``X_m`` with stored coefficient pairs, shape ``(m, 2)``."""

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=np.float64, copy=True)
        if c.ndim != 2 or c.shape[1] != 2 or c.shape[0] < 1:
            raise InvalidArgumentError("coefficients must have shape (m, 2) with m >= 1")
        c.setflags(write=False)
        self.coeffs = c
        m = c.shape[0]
        self.freqs = math.pi * np.arange(m) / m
        self._c = (c[:, 0] + 1j * c[:, 1]) / math.sqrt(m)
        self._bounds: dict[int, float] = {}

    @property
    def m(self) -> int:
        return self.coeffs.shape[0]

    def __repr__(self):
        return f"TrigPolynomial(m={self.m})"

    def eval(self, t, order: int = 0):
        """Value of the ``order``-th time derivative at ``t`` (scalar or array)."""
        if order not in (0, 1, 2, 3):
            raise InvalidArgumentError(f"order must be 0, 1, 2 or 3, got {order!r}")
        tt = _as_times(t)
        w = self._c * (-1j * self.freqs) ** order if order else self._c
        flat = tt.ravel()
        out = np.empty(flat.shape)
        step = max(1, _CHUNK_ELEMS // self.m)
        for i in range(0, flat.size, step):
            ph = np.exp(-1j * np.outer(flat[i:i + step], self.freqs))
            out[i:i + step] = (ph @ w).real
        if tt.ndim == 0:
            return float(out[0])
        return out.reshape(tt.shape)

    def __call__(self, t):
        return self.eval(t, 0)

    def deriv_sup_bound(self, order: int) -> float:
        if order not in self._bounds:
            self._bounds[order] = deriv_sup_bound(self, order)
        return self._bounds[order]

    def scaled(self, factor: float) -> "TrigPolynomial":
        return TrigPolynomial(self.coeffs * factor)


def deriv_sup_bound(poly: TrigPolynomial, order: int) -> float:
    """Uniform bound on ``|d^order X_m / dt^order|`` over [0, 1].

    Sums ``(pi r/m)^order (|x_r| + |y_r|)/sqrt(m)`` term by term; order 0
    gives a bound on ``|X_m|`` itself.
    """
    if order not in (0, 1, 2, 3):
        raise InvalidArgumentError(f"order must be in 0..3, got {order!r}")
    a = np.abs(poly.coeffs).sum(axis=1)
    w = poly.freqs ** order if order else np.ones(poly.m)
    return float(np.dot(w, a) / math.sqrt(poly.m))


class PathPL:
    """Piecewise-linear complex path on [0, 1] given by its knots."""

    def __init__(self, times, values):
        t = np.array(times, dtype=np.float64, copy=True)
        z = np.array(values, dtype=np.complex128, copy=True)
        if t.ndim != 1 or t.shape != z.shape or t.size < 2:
            raise InvalidArgumentError("knot times and values must be 1-D of equal length >= 2")
        if t[0] != 0.0 or t[-1] != 1.0:
            raise InvalidArgumentError("knot times must start at 0 and end at 1")
        if np.any(np.diff(t) <= 0.0):
            raise InvalidArgumentError("knot times must be strictly increasing")
        t.setflags(write=False)
        z.setflags(write=False)
        self.times = t
        self.values = z

    def __call__(self, u):
        u = np.asarray(u, dtype=np.float64)
        return np.interp(u, self.times, self.values.real) + 1j * np.interp(u, self.times, self.values.imag)

    def __add__(self, other):
        if not isinstance(other, PathPL) or not np.array_equal(self.times, other.times):
            return NotImplemented
        return PathPL(self.times, self.values + other.values)

    def __mul__(self, scalar):
        return PathPL(self.times, self.values * scalar)

    __rmul__ = __mul__


class C1Path:
    """Real C^1 path known through values and derivatives on a grid."""

    def __init__(self, grid, values, derivs):
        g = np.asarray(grid, dtype=np.float64)
        v = np.asarray(values, dtype=np.float64)
        d = np.asarray(derivs, dtype=np.float64)
        if g.ndim != 1 or g.shape != v.shape or g.shape != d.shape:
            raise InvalidArgumentError("grid, values and derivs must be 1-D arrays of equal length")
        if g.size and (np.any(np.diff(g) <= 0.0) or g[0] < 0.0 or g[-1] > 1.0):
            raise InvalidArgumentError("grid must be strictly increasing within [0, 1]")
        self.grid, self.values, self.derivs = g, v, d

    @classmethod
    def from_function(cls, f, df, n: int = 1024) -> "C1Path":
        g = np.linspace(0.0, 1.0, n)
        return cls(g, f(g), df(g))

    @classmethod
    def from_polynomial(cls, poly: TrigPolynomial, n: int = 1024) -> "C1Path":
        g = np.linspace(0.0, 1.0, n)
        return cls(g, poly.eval(g, 0), poly.eval(g, 1))

    def __call__(self, u):
        """Cubic Hermite interpolation between grid points."""
        u = np.asarray(u, dtype=np.float64)
        if self.grid.size == 1:
            return np.full(u.shape, self.values[0])
        return CubicHermiteSpline(self.grid, self.values, self.derivs)(u)


def build_partial_sum(coeffs) -> PathPL:
    """The partial-sum path ``S^m``: knots ``k/m`` with ``S^m(k/m) = sum_{j<k} (x_j + i y_j)/sqrt(m)``."""
    c = np.asarray(coeffs, dtype=np.float64)
    if c.ndim != 2 or c.shape[1] != 2 or c.shape[0] == 0:
        raise InvalidArgumentError("coefficients must be a non-empty sequence of pairs")
    m = c.shape[0]
    inc = (c[:, 0] + 1j * c[:, 1]) / math.sqrt(m)
    z = np.concatenate(([0.0 + 0.0j], np.cumsum(inc)))
    return PathPL(np.arange(m + 1) / m, z)


PathLike = Union[PathPL, C1Path, Callable]

_GL_NODES, _GL_WEIGHTS = leggauss(10)


def _sinc(x):
    # sin(x)/x with the removable singularity filled
    return np.sinc(x / math.pi)


def theta(path: PathLike, t, quad_n: int = 64):
    """The map ``Theta``: ``Re[e^{-i pi t} f(1) - f(0) + i pi t int_0^1 e^{-i pi t u} f(u) du]``.

    For a :class:`PathPL` the integral is done in closed form piece by piece:
    after integrating by parts the map equals ``Re int_0^1 e^{-i pi t u} f'(u) du``,
    and on a linear piece with increment ``dz`` over ``[u0, u1]`` this is
    ``dz * e^{-i pi t (u0+u1)/2} * sinc(pi t (u1-u0)/2)``.  Any other path is
    integrated with ``quad_n`` Gauss-Legendre panels of 10 nodes.
    """
    tt = _as_times(t)
    flat = np.atleast_1d(tt).ravel()
    if isinstance(path, PathPL):
        u = path.times
        dz = np.diff(path.values)
        mid = 0.5 * (u[1:] + u[:-1])
        half = 0.5 * np.diff(u)
        out = np.empty(flat.shape)
        step = max(1, _CHUNK_ELEMS // dz.size)
        for i in range(0, flat.size, step):
            ts = flat[i:i + step, None]
            kern = np.exp(-1j * math.pi * ts * mid) * _sinc(math.pi * ts * half)
            out[i:i + step] = (kern @ dz).real
    else:
        if quad_n < 1:
            raise InvalidArgumentError("quad_n must be positive")
        f = path
        edges = np.linspace(0.0, 1.0, quad_n + 1)
        h = 0.5 * np.diff(edges)
        nodes = (0.5 * (edges[1:] + edges[:-1])[:, None] + h[:, None] * _GL_NODES).ravel()
        weights = (h[:, None] * _GL_WEIGHTS).ravel()
        fu = np.asarray(f(nodes), dtype=np.complex128)
        f0 = complex(np.asarray(f(np.array([0.0])))[0])
        f1 = complex(np.asarray(f(np.array([1.0])))[0])
        ts = flat[:, None]
        integral = np.exp(-1j * math.pi * ts * nodes) @ (weights * fu)
        out = (np.exp(-1j * math.pi * flat) * f1 - f0 + 1j * math.pi * flat * integral).real
    if tt.ndim == 0:
        return float(out[0])
    return out.reshape(tt.shape)


def _values_at_grid(path: PathLike, m: int) -> np.ndarray:
    grid = np.arange(m + 1) / m
    if isinstance(path, PathPL):
        idx = np.searchsorted(path.times, grid)
        idx = np.clip(idx, 0, path.times.size - 1)
        lo = np.clip(idx - 1, 0, None)
        pick = np.where(np.abs(path.times[lo] - grid) < np.abs(path.times[idx] - grid), lo, idx)
        if np.any(np.abs(path.times[pick] - grid) > 1e-12):
            raise InvalidArgumentError(f"path knots do not include the grid k/{m}")
        return path.values[pick]
    return np.asarray(path(grid), dtype=np.complex128)


def theta_m(path: PathLike, m: int, t):
    """The discrete map ``Theta_m`` in summation-by-parts form.

    ``Re[a_{m-1} f(1) - f(0) - sum_{k=1}^{m-1} (a_k - a_{k-1}) f(k/m)]`` with
    ``a_k = exp(-i pi k t / m)``.  On ``build_partial_sum(c)`` this equals the
    polynomial with coefficients ``c``.  ``path`` may be a :class:`PathPL` whose
    knots contain every ``k/m``, or any callable evaluated at those points.
    """
    if int(m) != m or m < 1:
        raise InvalidArgumentError(f"m must be a positive integer, got {m!r}")
    m = int(m)
    tt = _as_times(t)
    flat = np.atleast_1d(tt).ravel()
    fk = _values_at_grid(path, m)
    k = np.arange(m)
    out = np.empty(flat.shape)
    step = max(1, _CHUNK_ELEMS // m)
    for i in range(0, flat.size, step):
        a = np.exp(-1j * math.pi * np.outer(flat[i:i + step], k) / m)
        s = a[:, m - 1] * fk[m] - fk[0] - (a[:, 1:] - a[:, :-1]) @ fk[1:m]
        out[i:i + step] = s.real
    if tt.ndim == 0:
        return float(out[0])
    return out.reshape(tt.shape)


def _grid_and_values(path):
    if isinstance(path, PathPL):
        return path.times, path.values
    if isinstance(path, C1Path):
        return path.grid, path.values
    raise InvalidArgumentError("expected a PathPL or C1Path")


def holder_seminorm(path, alpha: float) -> float:
    """Largest ``|f(u) - f(v)| / |u - v|^alpha`` over pairs of grid points.

    Only grid points are compared, so this is a lower bound on the true
    Hölder seminorm.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidArgumentError("alpha must lie in (0, 1)")
    u, f = _grid_and_values(path)
    n = u.size
    if n < 2:
        raise InvalidArgumentError("need at least two grid points")
    best = 0.0
    step = max(1, _CHUNK_ELEMS // n)
    for i in range(0, n - 1, step):
        rows = slice(i, min(i + step, n - 1))
        du = u[None, :] - u[rows, None]
        df = np.abs(f[None, :] - f[rows, None])
        mask = du > 0
        if mask.any():
            best = max(best, float((df[mask] / du[mask] ** alpha).max()))
    return best


def sup_grid(values) -> float:
    v = np.abs(np.asarray(values))
    return float(v.max()) if v.size else 0.0


def lip11_battery(path: C1Path) -> np.ndarray:
    """Evaluate four fixed test functionals on a sampled C^1 path.

    Returns ``[F1, F2, F3, F4]`` with F1 = ||f||_inf^2 / 2, F2 = ||f||_{inf,1}^2 / 2
    (where ||f||_{inf,1} = ||f'||_inf + |f(0)|), F3 = min(||f||_inf, 1) and
    F4 = f(1/2) min(|f(1/2)|, 1).  Sup norms are taken over the grid.
    """
    if not isinstance(path, C1Path):
        raise InvalidArgumentError("lip11_battery needs a C1Path")
    if path.grid.size == 0:
        return np.zeros(4)
    sup_f = sup_grid(path.values)
    f0 = float(path(np.array([0.0]))[0]) if path.grid[0] > 0.0 else float(path.values[0])
    norm1 = sup_grid(path.derivs) + abs(f0)
    half = float(path(np.array([0.5]))[0])
    return np.array([
        0.5 * sup_f**2,
        0.5 * norm1**2,
        min(sup_f, 1.0),
        half * min(abs(half), 1.0),
    ])
