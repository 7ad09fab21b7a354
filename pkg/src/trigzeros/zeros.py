"""Certified zero counting and the Kac counting functionals.

Zeros are isolated by interval bisection driven by global derivative bounds.
A cell ``[l, r]`` with centre ``c`` and width ``h`` is

* excluded when ``|f(c)| - h/2 * B1 > 0`` or, sharper,
  ``|f(c)| - h/2 * |f'(c)| - h^2/8 * B2 > 0``;
* monotone when ``|f'(c)| - h/2 * B2 > 0``, in which case it holds a zero
  exactly when ``f`` changes sign across it;
* otherwise split, down to width ``tol``, below which it is reported as
  ambiguous and the count is flagged uncertified.

``B_k`` bounds ``|f^{(k)}|`` on the whole interval.  Any object with
``eval(t, order)`` and ``deriv_sup_bound(order)`` can be counted;
:class:`~trigzeros.rtp.TrigPolynomial` and :class:`SmoothFunction` both qualify.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq

from .errors import HypothesisViolationError, InvalidArgumentError, NumericalFailureError
from .rtp import TrigPolynomial

__all__ = [
    "KacParams",
    "QuadSpec",
    "CountResult",
    "BatchCounts",
    "SmoothFunction",
    "h_delta_eps",
    "h_bar_delta_eps",
    "min_gap_A",
    "count_zeros",
    "count_zeros_batch",
    "kac_phi_delta",
    "kac_phi_delta_eps",
    "psi_bar",
    "DEFAULT_TOL",
    "MAX_DEPTH",
]

DEFAULT_TOL = 1e-9
MAX_DEPTH = 60
GAP_WIDTH = 1e-6
_MAX_CELLS = 2_000_000
_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class KacParams:
    delta: float
    eps: float = 1.0

    def __post_init__(self):
        for name in ("delta", "eps"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidArgumentError(f"{name} must be finite and positive, got {v!r}")


@dataclass(frozen=True)
class QuadSpec:
    """Gauss-Legendre rule: ``nodes`` per panel, panels no wider than ``max_panel``."""

    nodes: int = 16
    max_panel: float = 1.0 / 256


@dataclass(frozen=True)
class CountResult:
    count: int
    certified: bool
    min_abs_at_roots_gap: float
    refinement_depth: int


class SmoothFunction:
    """A deterministic test function given by its derivatives and their sup bounds.

    ``derivs[k]`` evaluates the k-th derivative (vectorised); ``bounds[k]``
    bounds its absolute value on the counting interval for k >= 1.  The third
    derivative is optional and only used to split integration pieces at
    critical points.
    """

    def __init__(self, derivs: Sequence[Callable], bounds: dict[int, float]):
        if len(derivs) < 2:
            raise InvalidArgumentError("need at least f and f'")
        self.derivs = list(derivs)
        self.bounds = {int(k): float(v) for k, v in bounds.items()}

    def eval(self, t, order: int = 0):
        if order >= len(self.derivs):
            raise InvalidArgumentError(f"derivative of order {order} not provided")
        t = np.asarray(t, dtype=np.float64)
        out = np.broadcast_to(np.asarray(self.derivs[order](t), dtype=np.float64), t.shape)
        return float(out) if out.ndim == 0 else np.array(out)

    def __call__(self, t):
        return self.eval(t, 0)

    def deriv_sup_bound(self, order: int) -> float:
        try:
            return self.bounds[order]
        except KeyError:
            raise InvalidArgumentError(f"no sup bound for derivative of order {order}") from None

    def scaled(self, factor: float) -> "SmoothFunction":
        return SmoothFunction(
            [(lambda d: (lambda t: factor * d(t)))(d) for d in self.derivs],
            {k: abs(factor) * v for k, v in self.bounds.items()},
        )


def h_delta_eps(u, p: KacParams):
    """Trapezoidal mollifier of ``1{|u| <= delta}``: 1 inside, 0 beyond ``delta + eps``."""
    a = np.abs(np.asarray(u, dtype=np.float64))
    out = np.clip(1.0 - (a - p.delta) / p.eps, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def h_bar_delta_eps(x, p: KacParams):
    """One-sided ramp: 1 for ``x <= delta``, 0 for ``x >= delta + eps``, linear between."""
    x = np.asarray(x, dtype=np.float64)
    out = np.clip((p.delta + p.eps - x) / p.eps, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def _check_interval(interval):
    a, b = (float(v) for v in interval)
    if not (0.0 <= a < b <= 1.0):
        raise InvalidArgumentError(f"interval must satisfy 0 <= a < b <= 1, got {interval!r}")
    return a, b


def _zero_threshold(f) -> float:
    """Values at or below this magnitude are indistinguishable from 0."""
    if isinstance(f, TrigPolynomial):
        return 4.0 * f.m * _EPS * f.deriv_sup_bound(0)
    return 0.0


def _bound(f, order) -> float | None:
    try:
        return float(f.deriv_sup_bound(order))
    except InvalidArgumentError:
        return None


@dataclass
class _Isolation:
    root_cells: np.ndarray        # (k, 2) brackets holding exactly one zero
    root_left_zero: np.ndarray    # bracket whose left end is itself the zero
    ambiguous: np.ndarray         # (j, 2) cells left undecided at tol
    ambiguous_sign: np.ndarray    # those among them with a sign change
    depth: int

    @property
    def count(self) -> int:
        return int(self.root_cells.shape[0] + self.ambiguous_sign.sum())

    @property
    def certified(self) -> bool:
        return self.ambiguous.shape[0] == 0


def _isolate(evaluate, b1: float, b2: float, l, r, gl, gr, tol: float) -> _Isolation:
    """Bisect the cells ``[l_i, r_i]`` until every zero of g is isolated.

    ``evaluate(t)`` returns ``(g(t), g'(t))`` for an array of times; ``b1``
    and ``b2`` bound ``|g'|`` and ``|g''|``.
    """
    l = np.asarray(l, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    gl = np.asarray(gl, dtype=np.float64)
    gr = np.asarray(gr, dtype=np.float64)
    roots, left_zero, amb, amb_sign = [], [], [], []
    depth = 0
    processed = 0
    while l.size:
        c = 0.5 * (l + r)
        gc, dgc = evaluate(c)
        if not (np.all(np.isfinite(gc)) and np.all(np.isfinite(dgc))):
            raise NumericalFailureError("non-finite function value during zero isolation")
        h = r - l
        agc = np.abs(gc)
        excl = (agc - 0.5 * h * b1 > 0.0) | (agc - 0.5 * h * np.abs(dgc) - 0.125 * h * h * b2 > 0.0)
        mono = ~excl & (np.abs(dgc) - 0.5 * h * b2 > 0.0)
        hit = mono & ((gl == 0.0) | (gl * gr < 0.0))
        if hit.any():
            roots.append(np.column_stack((l[hit], r[hit])))
            left_zero.append(gl[hit] == 0.0)
        todo = ~(excl | mono)
        tiny = todo & (h < tol)
        if tiny.any():
            amb.append(np.column_stack((l[tiny], r[tiny])))
            amb_sign.append((gl[tiny] == 0.0) | (gl[tiny] * gr[tiny] < 0.0))
        split = todo & ~tiny
        if not split.any():
            break
        depth += 1
        processed += int(split.sum())
        if depth > MAX_DEPTH or processed > _MAX_CELLS:
            raise NumericalFailureError(
                f"zero isolation did not terminate (depth {depth}, {processed} cells)")
        ls, rs, cs = l[split], r[split], c[split]
        gls, grs, gcs = gl[split], gr[split], gc[split]
        l = np.concatenate((ls, cs))
        r = np.concatenate((cs, rs))
        gl = np.concatenate((gls, gcs))
        gr = np.concatenate((gcs, grs))

    def cat(parts, width):
        if not parts:
            return np.empty((0, width)) if width else np.empty(0, dtype=bool)
        return np.concatenate(parts)

    return _Isolation(cat(roots, 2), cat(left_zero, 0), cat(amb, 2), cat(amb_sign, 0), depth)


def _evaluator(f, shift: float = 0.0, order: int = 0):
    def evaluate(t):
        return f.eval(t, order) - shift, f.eval(t, order + 1)
    return evaluate


def _check_tol(tol):
    if not (0.0 < tol <= 1e-3):
        raise InvalidArgumentError(f"tol must lie in (0, 1e-3], got {tol!r}")


def min_gap_A(f, interval=(0.0, 1.0), width: float = GAP_WIDTH) -> float:
    """Threshold ``min(|f(a)|, |f(b)|, 1/2 min_{(a,b)} (|f| + |f'|))``.

    The interior minimum is found by branch and bound: a cell of width h
    centred at c cannot go below ``g(c) - h/2 (B1 + B2)`` with
    ``g = |f| + |f'|``.  The returned value is the best sampled minimum; it
    exceeds the true one by at most ``width (B1 + B2) / 2``.
    """
    a, b = _check_interval(interval)
    b1, b2 = _bound(f, 1), _bound(f, 2)
    if b1 is None or b2 is None:
        raise InvalidArgumentError("min_gap_A needs sup bounds on f' and f''")
    lip = b1 + b2
    ends = np.array([a, b])
    fe, de = np.asarray(f.eval(ends, 0)), np.asarray(f.eval(ends, 1))
    if not (np.all(np.isfinite(fe)) and np.all(np.isfinite(de))):
        raise NumericalFailureError("non-finite function value at the interval ends")
    best = float((np.abs(fe) + np.abs(de)).min())
    l, r = np.array([a]), np.array([b])
    processed = 0
    while l.size:
        c = 0.5 * (l + r)
        g = np.abs(f.eval(c, 0)) + np.abs(f.eval(c, 1))
        if not np.all(np.isfinite(g)):
            raise NumericalFailureError("non-finite function value in min_gap_A")
        best = min(best, float(g.min()))
        h = r - l
        keep = (g - 0.5 * h * lip < best) & (h >= width)
        processed += int(keep.sum())
        if processed > _MAX_CELLS:
            raise NumericalFailureError("min_gap_A branch and bound exceeded its cell budget")
        l, r, c = l[keep], r[keep], c[keep]
        l, r = np.concatenate((l, c)), np.concatenate((c, r))
    return float(min(abs(fe[0]), abs(fe[1]), 0.5 * best))


def count_zeros(f, interval=(0.0, 1.0), tol: float = DEFAULT_TOL,
                with_gap: bool = True) -> CountResult:
    """Number of zeros of ``f`` on ``[a, b]``.

    Raises :class:`HypothesisViolationError` if ``f`` vanishes at an endpoint.
    When some cell of width ``tol`` cannot be decided, the count falls back to
    sign changes and ``certified`` is False.  ``min_abs_at_roots_gap`` holds
    :func:`min_gap_A` (NaN when ``with_gap`` is False).
    """
    a, b = _check_interval(interval)
    _check_tol(tol)
    fa, fb = (float(v) for v in np.asarray(f.eval(np.array([a, b]), 0)))
    thr = _zero_threshold(f)
    if abs(fa) <= thr or abs(fb) <= thr:
        raise HypothesisViolationError(f"f vanishes at an endpoint of [{a}, {b}]")
    b1, b2 = _bound(f, 1), _bound(f, 2)
    if b1 is None or b2 is None:
        raise InvalidArgumentError("count_zeros needs sup bounds on f' and f''")
    iso = _isolate(_evaluator(f), b1, b2, [a], [b], [fa], [fb], tol)
    gap = min_gap_A(f, (a, b)) if with_gap else math.nan
    return CountResult(iso.count, iso.certified, gap, iso.depth)


@dataclass(frozen=True)
class BatchCounts:
    """Per-polynomial results of :func:`count_zeros_batch`.

    ``violation`` marks polynomials vanishing at an endpoint; their count is
    meaningless (set to -1).
    """

    counts: np.ndarray
    certified: np.ndarray
    violation: np.ndarray
    depth: np.ndarray


def _grid_cells(m: int) -> int:
    # cells scale with the derivative bounds, which grow like sqrt(m)
    target = max(16.0, 2.0 * math.sqrt(m))
    return 1 << math.ceil(math.log2(target))


@lru_cache(maxsize=16)
def _trig_table(m: int, a: float, b: float, cells: int) -> tuple[np.ndarray, np.ndarray]:
    t = a + (b - a) * np.arange(2 * cells + 1) / (2 * cells)
    t[-1] = b
    ph = np.outer(t, math.pi * np.arange(m) / m)
    table = np.hstack((np.cos(ph), np.sin(ph)))
    table.setflags(write=False)
    t.setflags(write=False)
    return table, t


def count_zeros_batch(coeffs, interval=(0.0, 1.0), tol: float = DEFAULT_TOL) -> BatchCounts:
    """Count zeros for a stack of polynomials of equal degree, shape ``(n, m, 2)``.

    Values and derivatives on a shared grid come from a single matrix
    product; only the grid cells the tests cannot decide are refined, one
    polynomial at a time, with the same rules as :func:`count_zeros`.
    """
    a, b = _check_interval(interval)
    _check_tol(tol)
    c = np.asarray(coeffs, dtype=np.float64)
    if c.ndim != 3 or c.shape[2] != 2 or c.shape[1] < 1:
        raise InvalidArgumentError("coeffs must have shape (n, m, 2)")
    n, m, _ = c.shape
    cells = _grid_cells(m)
    table, grid = _trig_table(m, a, b, cells)
    w = math.pi * np.arange(m) / m
    x, y = c[:, :, 0].T, c[:, :, 1].T
    rhs = np.vstack((
        np.hstack((x, w[:, None] * y)),
        np.hstack((y, -w[:, None] * x)),
    )) / math.sqrt(m)
    out = table @ rhs
    vals, ders = out[:, :n], out[:, n:]
    absum = np.abs(c).sum(axis=2) / math.sqrt(m)
    b0 = absum.sum(axis=1)
    b1 = absum @ w
    b2 = absum @ (w * w)
    thr = 4.0 * m * _EPS * b0
    violation = (np.abs(vals[0]) <= thr) | (np.abs(vals[-1]) <= thr)

    gl, gc, gr, dgc = vals[0:-1:2], vals[1::2], vals[2::2], ders[1::2]
    h = (b - a) / cells
    agc = np.abs(gc)
    excl = (agc - 0.5 * h * b1 > 0.0) | (agc - 0.5 * h * np.abs(dgc) - 0.125 * h * h * b2 > 0.0)
    mono = ~excl & (np.abs(dgc) - 0.5 * h * b2 > 0.0)
    hit = mono & ((gl == 0.0) | (gl * gr < 0.0))
    counts = hit.sum(axis=0).astype(np.int64)
    certified = np.ones(n, dtype=bool)
    depth = np.zeros(n, dtype=np.int64)
    todo = ~(excl | mono)
    left = grid[0:-1:2]
    for j in np.flatnonzero(todo.any(axis=0) & ~violation):
        k = todo[:, j]
        poly = TrigPolynomial(c[j])
        # the two halves of each grid cell have known endpoint values
        l = np.concatenate((left[k], grid[1::2][k]))
        r = np.concatenate((grid[1::2][k], grid[2::2][k]))
        fl = np.concatenate((gl[k, j], gc[k, j]))
        fr = np.concatenate((gc[k, j], gr[k, j]))
        iso = _isolate(_evaluator(poly), b1[j], b2[j], l, r, fl, fr, tol)
        counts[j] += iso.count
        certified[j] = iso.certified
        depth[j] = iso.depth + 1
    counts[violation] = -1
    certified[violation] = False
    return BatchCounts(counts, certified, violation, depth)


# ---------------------------------------------------------------- Kac functionals

def _level_crossings(f, level: float, a: float, b: float, tol: float) -> np.ndarray:
    """Points of ``(a, b)`` where ``f = level``, located to near machine precision."""
    b1, b2 = _bound(f, 1), _bound(f, 2)
    if b1 is None or b2 is None:
        raise InvalidArgumentError("need sup bounds on f' and f''")
    ga, gb = (float(v) - level for v in np.asarray(f.eval(np.array([a, b]), 0)))
    iso = _isolate(_evaluator(f, level), b1, b2, [a], [b], [ga], [gb], tol)
    return _refine(lambda t: f.eval(t, 0) - level, iso)


def _critical_points(f, a: float, b: float, tol: float) -> np.ndarray:
    b2, b3 = _bound(f, 2), _bound(f, 3)
    if not b2 or b3 is None:
        return np.empty(0)
    try:
        da, db = (float(v) for v in np.asarray(f.eval(np.array([a, b]), 1)))
    except InvalidArgumentError:
        return np.empty(0)
    iso = _isolate(_evaluator(f, 0.0, 1), b2, b3, [a], [b], [da], [db], tol)
    return _refine(lambda t: f.eval(t, 1), iso)


def _refine(g, iso: _Isolation) -> np.ndarray:
    pts = []
    for (l, r), lz in zip(iso.root_cells, iso.root_left_zero):
        if lz:
            pts.append(l)
            continue
        gl, gr = float(g(l)), float(g(r))
        if gl == 0.0 or gr == 0.0 or gl * gr > 0.0:
            # the bracketing sign sat at roundoff level; the zero is that endpoint
            pts.append(l if abs(gl) <= abs(gr) else r)
            continue
        try:
            pts.append(brentq(lambda t: float(g(t)), l, r, xtol=1e-15, rtol=4 * _EPS))
        except (ValueError, RuntimeError) as exc:
            raise NumericalFailureError(f"crossing refinement failed on [{l}, {r}]") from exc
    # tangencies and unresolved cells only split the integration range
    pts.extend(0.5 * (iso.ambiguous[:, 0] + iso.ambiguous[:, 1]))
    return np.asarray(pts, dtype=np.float64)


@lru_cache(maxsize=8)
def _gl(n: int):
    return leggauss(n)


def _piecewise_integral(f, a, b, breaks, integrand, active, quad: QuadSpec) -> float:
    """Sum Gauss-Legendre integrals of ``integrand(f, f')`` over the smooth pieces.

    Pieces run between consecutive ``breaks``; a piece is skipped when
    ``active(f(midpoint))`` is False.
    """
    pts = np.unique(np.clip(np.concatenate(([a, b], breaks)), a, b))
    lo, hi = pts[:-1], pts[1:]
    keep = hi - lo > 0.0
    lo, hi = lo[keep], hi[keep]
    if lo.size == 0:
        return 0.0
    on = active(np.asarray(f.eval(0.5 * (lo + hi), 0)))
    lo, hi = lo[on], hi[on]
    if lo.size == 0:
        return 0.0
    npan = np.maximum(1, np.ceil((hi - lo) / quad.max_panel - 1e-12)).astype(np.int64)
    piece = np.repeat(np.arange(lo.size), npan)
    offs = np.arange(npan.sum()) - np.repeat(np.cumsum(npan) - npan, npan)
    width = (hi - lo) / npan
    p_lo = lo[piece] + offs * width[piece]
    half = 0.5 * width[piece]
    x, wts = _gl(quad.nodes)
    nodes = ((p_lo + half)[:, None] + half[:, None] * x).ravel()
    weights = (half[:, None] * wts).ravel()
    vals = integrand(np.asarray(f.eval(nodes, 0)), np.asarray(f.eval(nodes, 1)))
    if not np.all(np.isfinite(vals)):
        raise NumericalFailureError("non-finite integrand in Kac functional")
    return float(np.dot(weights, vals))


def kac_phi_delta(f, interval=(0.0, 1.0), delta: float = 0.1, quad: QuadSpec = QuadSpec(),
                  tol: float = DEFAULT_TOL) -> float:
    """``(1/2 delta) int_a^b |f'(u)| 1{|f(u)| <= delta} du``.

    The crossings of ``|f| = delta`` and the critical points of ``f`` are
    located first, so the integrand is smooth on every piece that is
    integrated.
    """
    if not (math.isfinite(delta) and delta > 0):
        raise InvalidArgumentError("delta must be finite and positive")
    a, b = _check_interval(interval)
    breaks = np.concatenate((
        _level_crossings(f, delta, a, b, tol),
        _level_crossings(f, -delta, a, b, tol),
        _critical_points(f, a, b, tol),
    ))
    total = _piecewise_integral(
        f, a, b, breaks,
        integrand=lambda fv, dv: np.abs(dv),
        active=lambda fm: np.abs(fm) <= delta,
        quad=quad,
    )
    return total / (2.0 * delta)


def kac_phi_delta_eps(f, interval=(0.0, 1.0), p: KacParams = KacParams(0.1, 0.05),
                      quad: QuadSpec = QuadSpec(), tol: float = DEFAULT_TOL) -> float:
    """``(1/2 delta) int_a^b |f'(u)| H_{delta,eps}(f(u)) du`` with the trapezoidal mollifier."""
    a, b = _check_interval(interval)
    outer = p.delta + p.eps
    breaks = np.concatenate([
        _level_crossings(f, lvl, a, b, tol) for lvl in (p.delta, -p.delta, outer, -outer)
    ] + [_critical_points(f, a, b, tol)])
    total = _piecewise_integral(
        f, a, b, breaks,
        integrand=lambda fv, dv: np.abs(dv) * h_delta_eps(fv, p),
        active=lambda fm: np.abs(fm) < outer,
        quad=quad,
    )
    return total / (2.0 * p.delta)


def psi_bar(f, interval=(0.0, 1.0), p: KacParams = KacParams(0.1, 0.1)) -> float:
    """``H_bar_{delta,eps}`` applied to the threshold :func:`min_gap_A` of ``f``."""
    return float(h_bar_delta_eps(min_gap_A(f, interval), p))
