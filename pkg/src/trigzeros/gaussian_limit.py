"""The stationary Gaussian limit process G with covariance sinc(pi (t - s)).

Two samplers are provided.  :func:`sample_gp_cholesky` draws the exact joint
law of ``(G(t_i), G'(t_i))`` on a finite grid and exists to validate the
covariance structure.  :func:`sample_gp_surrogate` returns a high-degree
polynomial with Gaussian coefficients, which is what zero counting uses: only
a closed-form path can be evaluated densely enough to certify a count.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .coefficients import SeedSpec, make_rng, sample_pairs
from .errors import InvalidArgumentError, NumericalFailureError
from .rtp import TrigPolynomial

__all__ = [
    "CovPair",
    "CovDerivatives",
    "GPGridSample",
    "GAMMA_LIMIT",
    "sinc_cov",
    "cov_derivatives",
    "gamma_m",
    "covariance_matrix",
    "sample_gp_cholesky",
    "sample_gp_surrogate",
    "kac_rice_mean",
    "MAX_FACTOR_SIZE",
]

log = logging.getLogger(__name__)

PI = math.pi
MAX_FACTOR_SIZE = 4096
_JITTER_START = 1e-10
_JITTER_MAX = 1e-6
# below this |x| the closed forms lose digits to cancellation
_SERIES_CUTOFF = 0.1
_SERIES_TERMS = 10


@dataclass(frozen=True)
class CovPair:
    """Diagonal covariance of ``(value, derivative)`` at a single time."""

    var_value: float
    var_deriv: float


GAMMA_LIMIT = CovPair(1.0, PI**2 / 3.0)


@dataclass(frozen=True)
class CovDerivatives:
    r: float
    dr_dt: float
    dr_ds: float
    d2r_dsdt: float


def _series(x, deriv):
    # derivatives of sin(x)/x = sum_k (-1)^k x^{2k}/(2k+1)!
    out = np.zeros_like(x)
    for k in range(_SERIES_TERMS):
        p = 2 * k - deriv
        if p < 0:
            continue
        coef = (-1) ** k / math.factorial(2 * k + 1)
        coef *= math.perm(2 * k, deriv)
        out = out + coef * x**p
    return out


def _sinc_derivs(x, deriv):
    """``d^deriv/dx^deriv`` of ``sin(x)/x``, elementwise, for deriv in 0..2."""
    x = np.asarray(x, dtype=np.float64)
    small = np.abs(x) < _SERIES_CUTOFF
    xs = np.where(small, 1.0, x)
    s, c = np.sin(xs), np.cos(xs)
    if deriv == 0:
        big = s / xs
    elif deriv == 1:
        big = (xs * c - s) / xs**2
    else:
        big = ((2.0 - xs * xs) * s - 2.0 * xs * c) / xs**3
    return np.where(small, _series(x, deriv), big)


def sinc_cov(s, t):
    """Covariance ``r(s, t) = sin(pi (t - s)) / (pi (t - s))`` with ``r(t, t) = 1``."""
    tau = np.asarray(t, dtype=np.float64) - np.asarray(s, dtype=np.float64)
    out = _sinc_derivs(PI * tau, 0)
    return float(out) if out.ndim == 0 else out


def cov_derivatives(s: float, t: float) -> CovDerivatives:
    """Covariance of the value/derivative pairs at times ``s`` and ``t``.

    ``dr_dt = Cov(G(s), G'(t))``, ``dr_ds = Cov(G'(s), G(t))`` and
    ``d2r_dsdt = Cov(G'(s), G'(t))``.
    """
    tau = float(t) - float(s)
    x = PI * tau
    d1 = PI * float(_sinc_derivs(x, 1))
    d2 = PI**2 * float(_sinc_derivs(x, 2))
    return CovDerivatives(r=float(_sinc_derivs(x, 0)), dr_dt=d1, dr_ds=-d1, d2r_dsdt=-d2)


def gamma_m(m: int) -> CovPair:
    """Covariance of ``(X_m(t), X_m'(t))``; it does not depend on ``t``."""
    if int(m) != m or m < 1:
        raise InvalidArgumentError(f"m must be a positive integer, got {m!r}")
    if m == 1:
        raise InvalidArgumentError("m = 1 gives a constant polynomial with degenerate derivative")
    return CovPair(1.0, PI**2 * (2 * m - 1) * (m - 1) / (6.0 * m * m))


def covariance_matrix(grid, kernel=None) -> np.ndarray:
    """The ``2n x 2n`` covariance of ``(G(t_1..t_n), G'(t_1..t_n))``.

    ``kernel(x, deriv)`` returns the ``deriv``-th derivative of the correlation
    as a function of ``x = pi (t - s)``; it defaults to sinc and is only
    replaceable to support negative-control checks.
    """
    kern = _sinc_derivs if kernel is None else kernel
    g = np.asarray(grid, dtype=np.float64)
    x = PI * (g[None, :] - g[:, None])
    r = kern(x, 0)
    d1 = PI * kern(x, 1)
    d2 = PI**2 * kern(x, 2)
    return np.block([[r, d1], [-d1, -d2]])


@dataclass(frozen=True)
class GPGridSample:
    """Draws of ``(G, G')`` on ``grid``; arrays have shape ``(size, n)``."""

    grid: np.ndarray
    g_values: np.ndarray
    g_derivs: np.ndarray
    method: str
    jitter: float = 0.0


def _check_grid(grid):
    g = np.asarray(grid, dtype=np.float64)
    if g.ndim != 1 or g.size == 0:
        raise InvalidArgumentError("grid must be a non-empty 1-D array")
    if np.any(np.diff(g) <= 0.0) or g[0] < 0.0 or g[-1] > 1.0:
        raise InvalidArgumentError("grid must be strictly increasing within [0, 1]")
    if 2 * g.size > MAX_FACTOR_SIZE:
        raise InvalidArgumentError(f"grid too large: 2*{g.size} exceeds {MAX_FACTOR_SIZE}")
    return g


def factor_covariance(cov: np.ndarray, jitter: float = 0.0) -> tuple[np.ndarray, float]:
    """Cholesky factor of ``cov``, escalating diagonal jitter on failure.

    Tries ``jitter`` first, then ``1e-10, 1e-9, ..., 1e-6``.  Returns the
    factor and the jitter that was used.
    """
    if jitter < 0:
        raise InvalidArgumentError("jitter must be nonnegative")
    eye = np.eye(cov.shape[0])
    candidates = [jitter]
    j = max(_JITTER_START, jitter * 10.0 if jitter else _JITTER_START)
    while j <= _JITTER_MAX * (1 + 1e-12):
        candidates.append(j)
        j *= 10.0
    for j in candidates:
        try:
            L = np.linalg.cholesky(cov + j * eye if j else cov)
        except np.linalg.LinAlgError:
            continue
        if j != jitter:
            log.info("covariance factorised with jitter %.1e (n=%d)", j, cov.shape[0])
        return L, j
    cond = np.linalg.cond(cov)
    eig = np.linalg.eigvalsh(cov)
    raise NumericalFailureError(
        f"covariance factorisation failed at jitter {_JITTER_MAX:g}: "
        f"condition number {cond:.3e}, eigenvalue range [{eig[0]:.3e}, {eig[-1]:.3e}]"
    )


def sample_gp_cholesky(grid, seed: SeedSpec, jitter: float = 0.0, size: int = 1,
                       kernel=None) -> GPGridSample:
    """Exact draws of ``(G(t_i), G'(t_i))`` through a Cholesky factor."""
    g = _check_grid(grid)
    if int(size) != size or size < 1:
        raise InvalidArgumentError("size must be a positive integer")
    L, used = factor_covariance(covariance_matrix(g, kernel), jitter)
    z = make_rng(seed).standard_normal((int(size), 2 * g.size))
    draws = z @ L.T
    n = g.size
    return GPGridSample(g, draws[:, :n], draws[:, n:], "cholesky_exact", used)


def sample_gp_surrogate(M: int, seed: SeedSpec) -> TrigPolynomial:
    """A degree-``M`` polynomial with standard Gaussian coefficients.

    Approximates G in law; the zero-count law of the surrogate converges to
    that of G as ``M`` grows.
    """
    if int(M) != M or M < 2:
        raise InvalidArgumentError(f"M must be an integer >= 2, got {M!r}")
    return TrigPolynomial(sample_pairs("gaussian", int(M), seed))


def kac_rice_mean(cov: CovPair, interval_length: float) -> float:
    """Expected zero count ``L / pi * sqrt(var_deriv / var_value)`` of a stationary process."""
    if cov.var_value <= 0.0:
        raise InvalidArgumentError("var_value must be positive")
    if interval_length < 0.0:
        raise InvalidArgumentError("interval_length must be nonnegative")
    return interval_length / PI * math.sqrt(cov.var_deriv / cov.var_value)
