"""Distances between empirical laws of integer zero counts."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .coefficients import SeedSpec, make_rng
from .errors import InvalidArgumentError, NumericalFailureError

__all__ = [
    "ZeroCountSample",
    "DistanceEstimate",
    "wasserstein1",
    "fortet_mourier",
    "bootstrap_ci",
    "bootstrap_replicates",
    "distance",
]

METRICS = ("W1", "FM")


@dataclass(frozen=True)
class ZeroCountSample:
    counts: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        c = np.asarray(self.counts)
        if c.ndim != 1 or c.size == 0:
            raise InvalidArgumentError("a zero-count sample needs at least one count")
        if c.dtype.kind not in "iu":
            if not np.all(c == np.round(c)):
                raise InvalidArgumentError("zero counts must be integers")
            c = c.astype(np.int64)
        if np.any(c < 0):
            raise InvalidArgumentError("zero counts must be nonnegative")
        object.__setattr__(self, "counts", c)

    @property
    def n(self) -> int:
        return int(self.counts.size)

    @property
    def mean(self) -> float:
        return float(self.counts.mean())

    @property
    def se(self) -> float:
        if self.n < 2:
            return float("nan")
        return float(self.counts.std(ddof=1) / np.sqrt(self.n))


@dataclass(frozen=True)
class DistanceEstimate:
    value: float
    ci_low: float
    ci_high: float
    bootstrap_B: int
    metric: str
    replicates: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def width(self) -> float:
        return self.ci_high - self.ci_low


def _values(s) -> np.ndarray:
    if isinstance(s, ZeroCountSample):
        return s.counts.astype(np.float64)
    v = np.asarray(s, dtype=np.float64).ravel()
    if v.size == 0:
        raise InvalidArgumentError("empty sample")
    return v


def wasserstein1(a, b) -> float:
    """Wasserstein-1 distance between two empirical measures on the line.

    Equal sizes pair sorted values; otherwise the quantile functions are
    compared on the merged grid of probability levels ``i/n_a`` and ``j/n_b``.
    """
    x, y = np.sort(_values(a)), np.sort(_values(b))
    if x.size == y.size:
        return float(np.abs(x - y).mean())
    na, nb = x.size, y.size
    levels = np.union1d(np.arange(1, na + 1) / na, np.arange(1, nb + 1) / nb)
    steps = np.diff(np.concatenate(([0.0], levels)))
    # quantile at level p is the ceil(p n)-th order statistic, evaluated inside each step
    mids = levels - 0.5 * steps
    qa = x[np.minimum(np.floor(mids * na).astype(np.int64), na - 1)]
    qb = y[np.minimum(np.floor(mids * nb).astype(np.int64), nb - 1)]
    return float(np.dot(steps, np.abs(qa - qb)))


def _fm_from_weights(support: np.ndarray, weight: np.ndarray) -> float:
    """``max sum f(u_i) w_i`` over ``|f| <= 1`` and ``|f(u_{i+1}) - f(u_i)| <= u_{i+1} - u_i``."""
    k = support.size
    if k == 1:
        return abs(float(weight[0]))
    gaps = np.diff(support)
    rows = np.zeros((2 * (k - 1), k))
    idx = np.arange(k - 1)
    rows[idx, idx + 1], rows[idx, idx] = 1.0, -1.0
    rows[k - 1 + idx, idx + 1], rows[k - 1 + idx, idx] = -1.0, 1.0
    res = linprog(-weight, A_ub=rows, b_ub=np.concatenate((gaps, gaps)),
                  bounds=[(-1.0, 1.0)] * k, method="highs-ds")
    if res.status != 0:
        raise NumericalFailureError(f"Fortet-Mourier linear program failed: {res.message}")
    return max(0.0, float(np.dot(res.x, weight)))


def _weights(x: np.ndarray, y: np.ndarray):
    support = np.union1d(x, y)
    wa = np.bincount(np.searchsorted(support, x), minlength=support.size) / x.size
    wb = np.bincount(np.searchsorted(support, y), minlength=support.size) / y.size
    return support, wa - wb


def fortet_mourier(a, b) -> float:
    """Fortet-Mourier distance: sup over 1-Lipschitz test functions bounded by 1.

    Solved exactly as a linear program over the values of the test function
    on the merged support; on the line the Lipschitz condition only needs to
    hold between neighbouring support points.
    """
    support, w = _weights(_values(a), _values(b))
    return _fm_from_weights(support, w)


def distance(a, b, metric: str) -> float:
    if metric == "W1":
        return wasserstein1(a, b)
    if metric == "FM":
        return fortet_mourier(a, b)
    raise InvalidArgumentError(f"metric must be one of {METRICS}, got {metric!r}")


def _hist(v: np.ndarray, support: np.ndarray) -> np.ndarray:
    return np.bincount(np.searchsorted(support, v), minlength=support.size).astype(np.float64)


def bootstrap_replicates(a, b, metric: str, B: int, seed: SeedSpec) -> np.ndarray:
    """Metric values on ``B`` independent with-replacement resamples of both samples.

    Resampling a count sample is a multinomial draw on its histogram, so each
    replicate costs only the size of the support.
    """
    if metric not in METRICS:
        raise InvalidArgumentError(f"metric must be one of {METRICS}, got {metric!r}")
    if int(B) != B or B < 1:
        raise InvalidArgumentError("B must be a positive integer")
    x, y = _values(a), _values(b)
    support = np.union1d(x, y)
    pa, pb = _hist(x, support) / x.size, _hist(y, support) / y.size
    rng = make_rng(seed)
    ra = rng.multinomial(x.size, pa, size=int(B)) / x.size
    rb = rng.multinomial(y.size, pb, size=int(B)) / y.size
    diff = ra - rb
    if metric == "W1":
        # W1 on the line is the integral of |F_a - F_b|
        cdf = np.cumsum(diff, axis=1)[:, :-1]
        return np.abs(cdf) @ np.diff(support)
    return np.array([_fm_from_weights(support, d) for d in diff])


def bootstrap_ci(a, b, metric: str = "W1", B: int = 200, level: float = 0.95,
                 seed: SeedSpec = SeedSpec(0)) -> DistanceEstimate:
    """Point estimate with a percentile bootstrap interval.

    The interval is widened, if needed, to contain the point estimate.
    """
    if int(B) != B or B < 100:
        raise InvalidArgumentError("B must be an integer >= 100")
    if not 0.0 < level < 1.0:
        raise InvalidArgumentError("level must lie in (0, 1)")
    value = distance(a, b, metric)
    reps = bootstrap_replicates(a, b, metric, B, seed)
    lo, hi = np.quantile(reps, [(1 - level) / 2, (1 + level) / 2])
    return DistanceEstimate(value, min(float(lo), value), max(float(hi), value), int(B), metric, reps)
