"""Log-log regression of distance against degree."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InsufficientDataError
from .results import ResultTable


@dataclass(frozen=True)
class RateFit:
    slope: float
    slope_ci: tuple[float, float]
    r_squared: float
    intercept: float
    n_points: int

    def as_dict(self) -> dict:
        return {
            "slope": self.slope,
            "slope_ci": list(self.slope_ci),
            "r_squared": self.r_squared,
            "intercept": self.intercept,
            "n_points": self.n_points,
        }


def _ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    xm, ym = x.mean(), y.mean()
    sxx = float(np.dot(x - xm, x - xm))
    slope = float(np.dot(x - xm, y - ym) / sxx)
    intercept = float(ym - slope * xm)
    resid = y - (intercept + slope * x)
    ss_tot = float(np.dot(y - ym, y - ym))
    ss_res = float(np.dot(resid, resid))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return slope, intercept, r2


def fit_rate(table: ResultTable, law: str | None = None, level: float = 0.95) -> RateFit:
    """OLS fit of ``log value`` on ``log m``.

    Rows with nonpositive values are dropped.  When the table carries
    bootstrap replicates for every usable row, replicate ``b`` of each row is
    refitted to give a percentile interval for the slope; otherwise the
    interval is NaN.
    """
    rows = table.for_law(law) if law is not None else list(table.rows)
    usable = [r for r in rows if r.value > 0 and math.isfinite(r.value) and r.m > 0]
    if len(usable) < 3 or len({r.m for r in usable}) < 2:
        raise InsufficientDataError(f"need at least 3 rows with positive values, got {len(usable)}")
    x = np.log([float(r.m) for r in usable])
    y = np.log([r.value for r in usable])
    slope, intercept, r2 = _ols(x, y)

    ci = (math.nan, math.nan)
    reps = [table.replicates.get((r.m, r.law)) for r in usable]
    if all(rp is not None for rp in reps):
        mat = np.vstack(reps)
        slopes = []
        for b in range(mat.shape[1]):
            col = mat[:, b]
            ok = col > 0
            if ok.sum() >= 3 and len(set(x[ok])) >= 2:
                slopes.append(_ols(x[ok], np.log(col[ok]))[0])
        if slopes:
            lo, hi = np.quantile(slopes, [(1 - level) / 2, (1 + level) / 2])
            ci = (float(lo), float(hi))
    return RateFit(slope, ci, r2, intercept, len(usable))
