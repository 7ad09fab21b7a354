"""The experiment kinds behind the command-line subcommands."""
from __future__ import annotations

import logging
import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from ..coefficients import SeedSpec, derive_seed, make_rng, sample_pairs
from ..errors import InsufficientDataError, InvalidArgumentError
from ..metrics import ZeroCountSample, bootstrap_ci
from ..rtp import PathPL, TrigPolynomial, build_partial_sum, holder_seminorm, theta, theta_m
from .config import ExperimentConfig
from .engine import REFERENCE_LABEL, SampleStats, simulate_counts, simulate_reference
from .rates import fit_rate
from .results import ResultRow, ResultTable

log = logging.getLogger(__name__)

THETA_GRID = 1024
WALK_STEPS = 4096
HOLDER_ALPHA = 1.0 / 3.0


@dataclass
class ZeroCountLawResult:
    samples: dict[tuple[str, int], ZeroCountSample]
    reference: ZeroCountSample
    stats: dict[str, SampleStats]
    table: ResultTable = field(default_factory=ResultTable)


def _histogram(sample: ZeroCountSample) -> dict:
    vals, freq = np.unique(sample.counts, return_counts=True)
    return {int(v): int(f) for v, f in zip(vals, freq)}


def _key(law, m) -> str:
    return f"{law}:m={m}"


def _distance_row(sample: ZeroCountSample, reference: ZeroCountSample, cfg: ExperimentConfig,
                  law: str, m: int, elapsed_ms: float, table: ResultTable) -> None:
    t0 = time.perf_counter()
    seed = SeedSpec(derive_seed(cfg.master_seed, "bootstrap", law, m))
    est = bootstrap_ci(sample, reference, cfg.metric, cfg.bootstrap_B, 0.95, seed)
    wall = elapsed_ms + (time.perf_counter() - t0) * 1e3
    table.append(ResultRow(m, law, cfg.metric, est.value, est.ci_low, est.ci_high,
                           sample.n, sample.mean, sample.se, wall), est.replicates)


def _collect(cfg: ExperimentConfig, threads, samples=None, reference=None):
    stats: dict[str, SampleStats] = {}
    if reference is None:
        reference, st = simulate_reference(cfg.surrogate_M, cfg.n_reps, cfg.master_seed,
                                           cfg.interval, threads)
        stats[_key(REFERENCE_LABEL, cfg.surrogate_M)] = st
    out, times = {}, {}
    for law in cfg.laws:
        for m in cfg.m_values:
            if samples is not None and (law, m) in samples:
                out[(law, m)], times[(law, m)] = samples[(law, m)], 0.0
                continue
            s, st = simulate_counts(law, m, cfg.n_reps, cfg.master_seed, cfg.interval,
                                    threads, delta=cfg.delta, eps=cfg.eps)
            out[(law, m)], times[(law, m)] = s, st.wall_ms
            stats[_key(law, m)] = st
    return out, times, reference, stats


def _meta(cfg, samples, reference, stats) -> dict:
    return {
        "config": cfg.to_dict(),
        "histograms": {**{_key(l, m): _histogram(s) for (l, m), s in samples.items()},
                       _key(REFERENCE_LABEL, cfg.surrogate_M): _histogram(reference)},
        "sample_stats": {k: v.as_dict() for k, v in stats.items()},
    }


def run_zero_count_law(cfg: ExperimentConfig, threads: int | None = None) -> ZeroCountLawResult:
    """Zero-count samples for every (law, m) plus the surrogate reference.

    Each table row reports the configured distance to the reference sample
    with a bootstrap interval, and the mean count with its standard error.
    """
    samples, times, reference, stats = _collect(cfg, threads)
    table = ResultTable()
    ref_stats = stats[_key(REFERENCE_LABEL, cfg.surrogate_M)]
    table.append(ResultRow(cfg.surrogate_M, REFERENCE_LABEL, cfg.metric, 0.0, 0.0, 0.0,
                           reference.n, reference.mean, reference.se, ref_stats.wall_ms))
    for (law, m), s in samples.items():
        _distance_row(s, reference, cfg, law, m, times[(law, m)], table)
    table.meta = _meta(cfg, samples, reference, stats)
    return ZeroCountLawResult(samples, reference, stats, table)


def run_rate_curve(cfg: ExperimentConfig, threads: int | None = None,
                   samples: dict | None = None,
                   reference: ZeroCountSample | None = None) -> ResultTable:
    """Distance from each (law, m) sample to the shared reference, with fitted slopes.

    ``samples`` and ``reference`` may be injected to bypass simulation.  A
    law whose distances cannot be fitted gets a NaN slope and a warning.
    """
    if any(b <= a for a, b in zip(cfg.m_values, cfg.m_values[1:])):
        raise InvalidArgumentError("m_values must be strictly increasing for a rate curve")
    got, times, reference, stats = _collect(cfg, threads, samples, reference)
    table = ResultTable()
    for law in cfg.laws:
        for m in cfg.m_values:
            _distance_row(got[(law, m)], reference, cfg, law, m, times[(law, m)], table)
    fits = {}
    for law in cfg.laws:
        try:
            fits[law] = fit_rate(table, law).as_dict()
        except InsufficientDataError as exc:
            warnings.warn(f"rate fit for {law} undefined: {exc}", RuntimeWarning, stacklevel=2)
            fits[law] = {"slope": math.nan, "slope_ci": [math.nan, math.nan],
                         "r_squared": math.nan, "intercept": math.nan, "n_points": 0}
    table.meta = _meta(cfg, got, reference, stats)
    table.meta["fits"] = fits
    return table


def _walk_path(seed: int) -> PathPL:
    steps = make_rng(SeedSpec(seed)).standard_normal((WALK_STEPS, 2))
    inc = (steps[:, 0] + 1j * steps[:, 1]) / math.sqrt(WALK_STEPS)
    return PathPL(np.arange(WALK_STEPS + 1) / WALK_STEPS, np.concatenate(([0j], np.cumsum(inc))))


def run_theta_convergence(cfg: ExperimentConfig, threads: int | None = None) -> ResultTable:
    """Sup-grid distance between ``Theta_m(f)`` and ``Theta(f)`` for fixed test paths.

    Paths: the smooth ``u + i u^2``, a constant, and a 4096-step Gaussian random
    walk (``m`` must divide 4096 for the walk).  A fourth family records the
    error of the identity ``Theta_m(S^m) = X_m`` on Gaussian coefficients.
    """
    t = np.linspace(0.0, 1.0, THETA_GRID)
    smooth = lambda u: u + 1j * u * u  # noqa: E731
    const = lambda u: np.full(np.shape(u), 1.0 + 2.0j)  # noqa: E731
    walk = _walk_path(derive_seed(cfg.master_seed, "walk"))
    targets = {
        "smooth:u+iu^2": (smooth, theta(smooth, t, quad_n=256)),
        "constant": (const, theta(const, t, quad_n=16)),
        f"rough:walk{WALK_STEPS}": (walk, theta(walk, t)),
    }
    table = ResultTable()
    for m in cfg.m_values:
        for label, (path, ref) in targets.items():
            if isinstance(path, PathPL) and WALK_STEPS % m:
                log.info("skipping %s at m=%d: knots do not contain k/m", label, m)
                continue
            t0 = time.perf_counter()
            err = float(np.max(np.abs(theta_m(path, m, t) - ref)))
            table.append(ResultRow(m, label, "theta_sup_err", err, n_reps=1,
                                   wall_ms=(time.perf_counter() - t0) * 1e3))
        t0 = time.perf_counter()
        c = sample_pairs("gaussian", m, SeedSpec(derive_seed(cfg.master_seed, "identity", m)))
        err = float(np.max(np.abs(theta_m(build_partial_sum(c), m, t) - TrigPolynomial(c).eval(t))))
        table.append(ResultRow(m, "partial_sum_identity", "theta_sup_err", err, n_reps=1,
                               wall_ms=(time.perf_counter() - t0) * 1e3))
    table.meta = {
        "config": cfg.to_dict(),
        "grid_points": THETA_GRID,
        "walk_holder_seminorm": {"alpha": HOLDER_ALPHA, "value": holder_seminorm(walk, HOLDER_ALPHA)},
    }
    return table
