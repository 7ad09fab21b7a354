"""Seeded Monte Carlo engine producing zero-count samples.

Replication ``j`` of a (law, m) sample draws its coefficients from stream
``SeedSpec(derive_seed(master_seed, law, m), j)``.  Replications are grouped
into batches of fixed size, so batch contents never depend on the number of
worker threads and results are identical for any ``threads``.
"""
from __future__ import annotations

import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..coefficients import derive_seed, get_law, sample_pairs_batch
from ..errors import HypothesisViolationError
from ..metrics import ZeroCountSample
from ..rtp import TrigPolynomial
from ..zeros import DEFAULT_TOL, KacParams, count_zeros, count_zeros_batch, kac_phi_delta, kac_phi_delta_eps

log = logging.getLogger(__name__)

BATCH = 256
ENDPOINT_SHIFT = 1e-9
REFERENCE_LABEL = "G-surrogate"


@dataclass
class SampleStats:
    n_requested: int
    n_used: int = 0
    n_perturbed: int = 0
    n_excluded_violation: int = 0
    n_excluded_uncertified: int = 0
    n_retried_uncertified: int = 0
    wall_ms: float = 0.0
    kac: dict = field(default_factory=dict)

    @property
    def flag_rate(self) -> float:
        bad = self.n_excluded_violation + self.n_excluded_uncertified
        return bad / self.n_requested if self.n_requested else 0.0

    def as_dict(self) -> dict:
        return {
            "n_requested": self.n_requested,
            "n_used": self.n_used,
            "n_perturbed": self.n_perturbed,
            "n_excluded_violation": self.n_excluded_violation,
            "n_excluded_uncertified": self.n_excluded_uncertified,
            "n_retried_uncertified": self.n_retried_uncertified,
            "flag_rate": self.flag_rate,
            "kac_functional": self.kac,
        }


def default_threads() -> int:
    return os.cpu_count() or 1


def sample_seed(master_seed: int, label: str, m: int) -> int:
    return derive_seed(master_seed, label, m)


def _recount(poly: TrigPolynomial, interval, tol):
    """Single-polynomial fallback: returns (count or None, perturbed, reason)."""
    a, b = interval
    perturbed = False
    try:
        res = count_zeros(poly, (a, b), tol, with_gap=False)
    except HypothesisViolationError:
        perturbed = True
        a, b = a + ENDPOINT_SHIFT, b - ENDPOINT_SHIFT
        log.info("endpoint zero: retrying on [%.10g, %.10g]", a, b)
        try:
            res = count_zeros(poly, (a, b), tol, with_gap=False)
        except HypothesisViolationError:
            return None, perturbed, "violation", False
    retried = False
    if not res.certified:
        retried = True
        res = count_zeros(poly, (a, b), tol / 100.0, with_gap=False)
        if not res.certified:
            return None, perturbed, "uncertified", retried
    return res.count, perturbed, None, retried


def _run_batch(law_name, m, seed, idx, interval, tol, kac):
    coeffs = sample_pairs_batch(law_name, m, seed, idx)
    bc = count_zeros_batch(coeffs, interval, tol)
    counts = bc.counts.copy()
    keep = np.ones(len(idx), dtype=bool)
    tally = {"perturbed": 0, "violation": 0, "uncertified": 0, "retried": 0}
    for j in np.flatnonzero(bc.violation | ~bc.certified):
        if not bc.violation[j]:
            tally["retried"] += 1
            res = count_zeros(TrigPolynomial(coeffs[j]), interval, tol / 100.0, with_gap=False)
            if res.certified:
                counts[j] = res.count
            else:
                keep[j] = False
                tally["uncertified"] += 1
            continue
        count, perturbed, reason, retried = _recount(TrigPolynomial(coeffs[j]), interval, tol)
        tally["perturbed"] += int(perturbed)
        tally["retried"] += int(retried)
        if reason is None:
            counts[j] = count
        else:
            keep[j] = False
            tally[reason] += 1
    phi = None
    if kac is not None:
        phi = np.full(len(idx), np.nan)
        for j in np.flatnonzero(keep):
            poly = TrigPolynomial(coeffs[j])
            if isinstance(kac, KacParams):
                phi[j] = kac_phi_delta_eps(poly, interval, kac)
            else:
                phi[j] = kac_phi_delta(poly, interval, kac)
    return counts, keep, tally, phi


def simulate_counts(law: str, m: int, n_reps: int, master_seed: int,
                    interval=(0.0, 1.0), threads: int | None = None,
                    tol: float = DEFAULT_TOL, label: str | None = None,
                    delta: float | None = None, eps: float | None = None,
                    ) -> tuple[ZeroCountSample, SampleStats]:
    """Zero counts of ``n_reps`` independent degree-``m`` polynomials.

    Endpoint zeros trigger one retry on the interval shrunk by 1e-9 at both
    ends; counts still uncertified at ``tol / 100`` are dropped.  Both events
    are tallied in the returned stats.  With ``delta`` (and optionally ``eps``)
    the smoothed Kac functional is also evaluated on every kept polynomial.
    """
    law_name = get_law(law).name
    label = label or law_name
    seed = sample_seed(master_seed, label, m)
    threads = threads or default_threads()
    kac = None
    if delta is not None:
        kac = KacParams(delta, eps) if eps is not None else float(delta)
    t0 = time.perf_counter()
    chunks = [range(i, min(i + BATCH, n_reps)) for i in range(0, n_reps, BATCH)]

    def work(idx):
        return _run_batch(law_name, m, seed, idx, tuple(interval), tol, kac)

    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, chunks))
    else:
        parts = [work(c) for c in chunks]

    counts = np.concatenate([p[0] for p in parts])
    keep = np.concatenate([p[1] for p in parts])
    stats = SampleStats(n_requested=n_reps)
    for p in parts:
        stats.n_perturbed += p[2]["perturbed"]
        stats.n_excluded_violation += p[2]["violation"]
        stats.n_excluded_uncertified += p[2]["uncertified"]
        stats.n_retried_uncertified += p[2]["retried"]
    stats.n_used = int(keep.sum())
    if stats.flag_rate:
        log.warning("%s m=%d: %d of %d replications excluded", label, m,
                    n_reps - stats.n_used, n_reps)
    used = counts[keep]
    if kac is not None:
        phi = np.concatenate([p[3] for p in parts])[keep]
        stats.kac = {
            "delta": float(delta),
            "eps": None if eps is None else float(eps),
            "mean": float(phi.mean()) if phi.size else math.nan,
            "se": float(phi.std(ddof=1) / math.sqrt(phi.size)) if phi.size > 1 else math.nan,
            "frac_differs_from_count": float(np.mean(np.abs(phi - used) > 1e-6)) if phi.size else math.nan,
        }
    stats.wall_ms = (time.perf_counter() - t0) * 1e3
    meta = {
        "law": law_name if label == law_name else label,
        "m": f"{label}({m})" if label == REFERENCE_LABEL else m,
        "interval": list(interval),
        "master_seed": master_seed,
        "n": stats.n_used,
    }
    if used.size == 0:
        raise HypothesisViolationError(f"every replication of {label} m={m} was excluded")
    return ZeroCountSample(used, meta), stats


def simulate_reference(M: int, n_reps: int, master_seed: int, interval=(0.0, 1.0),
                       threads: int | None = None, tol: float = DEFAULT_TOL):
    """Zero counts of the Gaussian surrogate of degree ``M`` for the limit process."""
    return simulate_counts("gaussian", M, n_reps, master_seed, interval, threads, tol,
                           label=REFERENCE_LABEL)
