"""Self-check suites run by ``trigzeros validate``.

Every suite is seeded from the config's master seed and reports only
deterministic quantities, so two runs with the same seed print the same
bytes.  ``fault="sinc"`` swaps in a covariance kernel that drops the factor
pi, as a negative control for the covariance suite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import SimpleNamespace

import numpy as np

from ..coefficients import LAWS, SeedSpec, derive_seed, make_rng, moment_report, sample_pairs
from ..gaussian_limit import (GAMMA_LIMIT, PI, _sinc_derivs, gamma_m, kac_rice_mean,
                              sample_gp_cholesky)
from ..metrics import bootstrap_ci, fortet_mourier, wasserstein1
from ..rtp import TrigPolynomial, build_partial_sum, theta, theta_m
from ..zeros import (KacParams, SmoothFunction, count_zeros, count_zeros_batch, h_bar_delta_eps, h_delta_eps,
                     kac_phi_delta, kac_phi_delta_eps, min_gap_A)
from .config import ExperimentConfig
from .engine import simulate_counts

FAULTS = (None, "sinc")


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str


@dataclass
class ValidateReport:
    suites: list[SuiteResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def text(self) -> str:
        width = max(len(s.name) for s in self.suites)
        lines = [f"{'suite':<{width}}  result  detail"]
        for s in self.suites:
            lines.append(f"{s.name:<{width}}  {'PASS' if s.passed else 'FAIL':<6}  {s.detail}")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _seed(cfg, *labels) -> SeedSpec:
    return SeedSpec(derive_seed(cfg.master_seed, "validate", *labels))


def _suite_coefficients(cfg):
    worst = 0.0
    for name in sorted(LAWS):
        rep = moment_report(name, 20000, _seed(cfg, "moments", name))
        worst = max(worst, abs(rep.mean), abs(rep.variance - 1.0))
    return worst < 0.05, f"max moment deviation {worst:.3e} (limit 5e-2)"


def _suite_identity(cfg):
    worst = 0.0
    rng = make_rng(_seed(cfg, "identity-t"))
    for m in (2, 8, 64, 512):
        for j in range(5):
            c = sample_pairs("gaussian", m, _seed(cfg, "identity", m, j))
            t = rng.random(50)
            err = np.abs(theta_m(build_partial_sum(c), m, t) - TrigPolynomial(c).eval(t))
            worst = max(worst, float(np.max(err / (1.0 + np.abs(c).sum() / math.sqrt(m)))))
    return worst <= 1e-10, f"max scaled identity error {worst:.3e} (limit 1e-10)"


def _suite_theta(cfg):
    t = np.linspace(0.0, 1.0, 257)
    smooth = lambda u: u + 1j * u * u  # noqa: E731
    ref = theta(smooth, t, quad_n=256)
    errs = [float(np.max(np.abs(theta_m(smooth, m, t) - ref))) for m in (8, 16, 32, 64, 128, 256)]
    mono = all(b <= 1.1 * a for a, b in zip(errs, errs[1:]))
    const = lambda u: np.full(np.shape(u), 2.0 - 1.0j)  # noqa: E731
    cerr = float(np.max(np.abs(theta_m(const, 64, t))))
    ok = mono and errs[-1] < errs[0] / 4 and cerr <= 1e-12
    return ok, f"smooth errors {errs[0]:.3e} -> {errs[-1]:.3e}, constant {cerr:.1e}"


def _suite_covariance(cfg, fault):
    kernel = None
    if fault == "sinc":
        kernel = lambda x, d: _sinc_derivs(x / PI, d) / PI**d  # noqa: E731
    n = 20000
    s = sample_gp_cholesky([0.0, 0.3, 0.5], _seed(cfg, "cholesky"), size=n, kernel=kernel)
    v = float(np.mean(s.g_values[:, 1] ** 2))
    c = float(np.mean(s.g_values[:, 0] * s.g_values[:, 2]))
    d = float(np.mean(s.g_derivs[:, 1] ** 2))
    rel = 4.0 * math.sqrt(2.0 / n)
    ok = (abs(v - 1.0) <= rel and abs(c - 2.0 / PI) <= 4.0 / math.sqrt(n)
          and abs(d / (PI**2 / 3.0) - 1.0) <= rel)
    return ok, f"Var G(.3)={v:.4f} Cov(G0,G.5)={c:.4f} Var G'(.3)={d:.4f}"


def _suite_zeros(cfg):
    problems = []
    w = 2.0 * PI
    cos2 = SmoothFunction([lambda t: np.cos(w * t), lambda t: -w * np.sin(w * t),
                           lambda t: -w * w * np.cos(w * t)], {1: w, 2: w * w, 3: w**3})
    if count_zeros(cos2).count != 2:
        problems.append("cos(2 pi t) count")
    worst = 0.0
    for j in range(40):
        poly = TrigPolynomial(sample_pairs("gaussian", 2 + j % 19, _seed(cfg, "b2", j)))
        A = min_gap_A(poly)
        if A > 0:
            worst = max(worst, abs(kac_phi_delta(poly, delta=0.9 * A) - count_zeros(poly).count))
    if worst > 1e-6:
        problems.append(f"Kac exactness {worst:.2e}")
    batch = np.stack([sample_pairs("gaussian", 64, _seed(cfg, "batch", j)) for j in range(32)])
    single = [count_zeros(TrigPolynomial(c), with_gap=False).count for c in batch]
    if not np.array_equal(count_zeros_batch(batch).counts, single):
        problems.append("batch/single mismatch")
    # vectorised parameters: the mollifiers only read .delta and .eps
    rng = make_rng(_seed(cfg, "sandwich"))
    p = SimpleNamespace(delta=rng.uniform(0.01, 1.0, 10000), eps=rng.uniform(0.01, 1.0, 10000))
    u, v = rng.uniform(-3.0, 3.0, (2, 10000))
    lip = np.abs(u - v) / p.eps * (1 + 1e-12) + 1e-15
    viol = int(np.sum(np.abs(h_delta_eps(u, p) - h_delta_eps(v, p)) > lip)
               + np.sum(np.abs(h_bar_delta_eps(u, p) - h_bar_delta_eps(v, p)) > lip))
    poly = TrigPolynomial(sample_pairs("gaussian", 12, _seed(cfg, "sandwich-poly")))
    for delta, eps in ((0.1, 0.05), (0.3, 0.2), (0.05, 0.5)):
        lo = kac_phi_delta(poly, delta=delta)
        mid = kac_phi_delta_eps(poly, p=KacParams(delta, eps))
        # upper comparand keeps the 1/(2 delta) prefactor of the other two
        hi = (delta + eps) / delta * kac_phi_delta(poly, delta=delta + eps)
        if not lo - 1e-9 <= mid <= hi + 1e-9:
            viol += 1
    if viol:
        problems.append(f"{viol} sandwich/Lipschitz violations")
    return not problems, "ok" if not problems else "; ".join(problems)


def _suite_metrics(cfg):
    checks = [
        (wasserstein1([0, 0, 1], [0, 1, 1]), 1.0 / 3.0),
        (wasserstein1([0], [5]), 5.0),
        (fortet_mourier([0], [5]), 2.0),
        (fortet_mourier([0], [1]), 1.0),
        (wasserstein1([1, 2, 3], [1, 2, 3]), 0.0),
    ]
    worst = max(abs(a - b) for a, b in checks)
    rng = make_rng(_seed(cfg, "fm"))
    bad = 0
    for _ in range(20):
        a, b = rng.integers(0, 6, 30), rng.integers(0, 6, 25)
        if fortet_mourier(a, b) > min(2.0, wasserstein1(a, b)) + 1e-9:
            bad += 1
    est = bootstrap_ci(rng.integers(0, 4, 200), rng.integers(0, 4, 200), "W1", 100, 0.95,
                       _seed(cfg, "boot"))
    ok = worst <= 1e-9 and bad == 0 and est.ci_low <= est.value <= est.ci_high
    return ok, f"closed-form error {worst:.1e}, FM bound violations {bad}"


def _suite_kac_rice(cfg):
    m, n = 100, max(cfg.n_reps, 500)
    s, _ = simulate_counts("gaussian", m, n, cfg.master_seed, threads=1)
    target = kac_rice_mean(gamma_m(m), 1.0)
    z = abs(s.mean - target) / s.se
    lim = kac_rice_mean(GAMMA_LIMIT, 1.0)
    return z <= 3.0, f"m={m} n={s.n}: mean {s.mean:.4f} vs {target:.6f} ({z:.2f} SE); limit {lim:.6f}"


def _suite_determinism(cfg):
    a, _ = simulate_counts("rademacher", 32, 600, cfg.master_seed, threads=1)
    b, _ = simulate_counts("rademacher", 32, 600, cfg.master_seed, threads=4)
    same = np.array_equal(a.counts, b.counts)
    return same, "1 vs 4 threads identical" if same else "thread count changed the sample"


def run_validate(cfg: ExperimentConfig | None = None, fault: str | None = None) -> ValidateReport:
    """Run every self-check suite and collect a pass/fail report."""
    if fault not in FAULTS:
        raise ValueError(f"fault must be one of {FAULTS}")
    cfg = cfg or ExperimentConfig(kind="validate")
    suites = [
        ("coefficients", lambda: _suite_coefficients(cfg)),
        ("rtp-identity", lambda: _suite_identity(cfg)),
        ("theta", lambda: _suite_theta(cfg)),
        ("covariance", lambda: _suite_covariance(cfg, fault)),
        ("zeros", lambda: _suite_zeros(cfg)),
        ("metrics", lambda: _suite_metrics(cfg)),
        ("kac-rice", lambda: _suite_kac_rice(cfg)),
        ("determinism", lambda: _suite_determinism(cfg)),
    ]
    report = ValidateReport()
    for name, run in suites:
        try:
            ok, detail = run()
        except Exception as exc:  # a crashing suite is a failing suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        report.suites.append(SuiteResult(name, bool(ok), detail))
    return report
