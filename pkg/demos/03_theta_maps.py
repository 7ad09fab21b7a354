"""The polynomial as a linear image of its partial-sum path.

X_m is exactly Theta_m applied to the piecewise-linear partial-sum path S^m,
and Theta_m approaches the continuous map Theta.  Both facts are checked
numerically here, on a smooth path and on a rough random-walk path.
"""
import numpy as np

from trigzeros import SeedSpec, TrigPolynomial, build_partial_sum, sample_pairs, theta, theta_m
from trigzeros.rtp import PathPL, holder_seminorm

t = np.linspace(0.0, 1.0, 513)

print("identity Theta_m(S^m) = X_m")
for m in (2, 16, 128, 1024):
    c = sample_pairs("laplace_scaled", m, SeedSpec(11))
    err = np.max(np.abs(theta_m(build_partial_sum(c), m, t) - TrigPolynomial(c).eval(t)))
    print(f"  m={m:<5} max error {err:.1e}")

smooth = lambda u: u + 1j * np.asarray(u) ** 2  # noqa: E731
rng = np.random.default_rng(5)
steps = (rng.standard_normal(4096) + 1j * rng.standard_normal(4096)) / 64.0
walk = PathPL(np.arange(4097) / 4096, np.concatenate(([0j], np.cumsum(steps))))
print(f"\nrandom walk: grid Hoelder(1/3) seminorm {holder_seminorm(walk, 1 / 3):.3f}")
print(f"{'m':>6}{'smooth':>12}{'walk':>12}")
ref_s, ref_w = theta(smooth, t, quad_n=256), theta(walk, t)
for m in (8, 32, 128, 512):
    es = np.max(np.abs(theta_m(smooth, m, t) - ref_s))
    ew = np.max(np.abs(theta_m(walk, m, t) - ref_w))
    print(f"{m:>6}{es:>12.2e}{ew:>12.2e}")
