"""Counting zeros with an integral.

Below the threshold A_f the hard Kac functional Phi_delta returns the exact
zero count; above it the count is smeared.  The mollified version
Phi_{delta,eps} is a Lipschitz function of the path and dominates Phi_delta.
"""
from trigzeros import KacParams, SeedSpec, TrigPolynomial, count_zeros, sample_pairs
from trigzeros import kac_phi_delta, kac_phi_delta_eps, min_gap_A

poly = TrigPolynomial(sample_pairs("gaussian", 24, SeedSpec(8)))
n = count_zeros(poly).count
A = min_gap_A(poly)
print(f"exact count {n}, threshold A_f = {A:.4f}\n")
print(f"{'delta/A':>8}{'Phi_delta':>12}{'Phi_d,eps':>12}")
for ratio in (0.25, 0.9, 1.5, 4.0, 10.0):
    d = ratio * A
    print(f"{ratio:>8}{kac_phi_delta(poly, delta=d):>12.6f}"
          f"{kac_phi_delta_eps(poly, p=KacParams(d, 0.5 * d)):>12.6f}")
