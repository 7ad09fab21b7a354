"""Zero counts of random trigonometric polynomials and of their Gaussian limit.

Submodules: ``coefficients`` (laws and seeding), ``rtp`` (polynomials, paths
and the maps Theta, Theta_m), ``gaussian_limit`` (sinc process), ``zeros``
(certified counting and Kac functionals), ``metrics`` (W1 and Fortet-Mourier
distances) and ``harness`` (experiments and CLI).
"""
from .coefficients import LAWS, CoefficientLaw, SeedSpec, derive_seed, get_law, make_rng, sample_pairs
from .errors import (HypothesisViolationError, InsufficientDataError, InvalidArgumentError,
                     NumericalFailureError)
from .gaussian_limit import (GAMMA_LIMIT, CovPair, cov_derivatives, gamma_m, kac_rice_mean,
                             sample_gp_cholesky, sample_gp_surrogate, sinc_cov)
from .metrics import ZeroCountSample, bootstrap_ci, fortet_mourier, wasserstein1
from .rtp import PathPL, TrigPolynomial, build_partial_sum, theta, theta_m
from .zeros import KacParams, count_zeros, kac_phi_delta, kac_phi_delta_eps, min_gap_A

__version__ = "0.1.0"

__all__ = [
    "LAWS", "CoefficientLaw", "SeedSpec", "derive_seed", "get_law", "make_rng", "sample_pairs",
    "HypothesisViolationError", "InsufficientDataError", "InvalidArgumentError",
    "NumericalFailureError", "GAMMA_LIMIT", "CovPair", "cov_derivatives", "gamma_m",
    "kac_rice_mean", "sample_gp_cholesky", "sample_gp_surrogate", "sinc_cov",
    "ZeroCountSample", "bootstrap_ci", "fortet_mourier", "wasserstein1", "PathPL",
    "TrigPolynomial", "build_partial_sum", "theta", "theta_m", "KacParams", "count_zeros",
    "kac_phi_delta", "kac_phi_delta_eps", "min_gap_A",
]
