"""Experiment configuration, Monte Carlo engine, persistence and CLI."""
from .config import KINDS, ExperimentConfig
from .engine import SampleStats, simulate_counts, simulate_reference
from .experiments import run_rate_curve, run_theta_convergence, run_zero_count_law
from .rates import RateFit, fit_rate
from .results import CSV_HEADER, ResultRow, ResultTable
from .validate import ValidateReport, run_validate

__all__ = [
    "KINDS", "ExperimentConfig", "SampleStats", "simulate_counts", "simulate_reference",
    "run_rate_curve", "run_theta_convergence", "run_zero_count_law", "RateFit", "fit_rate",
    "CSV_HEADER", "ResultRow", "ResultTable", "ValidateReport", "run_validate",
]
