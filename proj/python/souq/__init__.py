"""Wasserstein-based total, aleatoric and epistemic uncertainty of
second-order distributions (Dirichlet laws and finite ensembles)."""

from ._souq import (
    ConvergenceError,
    Dirichlet,
    Ensemble,
    ParseError,
    au,
    beta_cdf,
    beta_quantile,
    cross_entropy_measures,
    digamma,
    entropy_measures,
    eu,
    log_gamma,
    measure,
    parse_distributions,
    run_axiom_suite,
    tu,
)

__all__ = [
    "ConvergenceError",
    "Dirichlet",
    "Ensemble",
    "ParseError",
    "au",
    "beta_cdf",
    "beta_quantile",
    "cross_entropy_measures",
    "digamma",
    "entropy_measures",
    "eu",
    "log_gamma",
    "measure",
    "parse_distributions",
    "run_axiom_suite",
    "tu",
]
