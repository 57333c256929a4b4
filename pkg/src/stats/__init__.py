"""
Stats package initialization.
Contains the rate estimators, goodness-of-fit tests and replicate studies.
"""
from .estimate import (
    EstimateResult,
    epsilon_from_rates,
    epsilon_upper_limit,
    estimate_dataset,
    lambda_lower_bound,
    mle_lambda,
    required_sample_size,
)
from .goodness import FitOutcome, chi2_geometric, chi2_two_sample, ks_exponential, ks_two_sample
from .studies import ReplicateStudy, coverage_study

__all__ = [
    'EstimateResult',
    'FitOutcome',
    'ReplicateStudy',
    'chi2_geometric',
    'chi2_two_sample',
    'coverage_study',
    'epsilon_from_rates',
    'epsilon_upper_limit',
    'estimate_dataset',
    'ks_exponential',
    'ks_two_sample',
    'lambda_lower_bound',
    'mle_lambda',
    'required_sample_size',
]
