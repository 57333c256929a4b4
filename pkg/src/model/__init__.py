"""
Model package initialization.
Contains the parameter types and closed-form laws of the branching model.
"""
from .analytic import (
    apparent_lifetime,
    beta,
    born_weights,
    branch_weight,
    erlang_cdf,
    erlang_hazard,
    erlang_pdf,
    erlang_survival,
    exp_survival,
    expected_branch_count,
    golden_rule_rate,
    mixture_hazard,
    mixture_pdf,
    mixture_survival,
)
from .params import AmplitudeVector, ErlangSpec, RateParams

__all__ = [
    'AmplitudeVector',
    'ErlangSpec',
    'RateParams',
    'apparent_lifetime',
    'beta',
    'born_weights',
    'branch_weight',
    'erlang_cdf',
    'erlang_hazard',
    'erlang_pdf',
    'erlang_survival',
    'exp_survival',
    'expected_branch_count',
    'golden_rule_rate',
    'mixture_hazard',
    'mixture_pdf',
    'mixture_survival',
]
