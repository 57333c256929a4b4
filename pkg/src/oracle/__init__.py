"""
Oracle package initialization.
Contains the truncated-series and quadrature checks of the model identities.
"""
from .identities import (
    DEFAULT_EPSILONS,
    DEFAULT_LAMBDAS,
    IdentityName,
    IdentityReport,
    IdentitySuite,
    run_identity_suite,
    verify_beta_series,
    verify_fA_series,
    verify_pdf_normalization,
    verify_SA_column_sum,
    verify_tau_series,
)

__all__ = [
    'DEFAULT_EPSILONS',
    'DEFAULT_LAMBDAS',
    'IdentityName',
    'IdentityReport',
    'IdentitySuite',
    'run_identity_suite',
    'verify_SA_column_sum',
    'verify_beta_series',
    'verify_fA_series',
    'verify_pdf_normalization',
    'verify_tau_series',
]
