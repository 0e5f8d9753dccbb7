"""Smallest eigenvalues of Hankel moment matrices for x^alpha (1-x)^beta on [0, 1].

The numerical side lives in :mod:`~hankelmin.eigensolver` (multiprecision
Householder + Sturm bisection + secant); the large-N closed forms in
:mod:`~hankelmin.asymptotics`; :mod:`~hankelmin.quadrature` and
:mod:`~hankelmin.orthopoly` provide independent checks of the analytic pieces.
"""
from .asymptotics import (
    AsymptoticEstimate,
    ErrorRecord,
    error_record,
    lambda_asymptotic,
    psi,
)
from .eigensolver import (
    EigenResult,
    PrecisionExhausted,
    PrecisionPolicy,
    smallest_eigenvalue,
    smallest_eigenvalue_auto,
)
from .moments import HankelMatrix, WeightParams, hankel_matrix, moment_table

__version__ = "0.1.0"

__all__ = [
    "AsymptoticEstimate",
    "EigenResult",
    "ErrorRecord",
    "HankelMatrix",
    "PrecisionExhausted",
    "PrecisionPolicy",
    "WeightParams",
    "error_record",
    "hankel_matrix",
    "lambda_asymptotic",
    "moment_table",
    "psi",
    "smallest_eigenvalue",
    "smallest_eigenvalue_auto",
]
