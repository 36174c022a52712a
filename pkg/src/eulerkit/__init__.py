"""Exact generalized Euler polynomials and verification of their identities."""

from .algebra import AlphaPoly, Rat, TruncSeries, XPoly, binomial
from .engine import (
    EulerTable,
    SequenceKind,
    build_euler_table,
    cache_load,
    cache_store,
    euler_poly,
    genocchi_poly,
    lambda_apply,
    psi_apply,
    scaled_derivative,
    sequence_values,
)
from .identities import (
    Grid,
    IdentityId,
    IdentityParams,
    ProbeId,
    Status,
    grid_verify,
    residual_probe,
    verify_identity,
)
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "AlphaPoly", "Rat", "TruncSeries", "XPoly", "binomial",
    "EulerTable", "SequenceKind", "build_euler_table", "cache_load", "cache_store",
    "euler_poly", "genocchi_poly", "lambda_apply", "psi_apply", "scaled_derivative",
    "sequence_values", "Grid", "IdentityId", "IdentityParams", "ProbeId", "Status",
    "grid_verify", "residual_probe", "verify_identity", "BACKEND",
]
