"""Abelian geometric Langlands on complex tori: harmonic Hecke eigenfunctions,
their flat connections, GL_1 opers, split tori, finite-field Hecke models and
an exact audit of a proposed spectrum-to-character map on elliptic curves."""
from .abelian_hecke import (
    GridFunction,
    Harmonic,
    gram_matrix,
    harmonic_eval,
    hecke_apply,
    hecke_eigenvalue,
    verify_eigenfunction,
)
from .errors import LanglandsError
from .torus_geometry import (
    CohomologyClass,
    JacobianPoint,
    RiemannMatrix,
    reduce_point,
    solve_harmonic,
    validate_period_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "CohomologyClass",
    "GridFunction",
    "Harmonic",
    "JacobianPoint",
    "LanglandsError",
    "RiemannMatrix",
    "gram_matrix",
    "harmonic_eval",
    "hecke_apply",
    "hecke_eigenvalue",
    "reduce_point",
    "solve_harmonic",
    "validate_period_matrix",
    "verify_eigenfunction",
]
