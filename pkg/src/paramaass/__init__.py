"""Exact Fourier expansions of paramodular forms of squarefree level."""
from .core import CheckReport, TruncationError
from .eisenstein import jacobi_eisenstein, siegel_eisenstein
from .hecke import apply_op, coset_sanity, eigenvalue_of, reps_for, t_down, t_up
from .jacobi import JacobiExpansion, index_raise, jacobi_eisenstein_index1, validate_jacobi
from .maass import gritsenko_lift, lemma1_check, maass_check
from .paramod import ExpansionBox, ParamodularExpansion, apply_fricke, fj_slice, phi_operator

__all__ = [
    "CheckReport",
    "TruncationError",
    "jacobi_eisenstein",
    "siegel_eisenstein",
    "apply_op",
    "coset_sanity",
    "eigenvalue_of",
    "reps_for",
    "t_up",
    "t_down",
    "JacobiExpansion",
    "index_raise",
    "jacobi_eisenstein_index1",
    "validate_jacobi",
    "gritsenko_lift",
    "lemma1_check",
    "maass_check",
    "ExpansionBox",
    "ParamodularExpansion",
    "apply_fricke",
    "fj_slice",
    "phi_operator",
]
