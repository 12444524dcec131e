"""Symbolic derivation and numerical verification of Weyl-group zeta
functions attached to classical groups and their maximal parabolics.

The pipeline builds the Weyl-sum period of a root system, takes iterated
residues along the singular hyperplanes of a chosen maximal parabolic,
clears xi denominators, discovers the reflection constant, recenters, and
verifies functional equations, pole sets, and critical-line zeros against a
bundled golden corpus of closed forms.
"""

from .rootsys import build_root_system, weyl_group, inversion_set, pairing
from .symexpr import (
    LinForm,
    SymExpr,
    Term,
    build_period,
    build_period_T,
    equals_up_to_scalar,
    simplify,
    substitute,
    to_display,
)
from .residue import hyperplanes_for, iterated_residue, numeric_residue_oracle, residue
from .normalize import center, clearing_factors, find_fe_constant, normalize_o, pole_report
from .xinum import EvalConfig, Evaluator, default_evaluator, gamma, xi, xi_deriv, zeta
from .zerofind import count_zeros_box, real_restriction, rh_report, scan_zeros
from .pipeline import golden_corpus, run, run_T

__version__ = "0.1.0"

__all__ = [
    "build_root_system", "weyl_group", "inversion_set", "pairing",
    "LinForm", "SymExpr", "Term", "build_period", "build_period_T",
    "equals_up_to_scalar", "simplify", "substitute", "to_display",
    "hyperplanes_for", "iterated_residue", "numeric_residue_oracle", "residue",
    "center", "clearing_factors", "find_fe_constant", "normalize_o", "pole_report",
    "EvalConfig", "Evaluator", "default_evaluator", "gamma", "xi", "xi_deriv", "zeta",
    "count_zeros_box", "real_restriction", "rh_report", "scan_zeros",
    "golden_corpus", "run", "run_T",
]
