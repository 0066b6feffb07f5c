"""Characteristic boundary conditions for the 2D nonlinear shallow water equations.

The package classifies boundary states by flow regime, reports how many
boundary conditions the nonlinear energy analysis needs, checks candidate
reflection coefficients against the energy condition, and runs a small
finite-difference simulator that imposes the conditions weakly.
"""

from .bc import (
    AnalysisComparison,
    BCSpec,
    Regime,
    build_bc,
    classify,
    compare_analyses,
    ellipse_boundary,
    ellipse_semi_axes,
    required_bc_count,
    stability_check,
)
from .characteristics import eigensystem, from_characteristic, to_characteristic, total_energy
from .core import PhysParams, State, UnitNormal, make_state
from .verify import run_identity_suite

__version__ = "0.1.0"

__all__ = [
    "AnalysisComparison",
    "BCSpec",
    "PhysParams",
    "Regime",
    "State",
    "UnitNormal",
    "build_bc",
    "classify",
    "compare_analyses",
    "eigensystem",
    "ellipse_boundary",
    "ellipse_semi_axes",
    "from_characteristic",
    "make_state",
    "required_bc_count",
    "run_identity_suite",
    "stability_check",
    "to_characteristic",
    "total_energy",
]
