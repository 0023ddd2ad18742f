"""Invariants of wave scattering off locally symmetric 1d potentials.

The stationary wave equation A''(x) + U(x) A(x) = 0 is solved exactly for
piecewise constant U. Wherever U is invariant under a linear transform
F(x) = sigma x + rho (an inversion or a translation) restricted to some
domain, two spatially constant bilinears of the field exist there:

    q       = (sigma A(x) A'(x_bar) - A(x_bar) A'(x)) / 2i
    q_tilde = (sigma A*(x) A'(x_bar) - A(x_bar) A'*(x)) / 2i

with x_bar = F(x). They generalize parity and Bloch eigenvalues to
symmetries holding only on subdomains, remap the field across each domain
(A(x_bar) = (q_tilde A - q A*) / j), and constrain how locally symmetric
pieces of a scatterer fit together. This package computes them, detects
the domains, and decomposes scatterers accordingly.
"""

__version__ = "0.1.0"

from .config import (
    ProfileSpec,
    RunConfig,
    SmoothSpec,
    Tolerances,
    emit_config,
    parse_config,
)
from .detector import (
    ClsDecomposition,
    ClsPiece,
    FindingComponent,
    SymmetryFinding,
    candidate_transforms,
    cls_constraint_check,
    cls_decompose,
    detect,
    field_based_detect,
)
from .errors import ConfigError, LocsymError, PhysicsError, ZeroCurrentError
from .invariants import (
    InvariantPair,
    bloch_phase,
    eigenvalue_check,
    invariant_pair,
    map_field,
    parity_character,
    q_at,
    qtilde_at,
    sum_rule_residual,
)
from .potential import (
    Domain,
    PotentialProfile,
    Slab,
    SymmetryTransform,
    bounding_box,
    build_profile,
    eval_u,
    merge_intervals,
    symmetry_set,
    transform_interval,
    transform_point,
)
from .solver import (
    BlochResult,
    CellMatrix,
    FieldSample,
    PiecewiseField,
    ScatteringState,
    bloch_state,
    current,
    field_at,
    initial_value_field,
    solve_scattering,
    unit_cell_transfer_matrix,
)

__all__ = [
    "__version__",
    "BlochResult",
    "CellMatrix",
    "ClsDecomposition",
    "ClsPiece",
    "ConfigError",
    "Domain",
    "FieldSample",
    "FindingComponent",
    "InvariantPair",
    "LocsymError",
    "PhysicsError",
    "PiecewiseField",
    "PotentialProfile",
    "ProfileSpec",
    "RunConfig",
    "ScatteringState",
    "Slab",
    "SmoothSpec",
    "SymmetryFinding",
    "SymmetryTransform",
    "Tolerances",
    "ZeroCurrentError",
    "bloch_phase",
    "bloch_state",
    "bounding_box",
    "build_profile",
    "candidate_transforms",
    "cls_constraint_check",
    "cls_decompose",
    "current",
    "detect",
    "eigenvalue_check",
    "emit_config",
    "eval_u",
    "field_at",
    "field_based_detect",
    "initial_value_field",
    "invariant_pair",
    "map_field",
    "merge_intervals",
    "parse_config",
    "parity_character",
    "q_at",
    "qtilde_at",
    "solve_scattering",
    "sum_rule_residual",
    "symmetry_set",
    "transform_interval",
    "transform_point",
]
