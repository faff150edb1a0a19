"""Certification toolkit for genuine quantum teleportation.

Builds process matrices from tomography data, computes the classical
teleportation bound by semidefinite programming, and quantifies quantumness
through the composition alpha, the robustness beta, the steerable weight and
the negativity of the resource state.
"""

from ._core import (
    Certifier,
    SolverFailure,
    apply_process,
    assemble_process,
    avg_state_fidelity,
    chi_ideal,
    classical_bound,
    find_recipe,
    mp_process,
    negativity,
    process_fidelity,
    process_fidelity_from_avg,
    quantum_composition,
    quantum_robustness,
    recipe_to_process,
    resource_to_process,
    simulate_tomography,
    state_fidelity,
    steerable_weight,
    verify_recipe,
    werner,
)

__all__ = [
    "Certifier",
    "SolverFailure",
    "apply_process",
    "assemble_process",
    "avg_state_fidelity",
    "chi_ideal",
    "classical_bound",
    "find_recipe",
    "mp_process",
    "negativity",
    "process_fidelity",
    "process_fidelity_from_avg",
    "quantum_composition",
    "quantum_robustness",
    "recipe_to_process",
    "resource_to_process",
    "simulate_tomography",
    "state_fidelity",
    "steerable_weight",
    "verify_recipe",
    "werner",
]
