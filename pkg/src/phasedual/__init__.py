"""Energies, dual branches and counterexample scenarios for a 1D two-phase bar."""
from ._backend import BACKEND
from .dae import BranchAssignment, BranchId, NoRealRootError, PoleError, all_roots, branch_field, solve_dae
from .energies import (
    UNDEFINED_DIVERGENT,
    EnergyReport,
    IllPosedError,
    dual_energy,
    energy_report,
    is_critical_pair,
    primal_energy,
    v_from_zeta,
    xi_energy,
)
from .falsify import SCENARIOS, ScenarioReport, Verdict, run_scenario
from .model import Field, Grid, LoadSpec, MaterialParams, PhysicsError, compute_beta, compute_sigma

__all__ = [
    "BACKEND",
    "BranchAssignment",
    "BranchId",
    "EnergyReport",
    "Field",
    "Grid",
    "IllPosedError",
    "LoadSpec",
    "MaterialParams",
    "NoRealRootError",
    "PhysicsError",
    "PoleError",
    "SCENARIOS",
    "ScenarioReport",
    "UNDEFINED_DIVERGENT",
    "Verdict",
    "all_roots",
    "branch_field",
    "compute_beta",
    "compute_sigma",
    "dual_energy",
    "energy_report",
    "is_critical_pair",
    "primal_energy",
    "run_scenario",
    "solve_dae",
    "v_from_zeta",
    "xi_energy",
]
