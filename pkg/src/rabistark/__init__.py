"""Solvers and observables for the Rabi, Rabi-Stark and completed
Rabi-Stark models: truncated-Fock exact diagonalization with convergence
classification, the Jaynes-Cummings-like analytic reduction, and the
classical-oscillator-limit staircase and phase-boundary results."""

from .analytic import (
    AnalyticBranch,
    AnalyticSpectrum,
    LambdaMode,
    LambdaSolveError,
    RegimeViolationError,
    analytic_ground_energy,
    analytic_spectrum,
    block_eigenpairs,
    error_map,
    jc_block,
    lambda_condition_residual,
    solve_branch,
    solve_lambda,
)
from .colimit import (
    CoLimitParams,
    CoRegimeError,
    CrossingLadder,
    ExcitationEnergy,
    analytic_mean_photon,
    co_branch_energy,
    co_excitation_energy,
    colimit_params,
    crossing_ladder,
    slope_prediction,
)
from .eigen import (
    Classification,
    ConvergenceReport,
    SolverError,
    Spectrum,
    converged_spectrum,
    eigen_symmetric,
)
from .fockspace import (
    HamiltonianMatrix,
    ModelParams,
    Variant,
    basis_index,
    basis_state,
    build_hamiltonian,
    mean_photon_operator,
    parity_signs,
)
from .observables import (
    CrossingEvent,
    DivergentSpectrumError,
    ResolutionError,
    StaircaseReport,
    detect_level_crossings,
    mean_photon_ground,
    staircase_scan,
)
from .specialfn import assoc_laguerre1, f1, g0, laguerre

__all__ = [
    "AnalyticBranch",
    "AnalyticSpectrum",
    "Classification",
    "CoLimitParams",
    "CoRegimeError",
    "ConvergenceReport",
    "CrossingEvent",
    "CrossingLadder",
    "DivergentSpectrumError",
    "ExcitationEnergy",
    "HamiltonianMatrix",
    "LambdaMode",
    "LambdaSolveError",
    "ModelParams",
    "RegimeViolationError",
    "ResolutionError",
    "SolverError",
    "Spectrum",
    "StaircaseReport",
    "Variant",
    "analytic_ground_energy",
    "analytic_mean_photon",
    "analytic_spectrum",
    "assoc_laguerre1",
    "basis_index",
    "basis_state",
    "block_eigenpairs",
    "build_hamiltonian",
    "co_branch_energy",
    "co_excitation_energy",
    "colimit_params",
    "converged_spectrum",
    "crossing_ladder",
    "detect_level_crossings",
    "eigen_symmetric",
    "error_map",
    "f1",
    "g0",
    "jc_block",
    "lambda_condition_residual",
    "laguerre",
    "mean_photon_ground",
    "mean_photon_operator",
    "parity_signs",
    "slope_prediction",
    "solve_branch",
    "solve_lambda",
    "staircase_scan",
]
