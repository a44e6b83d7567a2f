"""Classical-oscillator-limit analytics.

The CO limit (delta / omega -> infinity) replaces the thermodynamic limit:
after decoupling the qubit the low-energy physics reduces to an effective
oscillator with excitation energy omega - u/2 - C, a ladder of negative
branch energies linear in the couplings, and, for the completed model, an
arithmetic ladder of level-crossing positions u_n = 2 omega + 2 kappa +
4 n kappa whose spacing fixes the staircase geometry.

All asymptotic formulas here are guarded by a minimum frequency ratio
(delta / omega >= 50 by default); pass allow_small_ratio=True to evaluate
them anyway.
"""

import math
from dataclasses import dataclass

import numpy as np

from .analytic import LambdaMode, solve_lambda
from .fockspace import ModelParams

CO_MIN_RATIO = 50.0


class CoRegimeError(ValueError):
    """Parameters are outside the classical-oscillator regime."""


def check_co_regime(params: ModelParams, allow_small_ratio: bool = False) -> None:
    ratio = params.delta / params.omega
    if ratio < CO_MIN_RATIO and not allow_small_ratio:
        raise CoRegimeError(
            f"delta/omega = {ratio:.3g} is below the CO-regime guard "
            f"{CO_MIN_RATIO}; pass allow_small_ratio=True to override"
        )


@dataclass(frozen=True)
class CoLimitParams:
    """Derived CO-limit quantities for one (n, t_z) branch."""

    base: ModelParams
    n: int
    t_z: int
    lam: float
    G: float
    Omega_n: float
    Gamma_n: float
    C: float


def colimit_params(
    params: ModelParams,
    n: int = 0,
    t_z: int = -1,
    allow_small_ratio: bool = False,
) -> CoLimitParams:
    """G = omega - u t_z / 2, Omega(n) = (delta - 2 u lam^2) e^{-2 lam^2},
    Gamma(n) = g + lam (G - u n - delta), C = 4 g^2 G^2 / [delta (u n +
    delta + G)^2], with lambda from the CO-limit formula."""
    check_co_regime(params, allow_small_ratio)
    u = params.effective_u
    lam = solve_lambda(params, n, t_z, mode=LambdaMode.CO_LIMIT)
    big_g = params.omega - u * t_z / 2.0
    omega_n = (params.delta - 2.0 * u * lam * lam) * math.exp(-2.0 * lam * lam)
    gamma_n = params.g + lam * (big_g - u * n - params.delta)
    c = 4.0 * params.g**2 * big_g**2 / (params.delta * (u * n + params.delta + big_g) ** 2)
    return CoLimitParams(
        base=params, n=n, t_z=t_z, lam=lam, G=big_g, Omega_n=omega_n,
        Gamma_n=gamma_n, C=c,
    )


@dataclass(frozen=True)
class ExcitationEnergy:
    """Normal-phase excitation energy, with and without the C correction."""

    full: float        # omega - u/2 - C
    simplified: float  # omega - u/2


def co_excitation_energy(
    params: ModelParams,
    n: int = 0,
    t_z: int = -1,
    allow_small_ratio: bool = False,
) -> ExcitationEnergy:
    """Both forms of the excitation energy; the simplified one changes sign
    exactly at the phase boundary u = 2 omega."""
    co = colimit_params(params, n, t_z, allow_small_ratio)
    u = params.effective_u
    return ExcitationEnergy(
        full=params.omega - u / 2.0 - co.C,
        simplified=params.omega - u / 2.0,
    )


def co_branch_energy(
    params: ModelParams,
    n: int,
    allow_small_ratio: bool = False,
) -> float:
    """Negative-branch energy -n u/2 - delta/2 + n (n kappa + omega) + 2 lam g.

    At n = 0 this coincides with the CO limit of the displaced-vacuum ground
    energy, so the whole negative ladder is covered by one expression.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    check_co_regime(params, allow_small_ratio)
    u = params.effective_u
    kappa = params.effective_kappa
    lam = solve_lambda(params, n, -1, mode=LambdaMode.CO_LIMIT)
    return (
        -n * u / 2.0
        - params.delta / 2.0
        + n * (n * kappa + params.omega)
        + 2.0 * lam * params.g
    )


@dataclass(frozen=True)
class CrossingLadder:
    """Level-crossing positions u_n = 2 omega + 2 kappa + 4 n kappa."""

    positions: np.ndarray
    kappa: float
    n_max: int


def crossing_ladder(params: ModelParams, n_max: int) -> CrossingLadder:
    """Arithmetic ladder of crossing positions for the completed model.

    Consecutive spacing is exactly 4 kappa; the first entry 2 omega +
    2 kappa is the shifted phase boundary.  kappa = 0 collapses every
    crossing onto u = 2 omega and is rejected.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    kappa = params.effective_kappa
    if kappa <= 0.0:
        raise ValueError(
            "crossing ladder requires kappa > 0; at kappa = 0 all crossings "
            "degenerate onto the collapse point u = 2 omega"
        )
    n = np.arange(n_max + 1, dtype=float)
    positions = 2.0 * params.omega + 2.0 * kappa + 4.0 * n * kappa
    return CrossingLadder(positions=positions, kappa=kappa, n_max=n_max)


def analytic_mean_photon(n: int, lam: float, c1: float, c2: float) -> float:
    """Mean photon number of a block eigenstate in the laboratory frame.

    (n + lam^2) c1^2 + (n + 1 + lam^2) c2^2 + 2 lam sqrt(n+1) c1 c2, where
    (c1, c2) are the normalized eigenvector components on {|+x, n>,
    |-x, n+1>}.  The displaced vacuum is the single-component case
    (n = 0, c2 = 0), giving lam^2.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    norm = c1 * c1 + c2 * c2
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"eigenvector coefficients not normalized: c1^2 + c2^2 = {norm}")
    return (
        (n + lam * lam) * c1 * c1
        + (n + 1 + lam * lam) * c2 * c2
        + 2.0 * lam * math.sqrt(n + 1) * c1 * c2
    )


def slope_prediction(params: ModelParams) -> float:
    """Slope of the renormalized staircase midline, (1/delta) / (4 kappa).

    Equals 1/4 exactly when kappa = 1/delta.
    """
    kappa = params.effective_kappa
    if kappa <= 0.0:
        raise ValueError(f"slope prediction requires kappa > 0, got {kappa}")
    if params.delta <= 0.0:
        raise ValueError(f"slope prediction requires delta > 0, got {params.delta}")
    return (1.0 / params.delta) / (4.0 * kappa)
