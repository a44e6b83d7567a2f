"""Symmetric eigensolver plus the cutoff-convergence controller.

The controller doubles the Fock cutoff until the tracked levels stop moving
(Converged), the ground energy keeps dropping (UnboundedBelow) or the budget
is exhausted (Undetermined).  Converged spectra whose tracked levels sit
inside a declared degeneracy window are sub-classified CollapsedDegenerate,
which is the numerical signature of spectral collapse at u = 2 omega.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.linalg import eig_banded, eigh

from .fockspace import HamiltonianMatrix, ModelParams, build_hamiltonian

DEFAULT_TOL = 1e-8
DEFAULT_DEGENERACY_WINDOW = 1e-2
DEFAULT_START_CUTOFF = 32
DEFAULT_MAX_CUTOFF = 32_768

RESIDUAL_SCALE = 1e-8
NORM_TOL = 1e-10


class SolverError(RuntimeError):
    """Eigensolver failed or violated its residual contract."""


class Classification(str, Enum):
    CONVERGED = "Converged"
    COLLAPSED_DEGENERATE = "CollapsedDegenerate"
    UNBOUNDED_BELOW = "UnboundedBelow"
    UNDETERMINED = "Undetermined"


@dataclass
class Spectrum:
    energies: np.ndarray
    cutoff: int
    k_requested: int
    vectors: np.ndarray | None = field(default=None, repr=False)


@dataclass
class ConvergenceReport:
    classification: Classification
    final_cutoff: int
    history: list[tuple[int, np.ndarray]]
    tolerance: float
    drift_rate: float
    degeneracy_window: float


def _band_of(h) -> tuple[np.ndarray, int]:
    if isinstance(h, HamiltonianMatrix):
        return h.band, h.dim
    a = np.asarray(h, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a, a.shape[0]


def eigen_symmetric(h, k: int, want_vectors: bool = False) -> Spectrum:
    """Lowest k eigenpairs of a real symmetric matrix.

    h may be a HamiltonianMatrix (solved in band form) or a dense symmetric
    ndarray.  Eigenvalues come back ascending.  When vectors are requested
    they are checked against the residual contract
    ||H v - E v|| <= 1e-8 (1 + |E|) and normalized with a fixed sign
    convention (largest-magnitude component positive).
    """
    mat, dim = _band_of(h)
    if not 1 <= k <= dim:
        raise ValueError(f"k must satisfy 1 <= k <= dim = {dim}, got {k}")

    banded = isinstance(h, HamiltonianMatrix)
    try:
        if banded:
            out = eig_banded(
                h.band,
                lower=True,
                eigvals_only=not want_vectors,
                select="i",
                select_range=(0, k - 1),
            )
        else:
            sym_err = np.max(np.abs(mat - mat.T)) if dim > 1 else 0.0
            if sym_err > 0.0:
                raise ValueError(f"matrix is not symmetric (max asymmetry {sym_err:.3e})")
            out = eigh(
                mat,
                eigvals_only=not want_vectors,
                subset_by_index=(0, k - 1),
            )
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"eigensolver failed for dim={dim}, k={k}: {exc}") from exc

    if want_vectors:
        energies, vectors = out
    else:
        energies, vectors = out, None
    energies = np.asarray(energies, dtype=float)

    if np.any(np.diff(energies) < 0):
        raise SolverError("eigenvalues returned out of order")

    if vectors is not None:
        dense = h.to_dense() if banded else mat
        for j in range(k):
            v = vectors[:, j]
            norm = np.linalg.norm(v)
            if abs(norm - 1.0) > NORM_TOL:
                raise SolverError(f"eigenvector {j} norm {norm} violates unit-norm contract")
            resid = np.linalg.norm(dense @ v - energies[j] * v)
            bound = RESIDUAL_SCALE * (1.0 + abs(energies[j]))
            if resid > bound:
                raise SolverError(
                    f"residual {resid:.3e} for level {j} exceeds {bound:.3e} "
                    f"(dim={dim}, E={energies[j]})"
                )
            if v[np.argmax(np.abs(v))] < 0:
                vectors[:, j] = -v

    cutoff = h.cutoff if banded else dim - 1
    return Spectrum(energies=energies, cutoff=cutoff, k_requested=k, vectors=vectors)


def _doubling_schedule(start: int, max_cutoff: int, k: int):
    c = max(start, (k + 1) // 2)  # need dim = 2(c+1) >= k
    while c <= max_cutoff:
        yield c
        c *= 2


def converged_spectrum(
    params: ModelParams,
    k: int,
    tol: float = DEFAULT_TOL,
    max_cutoff: int = DEFAULT_MAX_CUTOFF,
    start_cutoff: int = DEFAULT_START_CUTOFF,
    degeneracy_window: float = DEFAULT_DEGENERACY_WINDOW,
    want_vectors: bool = False,
) -> tuple[Spectrum, ConvergenceReport]:
    """Doubling-schedule spectrum with convergence classification.

    Classification rules, applied on the recorded history:
      Converged          max level drift over the last doubling <= tol
      CollapsedDegenerate  Converged and spread of the k tracked levels
                           below degeneracy_window
      UnboundedBelow     ground energy dropped by > 10 tol on each of the
                         last three doublings (early exit additionally
                         requires the drops not to be shrinking, which
                         separates divergence from slow convergence)
      Undetermined       budget exhausted without meeting any rule
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")

    history: list[tuple[int, np.ndarray]] = []
    drops: list[float] = []
    classification = Classification.UNDETERMINED
    drift_rate = np.nan

    for cutoff in _doubling_schedule(start_cutoff, max_cutoff, k):
        spec = eigen_symmetric(build_hamiltonian(params, cutoff), k)
        history.append((cutoff, spec.energies))
        if len(history) >= 2:
            prev = history[-2][1]
            drift = float(np.max(np.abs(spec.energies - prev)))
            drift_rate = float(spec.energies[0] - prev[0])
            drops.append(prev[0] - spec.energies[0])
            if drift <= tol:
                spread = float(spec.energies[-1] - spec.energies[0])
                classification = (
                    Classification.COLLAPSED_DEGENERATE
                    if k >= 2 and spread <= degeneracy_window
                    else Classification.CONVERGED
                )
                break
            if (
                len(drops) >= 3
                and all(d > 10 * tol for d in drops[-3:])
                and drops[-1] >= drops[-2] >= drops[-3]
            ):
                classification = Classification.UNBOUNDED_BELOW
                break
    else:
        if len(drops) >= 3 and all(d > 10 * tol for d in drops[-3:]):
            classification = Classification.UNBOUNDED_BELOW

    if not history:
        raise ValueError(
            f"empty cutoff schedule: start_cutoff={start_cutoff} exceeds "
            f"max_cutoff={max_cutoff}"
        )
    final_cutoff = history[-1][0]
    spectrum = Spectrum(
        energies=history[-1][1], cutoff=final_cutoff, k_requested=k, vectors=None
    )
    if want_vectors:
        spectrum = eigen_symmetric(
            build_hamiltonian(params, final_cutoff), k, want_vectors=True
        )

    report = ConvergenceReport(
        classification=classification,
        final_cutoff=final_cutoff,
        history=history,
        tolerance=tol,
        drift_rate=drift_rate,
        degeneracy_window=degeneracy_window,
    )
    return spectrum, report
