"""Eigenvector observables: ground-state mean photon number, staircase
detection with slope fitting, and level-crossing detection in numerical
spectra."""

import math
from dataclasses import dataclass, field, replace as dc_replace

import numpy as np

from .colimit import check_co_regime
from .eigen import Classification, converged_spectrum, eigen_symmetric
from .fockspace import ModelParams, Variant, build_hamiltonian, mean_photon_operator

TAIL_TOL = 1e-8
GAP_THRESHOLD = 1e-6


class DivergentSpectrumError(RuntimeError):
    """Requested a ground-state observable for an unbounded-below spectrum."""


class ResolutionError(ValueError):
    """Scan grid too coarse to resolve the staircase steps."""


def initial_cutoff(params: ModelParams) -> int:
    """Starting cutoff for ground-vector solves.

    For the completed model the CO-limit estimate of the occupied rung,
    n* = (u - 2 omega - 2 kappa) / (4 kappa), sets the scale; start at four
    times that so the adaptive tail check rarely has to re-solve.
    """
    kappa = params.effective_kappa
    if kappa > 0.0:
        n_star = (params.effective_u - 2.0 * params.omega - 2.0 * kappa) / (4.0 * kappa)
        if n_star > 0.0:
            return max(32, 4 * math.ceil(n_star))
    return 32


def _mean_photon_detail(
    params: ModelParams,
    tol: float,
    tail_tol: float,
    start_cutoff: int | None,
    max_cutoff: int,
) -> tuple[float, int]:
    if start_cutoff is None:
        start_cutoff = initial_cutoff(params)
    spec, report = converged_spectrum(
        params,
        k=1,
        tol=tol,
        max_cutoff=max_cutoff,
        start_cutoff=start_cutoff,
        want_vectors=True,
    )
    if report.classification is Classification.UNBOUNDED_BELOW:
        raise DivergentSpectrumError(
            "spectrum is unbounded from below at these parameters "
            f"(u = {params.effective_u}, kappa = {params.effective_kappa}); "
            "the ground state does not exist"
        )
    if report.classification is Classification.UNDETERMINED:
        raise DivergentSpectrumError(
            f"spectrum did not converge within max_cutoff = {max_cutoff}"
        )

    cutoff, vec = spec.cutoff, spec.vectors[:, 0]
    while True:
        occ = vec * vec
        if occ[-4:].sum() < tail_tol:  # top two Fock levels, both spins
            weights = mean_photon_operator(cutoff).diagonal()
            return float(occ @ weights), cutoff
        cutoff *= 2
        if cutoff > max_cutoff:
            raise DivergentSpectrumError(
                f"Fock tail does not fall below {tail_tol} within cutoff {max_cutoff}"
            )
        s = eigen_symmetric(build_hamiltonian(params, cutoff), 1, want_vectors=True)
        vec = s.vectors[:, 0]


def mean_photon_ground(
    params: ModelParams,
    tol: float = 1e-8,
    tail_tol: float = TAIL_TOL,
    start_cutoff: int | None = None,
    max_cutoff: int = 32_768,
) -> float:
    """<a^dag a> in the converged ground state.

    The cutoff is raised until the spectrum classifies Converged and the
    occupation of the top two Fock levels falls below tail_tol.  Refuses
    with a divergence diagnostic when the spectrum is unbounded below
    (original model past the collapse point).
    """
    value, _ = _mean_photon_detail(params, tol, tail_tol, start_cutoff, max_cutoff)
    return value


@dataclass
class StaircaseReport:
    u_values: np.ndarray
    mean_photon: np.ndarray
    renormalized: np.ndarray
    edges: list[float]
    widths: list[float]
    plateaus: list[float]
    fitted_slope: float
    fit_window: tuple[float, float]
    cutoffs: list[int] = field(default_factory=list, repr=False)


def _refine_edge(params, u_lo, u_hi, target, tol, bisect_tol=1e-6):
    f = lambda u: mean_photon_ground(dc_replace(params, u=u), tol=tol) - target
    f_lo = f(u_lo)
    for _ in range(60):
        mid = 0.5 * (u_lo + u_hi)
        fm = f(mid)
        if f_lo * fm <= 0.0:
            u_hi = mid
        else:
            u_lo, f_lo = mid, fm
        if u_hi - u_lo < bisect_tol:
            break
    return 0.5 * (u_lo + u_hi)


def staircase_scan(
    params: ModelParams,
    u_values,
    tol: float = 1e-8,
    allow_small_ratio: bool = False,
    min_points_per_step: int = 3,
    workers: int = 1,
    start_cutoff: int | None = None,
) -> StaircaseReport:
    """Ground-state mean photon number across a Stark-coupling grid.

    Detects step edges as bisection-refined half-integer crossings, measures
    widths and plateau values, and fits the renormalized staircase midline
    slope by least squares.  The fit window starts one full step after the
    first edge; the fitted slope is NaN when fewer than five midline points
    land in the window.
    """
    if params.variant is not Variant.COMPLETED:
        raise ValueError("staircase scan requires the completed model variant")
    if params.effective_kappa <= 0.0:
        raise ValueError("staircase scan requires kappa > 0")
    check_co_regime(params, allow_small_ratio)

    u_values = np.asarray(list(u_values), dtype=float)
    if u_values.size < 2 or np.any(np.diff(u_values) <= 0):
        raise ValueError("u grid must be strictly increasing with >= 2 points")
    step = float(np.max(np.diff(u_values)))
    expected_width = 4.0 * params.effective_kappa
    if expected_width / step < min_points_per_step:
        raise ResolutionError(
            f"grid step {step:.3g} resolves fewer than {min_points_per_step} points "
            f"per expected step width 4 kappa = {expected_width:.3g}"
        )

    def point(u):
        return _mean_photon_detail(
            dc_replace(params, u=float(u)), tol, TAIL_TOL, start_cutoff, 32_768
        )

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(point, u_values))
    else:
        results = [point(u) for u in u_values]
    nbar = np.array([r[0] for r in results])
    cutoffs = [r[1] for r in results]

    edges: list[float] = []
    for i in range(len(u_values) - 1):
        if nbar[i + 1] - nbar[i] >= 0.5:
            target = round(nbar[i]) + 0.5
            edges.append(
                _refine_edge(params, float(u_values[i]), float(u_values[i + 1]), target, tol)
            )
    widths = [edges[j + 1] - edges[j] for j in range(len(edges) - 1)]

    # plateau values: average over interior points at least one grid step
    # away from the surrounding edges
    plateaus: list[float] = []
    bounds = [u_values[0] - step] + edges + [u_values[-1] + step]
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        mask = (u_values > lo + step) & (u_values < hi - step)
        if np.any(mask):
            plateaus.append(float(np.mean(nbar[mask])))

    renorm = nbar / params.delta
    fitted_slope = float("nan")
    fit_window = (float("nan"), float("nan"))
    if len(edges) >= 2:
        mean_width = float(np.mean(widths)) if widths else expected_width
        window_lo = edges[0] + mean_width
        window_hi = edges[-1]
        fit_window = (window_lo, window_hi)
        midline = []
        for e in edges:
            if not window_lo - 1e-12 <= e <= window_hi + 1e-12:
                continue
            below = nbar[np.searchsorted(u_values, e) - 1]
            midline.append((e, (round(below) + 0.5) / params.delta))
        if len(midline) >= 5:
            xs = np.array([m[0] for m in midline])
            ys = np.array([m[1] for m in midline])
            fitted_slope = float(np.polyfit(xs, ys, 1)[0])

    return StaircaseReport(
        u_values=u_values,
        mean_photon=nbar,
        renormalized=renorm,
        edges=edges,
        widths=widths,
        plateaus=plateaus,
        fitted_slope=fitted_slope,
        fit_window=fit_window,
        cutoffs=cutoffs,
    )


@dataclass(frozen=True)
class CrossingEvent:
    value: float
    pair: tuple[int, int]
    gap: float


def detect_level_crossings(
    params: ModelParams,
    param_name: str,
    values,
    levels: int,
    gap_threshold: float = GAP_THRESHOLD,
    tol: float = 1e-8,
) -> list[CrossingEvent]:
    """True level crossings along a one-parameter sweep.

    A crossing is a local minimum of an adjacent-level gap that refines
    (golden-section, at the converged cutoff) to below gap_threshold.
    Avoided crossings stay above the threshold and are not reported.
    """
    if param_name not in ("g", "u", "kappa", "delta"):
        raise ValueError(f"unsupported sweep parameter {param_name!r}")
    if levels < 2:
        raise ValueError("need at least two levels to detect crossings")
    values = np.asarray(list(values), dtype=float)
    if values.size < 3 or np.any(np.diff(values) <= 0):
        raise ValueError("sweep grid must be strictly increasing with >= 3 points")

    spectra = []
    cutoffs = []
    for v in values:
        p = dc_replace(params, **{param_name: float(v)})
        spec, report = converged_spectrum(p, k=levels, tol=tol)
        if report.classification is Classification.UNBOUNDED_BELOW:
            raise DivergentSpectrumError(
                f"sweep point {param_name} = {v} is unbounded from below"
            )
        spectra.append(spec.energies)
        cutoffs.append(spec.cutoff)
    energies = np.array(spectra)

    events: list[CrossingEvent] = []
    inv_golden = (math.sqrt(5.0) - 1.0) / 2.0
    for j in range(levels - 1):
        gaps = energies[:, j + 1] - energies[:, j]
        for i in range(1, len(values) - 1):
            if not (gaps[i] <= gaps[i - 1] and gaps[i] <= gaps[i + 1]):
                continue
            if not (gaps[i] < gaps[i - 1] or gaps[i] < gaps[i + 1]):
                continue
            cutoff = max(cutoffs[i - 1 : i + 2])

            def gap_at(v):
                p = dc_replace(params, **{param_name: float(v)})
                s = eigen_symmetric(build_hamiltonian(p, cutoff), j + 2)
                return float(s.energies[j + 1] - s.energies[j])

            a, b = float(values[i - 1]), float(values[i + 1])
            c, d = b - inv_golden * (b - a), a + inv_golden * (b - a)
            fc, fd = gap_at(c), gap_at(d)
            for _ in range(80):
                if fc < fd:
                    b, d, fd = d, c, fc
                    c = b - inv_golden * (b - a)
                    fc = gap_at(c)
                else:
                    a, c, fc = c, d, fd
                    d = a + inv_golden * (b - a)
                    fd = gap_at(d)
                if b - a < 1e-10:
                    break
            x = 0.5 * (a + b)
            gap_min = gap_at(x)
            if gap_min < gap_threshold:
                events.append(CrossingEvent(value=x, pair=(j, j + 1), gap=gap_min))

    events.sort(key=lambda ev: (ev.value, ev.pair))
    deduped: list[CrossingEvent] = []
    min_sep = float(np.min(np.diff(values))) / 2.0
    for ev in events:
        if deduped and deduped[-1].pair == ev.pair and abs(ev.value - deduped[-1].value) < min_sep:
            continue
        deduped.append(ev)
    return deduped
