#!/usr/bin/env python3
"""Cutoff-doubling study of spectral collapse.

At u = 2 omega the ten lowest levels of the Rabi-Stark model squeeze into a
narrow window and creep toward a common value as the Fock cutoff doubles;
below the critical point the levels lock immediately, above it the ground
energy dives linearly with the cutoff.
"""

from rabistark import Classification, ModelParams, Variant, converged_spectrum

DELTA = 1.0
G = 0.2
LEVELS = 10

if __name__ == "__main__":
    for u, tol in [(1.9, 1e-8), (2.0, 1e-6), (2.2, 1e-8)]:
        params = ModelParams(delta=DELTA, g=G, u=u, variant=Variant.RABI_STARK)
        spec, report = converged_spectrum(params, LEVELS, tol=tol)
        print(f"u = {u}: {report.classification.value} "
              f"(final cutoff {report.final_cutoff}, tol {tol})")
        for cutoff, energies in report.history:
            spread = energies[-1] - energies[0]
            print(f"    cutoff {cutoff:6d}  E0 = {energies[0]:+.10f}  "
                  f"spread(k={LEVELS}) = {spread:.3e}")
        if report.classification is Classification.COLLAPSED_DEGENERATE:
            print(f"    -> collapsed-degenerate within "
                  f"{report.degeneracy_window} omega")
