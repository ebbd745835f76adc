#!/usr/bin/env python3
"""The band-shifted (perturbed) energy and its closed-form flow.

The two-scale Haar bank leaves a gap between the squared low-pass response
and the squared high-pass responses: gap(lam) = low^2 - (high^2 sum), which
stays positive on [0, 2].  Shifting the low band by +eps and the high bands
by -eps therefore *increases* the energy of every signal, yet its gradient
flow still smooths: each frequency component decays at rate lam + eps*gap(lam),
so the flow converges to zero with the kernel direction slowest.

This script prints the gap profile, verifies the enhancement, compares the
closed-form flow against a forward-Euler integration, and checks the
exponential decay envelope.
"""

import numpy as np

import frameflow as ff

rng = np.random.default_rng(12)

print("gap profile on [0, 2]:")
for lam in (0.0, 0.5, 1.0, 1.5, 2.0):
    print(f"   gap({lam:.1f}) = {ff.energy_gap(lam):.7f}")

graph = ff.generate_graph(ff.GraphSpec(kind="erdos_renyi", n=12, p=0.4, seed=21))
lap = ff.normalized_laplacian(graph)
spectrum = ff.eigh(lap)
sys = ff.build_framelet_system(spectrum, 2)
h0 = rng.standard_normal((12, 2))
eps = 1.0

plain = ff.dirichlet_energy(lap, h0)
shifted = ff.perturbed_energy(sys, lap, h0, eps)
print(f"\nDirichlet energy        = {plain:.6f}")
print(f"band-shifted (eps={eps})   = {shifted:.6f}   (enhancement {shifted - plain:+.6f})")

print("\nclosed form vs forward Euler (tau = 1e-4) at t = 0.1:")
gap_matrix = spectrum.u.T @ np.diag(ff.energy_gap(np.maximum(spectrum.eigenvalues, 0))) @ spectrum.u
state = h0.copy()
for _ in range(1000):
    state = state - 1e-4 * ((lap + eps * gap_matrix) @ state)
exact = ff.perturbed_closed_form(spectrum, h0, eps, 0.1)
print("   relative difference =",
      f"{np.linalg.norm(state - exact) / np.linalg.norm(exact):.2e}")

lams = np.maximum(spectrum.eigenvalues, 0.0)
positive = lams[lams > 1e-9]
slowest = float(np.min(positive + eps * ff.energy_gap(positive)))
bound0 = 0.5 * spectrum.rho_l * float(np.sum(h0 * h0))
print(f"\ndecay along a log-spaced time grid (slowest positive rate {slowest:.3f}):")
print(f"{'t':>8} {'E(H(t))':>12} {'envelope':>12}")
for t in np.logspace(-2, 1, 7):
    value = ff.dirichlet_energy(lap, ff.perturbed_closed_form(spectrum, h0, eps, t))
    print(f"{t:>8.3f} {value:>12.3e} {bound0 * np.exp(-2 * t * slowest):>12.3e}")
print("\nevery row sits under its envelope: the perturbation slows smoothing")
print("but cannot prevent it -- separating behavior needs per-band weights.")
