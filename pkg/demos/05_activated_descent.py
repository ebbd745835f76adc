#!/usr/bin/env python3
"""Nonlinear descent: activations that keep the energy falling.

Passing the negative gradient through an activation with x*act(x) >= 0
(identity, relu, tanh) still decreases the governing energy: continuously it
is a descent direction, and discretely the increase is bounded by the
largest curvature eigenvalue times the squared step.  This script runs all
three activations from the same start, tracks the energy, and checks the
quadratic bound step by step.
"""

import numpy as np

import frameflow as ff

rng = np.random.default_rng(4)

graph = ff.generate_graph(ff.GraphSpec(kind="erdos_renyi", n=9, p=0.45, seed=8))
ahat = ff.normalized_adjacency(graph)
sys = ff.build_framelet_system(ff.eigh(ff.normalized_laplacian(graph)), 2)

c = 2
omega = {b: np.eye(c) for b in sys.bands}
w = {}
for b in sys.bands:
    m = rng.standard_normal((c, c))
    w[b] = (m + m.T) / 2
cfg = ff.WeightConfig(omega=omega, w=w, tau=1e-2)
h0 = rng.standard_normal((9, c))

# curvature bound from the explicit quadratic form (small n*c, so affordable)
blocks = []
for b in sys.bands:
    t = sys.transforms[b]
    blocks.append(np.kron(cfg.omega[b], t.T @ t) - np.kron(cfg.w[b], t.T @ ahat @ t))
curvature = float(np.max(np.abs(np.linalg.eigvalsh(0.5 * sum(blocks)))))
print(f"curvature constant of the energy's quadratic form: {curvature:.3f}\n")

for activation in ("identity", "relu", "tanh"):
    state = h0.copy()
    energy = ff.total_framelet_energy(sys, ahat, state, cfg)
    start = energy
    worst_violation = -np.inf
    for _ in range(400):
        nxt = ff.step_activated(sys, ahat, state, None, cfg, activation)
        nxt_energy = ff.total_framelet_energy(sys, ahat, nxt, cfg)
        slack = nxt_energy - energy - curvature * float(np.linalg.norm(nxt - state)) ** 2
        worst_violation = max(worst_violation, slack)
        state, energy = nxt, nxt_energy
    print(f"{activation:>8}: energy {start:+.6f} -> {energy:+.6f}  "
          f"(worst bound slack {worst_violation:+.2e}, negative = bound held)")

print("\nwith tau small enough (tau * curvature < 1) the sequence is monotone;")
print("relu additionally preserves positive homogeneity, so renormalized")
print("dominance runs remain meaningful for it, unlike tanh.")
