#!/usr/bin/env python3
"""Genuine tripartite correlations: negativity and the monogamy residual.

The tripartite negativity (geometric mean of the three one-vs-rest
negativities) stays strictly positive once the coupling acts, in both
geometries.  The squared-EoF monogamy residual M2 measures entanglement
beyond pairs; it is an order of magnitude smaller in the identical linear
chain than in the triangle, and mixed-state values rely on a convex-roof
upper-bound estimate (tagged 'estimated').
"""

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from pathlib import Path

import qmemnet as qm

Path("demos/output").mkdir(parents=True, exist_ok=True)


def simulate(name, periods, store_every):
    circuit = qm.get_preset(name).circuit
    energies = qm.derive_energies(circuit)
    ham = qm.build_hamiltonian(energies, d=2)
    rho0 = qm.make_initial_state(qm.InitialState(circuit.theta, circuit.varphi), d=2)
    dt = (2 * np.pi / energies.omega.max()) / 200
    t_end = periods * max(d.period() for d in circuit.drives)
    return qm.integrate(rho0, t_end, dt, ham, energies, circuit.drives,
                        store_every=store_every)

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4))

for name in ("fig2a", "fig2d"):
    traj = simulate(name, periods=10.0, store_every=5)
    n3 = [qm.tripartite_negativity(s.matrix, (2, 2, 2)) for s in traj.states]
    ax1.plot(traj.state_times * 1e9, n3, label=qm.get_preset(name).circuit.topology)
    print(f"{name}: min N3(t>0) = {min(n3[1:]):.3e}")
ax1.set(xlabel="t (ns)", ylabel=r"$N_3$", title="tripartite negativity")
ax1.legend()

# monogamy residual about the middle site (fewer restarts keep the demo quick)
for name, color in (("fig2a", "tab:blue"), ("fig2d", "tab:orange")):
    traj = simulate(name, periods=20.0, store_every=40)
    reports = qm.correlation_series([s.matrix for s in traj.states], traj.state_times,
                                    include=("pair_eof", "monogamy"),
                                    restarts=12, seed=7, max_iter=200)
    m2 = np.array([r.monogamy_m2 for r in reports])
    est = np.array([r.estimated for r in reports])
    ax2.plot(traj.state_times * 1e9, m2, color=color,
             label=qm.get_preset(name).circuit.topology)
    ax2.plot(traj.state_times[est] * 1e9, m2[est], ".", color=color, ms=3)
    print(f"{name}: max M2 = {m2.max():.3e} ({int(est.sum())} estimated points)")
ax2.set(xlabel="t (ns)", ylabel=r"$M_2$", title="monogamy residual (dots: estimated)")
ax2.legend()
fig.tight_layout()
fig.savefig("demos/output/04_tripartite.png", dpi=140)
print("wrote demos/output/04_tripartite.png")
