#!/usr/bin/env python3
"""Pinched hysteresis of a single flux-driven quantum memristor.

Simulates one uncoupled memristor (C = 3.6 fF, L = 0.2 uH), plots the drive,
the decay rate Gamma(t), the capacitor voltage, and the I-V curve whose loops
all pass through the origin -- the memristive fingerprint.
"""

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from pathlib import Path

import qmemnet as qm

Path("demos/output").mkdir(parents=True, exist_ok=True)

spec = qm.uncoupled_circuit()
energies = qm.derive_energies(spec)
print(f"site frequency omega/2pi = {energies.omega[0] / 2 / np.pi / 1e9:.3f} GHz")
print(f"zero-point phase scale eta = {energies.eta[0]:.4f}")
print(f"peak decay rate / omega   = {qm.decay_rate(0, 0.0, energies, qm.DriveSpec('constant')) / energies.omega[0]:.4f}")

ham = qm.build_hamiltonian(energies, d=2)
rho0 = qm.make_initial_state(qm.InitialState(spec.theta, spec.varphi), d=2)
dt = (2 * np.pi / energies.omega.max()) / 200
t_end = 6 * max(d.period() for d in spec.drives)
traj = qm.integrate(rho0, t_end, dt, ham, energies, spec.drives)

loops = qm.segment_loops(traj.voltage[0], traj.current[0], traj.times, site=0)
print(f"{len(loops)} completed loops; form factor of the first: "
      f"{loops.loops[0].form_factor:.4f}")

fig, axes = plt.subplots(2, 2, figsize=(10, 7))
t_ns = traj.times * 1e9
axes[0, 0].plot(t_ns, traj.gamma[0] / energies.omega[0])
axes[0, 0].set(xlabel="t (ns)", ylabel=r"$\Gamma(t)/\omega$", title="flux-controlled decay rate")
axes[0, 1].plot(t_ns, traj.voltage[0] * 1e6)
axes[0, 1].set(xlabel="t (ns)", ylabel=r"V ($\mu$V)", title="capacitor voltage")
axes[1, 0].plot(t_ns, traj.expect_n[0], label=r"$\langle n \rangle$")
axes[1, 0].plot(t_ns, traj.expect_phi[0], label=r"$\langle \phi \rangle$")
axes[1, 0].set(xlabel="t (ns)", title="first moments")
axes[1, 0].legend()
axes[1, 1].plot(traj.voltage[0] * 1e6, traj.current[0] * 1e6, lw=0.7)
axes[1, 1].set(xlabel=r"V ($\mu$V)", ylabel=r"I ($\mu$V/s scaled)",
               title="pinched hysteresis (all loops cross the origin)")
fig.tight_layout()
fig.savefig("demos/output/01_hysteresis.png", dpi=140)
print("wrote demos/output/01_hysteresis.png")
