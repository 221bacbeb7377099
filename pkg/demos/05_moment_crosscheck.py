#!/usr/bin/env python3
"""Cross-validation of the density-matrix engine against the closed moment ODEs.

The master equation closes on <n_j>, <phi_j>, giving an independent linear
oracle.  At d = 2 the uncoupled case agrees to machine precision (the qubit
moments obey the same equations); with coupling, agreement requires bosonic
headroom, restored here by truncating at d = 8.
"""

import time

import numpy as np

import qmemnet as qm

# uncoupled, d = 2: exact agreement
spec = qm.uncoupled_circuit()
energies = qm.derive_energies(spec)
dt = (2 * np.pi / energies.omega.max()) / 200
t_end = 4 * max(d.period() for d in spec.drives)
ham = qm.build_hamiltonian(energies, d=2)
rho0 = qm.make_initial_state(qm.InitialState(spec.theta, spec.varphi), d=2)
traj = qm.integrate(rho0, t_end, dt, ham, energies, spec.drives)
n0, p0 = qm.initial_moments(energies, spec.theta, spec.varphi)
_, ns, ps = qm.integrate_moments(n0, p0, t_end, dt, energies, spec.drives)
print("uncoupled, d=2:")
print(f"  sup-norm relative error  <n>: {qm.relative_sup_error(traj.expect_n, ns):.2e}"
      f"   <phi>: {qm.relative_sup_error(traj.expect_phi, ps):.2e}")

# coupled triangle, d = 8 (takes ~half a minute)
spec = qm.get_preset("fig2a").circuit
energies = qm.derive_energies(spec)
dt = (2 * np.pi / energies.omega.max()) / 200
t_end = 2 * max(d.period() for d in spec.drives)
ham = qm.build_hamiltonian(energies, d=8)
rho0 = qm.make_initial_state(qm.InitialState(spec.theta, spec.varphi), d=8)
t0 = time.time()
traj = qm.integrate(rho0, t_end, dt, ham, energies, spec.drives,
                    store_every=2, state_stride=None)
print(f"coupled triangle, d=8 ({time.time() - t0:.0f} s):")
n0, p0 = qm.initial_moments(energies, spec.theta, spec.varphi)
_, ns, ps = qm.integrate_moments(n0, p0, t_end, dt, energies, spec.drives, store_every=2)
for j in range(3):
    err_n = qm.relative_sup_error(traj.expect_n[j], ns[j])
    err_p = qm.relative_sup_error(traj.expect_phi[j], ps[j])
    print(f"  site {j + 1}: <n> {err_n:.2e}   <phi> {err_p:.2e}")

# the same comparison at d = 2 shows the qubit truncation error instead
ham2 = qm.build_hamiltonian(energies, d=2)
rho2 = qm.make_initial_state(qm.InitialState(spec.theta, spec.varphi), d=2)
traj2 = qm.integrate(rho2, t_end, dt, ham2, energies, spec.drives, store_every=2)
print("same circuit at d=2 (coupling breaks the qubit moment closure):")
print(f"  site 1: <n> {qm.relative_sup_error(traj2.expect_n[0], ns[0]):.2e}")
