"""Closed moment equations for <n_j>, <phi_j>: the engine's cross-validation oracle.

The master equation closes on the first moments,

    d<n_j>/dt   =  e_l[j] <phi_j> - sum_{k != j} e_l_couple[j,k] <phi_k>
                   - Gamma_j(t)/2 <n_j>
    d<phi_j>/dt = -2 e_c[j] <n_j> - Gamma_j(t)/2 <phi_j>

(hbar = 1 units), a linear, time-dependent ODE system integrated here with the
same fixed-step RK4 scheme as the density-matrix engine so the two solutions
can be compared directly on one grid.  The linear topology enters through
e_l_couple[0,2] = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import DerivedEnergies, DriveSpec, decay_rate


@dataclass(frozen=True)
class MomentState:
    n: np.ndarray
    phi: np.ndarray
    t: float


def initial_moments(energies: DerivedEnergies, theta: Sequence[float],
                    varphi: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Moments of the product state |psi(theta_j, phi_j)>: matches the engine at t = 0."""
    th = np.asarray(theta, dtype=float)
    ph = np.asarray(varphi, dtype=float)
    n0 = -np.sin(th) * np.sin(ph) / (2.0 * energies.eta)
    phi0 = energies.eta * np.sin(th) * np.cos(ph)
    return n0, phi0


def moment_rhs(n: np.ndarray, phi: np.ndarray, t: float, energies: DerivedEnergies,
               drives: Sequence[DriveSpec]) -> tuple[np.ndarray, np.ndarray]:
    gam = np.array([decay_rate(j, t, energies, drives[j]) for j in range(energies.n_sites)])
    dn = energies.e_l * phi - energies.e_l_couple @ phi - 0.5 * gam * n
    dphi = -2.0 * energies.e_c * n - 0.5 * gam * phi
    return dn, dphi


def integrate_moments(n0: np.ndarray, phi0: np.ndarray, t_end: float, dt: float,
                      energies: DerivedEnergies, drives: Sequence[DriveSpec],
                      store_every: int = 1) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """RK4 on the moment system; returns (times, n(t), phi(t)) on the stored grid."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    n_steps = max(1, int(round(t_end / dt)))
    stored_idx = list(range(0, n_steps + 1, store_every))
    if stored_idx[-1] != n_steps:
        stored_idx.append(n_steps)
    times = np.array([k * dt for k in stored_idx])
    n_sites = energies.n_sites
    ns = np.empty((n_sites, len(stored_idx)))
    phis = np.empty_like(ns)

    n = np.asarray(n0, dtype=float).copy()
    phi = np.asarray(phi0, dtype=float).copy()
    pos = 0
    for step in range(n_steps + 1):
        if step == stored_idx[pos]:
            ns[:, pos] = n
            phis[:, pos] = phi
            pos += 1
        if step == n_steps:
            break
        t = step * dt
        k1n, k1p = moment_rhs(n, phi, t, energies, drives)
        k2n, k2p = moment_rhs(n + 0.5 * dt * k1n, phi + 0.5 * dt * k1p, t + 0.5 * dt, energies, drives)
        k3n, k3p = moment_rhs(n + 0.5 * dt * k2n, phi + 0.5 * dt * k2p, t + 0.5 * dt, energies, drives)
        k4n, k4p = moment_rhs(n + dt * k3n, phi + dt * k3p, t + dt, energies, drives)
        n = n + (dt / 6.0) * (k1n + 2.0 * k2n + 2.0 * k3n + k4n)
        phi = phi + (dt / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        if not (np.all(np.isfinite(n)) and np.all(np.isfinite(phi))):
            raise RuntimeError(f"moment integration diverged at t = {(step + 1) * dt:.6e} s")
    return times, ns, phis


def relative_sup_error(series: np.ndarray, reference: np.ndarray) -> float:
    """sup-norm deviation normalized by the reference's sup norm."""
    ref = float(np.max(np.abs(reference)))
    if ref == 0.0:
        return float(np.max(np.abs(series)))
    return float(np.max(np.abs(series - reference)) / ref)
