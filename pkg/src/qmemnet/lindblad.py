"""Time-dependent Lindblad engine for the coupled-memristor network.

The master equation integrated here is

    drho/dt = -i [H, rho] + sum_j Gamma_j(t) ( a_j rho a_j^dag
                                               - 1/2 {a_j^dag a_j, rho} )

with the flux-controlled decay rates Gamma_j(t) of qmemnet.circuit.  Written
with an explicit 1/2 prefactor this is (Gamma/2)(2 a rho a^dag - {n, rho}),
the convention under which the first moments <n_j>, <phi_j> damp at Gamma/2,
matching the closed moment system in qmemnet.moments.

Integration is fixed-step classical RK4 on the dense density matrix; the
generator is time dependent, so a single matrix exponential is not available.
The state is re-hermitized each step; positivity is monitored downstream, not
projected.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .circuit import DerivedEnergies, DriveSpec, HamiltonianMatrix, decay_rate
from .constants import ELEMENTARY_CHARGE, HBAR
from .ops import embed, hermitize, lowering, product_state

RESOLUTION_GUARD = 0.05  # warn when dt * max(omega) exceeds this


class IntegrationDivergedError(RuntimeError):
    def __init__(self, t: float):
        super().__init__(f"density-matrix integration produced NaN/Inf at t = {t:.6e} s")
        self.t = t


@dataclass(frozen=True)
class InitialState:
    """Product of single-site superpositions cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""

    theta: tuple[float, ...]
    varphi: tuple[float, ...]


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray
    site_dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=complex))
        d = int(np.prod(self.site_dims))
        if self.matrix.shape != (d, d):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match site_dims {self.site_dims}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def validate(self, herm_tol: float = 1e-10, trace_tol: float = 1e-10,
                 eig_floor: float = -1e-8) -> None:
        m = self.matrix
        herm = float(np.max(np.abs(m - m.conj().T)))
        if herm > herm_tol:
            raise ValueError(f"density matrix not Hermitian: max asymmetry {herm:.3e}")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"density matrix trace {tr} deviates from 1")
        lo = self.min_eigenvalue()
        if lo < eig_floor:
            raise ValueError(f"density matrix has eigenvalue {lo:.3e} below {eig_floor:.1e}")


def qubit_ket(theta: float, varphi: float, d: int) -> np.ndarray:
    """|psi(theta, phi)> embedded in a d-level site (higher Fock amplitudes zero)."""
    v = np.zeros(d, dtype=complex)
    v[0] = np.cos(theta / 2.0)
    v[1] = np.exp(1j * varphi) * np.sin(theta / 2.0)
    return v


def make_initial_state(init: InitialState, d: int) -> DensityMatrix:
    """Pure product density matrix of the per-site superpositions."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    psi = product_state([qubit_ket(th, ph, d) for th, ph in zip(init.theta, init.varphi)])
    rho = np.outer(psi, psi.conj())
    return DensityMatrix(matrix=rho, site_dims=(d,) * len(init.theta))


def number_observable(d: int, eta: float) -> np.ndarray:
    """Charge-number operator n = (i / 2 eta)(a - a^dag) on one site.

    The sign is fixed so the Heisenberg equations of H = omega a^dag a read
    d<n>/dt = +e_l <phi>, d<phi>/dt = -2 e_c <n>, matching qmemnet.moments
    (this makes [phi, n] = -i); at d = 2 the operator is -sigma_y / (2 eta).
    """
    a = lowering(d)
    return (1j / (2.0 * eta)) * (a - a.conj().T)


def phase_observable(d: int, eta: float) -> np.ndarray:
    """Phase operator phi = eta (a^dag + a) on one site."""
    a = lowering(d)
    return eta * (a.conj().T + a)


def expectation(rho: DensityMatrix | np.ndarray, site: int, observable: str,
                energies: DerivedEnergies) -> float:
    """<O_j> for O in {"n", "phi"}; asserts the imaginary residue is < 1e-10."""
    if isinstance(rho, DensityMatrix):
        dims, m = rho.site_dims, rho.matrix
    else:
        m = np.asarray(rho)
        n = energies.n_sites
        d = round(m.shape[0] ** (1.0 / n))
        dims = (d,) * n
    if observable == "n":
        op = number_observable(dims[site], energies.eta[site])
    elif observable == "phi":
        op = phase_observable(dims[site], energies.eta[site])
    else:
        raise ValueError(f"unknown observable {observable!r}")
    val = complex(np.trace(embed(op, site, dims) @ m))
    if abs(val.imag) > 1e-10:
        raise ValueError(f"expectation value has imaginary residue {val.imag:.3e}")
    return float(val.real)


def lindblad_rhs(rho: np.ndarray, t: float, hamiltonian: HamiltonianMatrix,
                 energies: DerivedEnergies, drives: Sequence[DriveSpec]) -> np.ndarray:
    """Right-hand side drho/dt of the master equation at time t."""
    h = hamiltonian.matrix
    if rho.shape != h.shape:
        raise ValueError(f"state shape {rho.shape} does not match Hamiltonian {h.shape}")
    dims = hamiltonian.site_dims
    out = -1j * (h @ rho - rho @ h)
    a_local = lowering(hamiltonian.dim_per_site)
    for j in range(hamiltonian.n_sites):
        gam = decay_rate(j, t, energies, drives[j])
        if gam == 0.0:
            continue
        aj = embed(a_local, j, dims)
        nj = aj.conj().T @ aj
        out += gam * (aj @ rho @ aj.conj().T - 0.5 * (nj @ rho + rho @ nj))
    return out


@dataclass(frozen=True)
class Trajectory:
    """Stored time series of an integration run.

    All per-site series live on the (thinned) `times` grid; density matrices
    are kept on the separate, possibly coarser `state_times` grid.
    """

    times: np.ndarray
    expect_n: np.ndarray    # (n_sites, n_times)
    expect_phi: np.ndarray
    gamma: np.ndarray
    voltage: np.ndarray
    current: np.ndarray
    states: tuple[DensityMatrix, ...]
    state_times: np.ndarray
    site_dims: tuple[int, ...]

    @property
    def n_sites(self) -> int:
        return self.expect_n.shape[0]

    def max_trace_drift(self) -> float:
        return max((abs(complex(np.trace(s.matrix)) - 1.0) for s in self.states), default=0.0)

    def min_state_eigenvalue(self) -> float:
        return min((s.min_eigenvalue() for s in self.states), default=0.0)

    def purities(self) -> np.ndarray:
        return np.array([s.purity() for s in self.states])


def _vectorized_generator(hamiltonian: HamiltonianMatrix, energies: DerivedEnergies,
                          drives: Sequence[DriveSpec]):
    """RHS closure on the row-major vectorized state.

    With vec(A rho B) = (A kron B^T) vec(rho), the generator splits into a
    static commutator matrix plus per-site jump terms scaled by Gamma_j(t):

        dv/dt = L_H v + sum_j Gamma_j(t) [ (a_j kron a_j^*) v - (w_j / 2) * v ]

    where w_j is the diagonal of the anticommutator part.  Everything static is
    prebuilt sparse; only scalar rates vary along the run.
    """
    dims = hamiltonian.site_dims
    h = sp.csr_matrix(hamiltonian.matrix)
    dim = hamiltonian.dim
    a_local = lowering(hamiltonian.dim_per_site)
    jumps = []
    anti_diags = []
    for j in range(hamiltonian.n_sites):
        aj = sp.csr_matrix(embed(a_local, j, dims))
        jumps.append(sp.kron(aj, aj.conj()).tocsr())
        nd = np.real(np.diag((aj.conj().T @ aj).toarray()))
        anti_diags.append(np.add.outer(nd, nd).reshape(-1))

    def rhs(t: float, v: np.ndarray) -> np.ndarray:
        # commutator in matrix form: rho H = (H rho)^dag because every RK4
        # stage input is Hermitian (the generator preserves Hermiticity and
        # the state is re-hermitized each step)
        m = v.reshape(dim, dim)
        c = h @ m
        np.multiply(c, -1j, out=c)
        out = c + c.conj().T
        out = out.reshape(-1)
        gams = [decay_rate(j, t, energies, drives[j]) for j in range(len(jumps))]
        decay = None
        for j, jump in enumerate(jumps):
            if gams[j] == 0.0:
                continue
            tmp = jump @ v
            np.multiply(tmp, gams[j], out=tmp)
            np.add(out, tmp, out=out)
            decay = gams[j] * anti_diags[j] if decay is None else decay + gams[j] * anti_diags[j]
        if decay is not None:
            np.multiply(decay, -0.5, out=decay)
            np.multiply(decay, v, out=tmp)
            np.add(out, tmp, out=out)
        return out

    return rhs


def integrate(rho0: DensityMatrix, t_end: float, dt: float,
              hamiltonian: HamiltonianMatrix, energies: DerivedEnergies,
              drives: Sequence[DriveSpec], store_every: int = 1,
              state_stride: int | None = 1) -> Trajectory:
    """Fixed-step RK4 integration of the master equation from t = 0 to t_end.

    `store_every` thins the observable series; `state_stride` additionally
    thins the stored density matrices relative to the series grid (None keeps
    only the final state).  Emits a warning when dt * max(omega) exceeds the
    resolution guard; raises IntegrationDivergedError on NaN/Inf.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if dt * float(np.max(energies.omega)) > RESOLUTION_GUARD:
        warnings.warn(f"dt * max(omega) = {dt * float(np.max(energies.omega)):.3f} exceeds "
                      f"{RESOLUTION_GUARD}; the fixed-step integrator may under-resolve",
                      stacklevel=2)
    n_steps = max(1, int(round(t_end / dt)))
    rhs = _vectorized_generator(hamiltonian, energies, drives)
    dims = hamiltonian.site_dims
    dim = hamiltonian.dim
    n_sites = hamiltonian.n_sites
    obs_n = [embed(number_observable(hamiltonian.dim_per_site, energies.eta[j]), j, dims).conj().reshape(-1)
             for j in range(n_sites)]
    obs_phi = [embed(phase_observable(hamiltonian.dim_per_site, energies.eta[j]), j, dims).conj().reshape(-1)
               for j in range(n_sites)]

    stored_idx = list(range(0, n_steps + 1, store_every))
    if stored_idx[-1] != n_steps:
        stored_idx.append(n_steps)
    times = np.array([k * dt for k in stored_idx])
    en = np.empty((n_sites, len(stored_idx)))
    eph = np.empty_like(en)
    states: list[DensityMatrix] = []
    state_times: list[float] = []

    v = rho0.matrix.reshape(-1).astype(complex)
    store_pos = 0
    for step in range(n_steps + 1):
        if step == stored_idx[store_pos]:
            t = step * dt
            for j in range(n_sites):
                en[j, store_pos] = float(np.real(obs_n[j] @ v))
                eph[j, store_pos] = float(np.real(obs_phi[j] @ v))
            keep_state = (state_stride is not None and store_pos % state_stride == 0)
            if keep_state or step == n_steps:
                states.append(DensityMatrix(matrix=v.reshape(dim, dim).copy(), site_dims=dims))
                state_times.append(t)
            store_pos += 1
        if step == n_steps:
            break
        t = step * dt
        k1 = rhs(t, v)
        k2 = rhs(t + dt / 2.0, v + (dt / 2.0) * k1)
        k3 = rhs(t + dt / 2.0, v + (dt / 2.0) * k2)
        k4 = rhs(t + dt, v + dt * k3)
        v = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        v = hermitize(v.reshape(dim, dim)).reshape(-1)
        if not np.all(np.isfinite(v)):
            raise IntegrationDivergedError((step + 1) * dt)

    gam = np.empty_like(en)
    for j in range(n_sites):
        gam[j] = decay_rate(j, times, energies, drives[j])
    volt, curr = voltage_and_current(en, gam, energies)
    return Trajectory(times=times, expect_n=en, expect_phi=eph, gamma=gam,
                      voltage=volt, current=curr, states=tuple(states),
                      state_times=np.array(state_times), site_dims=dims)


def voltage_and_current(expect_n: np.ndarray, gamma: np.ndarray,
                        energies: DerivedEnergies) -> tuple[np.ndarray, np.ndarray]:
    """Capacitor voltage V_j = (2e / C_j) <n_j> and quasiparticle current I_j = Gamma_j V_j.

    2e / C_j equals hbar * e_c_j / e, so no capacitance needs to be carried.
    """
    scale = (HBAR * energies.e_c / ELEMENTARY_CHARGE)[:, None]
    voltage = scale * expect_n
    return voltage, gamma * voltage
