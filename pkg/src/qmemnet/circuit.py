"""Circuit model: raw hardware parameters -> quantized Hamiltonian.

A memristive unit cell is an asymmetric-SQUID oscillator (effective capacitance
C_sigma in parallel with an inductance L); cells are coupled pairwise through
inductors L_jk.  This module converts the raw element values into the energy
scales that drive everything downstream and builds the truncated Fock-space
Hamiltonian

    H = sum_j omega_j a_j^dag a_j - sum_{j<k} g_jk (a_j^dag + a_j)(a_k^dag + a_k)

in hbar = 1 units (all energies as angular frequencies).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .constants import ELEMENTARY_CHARGE, HBAR, REDUCED_FLUX_QUANTUM
from .ops import embed, lowering, number_op

WAVEFORMS = ("linear_ramp", "sinusoid", "constant")
TOPOLOGIES = ("triangular", "linear")


class ParameterError(ValueError):
    """Raised when a raw circuit parameter is invalid; names the offending field."""


@dataclass(frozen=True)
class DriveSpec:
    """External flux drive phi_d(t) threading one memristor loop.

    linear_ramp: phi_d = drive_frequency * t + phase_offset
    sinusoid:    phi_d = amplitude * sin(drive_frequency * t + phase_offset)
    constant:    phi_d = phase_offset
    """

    waveform: str = "linear_ramp"
    drive_frequency: float = 0.0  # rad/s
    amplitude: float = 0.0        # radians, sinusoid only
    phase_offset: float = 0.0     # radians

    def __post_init__(self):
        if self.waveform not in WAVEFORMS:
            raise ParameterError(f"drive.waveform: unknown waveform {self.waveform!r}")

    def phi(self, t):
        """Drive flux in radians at time(s) t >= 0."""
        t = np.asarray(t, dtype=float)
        if self.waveform == "linear_ramp":
            out = self.drive_frequency * t + self.phase_offset
        elif self.waveform == "sinusoid":
            out = self.amplitude * np.sin(self.drive_frequency * t + self.phase_offset)
        else:
            out = np.full_like(t, self.phase_offset)
        return out if out.ndim else float(out)

    def period(self) -> float:
        """Drive period in seconds (inf for constant drive)."""
        if self.waveform == "constant" or self.drive_frequency == 0.0:
            return float("inf")
        return 2.0 * np.pi / abs(self.drive_frequency)


def _pair_key(j: int, k: int) -> tuple[int, int]:
    return (j, k) if j < k else (k, j)


@dataclass(frozen=True)
class CircuitSpec:
    """Raw hardware parameters for a network of 2 or 3 memristors.

    Couplers are stored per unordered site pair (0-based); a missing pair means
    no coupler (zero coupling), which is how the linear topology drops the 1-3
    inductor.
    """

    cap_sigma: tuple[float, ...]          # farads
    l_self: tuple[float, ...]             # henries
    l_couple: Mapping[tuple[int, int], float]  # henries, keys (j, k) with j < k
    drives: tuple[DriveSpec, ...]
    theta: tuple[float, ...]              # initial-state polar angles
    varphi: tuple[float, ...]             # initial-state azimuthal angles
    topology: str = "triangular"

    def __post_init__(self):
        n = len(self.cap_sigma)
        if n not in (2, 3):
            raise ParameterError(f"cap_sigma: need 2 or 3 memristors, got {n}")
        for name, seq in (("l_self", self.l_self), ("drives", self.drives),
                          ("theta", self.theta), ("varphi", self.varphi)):
            if len(seq) != n:
                raise ParameterError(f"{name}: expected {n} entries, got {len(seq)}")
        for j, c in enumerate(self.cap_sigma):
            if not c > 0:
                raise ParameterError(f"cap_sigma[{j}]: must be strictly positive, got {c!r}")
        for j, l in enumerate(self.l_self):
            if not l > 0:
                raise ParameterError(f"l_self[{j}]: must be strictly positive, got {l!r}")
        norm = {}
        for (j, k), l in dict(self.l_couple).items():
            if j == k or not (0 <= j < n and 0 <= k < n):
                raise ParameterError(f"l_couple[{j},{k}]: invalid site pair")
            key = _pair_key(j, k)
            if key in norm and norm[key] != l:
                raise ParameterError(f"l_couple[{j},{k}]: asymmetric duplicate entry")
            if not l > 0:
                raise ParameterError(f"l_couple[{j},{k}]: must be strictly positive, got {l!r}")
            norm[key] = l
        object.__setattr__(self, "l_couple", norm)
        if self.topology not in TOPOLOGIES:
            raise ParameterError(f"topology: unknown topology {self.topology!r}")
        if n == 3:
            if self.topology == "linear" and (0, 2) in norm:
                raise ParameterError("topology: linear topology contradicts a present l_couple[1,3]")
            if self.topology == "triangular" and len(norm) != 3:
                raise ParameterError("topology: triangular topology requires all three couplers")
        elif self.topology == "triangular":
            raise ParameterError("topology: triangular requires 3 memristors")

    @property
    def n_sites(self) -> int:
        return len(self.cap_sigma)

    def coupler(self, j: int, k: int) -> float | None:
        """Coupling inductance between sites j and k, or None when absent."""
        return self.l_couple.get(_pair_key(j, k))


@dataclass(frozen=True)
class DerivedEnergies:
    """Per-site and per-pair energy scales in hbar = 1 units (rad/s).

    gamma_scale is the dimensionless zero-point phase scale entering the decay
    rate; it equals eta / 2 exactly.
    """

    e_c: np.ndarray          # charging energies
    e_l: np.ndarray          # inductive energies
    omega: np.ndarray        # oscillator frequencies
    eta: np.ndarray          # zero-point phase scales
    gamma_scale: np.ndarray  # decay-rate scales, = eta / 2
    g_couple: np.ndarray     # pair coupling strengths, symmetric, zero diagonal
    e_l_couple: np.ndarray   # pair coupling energies, = g_couple / (eta_j eta_k)
    mode: str = "bare"

    def __post_init__(self):
        for name in ("e_c", "e_l", "omega", "eta", "gamma_scale", "g_couple", "e_l_couple"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_sites(self) -> int:
        return self.e_c.shape[0]


def inductance_matrix(spec: CircuitSpec, mode: str = "loaded") -> np.ndarray:
    """Inverse inductance matrix of the network, in 1/henry.

    `loaded` includes every coupler in the diagonal (1/L_j + sum of 1/L_c over
    couplers touching j), which shifts the site frequencies; `bare` keeps the
    bare diagonal 1/L_j.  Off-diagonal entries are -1/L_jk in both modes.
    """
    if mode not in ("bare", "loaded"):
        raise ParameterError(f"mode: unknown inductance-matrix mode {mode!r}")
    n = spec.n_sites
    m = np.zeros((n, n))
    for j in range(n):
        m[j, j] = 1.0 / spec.l_self[j]
    for (j, k), l in spec.l_couple.items():
        m[j, k] = m[k, j] = -1.0 / l
        if mode == "loaded":
            m[j, j] += 1.0 / l
            m[k, k] += 1.0 / l
    return m


def derive_energies(spec: CircuitSpec, mode: str = "bare") -> DerivedEnergies:
    """Convert raw element values into the hbar = 1 symbol table.

    e_c = 2 e^2 / (C hbar), e_l = phi0^2 * Linv_jj / hbar,
    omega = sqrt(2 e_c e_l), eta = (e_c / 2 e_l)^(1/4),
    g_jk = sqrt(L_j L_k) / L_jk * sqrt(omega_j omega_k).

    The pair energy e_l_couple is stored as g_jk / (eta_j eta_k), which is the
    phi_j phi_k coefficient that reproduces the Hamiltonian's coupling term;
    see the coupling-consistency identity asserted in the tests.
    """
    linv = inductance_matrix(spec, mode)
    n = spec.n_sites
    e_c = np.array([2.0 * ELEMENTARY_CHARGE**2 / (c * HBAR) for c in spec.cap_sigma])
    e_l = np.array([REDUCED_FLUX_QUANTUM**2 * linv[j, j] / HBAR for j in range(n)])
    omega = np.sqrt(2.0 * e_c * e_l)
    eta = (e_c / (2.0 * e_l)) ** 0.25
    g = np.zeros((n, n))
    elc = np.zeros((n, n))
    for (j, k), l in spec.l_couple.items():
        g[j, k] = g[k, j] = (np.sqrt(spec.l_self[j] * spec.l_self[k]) / l
                             * np.sqrt(omega[j] * omega[k]))
        elc[j, k] = elc[k, j] = g[j, k] / (eta[j] * eta[k])
    return DerivedEnergies(e_c=e_c, e_l=e_l, omega=omega, eta=eta,
                           gamma_scale=eta / 2.0, g_couple=g, e_l_couple=elc, mode=mode)


COUPLING_SIGNS = ("sum", "difference")


@dataclass(frozen=True)
class HamiltonianMatrix:
    """Dense Hermitian Hamiltonian on the truncated product Fock space.

    Basis: little-endian tensor order, site 0 fastest (see qmemnet.ops).
    """

    matrix: np.ndarray
    dim_per_site: int
    n_sites: int
    coupling_sign: str = "sum"

    def __post_init__(self):
        self.matrix.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def site_dims(self) -> tuple[int, ...]:
        return (self.dim_per_site,) * self.n_sites


def build_hamiltonian(energies: DerivedEnergies, d: int,
                      coupling_sign: str = "sum") -> HamiltonianMatrix:
    """Truncated-Fock Hamiltonian for the coupled network.

    `coupling_sign` selects the quadrature entering the pair coupling:
    "sum" uses (a^dag + a)(a^dag + a) (the default), "difference" uses
    (a - a^dag)(a - a^dag).
    """
    if d < 2:
        raise ParameterError(f"d: Fock truncation must be >= 2, got {d}")
    if coupling_sign not in COUPLING_SIGNS:
        raise ParameterError(f"coupling_sign: unknown variant {coupling_sign!r}")
    n = energies.n_sites
    dims = (d,) * n
    a = lowering(d)
    quad = (a.conj().T + a) if coupling_sign == "sum" else (a - a.conj().T)
    h = np.zeros((d**n, d**n), dtype=complex)
    for j in range(n):
        h += energies.omega[j] * embed(number_op(d), j, dims)
    for j in range(n):
        for k in range(j + 1, n):
            if energies.g_couple[j, k] != 0.0:
                h -= energies.g_couple[j, k] * (embed(quad, j, dims) @ embed(quad, k, dims))
    return HamiltonianMatrix(matrix=h, dim_per_site=d, n_sites=n, coupling_sign=coupling_sign)


def decay_rate(site: int, t, energies: DerivedEnergies, drive: DriveSpec):
    """Quasiparticle decay rate Gamma_j(t) >= 0 in 1/s.

    Gamma = g^2 * omega * exp(-g^2) * (1 + cos phi_d(t)) / 2 with g the site's
    dimensionless gamma_scale.
    """
    g2 = energies.gamma_scale[site] ** 2
    return g2 * energies.omega[site] * np.exp(-g2) * (1.0 + np.cos(drive.phi(t))) / 2.0


def default_drive(omega_j: float) -> DriveSpec:
    """Default flux drive for a site of frequency omega_j.

    A linear ramp at twice the site frequency, in quadrature with the initial
    oscillation: phi_d(t) = 2 omega_j t - pi/2.  One origin-to-origin loop of
    the I-V curve then spans exactly one decay-rate period, which keeps the
    loop shape (and so the form factor) constant for an uncoupled site.
    """
    return DriveSpec(waveform="linear_ramp", drive_frequency=2.0 * omega_j,
                     amplitude=0.0, phase_offset=-np.pi / 2.0)
