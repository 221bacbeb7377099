"""Circuit model: derived energies, inductance matrices, Hamiltonian assembly."""

import numpy as np
import pytest
from scipy.constants import e as QE, hbar as HBAR

import qmemnet as qm
from qmemnet.circuit import DriveSpec
from qmemnet.ops import basis_index

PHI0 = HBAR / (2 * QE)


def simple_spec(l_couple=None, topology="linear", n=3, caps=None, ls=None):
    caps = caps or (3.6e-15,) * n
    ls = ls or (0.2e-6,) * n
    return qm.make_circuit(caps, ls, l_couple or {}, topology)


class TestDeriveEnergies:
    def test_reference_values_against_closed_forms(self):
        # independent arithmetic oracle: E_C = 2e^2/C, E_L = phi0^2/L, omega = sqrt(2 E_C E_L)/hbar
        spec = simple_spec()
        en = qm.derive_energies(spec)
        c, l = 3.6e-15, 0.2e-6
        e_c = 2 * QE**2 / c / HBAR
        e_l = PHI0**2 / l / HBAR
        omega = np.sqrt(2 * e_c * e_l)
        assert np.allclose(en.e_c, e_c, rtol=1e-12)
        assert np.allclose(en.e_l, e_l, rtol=1e-12)
        assert np.allclose(en.omega, omega, rtol=1e-12)
        # ~ 2 pi x 5.9 GHz for the reference parameters
        assert en.omega[0] / (2 * np.pi) == pytest.approx(5.931354528476477e9, rel=1e-9)
        assert en.omega[0] / (2 * np.pi) == pytest.approx(5.9e9, rel=0.01)

    def test_omega_consistency_invariant(self):
        en = qm.derive_energies(simple_spec())
        assert np.allclose(en.omega, np.sqrt(2 * en.e_c * en.e_l), rtol=1e-12)

    def test_eta_and_gamma_scale_identity(self):
        # 2 * (E_C / 32 E_L)^(1/4) equals (E_C / 2 E_L)^(1/4) algebraically
        en = qm.derive_energies(simple_spec())
        assert np.allclose(en.eta, (en.e_c / (2 * en.e_l)) ** 0.25, rtol=1e-12)
        assert np.allclose(2 * en.gamma_scale, en.eta, rtol=0, atol=0)  # exact by construction
        assert np.allclose(en.gamma_scale, (en.e_c / (32 * en.e_l)) ** 0.25, rtol=1e-12)

    def test_eta_identity_random_draws(self, rng):
        for _ in range(50):
            e_c, e_l = rng.uniform(0.1, 10.0, size=2)
            assert 2 * (e_c / (32 * e_l)) ** 0.25 == pytest.approx((e_c / (2 * e_l)) ** 0.25, rel=1e-12)

    def test_coupling_strength_formula(self):
        # L_j = L_k = 0.2 uH, L_jk = 2 uH -> g = 0.1 sqrt(omega_j omega_k)
        spec = qm.get_preset("fig2a").circuit
        en = qm.derive_energies(spec)
        for j, k in [(0, 1), (0, 2), (1, 2)]:
            assert en.g_couple[j, k] == pytest.approx(
                0.1 * np.sqrt(en.omega[j] * en.omega[k]), rel=1e-12)

    def test_coupling_energy_consistent_with_hamiltonian(self):
        # e_l_couple * eta_j * eta_k must reproduce g to make the phi-phi form
        # of the coupling identical to the ladder-operator form
        for name in ("fig2a", "fig2c", "fig2e"):
            en = qm.derive_energies(qm.get_preset(name).circuit)
            for j in range(3):
                for k in range(3):
                    if j != k:
                        assert en.e_l_couple[j, k] * en.eta[j] * en.eta[k] == pytest.approx(
                            en.g_couple[j, k], rel=1e-12)

    def test_absent_coupler_gives_zero(self):
        spec = qm.get_preset("fig2d").circuit  # linear: no 1-3 coupler
        en = qm.derive_energies(spec)
        assert en.g_couple[0, 2] == 0.0
        assert en.e_l_couple[0, 2] == 0.0

    def test_rejects_nonpositive_parameters(self):
        with pytest.raises(qm.ParameterError, match="cap_sigma"):
            simple_spec(caps=(3.6e-15, -1e-15, 3.6e-15))
        with pytest.raises(qm.ParameterError, match="l_self"):
            simple_spec(ls=(0.2e-6, 0.0, 0.2e-6))
        with pytest.raises(qm.ParameterError, match="l_couple"):
            simple_spec(l_couple={(0, 1): -2e-6})

    def test_topology_consistency(self):
        with pytest.raises(qm.ParameterError, match="topology"):
            simple_spec(l_couple={(0, 1): 2e-6, (1, 2): 2e-6, (0, 2): 2e-6}, topology="linear")
        with pytest.raises(qm.ParameterError, match="topology"):
            simple_spec(l_couple={(0, 1): 2e-6, (1, 2): 2e-6}, topology="triangular")


class TestInductanceMatrix:
    def test_loaded_matrix_fig2a(self):
        spec = qm.get_preset("fig2a").circuit
        m = qm.inductance_matrix(spec, mode="loaded")
        diag = 1 / 0.2e-6 + 2 / 2e-6
        off = -1 / 2e-6
        expected = np.full((3, 3), off) + np.eye(3) * (diag - off)
        assert np.allclose(m, expected, rtol=1e-12)

    def test_bare_matrix(self):
        spec = qm.get_preset("fig2a").circuit
        m = qm.inductance_matrix(spec, mode="bare")
        assert np.allclose(np.diag(m), 1 / 0.2e-6)
        assert m[0, 1] == pytest.approx(-1 / 2e-6)

    def test_decoupled_is_diagonal(self):
        m = qm.inductance_matrix(qm.uncoupled_circuit(), mode="loaded")
        assert np.allclose(m, np.diag([1 / 0.2e-6] * 3))

    def test_loaded_positive_definite_random(self, rng):
        for _ in range(25):
            ls = tuple(rng.uniform(0.05e-6, 1e-6, size=3))
            lc = {p: rng.uniform(0.5e-6, 5e-6) for p in [(0, 1), (1, 2), (0, 2)]}
            spec = qm.make_circuit((3.6e-15,) * 3, ls, lc, "triangular")
            m = qm.inductance_matrix(spec, mode="loaded")
            np.linalg.cholesky(m)  # raises if not positive definite

    def test_symmetry(self):
        for mode in ("bare", "loaded"):
            m = qm.inductance_matrix(qm.get_preset("fig2c").circuit, mode)
            assert np.array_equal(m, m.T)


def naive_hamiltonian(omega, g, d, n):
    """Triple-loop construction from harmonic-oscillator matrix elements."""
    dim = d**n
    h = np.zeros((dim, dim), dtype=complex)
    dims = (d,) * n

    def occ(idx):
        out = []
        for _ in range(n):
            out.append(idx % d)
            idx //= d
        return out

    for row in range(dim):
        h[row, row] = sum(omega[j] * occ(row)[j] for j in range(n))
    x_elem = np.zeros((d, d))
    for m in range(d - 1):
        x_elem[m, m + 1] = x_elem[m + 1, m] = np.sqrt(m + 1)
    for row in range(dim):
        for col in range(dim):
            ro, co = occ(row), occ(col)
            for j in range(n):
                for k in range(j + 1, n):
                    others = [s for s in range(n) if s not in (j, k)]
                    if all(ro[s] == co[s] for s in others):
                        h[row, col] -= g[j][k] * x_elem[ro[j], co[j]] * x_elem[ro[k], co[k]]
    return h


class TestBuildHamiltonian:
    def test_uncoupled_diagonal(self):
        en = qm.derive_energies(qm.uncoupled_circuit())
        ham = qm.build_hamiltonian(en, 2)
        h = ham.matrix
        assert np.allclose(h, np.diag(np.diag(h)))
        for occs in [(0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1)]:
            idx = basis_index(occs, (2, 2, 2))
            expected = sum(en.omega[j] * occs[j] for j in range(3))
            assert h[idx, idx].real == pytest.approx(expected, rel=1e-12)

    def test_two_site_against_naive_oracle(self):
        spec = qm.make_circuit((3.6e-15, 2.6e-15), (0.2e-6, 0.2e-6), {(0, 1): 2e-6},
                               "linear")
        en = qm.derive_energies(spec)
        for d in (2, 4):
            ham = qm.build_hamiltonian(en, d)
            oracle = naive_hamiltonian(en.omega, en.g_couple, d, 2)
            assert np.allclose(ham.matrix, oracle, atol=1e-6 * np.abs(oracle).max())
            assert np.allclose(np.linalg.eigvalsh(ham.matrix), np.linalg.eigvalsh(oracle),
                               rtol=1e-10)

    def test_three_site_against_naive_oracle(self):
        en = qm.derive_energies(qm.get_preset("fig2c").circuit)
        ham = qm.build_hamiltonian(en, 3)
        oracle = naive_hamiltonian(en.omega, en.g_couple, 3, 3)
        assert np.allclose(ham.matrix, oracle, atol=1e-8 * np.abs(oracle).max())

    def test_hermitian_every_preset(self):
        for name, preset in qm.PRESETS.items():
            en = qm.derive_energies(preset.circuit)
            h = qm.build_hamiltonian(en, 3).matrix
            assert np.max(np.abs(h - h.conj().T)) <= 1e-12 * np.abs(h).max()

    def test_triangular_has_three_coupling_blocks(self):
        en = qm.derive_energies(qm.get_preset("fig2a").circuit)
        assert all(en.g_couple[j, k] > 0 for j, k in [(0, 1), (0, 2), (1, 2)])
        h2 = qm.build_hamiltonian(en, 2).matrix
        # each pair coupling appears as a distinct nonzero off-diagonal block
        for j, k in [(0, 1), (0, 2), (1, 2)]:
            row = basis_index(tuple(1 if s == j else 0 for s in range(3)), (2, 2, 2))
            col = basis_index(tuple(1 if s == k else 0 for s in range(3)), (2, 2, 2))
            assert abs(h2[row, col]) > 0

    def test_difference_coupling_sign_mode(self):
        en = qm.derive_energies(qm.get_preset("fig2a").circuit)
        h_sum = qm.build_hamiltonian(en, 2, coupling_sign="sum").matrix
        h_diff = qm.build_hamiltonian(en, 2, coupling_sign="difference").matrix
        assert np.max(np.abs(h_diff - h_diff.conj().T)) <= 1e-12 * np.abs(h_diff).max()
        assert not np.allclose(h_sum, h_diff)
        assert np.allclose(np.diag(h_sum), np.diag(h_diff))

    def test_rejects_small_truncation(self):
        en = qm.derive_energies(simple_spec())
        with pytest.raises(qm.ParameterError, match="d"):
            qm.build_hamiltonian(en, 1)


class TestDriveSpec:
    def test_waveforms(self):
        lin = DriveSpec("linear_ramp", drive_frequency=2.0, phase_offset=0.5)
        assert lin.phi(1.5) == pytest.approx(3.5)
        sin = DriveSpec("sinusoid", drive_frequency=3.0, amplitude=0.7, phase_offset=0.1)
        assert sin.phi(2.0) == pytest.approx(0.7 * np.sin(6.1))
        const = DriveSpec("constant", phase_offset=np.pi)
        assert const.phi(10.0) == pytest.approx(np.pi)
        assert const.period() == np.inf

    def test_vectorized_evaluation(self):
        d = DriveSpec("linear_ramp", drive_frequency=2.0)
        t = np.linspace(0, 1, 5)
        assert np.allclose(d.phi(t), 2.0 * t)

    def test_unknown_waveform_rejected(self):
        with pytest.raises(qm.ParameterError, match="waveform"):
            DriveSpec("sawtooth")
