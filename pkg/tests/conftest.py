import numpy as np
import pytest

import qmemnet as qm


@pytest.fixture(scope="session")
def fig2a_energies():
    return qm.derive_energies(qm.get_preset("fig2a").circuit)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240811)


def random_qubit_ket(rng):
    v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    return v / np.linalg.norm(v)


def random_pure_state(rng, n_sites=3):
    v = rng.standard_normal(2**n_sites) + 1j * rng.standard_normal(2**n_sites)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def random_product_state(rng, n_sites=3):
    from qmemnet.ops import product_state
    psi = product_state([random_qubit_ket(rng) for _ in range(n_sites)])
    return np.outer(psi, psi.conj())


def random_separable_mixture(rng, n_sites=3, n_terms=4):
    weights = rng.dirichlet(np.ones(n_terms))
    return sum(w * random_product_state(rng, n_sites) for w in weights)


def ghz_state():
    v = np.zeros(8, dtype=complex)
    v[0] = v[7] = 1.0 / np.sqrt(2.0)
    return np.outer(v, v.conj())


def w_state():
    v = np.zeros(8, dtype=complex)
    v[1] = v[2] = v[4] = 1.0 / np.sqrt(3.0)
    return np.outer(v, v.conj())


def bell_state():
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1.0 / np.sqrt(2.0)
    return np.outer(v, v.conj())
