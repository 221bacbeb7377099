"""Bosonic ladder operators and tensor-product embeddings.

Basis convention (fixed, used everywhere): the joint Hilbert space is indexed
little-endian, site 0 fastest.  A product basis state with occupations
(n_0, n_1, ..., n_{N-1}) sits at flat index

    n_0 + d_0 * n_1 + d_0 * d_1 * n_2 + ...

which means a full operator A_0 x A_1 x ... is assembled as
``kron(A_{N-1}, ..., A_1, A_0)``.
"""

from __future__ import annotations

from functools import reduce
from typing import Sequence

import numpy as np


def lowering(d: int) -> np.ndarray:
    """Truncated annihilation operator on a d-level site."""
    return np.diag(np.sqrt(np.arange(1, d, dtype=float)), 1).astype(complex)


def number_op(d: int) -> np.ndarray:
    return np.diag(np.arange(d, dtype=float)).astype(complex)


def kron_sites(site_ops: Sequence[np.ndarray]) -> np.ndarray:
    """Tensor product of per-site operators, ordered site 0 first (fastest)."""
    return reduce(np.kron, reversed(list(site_ops)))


def embed(op: np.ndarray, site: int, dims: Sequence[int]) -> np.ndarray:
    """Embed a single-site operator at `site` (0-based) with identities elsewhere."""
    if not 0 <= site < len(dims):
        raise ValueError(f"site {site} out of range for {len(dims)} sites")
    if op.shape != (dims[site], dims[site]):
        raise ValueError(f"operator shape {op.shape} does not match dims[{site}]={dims[site]}")
    factors = [op if j == site else np.eye(dims[j], dtype=complex) for j in range(len(dims))]
    return kron_sites(factors)


def product_state(site_vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Joint pure state from per-site kets, little-endian order."""
    return reduce(np.kron, [np.asarray(v, dtype=complex) for v in reversed(list(site_vectors))])


def basis_index(occupations: Sequence[int], dims: Sequence[int]) -> int:
    """Flat index of the product basis state |n_0, n_1, ...>."""
    idx = 0
    stride = 1
    for n, d in zip(occupations, dims):
        if not 0 <= n < d:
            raise ValueError(f"occupation {n} outside local dimension {d}")
        idx += stride * n
        stride *= d
    return idx


def site_axes(site: int, n_sites: int) -> tuple[int, int]:
    """(ket_axis, bra_axis) of `site` when rho is reshaped to dims[::-1] * 2.

    With little-endian indexing, reshaping a D x D matrix to
    (d_{N-1}, ..., d_0, d_{N-1}, ..., d_0) puts site j at axis N-1-j on the
    ket side and N + (N-1-j) on the bra side.
    """
    return n_sites - 1 - site, 2 * n_sites - 1 - site


def reshape_rho(rho: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    shape = tuple(reversed(dims)) * 2
    return rho.reshape(shape)


def hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def is_hermitian(m: np.ndarray, atol: float) -> bool:
    return bool(np.max(np.abs(m - m.conj().T)) <= atol)
