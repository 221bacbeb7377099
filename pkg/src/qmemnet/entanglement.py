"""Bipartite and tripartite correlation measures for the memristor network.

Implements the full measure stack used in the analyses: Wootters concurrence
and the two-qubit entanglement of formation, one-vs-rest negativities and the
tripartite negativity (their geometric mean), the center-vs-rest entanglement
of formation, and the squared-EoF monogamy residual

    M2 = E(center | rest)^2 - E(center, left)^2 - E(center, right)^2.

For a (numerically) pure global state the center-vs-rest EoF is the marginal
von Neumann entropy.  Mixed states have no closed form on a 2 x 4 split, so a
convex-roof upper bound is estimated by local search over pure-state
decompositions (isometries on a bounded-rank purification ancilla); such
values are tagged `estimated`.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .ops import reshape_rho

EIG_CLAMP = -1e-10       # eigenvalues in [EIG_CLAMP, 0) are treated as 0
PSD_REJECT = -1e-8       # more negative spectra are rejected as unphysical
PURITY_THRESHOLD = 1e-3  # pure-state branch gate for the center-vs-rest EoF

_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_YY = np.kron(_SIGMA_Y, _SIGMA_Y)


def _clamp_spectrum(w: np.ndarray, context: str) -> np.ndarray:
    lo = float(np.min(w))
    if lo < PSD_REJECT:
        raise ValueError(f"{context}: spectrum has eigenvalue {lo:.3e} below {PSD_REJECT:.0e}")
    return np.where(w < 0.0, 0.0, w)


def partial_trace(rho: np.ndarray, keep: Iterable[int], dims: Sequence[int]) -> np.ndarray:
    """Reduced state on `keep` (0-based sites, ascending order preserved)."""
    keep_s = sorted(set(keep))
    n = len(dims)
    if not keep_s:
        raise ValueError("keep must name at least one site")
    if keep_s[0] < 0 or keep_s[-1] >= n:
        raise ValueError(f"keep sites {keep_s} out of range for {n} sites")
    letters = iter(string.ascii_lowercase)
    ket = {j: next(letters) for j in range(n)}
    bra = {j: (ket[j] if j not in keep_s else next(letters)) for j in range(n)}
    sub_in = "".join(ket[j] for j in reversed(range(n))) + "".join(bra[j] for j in reversed(range(n)))
    sub_out = "".join(ket[j] for j in reversed(keep_s)) + "".join(bra[j] for j in reversed(keep_s))
    t = reshape_rho(np.asarray(rho), dims)
    out = np.einsum(f"{sub_in}->{sub_out}", t)
    dk = int(np.prod([dims[j] for j in keep_s]))
    return out.reshape(dk, dk)


def partial_transpose(rho: np.ndarray, sites: Iterable[int], dims: Sequence[int]) -> np.ndarray:
    """Transpose the ket/bra indices of `sites`; an exact involution."""
    n = len(dims)
    t = reshape_rho(np.asarray(rho), dims)
    axes = list(range(2 * n))
    for j in set(sites):
        if j < 0 or j >= n:
            raise ValueError(f"site {j} out of range")
        ka, ba = n - 1 - j, 2 * n - 1 - j
        axes[ka], axes[ba] = axes[ba], axes[ka]
    d = int(np.prod(dims))
    return t.transpose(axes).reshape(d, d)


def _check_two_qubit(rho: np.ndarray, context: str) -> np.ndarray:
    m = np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"{context}: expected a 4x4 two-qubit state, got {m.shape}")
    _clamp_spectrum(np.linalg.eigvalsh(m), context)
    return m


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit state.

    Computed from the square roots of the eigenvalues of rho * rho_tilde
    (descending), C = max(0, l1 - l2 - l3 - l4), which equals the
    2*lambda_max - Tr(R) form evaluated by the dense oracle in the tests.
    """
    m = _check_two_qubit(rho, "concurrence")
    rho_tilde = _YY @ m.conj() @ _YY
    ev = np.linalg.eigvals(m @ rho_tilde)
    ev = np.where(np.abs(ev.imag) < 1e-9, ev.real, np.nan)
    if np.any(np.isnan(ev)):
        raise ValueError("concurrence: rho * rho_tilde produced complex eigenvalues")
    lam = np.sort(np.sqrt(_clamp_spectrum(ev, "concurrence")))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def binary_entropy(h: float) -> float:
    if h <= 0.0 or h >= 1.0:
        return 0.0
    return float(-h * np.log2(h) - (1.0 - h) * np.log2(1.0 - h))


EOF_H_VARIANTS = ("squared", "linear")


def eof_from_concurrence(c: float, h_variant: str = "squared") -> float:
    """Two-qubit EoF as a function of concurrence.

    "squared" uses h = (1 + sqrt(1 - C^2))/2 (the standard closed form, with
    E(0) = 0 and E(1) = 1); "linear" uses sqrt(1 - C) instead.
    """
    if h_variant not in EOF_H_VARIANTS:
        raise ValueError(f"unknown h variant {h_variant!r}")
    x = 1.0 - (c * c if h_variant == "squared" else c)
    h = 0.5 * (1.0 + np.sqrt(max(x, 0.0)))
    return binary_entropy(h)


def eof_two_qubit(rho: np.ndarray, h_variant: str = "squared") -> float:
    return eof_from_concurrence(concurrence(rho), h_variant)


@dataclass(frozen=True)
class BipartitionLabel:
    """A bipartition of the sites: side_a vs side_b (disjoint, exhaustive)."""

    side_a: frozenset[int]
    side_b: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "side_a", frozenset(self.side_a))
        object.__setattr__(self, "side_b", frozenset(self.side_b))
        if self.side_a & self.side_b:
            raise ValueError("bipartition sides must be disjoint")
        if not self.side_a or not self.side_b:
            raise ValueError("bipartition sides must be nonempty")

    @classmethod
    def one_vs_rest(cls, site: int, n_sites: int) -> "BipartitionLabel":
        return cls(frozenset({site}), frozenset(range(n_sites)) - {site})


def negativity(rho: np.ndarray, bipartition: Iterable[int] | BipartitionLabel,
               dims: Sequence[int]) -> float:
    """-2 * (sum of negative eigenvalues) of the partial transpose; 0 for PPT states.

    `bipartition` is either the set of sites to transpose or a BipartitionLabel
    (whose side_a is transposed; the value is side-symmetric).
    """
    sites = bipartition.side_a if isinstance(bipartition, BipartitionLabel) else bipartition
    w = np.linalg.eigvalsh(partial_transpose(rho, sites, dims))
    return float(-2.0 * np.sum(w[w < 0.0]))


def tripartite_negativity(rho: np.ndarray, dims: Sequence[int]) -> float:
    """Geometric mean of the three one-vs-rest negativities (0 if any vanishes)."""
    if len(dims) != 3:
        raise ValueError("tripartite negativity needs a three-site state")
    ns = [negativity(rho, [j], dims) for j in range(3)]
    if min(ns) == 0.0:
        return 0.0
    return float(np.prod(ns) ** (1.0 / 3.0))


def _entropy_2x2(sigma: np.ndarray) -> float:
    tr = float(np.real(sigma[0, 0] + sigma[1, 1]))
    det = float(np.real(sigma[0, 0] * sigma[1, 1] - sigma[0, 1] * sigma[1, 0]))
    disc = np.sqrt(max(tr * tr - 4.0 * det, 0.0))
    lam = np.array([(tr + disc) / 2.0, (tr - disc) / 2.0])
    lam = np.clip(lam, 0.0, None)
    out = 0.0
    for l in lam:
        if l > 0.0:
            out -= l * np.log2(l)
    return float(max(out, 0.0))


def _center_permutation(center: int, n: int, dims: Sequence[int]) -> np.ndarray:
    """Flat indices ordered as (center level, little-endian rest): psi[perm].reshape(dc, -1)."""
    others = [s for s in range(n) if s != center]
    strides = np.cumprod([1, *dims[:-1]])
    perm = []
    for nc in range(dims[center]):
        rest_dims = [dims[s] for s in others]
        for rest in range(int(np.prod(rest_dims))):
            idx = nc * strides[center]
            rem = rest
            for s in others:
                idx += (rem % dims[s]) * strides[s]
                rem //= dims[s]
            perm.append(idx)
    return np.array(perm)


@dataclass
class RoofResult:
    value: float
    iterations: int
    weights: np.ndarray  # best isometry, reusable as a warm start


def _roof_objective_and_grad(w_iso: np.ndarray, omega: np.ndarray, perm: np.ndarray,
                             dc: int):
    """Average marginal entropy of the decomposition encoded by isometry w_iso."""
    phis = w_iso @ omega.T            # (m, D) unnormalized members
    ms = phis[:, perm].reshape(len(phis), dc, -1)
    sig = np.einsum("kiv,kjv->kij", ms, ms.conj())  # (m, 2, 2) unnormalized marginals
    tr = np.real(sig[:, 0, 0] + sig[:, 1, 1])
    det = np.real(sig[:, 0, 0] * sig[:, 1, 1] - sig[:, 0, 1] * sig[:, 1, 0])
    disc = np.sqrt(np.clip(tr * tr - 4.0 * det, 0.0, None))
    lp = np.clip((tr + disc) / 2.0, 1e-18, None)
    lm = np.clip((tr - disc) / 2.0, 1e-18, None)
    p = np.clip(tr, 1e-18, None)
    val = float(np.sum(-lp * np.log2(lp) - lm * np.log2(lm) + p * np.log2(p)))
    # dF/dsigma_k = log2(p_k) I - log2(sigma_k), via the 2x2 spectral decomposition
    log_p, log_lp, log_lm = np.log2(p), np.log2(lp), np.log2(lm)
    eye = np.eye(dc)[None, :, :]
    denom = np.where(disc > 1e-15, disc, 1.0)
    proj_p = np.where((disc > 1e-15)[:, None, None],
                      (sig - lm[:, None, None] * eye) / denom[:, None, None],
                      0.5 * np.broadcast_to(eye, sig.shape))
    log_sig = log_lp[:, None, None] * proj_p + log_lm[:, None, None] * (eye - proj_p)
    g = log_p[:, None, None] * eye - log_sig
    gm = np.einsum("kij,kjv->kiv", g, ms).reshape(len(phis), -1)
    g_flat = np.empty_like(gm)
    g_flat[:, perm] = gm
    grad = g_flat @ omega.conj()      # (m, r) gradient wrt conj(W)
    return val, grad


def _polar(m: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(m, full_matrices=False)
    return u @ vh


def _minimize_roof(omega: np.ndarray, perm: np.ndarray, dc: int, w0: np.ndarray,
                   max_iter: int, tol: float) -> RoofResult:
    w = _polar(w0)
    val, grad = _roof_objective_and_grad(w, omega, perm, dc)
    step = 0.5
    it = 0
    for it in range(1, max_iter + 1):
        sym = 0.5 * (w.conj().T @ grad + grad.conj().T @ w)
        tangent = grad - w @ sym
        gnorm2 = float(np.real(np.sum(tangent.conj() * tangent)))
        if gnorm2 < 1e-22:
            break
        improved = False
        for _ in range(40):
            w_try = _polar(w - step * tangent)
            val_try, grad_try = _roof_objective_and_grad(w_try, omega, perm, dc)
            if val_try < val - 1e-4 * step * gnorm2:
                improved = True
                break
            step *= 0.5
        if not improved:
            break
        delta = val - val_try
        w, val, grad = w_try, val_try, grad_try
        step = min(step * 1.3, 2.0)
        if delta < tol * max(1.0, abs(val)):
            break
    return RoofResult(value=val, iterations=it, weights=w)


def convex_roof_eof(rho: np.ndarray, center: int, dims: Sequence[int],
                    restarts: int = 32, max_iter: int = 250, tol: float = 1e-12,
                    members: int = 8, rng: np.random.Generator | None = None,
                    warm_start: np.ndarray | None = None) -> RoofResult:
    """Upper-bound estimate of the center-vs-rest EoF by decomposition search.

    Decompositions rho = sum_k p_k |phi_k><phi_k| with up to `members` elements
    are parametrized by isometries on the eigen-ensemble; each restart runs a
    projected-gradient descent with polar retraction on the isometry manifold.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    dims = tuple(dims)
    n = len(dims)
    w, v = np.linalg.eigh(np.asarray(rho, dtype=complex))
    w = _clamp_spectrum(w, "convex_roof_eof")
    sel = w > 1e-12
    lam, vecs = w[sel], v[:, sel]
    r = int(np.sum(sel))
    m = max(members, r)
    omega = vecs * np.sqrt(lam)[None, :]  # columns sqrt(lam_i) |e_i>
    perm = _center_permutation(center, n, dims)
    dc = dims[center]

    starts: list[np.ndarray] = []
    if warm_start is not None and warm_start.shape == (m, r):
        starts.append(warm_start)
    starts.append(np.eye(m, r, dtype=complex))
    while len(starts) < restarts:
        z = rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r))
        starts.append(z)
    best: RoofResult | None = None
    for w0 in starts:
        res = _minimize_roof(omega, perm, dc, w0.astype(complex), max_iter, tol)
        if best is None or res.value < best.value:
            best = res
    assert best is not None
    best.value = max(best.value, 0.0)
    return best


def eof_one_vs_two(rho: np.ndarray, center: int, dims: Sequence[int] = (2, 2, 2),
                   purity_threshold: float = PURITY_THRESHOLD,
                   restarts: int = 32, rng: np.random.Generator | None = None,
                   warm_start: np.ndarray | None = None,
                   max_iter: int = 250) -> tuple[float, bool]:
    """EoF between `center` and the other two sites: (value, estimated_flag).

    Globally (numerically) pure states use the exact marginal-entropy formula;
    mixed states fall back to the convex-roof estimate and are tagged estimated.
    """
    m = np.asarray(rho, dtype=complex)
    purity = float(np.real(np.trace(m @ m)))
    if purity > 1.0 - purity_threshold:
        w, v = np.linalg.eigh(m)
        psi = v[:, int(np.argmax(w))]
        sigma = partial_trace(np.outer(psi, psi.conj()), [center], dims)
        return _entropy_2x2(sigma), False
    res = convex_roof_eof(m, center, dims, restarts=restarts, rng=rng,
                          warm_start=warm_start, max_iter=max_iter)
    return res.value, True


def monogamy_m2(rho: np.ndarray, center: int = 1, dims: Sequence[int] = (2, 2, 2),
                h_variant: str = "squared", **roof_kwargs) -> tuple[float, bool]:
    """Squared-EoF monogamy residual about `center`: (value, estimated_flag)."""
    e_cr, estimated = eof_one_vs_two(rho, center, dims, **roof_kwargs)
    total = e_cr * e_cr
    for other in (s for s in range(len(dims)) if s != center):
        pair = partial_trace(rho, [center, other], dims)
        total -= eof_two_qubit(pair, h_variant) ** 2
    return total, estimated


def site_pairs(n_sites: int) -> tuple[tuple[int, int], ...]:
    return tuple((j, k) for j in range(n_sites) for k in range(j + 1, n_sites))


@dataclass
class CorrelationReport:
    """Correlation measures of one stored snapshot (2x2x2 site space)."""

    t: float
    purity_global: float
    concurrence: dict[tuple[int, int], float] = field(default_factory=dict)
    eof: dict[tuple[int, int], float] = field(default_factory=dict)
    negativity: dict[int, float] = field(default_factory=dict)
    tripartite_negativity: float | None = None
    eof_center_rest: float | None = None
    monogamy_m2: float | None = None
    estimated: bool = False


def compute_correlations(rho: np.ndarray, t: float, dims: Sequence[int] = (2, 2, 2),
                         include: Iterable[str] = ("pair_eof",), center: int = 1,
                         h_variant: str = "squared", restarts: int = 32,
                         rng: np.random.Generator | None = None,
                         warm_start: np.ndarray | None = None,
                         max_iter: int = 250) -> tuple[CorrelationReport, np.ndarray | None]:
    """Evaluate the requested measure groups on one state.

    include is a subset of {"pair_eof", "negativity", "monogamy"}.  Returns the
    report plus the best convex-roof isometry for warm-starting the next
    snapshot (None when the roof was not run).
    """
    m = np.asarray(rho, dtype=complex)
    include = set(include)
    n = len(dims)
    if "monogamy" in include and n != 3:
        raise ValueError("the monogamy analysis needs a three-site state")
    rep = CorrelationReport(t=float(t), purity_global=float(np.real(np.trace(m @ m))))
    best_w = None
    if "pair_eof" in include or "monogamy" in include:
        for pair in site_pairs(n):
            c = concurrence(partial_trace(m, pair, dims))
            rep.concurrence[pair] = c
            rep.eof[pair] = eof_from_concurrence(c, h_variant)
    if "negativity" in include:
        for j in range(n):
            rep.negativity[j] = negativity(m, [j], dims)
        if n == 3:
            rep.tripartite_negativity = tripartite_negativity(m, dims)
    if "monogamy" in include:
        purity = rep.purity_global
        if purity > 1.0 - PURITY_THRESHOLD:
            e_cr, est = eof_one_vs_two(m, center, dims)
        else:
            res = convex_roof_eof(m, center, dims, restarts=restarts, rng=rng,
                                  warm_start=warm_start, max_iter=max_iter)
            e_cr, est = res.value, True
            best_w = res.weights
        rep.eof_center_rest = e_cr
        rep.estimated = est
        total = e_cr * e_cr
        for other in (s for s in range(len(dims)) if s != center):
            total -= rep.eof[(min(center, other), max(center, other))] ** 2
        rep.monogamy_m2 = total
    return rep, best_w


def correlation_series(states: Sequence[np.ndarray], times: Sequence[float],
                       dims: Sequence[int] = (2, 2, 2),
                       include: Iterable[str] = ("pair_eof",), center: int = 1,
                       h_variant: str = "squared", restarts: int = 32,
                       seed: int = 0, max_iter: int = 250) -> list[CorrelationReport]:
    """Sweep the measures over a trajectory, warm-starting the roof between snapshots."""
    rng = np.random.default_rng(seed)
    out = []
    warm = None
    for rho, t in zip(states, times):
        rep, w = compute_correlations(rho, t, dims, include, center, h_variant,
                                      restarts=restarts, rng=rng, warm_start=warm,
                                      max_iter=max_iter)
        if w is not None:
            warm = w
        out.append(rep)
    return out
