"""Collective qubit states, their density operators, and entanglement
measures.

The single-excitation collective basis places the symmetric state first
and spans its orthogonal complement with the Helmert ladder
(2, -1, ..)/sqrt(6)-style vectors, which keeps the Gram matrix exactly
the identity while preserving the distinguished-site structure of the
sub/superradiant modes.  Density operators are the rank-<=2 mixtures

    rho(p) = p |i><i| + (1 - p) |L><L|

on the 2^N computational space (qubit 0 = least significant bit,
|L> = index 0 all-ground).

The genuine-multipartite measure is purity-based over all two-qubit
reductions:

    E_G = 2/(N(N-1)) sum_{l=1}^{N-1} (N-l) G(2,l),
    G(2,l) = 4/3 [1 - (1/(N-l)) sum_j Tr(rho_{j,j+l}^2)],

and for qubit pairs the Wootters concurrence
max(0, l1 - l2 - l3 - l4) over the square-rooted eigenvalues of
rho (sy x sy) rho* (sy x sy) is available alongside.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import CollectiveMode, DynamicsConfig, ResonanceParams, amplitude


@dataclass(frozen=True)
class CollectiveBasis:
    """Orthonormal single-excitation coefficient vectors."""

    n_qubits: int
    states: np.ndarray  # (N, N): row i = coefficients of |i> over sites
    labels: tuple

    def state(self, index: int) -> np.ndarray:
        """Coefficient vector of collective state |index> (1-based)."""
        return self.states[index - 1]


def collective_basis(n_qubits: int) -> CollectiveBasis:
    """Symmetric state plus the orthogonal Helmert ladder.

    For N = 2: (1, 1)/sqrt2 and (1, -1)/sqrt2.  For N = 4 the second
    state is (3, -1, -1, -1)/sqrt12, and so on: state j >= 2 weights
    site j-2 with N-j+1 against the following sites.
    """
    n = int(n_qubits)
    if n < 2:
        raise ValueError("need at least two qubits")
    rows = [np.full(n, 1.0 / np.sqrt(n))]
    labels = ["symmetric"]
    for j in range(2, n + 1):
        v = np.zeros(n)
        head = n - j + 1
        v[j - 2] = head
        v[j - 1 :] = -1.0
        rows.append(v / np.linalg.norm(v))
        labels.append(f"orthogonal_{j}")
    return CollectiveBasis(n_qubits=n, states=np.array(rows), labels=tuple(labels))


@dataclass
class QubitDensity:
    """Dense 2^N x 2^N density matrix with basic sanity enforcement."""

    n_qubits: int
    rho: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.rho, dtype=complex)
        dim = 2**self.n_qubits
        if r.shape != (dim, dim):
            raise ValueError(f"density matrix must be {dim}x{dim}")
        herm = np.max(np.abs(r - r.conj().T))
        if herm > 1e-12 * max(np.max(np.abs(r)), 1.0):
            raise ValueError(f"density matrix not Hermitian ({herm:.2e})")
        tr = np.trace(r).real
        if abs(tr - 1.0) > 1e-12:
            raise ValueError(f"density matrix trace {tr} != 1")
        self.rho = 0.5 * (r + r.conj().T)


def density_operator(state_coeffs, p: float, n_qubits: int | None = None) -> QubitDensity:
    """rho = p |i><i| + (1-p) |L><L| embedded in the computational basis."""
    x = np.asarray(state_coeffs, dtype=complex)
    n = x.size if n_qubits is None else n_qubits
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability p = {p} outside [0, 1]")
    dim = 2**n
    ket = np.zeros(dim, dtype=complex)
    for site in range(n):
        ket[1 << site] = x[site]
    nrm = np.linalg.norm(ket)
    if abs(nrm - 1.0) > 1e-12:
        raise ValueError("state coefficients must be unit-norm")
    rho = p * np.outer(ket, ket.conj())
    rho[0, 0] += 1.0 - p
    return QubitDensity(n_qubits=n, rho=rho)


def reduced_pair(density: QubitDensity, j: int, k: int) -> np.ndarray:
    """Two-qubit reduced density matrix of qubits (j, k), tracing the
    rest; the 4x4 result is ordered |q_j q_k> with q_j the high bit."""
    n = density.n_qubits
    if j == k or not (0 <= j < n) or not (0 <= k < n):
        raise IndexError(f"invalid qubit pair ({j}, {k}) for N = {n}")
    rho = density.rho.reshape((2,) * (2 * n))
    # axes: (q_{n-1} ... q_0 | q'_{n-1} ... q'_0); axis of qubit q is n-1-q
    keep = sorted({n - 1 - j, n - 1 - k})
    perm = keep + [a for a in range(n) if a not in keep]
    perm = perm + [n + a for a in perm]
    rho = rho.transpose(perm)
    rho = rho.reshape(4, 2 ** (n - 2), 4, 2 ** (n - 2))
    out = np.einsum("aibi->ab", rho)
    # reorder so qubit j is the high bit regardless of axis sorting
    if n - 1 - j > n - 1 - k:
        out = out.reshape(2, 2, 2, 2).transpose(1, 0, 3, 2).reshape(4, 4)
    return out


def genuine_entanglement(density: QubitDensity) -> float:
    """Purity-based genuine multipartite entanglement over pair
    reductions (see module docstring)."""
    n = density.n_qubits
    if n < 2:
        raise ValueError("defined for N >= 2")
    total = 0.0
    for l in range(1, n):
        acc = 0.0
        for j in range(n - l):
            r = reduced_pair(density, j, j + l)
            acc += float(np.real(np.trace(r @ r)))
        total += (n - l) * (4.0 / 3.0) * (1.0 - acc / (n - l))
    return float(2.0 / (n * (n - 1)) * total)


_SY_SY = np.array(
    [
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ],
    dtype=complex,
)


def concurrence(rho4: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix."""
    r = np.asarray(rho4, dtype=complex)
    if r.shape != (4, 4):
        raise ValueError("concurrence needs a 4x4 density matrix")
    if np.max(np.abs(r - r.conj().T)) > 1e-10 * max(np.max(np.abs(r)), 1.0):
        raise ValueError("density matrix not Hermitian")
    rt = r @ _SY_SY @ r.conj() @ _SY_SY
    ev = np.linalg.eigvals(rt)
    lam = np.sqrt(np.abs(np.real(ev)))
    lam.sort()
    return float(max(0.0, lam[3] - lam[2] - lam[1] - lam[0]))


@dataclass
class EntanglementTrace:
    """Population and entanglement versus time for one collective mode."""

    t_grid: np.ndarray
    population: np.ndarray      # p(t) = |C_i(t)|^2
    e_g: np.ndarray             # genuine multipartite entanglement
    concurrence: np.ndarray | None   # only for N = 2
    mode: CollectiveMode
    resonance: ResonanceParams


def entanglement_trace(mode: CollectiveMode, rp: ResonanceParams,
                       cfg: DynamicsConfig) -> EntanglementTrace:
    """Closed-form amplitude -> populations -> entanglement measures."""
    basis = collective_basis(mode.n_qubits)
    x = basis.state(mode.state_index)
    c = amplitude(mode, rp, cfg)
    p = np.abs(c) ** 2
    n_t = p.size
    eg = np.empty(n_t)
    conc = np.empty(n_t) if mode.n_qubits == 2 else None
    for i in range(n_t):
        rho = density_operator(x, min(p[i], 1.0))
        eg[i] = genuine_entanglement(rho)
        if conc is not None:
            conc[i] = concurrence(rho.rho)
    return EntanglementTrace(
        t_grid=cfg.t_grid,
        population=p,
        e_g=eg,
        concurrence=conc,
        mode=mode,
        resonance=rp,
    )
