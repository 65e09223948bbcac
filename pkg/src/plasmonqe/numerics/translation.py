"""Addition-theorem translation operators for VSWF expansions.

An outgoing (or regular) expansion about origin O1 is re-expressed about
O2 through dense coefficient matrices built from Wigner-3j/Gaunt
contractions.  The displacement argument is d = O2 - O1 (new origin
minus old); entries act on coefficient vectors, c_new = entries @ c_old.

Two assembly paths share one coefficient table format:

* general displacements contract a cached sparse tensor (rows: pairs of
  (l, m) indices, columns: packed (p, mu)) against the per-displacement
  vector z_p(kd) P~_p^{|mu|}(cos th_d) e^{i mu phi_d};
* displacements along +-z couple only equal m (P~_p^mu (+-1) = 0 for
  mu != 0), and a per-m dense table gives each m-sector block with one
  small matrix-vector product.  This is what the collinear-cluster
  solver uses per frequency.

The geometry-independent tables are cached per l_max under a lock;
translation matrices themselves are cheap to produce from them.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import sparse

from .angular import angular_tables
from .bessel import sph_h1n_all, sph_jn_all
from .indexing import basis_size, lm_index, scalar_block_size, tri_index
from .wigner import w3j_p_ladder


class TranslationKind(Enum):
    OUTGOING_TO_REGULAR = "outgoing_to_regular"
    REGULAR_TO_REGULAR = "regular_to_regular"


_AXIAL_TOL = 1e-12

_lock = threading.Lock()
_gaunt_cache: dict[int, tuple] = {}
_axial_cache: dict[int, tuple] = {}


def _cs(m):
    m = np.asarray(m)
    return np.where(m >= 0, np.where(m % 2 == 0, 1.0, -1.0), 1.0)


def _pair_tables(l1: int, l2: int, l_max: int):
    """a5/b5 contraction coefficients for one (l1, l2) pair, over the
    full (m1, m2, p) grid, in the orthonormal-VSH convention.

    Returns (same, cross, m1g, m2g) where same/cross are real arrays of
    shape (2l1+1, 2l2+1, 2*l_max+1) and the stored cross value is the
    imaginary part (the true coefficient is i * cross).
    """
    m1 = np.arange(-l1, l1 + 1)
    m2 = np.arange(-l2, l2 + 1)
    m1g, m2g = np.meshgrid(m1, m2, indexing="ij")
    np_all = 2 * l_max + 1

    wig1 = w3j_p_ladder(l1, l2, m1g, -m2g)          # (p, nm1, nm2)
    wig2 = w3j_p_ladder(l1, l2, np.array(0), np.array(0))  # (p,)
    pmax = l1 + l2

    mu = m1g - m2g
    ps = np.arange(pmax + 1).reshape(-1, 1, 1)
    ipow = (np.abs(mu)[None] - np.abs(m1g)[None] - np.abs(m2g)[None] + (l2 - l1) + ps) % 4
    jfac = (1j**ipow) * np.where(mu[None] % 2 == 0, 1.0, -1.0)
    fac1 = np.sqrt(
        (2 * l1 + 1.0) * (2 * l2 + 1.0) / (2.0 * l1 * (l1 + 1.0) * l2 * (l2 + 1.0))
    )
    pf = ps.astype(float)
    fac2a = (l1 * (l1 + 1.0) + l2 * (l2 + 1.0) - pf * (pf + 1.0)) * np.sqrt(2 * pf + 1.0)
    arg = (
        (l1 + l2 + 1.0 + pf)
        * (l1 + l2 + 1.0 - pf)
        * (pf + l1 - l2)
        * (pf - l1 + l2)
        * (2 * pf + 1.0)
    )
    fac2b = np.sqrt(np.maximum(arg, 0.0))
    wig2b = np.zeros_like(wig2)
    wig2b[1:] = wig2[:-1]

    conv = (_cs(m1g) * _cs(m2g))[None]  # smuthi-convention -> orthonormal VSH
    a5 = jfac * fac1 * fac2a * wig1 * wig2[:, None, None] * conv
    b5 = jfac * fac1 * fac2b * wig1 * wig2b[:, None, None] * conv

    same = np.zeros((2 * l1 + 1, 2 * l2 + 1, np_all))
    cross = np.zeros_like(same)
    same[:, :, : pmax + 1] = np.moveaxis(a5.real, 0, -1)
    cross[:, :, : pmax + 1] = np.moveaxis(b5.imag, 0, -1)
    return same, cross, m1g, m2g


def _gaunt_tensors(l_max: int):
    """Sparse contraction tensors for general displacements.

    Rows index (lm1, lm2) pairs flattened as lm1 * L + lm2; columns index
    (p, mu) flattened as p * (4 l_max + 1) + mu + 2 l_max.
    """
    with _lock:
        if l_max in _gaunt_cache:
            return _gaunt_cache[l_max]
    L = scalar_block_size(l_max)
    nc_mu = 4 * l_max + 1
    ncol = (2 * l_max + 1) * nc_mu
    rows_s, cols_s, vals_s = [], [], []
    rows_c, cols_c, vals_c = [], [], []
    for l1 in range(1, l_max + 1):
        for l2 in range(1, l_max + 1):
            same, cross, m1g, m2g = _pair_tables(l1, l2, l_max)
            mu = m1g - m2g
            base_rows = (
                (l1 * (l1 + 1) + m1g - 1) * L + (l2 * (l2 + 1) + m2g - 1)
            )  # lm_index pairs
            ps = np.arange(2 * l_max + 1)
            colgrid = ps[None, None, :] * nc_mu + (mu[..., None] + 2 * l_max)
            rowgrid = np.broadcast_to(base_rows[..., None], same.shape)
            nz = same != 0.0
            rows_s.append(rowgrid[nz].astype(np.int64))
            cols_s.append(colgrid[nz].astype(np.int64))
            vals_s.append(same[nz])
            nz = cross != 0.0
            rows_c.append(rowgrid[nz].astype(np.int64))
            cols_c.append(colgrid[nz].astype(np.int64))
            vals_c.append(cross[nz])
    S_same = sparse.coo_matrix(
        (np.concatenate(vals_s), (np.concatenate(rows_s), np.concatenate(cols_s))),
        shape=(L * L, ncol),
    ).tocsr()
    S_cross = sparse.coo_matrix(
        (np.concatenate(vals_c), (np.concatenate(rows_c), np.concatenate(cols_c))),
        shape=(L * L, ncol),
    ).tocsr()
    with _lock:
        _gaunt_cache[l_max] = (S_same, S_cross)
    return S_same, S_cross


def _axial_tables(l_max: int):
    """Per-m dense contraction tables for +-z displacements.

    For each m >= 0: arrays (nl, nl, 2*l_max+1) over l1, l2 in
    [max(1, m), l_max], already including the sqrt((2p+1)/2) angular
    weight at the pole; the z-parity sign (+-1)^p is applied by the
    caller through the radial vector.
    """
    with _lock:
        if l_max in _axial_cache:
            return _axial_cache[l_max]
    tabs = []
    for m in range(0, l_max + 1):
        lmin = max(1, m)
        nl = l_max - lmin + 1
        As = np.zeros((nl, nl, 2 * l_max + 1))
        Bs = np.zeros_like(As)
        tabs.append((As, Bs))
    pw = np.sqrt((2 * np.arange(2 * l_max + 1) + 1.0) / 2.0)
    for l1 in range(1, l_max + 1):
        for l2 in range(1, l_max + 1):
            same, cross, m1g, m2g = _pair_tables(l1, l2, l_max)
            mcommon = min(l1, l2)
            for m in range(0, mcommon + 1):
                As, Bs = tabs[m]
                lmin = max(1, m)
                As[l1 - lmin, l2 - lmin] = same[l1 + m, l2 + m] * pw
                Bs[l1 - lmin, l2 - lmin] = cross[l1 + m, l2 + m] * pw
    with _lock:
        _axial_cache[l_max] = tabs
    return tabs


def _radial_vector(kind: TranslationKind, k: complex, dist: float, l_max: int) -> np.ndarray:
    if kind is TranslationKind.OUTGOING_TO_REGULAR:
        return sph_h1n_all(2 * l_max, k * dist)
    return sph_jn_all(2 * l_max, k * dist)


def axial_sector_block(kind: TranslationKind, m: int, dz: float, k: complex,
                       l_max: int) -> np.ndarray:
    """Coefficient-space translation block for azimuthal index m and a
    displacement dz * z^ (dz signed), over orders l in [max(1,|m|), l_max]
    with (TE, TM) sub-blocks: shape (2 nl, 2 nl)."""
    tabs = _axial_tables(l_max)
    As, Bs = tabs[abs(m)]
    z = _radial_vector(kind, k, abs(dz), l_max)
    if dz < 0:
        z = z * (-1.0) ** np.arange(2 * l_max + 1)
    same = As @ z
    cross = 1j * (Bs @ z)
    if m < 0:
        cross = -cross
    nl = same.shape[0]
    blk = np.empty((2 * nl, 2 * nl), dtype=complex)
    blk[:nl, :nl] = same
    blk[nl:, nl:] = same
    blk[:nl, nl:] = cross
    blk[nl:, :nl] = cross
    # wave-expansion matrix -> coefficient-space operator
    return blk.T.copy()


def general_matrix(kind: TranslationKind, d: np.ndarray, k: complex, l_max: int) -> np.ndarray:
    """Full coefficient-space translation matrix for displacement d."""
    d = np.asarray(d, dtype=float)
    dist = float(np.linalg.norm(d))
    L = scalar_block_size(l_max)
    if dist == 0.0:
        if kind is TranslationKind.REGULAR_TO_REGULAR:
            return np.eye(2 * L, dtype=complex)
        raise ValueError("outgoing->regular translation undefined at zero displacement")
    S_same, S_cross = _gaunt_tensors(l_max)
    cos_t = d[2] / dist
    sin_t = np.hypot(d[0], d[1]) / dist
    phi = np.arctan2(d[1], d[0])
    z = _radial_vector(kind, k, dist, l_max)
    pt, _, _ = angular_tables(np.array(cos_t), np.array(sin_t), 2 * l_max)
    nc_mu = 4 * l_max + 1
    F = np.zeros((2 * l_max + 1, nc_mu), dtype=complex)
    mus = np.arange(-2 * l_max, 2 * l_max + 1)
    eimp = np.exp(1j * mus * phi)
    for p in range(2 * l_max + 1):
        legs = pt[tri_index(p, np.minimum(np.abs(mus), p))]
        legs = np.where(np.abs(mus) <= p, legs, 0.0)
        F[p] = z[p] * legs * eimp
    Fv = F.ravel()
    same = (S_same @ Fv).reshape(L, L)
    cross = 1j * (S_cross @ Fv).reshape(L, L)
    A = np.empty((2 * L, 2 * L), dtype=complex)
    A[:L, :L] = same
    A[L:, L:] = same
    A[:L, L:] = cross
    A[L:, :L] = cross
    return A.T.copy()


def is_axial(d: np.ndarray) -> bool:
    d = np.asarray(d, dtype=float)
    n = np.linalg.norm(d)
    return n > 0 and np.hypot(d[0], d[1]) <= _AXIAL_TOL * n


@dataclass
class TranslationMatrix:
    """Dense coefficient-space translation operator over the truncated
    basis (size 2*l_max*(l_max+2); TE block first)."""

    displacement: np.ndarray
    wavenumber: complex
    kind: TranslationKind
    l_max: int
    entries: np.ndarray

    def apply(self, coeffs: np.ndarray) -> np.ndarray:
        return self.entries @ coeffs


def translation(kind: TranslationKind, displacement, k: complex, l_max: int) -> TranslationMatrix:
    """Translation operator mapping an expansion about O1 to one about
    O2 = O1 + displacement (regular result valid for |r - O2| < |d| when
    the source is outgoing)."""
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    d = np.asarray(displacement, dtype=float)
    if not np.all(np.isfinite(d)):
        raise ValueError("displacement must be finite")
    if is_axial(d):
        L = scalar_block_size(l_max)
        entries = np.zeros((2 * L, 2 * L), dtype=complex)
        for m in range(-l_max, l_max + 1):
            lmin = max(1, abs(m))
            nl = l_max - lmin + 1
            blk = axial_sector_block(kind, m, d[2], k, l_max)
            idx = np.array(
                [lm_index(l, m) for l in range(lmin, l_max + 1)]
                + [L + lm_index(l, m) for l in range(lmin, l_max + 1)]
            )
            entries[np.ix_(idx, idx)] = blk
        return TranslationMatrix(d, k, kind, l_max, entries)
    entries = general_matrix(kind, d, k, l_max)
    return TranslationMatrix(d, k, kind, l_max, entries)
