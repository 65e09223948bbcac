"""Wigner 3j symbols along the third-argument ladder.

Evaluation is plain floating point ("rational-free"): exact factorial
seeds through log-gamma plus the three-term recurrence of Schulten &
Gordon in j3, run from both ends and matched at the magnitude peak so
neither sweep ever travels against its stable direction.  Accuracy is
pinned against exact rational evaluation (sympy) in the tests.
"""

from __future__ import annotations

import numpy as np
from scipy.special import gammaln

from ..errors import RangeError

_GROWTH_LIMIT = 1e250


def _lgf(n):
    """log(n!) for integer arrays (gammaln(n+1))."""
    return gammaln(np.asarray(n, dtype=float) + 1.0)


def w3j_top_seed(j1: int, j2: int, ma, mb):
    """(j1 j2 j1+j2; ma mb -ma-mb), elementwise over ma, mb arrays."""
    ma = np.asarray(ma, dtype=float)
    mb = np.asarray(mb, dtype=float)
    loga = 0.5 * (
        _lgf(2 * j1)
        + _lgf(2 * j2)
        + _lgf(j1 + j2 + ma + mb)
        + _lgf(j1 + j2 - ma - mb)
        - _lgf(2 * j1 + 2 * j2 + 1)
        - _lgf(j1 + ma)
        - _lgf(j1 - ma)
        - _lgf(j2 + mb)
        - _lgf(j2 - mb)
    )
    sign = np.where((np.abs(j1 - j2 + ma + mb) % 2) < 0.5, 1.0, -1.0)
    return sign * np.exp(loga)


def w3j_p_ladder(j1: int, j2: int, ma, mb):
    """f(p) = (j1 j2 p; ma mb -ma-mb) for p = 0..j1+j2, vectorised over
    broadcastable integer arrays ma, mb.

    Returns an array of shape (j1+j2+1,) + broadcast(ma, mb).shape with
    zeros outside [pmin, pmax].
    """
    ma, mb = np.broadcast_arrays(np.asarray(ma, int), np.asarray(mb, int))
    mc = -ma - mb
    pmax = j1 + j2
    pmin = np.maximum(abs(j1 - j2), np.abs(mc))
    shape = ma.shape
    f = np.zeros((pmax + 1,) + shape)

    valid = (np.abs(ma) <= j1) & (np.abs(mb) <= j2)
    if not np.any(valid):
        return f

    dj2 = float(j1 - j2) ** 2
    sj2 = float(j1 + j2 + 1) ** 2
    mcf = mc.astype(float)
    madiff = (ma - mb).astype(float)
    jj = float(j1 * (j1 + 1) - j2 * (j2 + 1))

    def A(p):
        p2 = float(p) * float(p)
        val = (p2 - dj2) * (sj2 - p2) * (p2 - mcf * mcf)
        return np.sqrt(np.maximum(val, 0.0))

    def B(p):
        return -(2 * p + 1.0) * (mcf * jj + madiff * p * (p + 1.0))

    # downward sweep from the exact top seed
    down = np.zeros_like(f)
    down[pmax] = np.where(valid, w3j_top_seed(j1, j2, ma, mb), 0.0)
    if pmax >= 1:
        # recurrence at p = pmax with f(pmax+1) = 0
        a = (pmax + 1.0) * A(pmax)
        with np.errstate(divide="ignore", invalid="ignore"):
            down[pmax - 1] = np.where(a > 0, -B(pmax) * down[pmax] / a, 0.0)
    for p in range(pmax - 1, 0, -1):
        a = (p + 1.0) * A(p)
        live = (p - 1 >= pmin) & valid
        with np.errstate(divide="ignore", invalid="ignore"):
            nxt = -(p * A(p + 1) * down[p + 1] + B(p) * down[p]) / np.where(a > 0, a, 1.0)
        down[p - 1] = np.where(live & (a > 0), nxt, 0.0)
    if np.max(np.abs(down)) > _GROWTH_LIMIT:
        raise RangeError("3j downward sweep overflow; order out of supported range")

    # junction at the downward sweep's magnitude peak
    mag = np.abs(down)
    mag[~np.isfinite(mag)] = 0.0
    pj = np.argmax(mag, axis=0)

    # upward sweep from pmin (A(pmin) = 0, so only one seed is needed;
    # the degenerate pmin = 0 case gets closed-form seeds)
    up = np.zeros_like(f)
    np.put_along_axis(up, pmin[None], 1.0, axis=0)
    if j1 == j2:
        deg = (pmin == 0) & valid
        if np.any(deg):
            s = np.where((np.abs(j1 - ma) % 2) < 0.5, 1.0, -1.0)
            f0 = s / np.sqrt(2.0 * j1 + 1.0)
            up[0] = np.where(deg, f0, up[0])
            if pmax >= 1:
                f1 = s * ma / np.sqrt(j1 * (j1 + 1.0) * (2 * j1 + 1.0))
                up[1] = np.where(deg, f1, up[1])
    for p in range(0, pmax):
        a = p * A(p + 1)
        live = (p >= pmin) & valid & ~((pmin == 0) & (p == 0))
        with np.errstate(divide="ignore", invalid="ignore"):
            nxt = -(B(p) * up[p] + (p + 1.0) * A(p) * up[p - 1 if p >= 1 else 0]) / np.where(
                a > 0, a, 1.0
            )
        grow = np.where(live & (a > 0), nxt, up[p + 1])
        up[p + 1] = grow
        if np.max(np.abs(up[p + 1])) > _GROWTH_LIMIT:
            raise RangeError("3j upward sweep overflow; order out of supported range")

    # match the up branch to the seeded down branch at the junction
    f_dn_j = np.take_along_axis(down, pj[None], axis=0)[0]
    f_up_j = np.take_along_axis(up, pj[None], axis=0)[0]
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(np.abs(f_up_j) > 0, f_dn_j / np.where(f_up_j != 0, f_up_j, 1.0), 0.0)
    ps = np.arange(pmax + 1).reshape((-1,) + (1,) * ma.ndim)
    f = np.where(ps < pj[None], up * scale[None], down)
    f = np.where((ps >= pmin[None]) & valid[None], f, 0.0)
    return f


def wigner3j(j1: int, j2: int, j3: int, m1: int, m2: int, m3: int) -> float:
    """Single Wigner 3j symbol (integer arguments)."""
    if m1 + m2 + m3 != 0:
        return 0.0
    if j3 < abs(j1 - j2) or j3 > j1 + j2:
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(m3) > j3:
        return 0.0
    lad = w3j_p_ladder(j1, j2, np.array(m1), np.array(m2))
    return float(lad[j3])
