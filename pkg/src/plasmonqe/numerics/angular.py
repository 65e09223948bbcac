"""Normalised associated Legendre functions and their angular companions.

P~_l^m(cos t) = sqrt((2l+1)(l-m)!/(2(l+m)!)) P_l^m(cos t), m >= 0, no
Condon-Shortley phase (the light-scattering convention), so that
int_0^pi (P~_l^m)^2 sin t dt = 1.

pi~_l^m = P~_l^m / sin t and tau~_l^m = d P~_l^m / dt are produced by
pole-safe recurrences (no division by sin t anywhere); pi~_l^0 is set to
zero because it only ever enters multiplied by m.
"""

from __future__ import annotations

import numpy as np

from .indexing import tri_index


def angular_tables(cos_t, sin_t, l_max: int):
    """Tables (ptilde, pitilde, tautilde) over points.

    Each is shaped (T,) + pts.shape with T = (l_max+1)(l_max+2)/2 and
    rows indexed by tri_index(l, m) for 0 <= m <= l <= l_max.
    """
    c = np.asarray(cos_t, dtype=float)
    s = np.asarray(sin_t, dtype=float)
    T = (l_max + 1) * (l_max + 2) // 2
    pt = np.zeros((T,) + c.shape)
    pi = np.zeros((T,) + c.shape)
    ta = np.zeros((T,) + c.shape)

    # m = 0 ladder for P~
    pt[tri_index(0, 0)] = np.sqrt(0.5)
    if l_max >= 1:
        pt[tri_index(1, 0)] = np.sqrt(1.5) * c
    for l in range(2, l_max + 1):
        a = np.sqrt((2 * l + 1) * (2 * l - 1)) / l
        b = np.sqrt((2 * l + 1) / (2 * l - 3)) * (l - 1) / l
        pt[tri_index(l, 0)] = a * c * pt[tri_index(l - 1, 0)] - b * pt[tri_index(l - 2, 0)]

    # m >= 1: pi~ ladders; P~ = sin * pi~
    for m in range(1, l_max + 1):
        if m == 1:
            pi[tri_index(1, 1)] = np.sqrt(3.0) / 2.0
        else:
            pi[tri_index(m, m)] = (
                np.sqrt((2 * m + 1) / (2.0 * m)) * s * pi[tri_index(m - 1, m - 1)]
            )
        if m + 1 <= l_max:
            pi[tri_index(m + 1, m)] = np.sqrt(2 * m + 3.0) * c * pi[tri_index(m, m)]
        for l in range(m + 2, l_max + 1):
            a = np.sqrt((2 * l + 1) * (2 * l - 1) / ((l - m) * (l + m)))
            b = np.sqrt(
                (2 * l + 1) * (l - 1 - m) * (l - 1 + m) / ((2 * l - 3.0) * (l - m) * (l + m))
            )
            pi[tri_index(l, m)] = a * c * pi[tri_index(l - 1, m)] - b * pi[tri_index(l - 2, m)]
        for l in range(m, l_max + 1):
            pt[tri_index(l, m)] = s * pi[tri_index(l, m)]

    # tau~: m = 0 from pi~^1; m >= 1 from the pi~ ladder
    for l in range(1, l_max + 1):
        ta[tri_index(l, 0)] = -np.sqrt(l * (l + 1.0)) * s * pi[tri_index(l, 1)]
        for m in range(1, l + 1):
            low = pi[tri_index(l - 1, m)] if l - 1 >= m else 0.0
            ta[tri_index(l, m)] = l * c * pi[tri_index(l, m)] - np.sqrt(
                (2 * l + 1.0) * (l - m) * (l + m) / (2 * l - 1.0)
            ) * low

    return pt, pi, ta
