"""Multipole index bookkeeping for the truncated VSWF basis.

A truncation at order l_max carries L = l_max*(l_max+2) scalar (l, m)
pairs (l = 1..l_max, m = -l..l) per polarization; the full basis size is
2L with the TE (M-wave) block first and the TM (N-wave) block second.
Within a block the flat (l, m) index is l*(l+1) + m - 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np


class Polarization(IntEnum):
    TE = 0  # M-wave
    TM = 1  # N-wave


@dataclass(frozen=True)
class MultipoleIndex:
    """One member of the VSWF basis: order n >= 1, |m| <= n, TE or TM."""

    n: int
    m: int
    pol: Polarization

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"multipole order n={self.n} must be >= 1")
        if abs(self.m) > self.n:
            raise ValueError(f"|m|={abs(self.m)} exceeds n={self.n}")
        object.__setattr__(self, "pol", Polarization(self.pol))

    def flat(self, l_max: int) -> int:
        """Position in the flat coefficient vector of a basis truncated
        at l_max (TE block first)."""
        if self.n > l_max:
            raise ValueError(f"n={self.n} exceeds truncation l_max={l_max}")
        return int(self.pol) * scalar_block_size(l_max) + lm_index(self.n, self.m)


def scalar_block_size(l_max: int) -> int:
    """Number of (l, m) pairs per polarization block."""
    return l_max * (l_max + 2)


def basis_size(l_max: int) -> int:
    """Total truncated basis size, both polarizations."""
    return 2 * scalar_block_size(l_max)


def lm_index(l: int, m: int) -> int:
    """Flat index of the signed pair (l, m) within one block."""
    return l * (l + 1) + m - 1


def lm_arrays(l_max: int) -> tuple[np.ndarray, np.ndarray]:
    """(l, m) values for every flat block position, as arrays of length
    scalar_block_size(l_max)."""
    ls = np.concatenate([np.full(2 * l + 1, l) for l in range(1, l_max + 1)])
    ms = np.concatenate([np.arange(-l, l + 1) for l in range(1, l_max + 1)])
    return ls, ms


def tri_index(l: np.ndarray | int, m: np.ndarray | int):
    """Index into triangular (l, m >= 0) tables: l*(l+1)/2 + m."""
    return (np.asarray(l) * (np.asarray(l) + 1)) // 2 + np.asarray(m)
