"""Plane-wave driven fields: point evaluation and 2-D field maps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..numerics.indexing import basis_size
from ..numerics.vswf import plane_wave_coeffs, wave_sum
from .cluster import PlaneWave, SphereCluster
from .green import canonical_frame, get_solver

_CHUNK = 2048


def scattered_field(cluster: SphereCluster, pw: PlaneWave, r) -> np.ndarray:
    """Total electric field (incident + scattered) at exterior point(s) r."""
    single = np.ndim(r) == 1
    pts = np.atleast_2d(np.asarray(r, dtype=float))
    if not np.all(cluster.is_exterior(pts)):
        raise DomainError("field point lies inside a sphere")
    Rm, rot = canonical_frame(cluster)
    pts_s = pts @ Rm.T
    k = rot.host_wavenumber(pw.omega)
    d_s = Rm @ pw.direction
    p_s = Rm @ pw.polarization
    E = pw.amplitude * p_s[None, :] * np.exp(1j * k * (pts_s @ d_s))[:, None]
    if rot.n_spheres:
        solver = get_solver(rot, pw.omega)
        base = plane_wave_coeffs(d_s, p_s, rot.l_max)
        src = np.empty((rot.n_spheres, basis_size(rot.l_max)), dtype=complex)
        for i, s in enumerate(rot.spheres):
            src[i] = pw.amplitude * np.exp(1j * k * (d_s @ s.center)) * base
        b = solver.solve(src)
        for i, s in enumerate(rot.spheres):
            E = E + wave_sum(b[i], "outgoing", k, pts_s - s.center, rot.l_max)
    E = E @ np.asarray(Rm)  # rotate vectors back: (R.T @ E.T).T
    return E[0] if single else E


@dataclass(frozen=True)
class PlaneSpec:
    """Rectangular sampling plane, axis-aligned: `axes` picks the two
    in-plane coordinates ("xz" default), `offset` the fixed third one."""

    axes: str = "xz"
    offset: float = 0.0
    extent_a: tuple = (-45e-9, 45e-9)
    extent_b: tuple = (-30e-9, 30e-9)

    def grid(self, resolution) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        na, nb = (resolution, resolution) if np.isscalar(resolution) else resolution
        a = np.linspace(*self.extent_a, na)
        b = np.linspace(*self.extent_b, nb)
        A, B = np.meshgrid(a, b, indexing="ij")
        cols = {"x": 0, "y": 1, "z": 2}
        pts = np.empty(A.shape + (3,))
        ia, ib = cols[self.axes[0]], cols[self.axes[1]]
        io = 3 - ia - ib
        pts[..., ia] = A
        pts[..., ib] = B
        pts[..., io] = self.offset
        return a, b, pts


@dataclass
class FieldMap:
    """|E| over a plane; points inside spheres carry NaN."""

    axis_a: np.ndarray
    axis_b: np.ndarray
    points: np.ndarray
    abs_e: np.ndarray
    plane: PlaneSpec
    omega: float


def field_map(cluster: SphereCluster, pw: PlaneWave, plane: PlaneSpec,
              resolution=200) -> FieldMap:
    """|E(r)| sampled over the plane; sphere interiors are masked NaN."""
    a, b, pts = plane.grid(resolution)
    flat = pts.reshape(-1, 3)
    outside = cluster.is_exterior(flat)
    vals = np.full(flat.shape[0], np.nan)
    idx = np.nonzero(outside)[0]
    for lo in range(0, idx.size, _CHUNK):
        sel = idx[lo : lo + _CHUNK]
        E = scattered_field(cluster, pw, flat[sel])
        vals[sel] = np.linalg.norm(E, axis=-1)
    return FieldMap(a, b, flat.reshape(pts.shape), vals.reshape(pts.shape[:-1]),
                    plane, pw.omega)
