"""Scattering-scene geometry: sphere clusters and incident plane waves."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..constants import C_LIGHT
from .materials import Material


@dataclass(frozen=True)
class Sphere:
    center: np.ndarray
    radius: float
    material: Material

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float).reshape(3)
        object.__setattr__(self, "center", c)
        if not self.radius > 0:
            raise ValueError(f"sphere radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class SphereCluster:
    """N_s spheres in a host medium with a common multipole truncation."""

    spheres: tuple
    host: Material
    l_max: int

    def __post_init__(self):
        sp = tuple(self.spheres)
        object.__setattr__(self, "spheres", sp)
        if self.l_max < 1:
            raise ValueError("l_max must be >= 1")
        for i in range(len(sp)):
            for j in range(i + 1, len(sp)):
                gap = (
                    np.linalg.norm(sp[i].center - sp[j].center)
                    - sp[i].radius
                    - sp[j].radius
                )
                if gap < 0:
                    raise ValueError(
                        f"spheres[{i}] and spheres[{j}] overlap by {-gap:.3g} m"
                    )

    @property
    def n_spheres(self) -> int:
        return len(self.spheres)

    def host_wavenumber(self, omega: float) -> complex:
        k = omega / C_LIGHT * np.sqrt(complex(self.host.permittivity(omega)))
        return k

    def centers(self) -> np.ndarray:
        return np.array([s.center for s in self.spheres])

    def is_exterior(self, points, margin: float = 0.0) -> np.ndarray:
        """True where a point lies strictly outside every sphere (by at
        least `margin`)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        ok = np.ones(pts.shape[0], dtype=bool)
        for s in self.spheres:
            ok &= np.linalg.norm(pts - s.center, axis=1) > s.radius + margin
        return ok

    def collinear_axis(self, tol: float = 1e-9):
        """Unit vector of the common line through all sphere centers, or
        None if the centers are not collinear.  Single spheres count as
        collinear along z."""
        c = self.centers()
        if len(c) <= 1:
            return np.array([0.0, 0.0, 1.0])
        d = c - c.mean(axis=0)
        span = np.linalg.norm(d, axis=1).max()
        if span == 0:
            return np.array([0.0, 0.0, 1.0])
        _, s, vt = np.linalg.svd(d)
        if s[1:].max(initial=0.0) <= tol * span:
            u = vt[0]
            return u / np.linalg.norm(u)
        return None


def rotation_to_z(axis: np.ndarray) -> np.ndarray:
    """Orthogonal matrix R with R @ axis = +-z^ (minimal rotation)."""
    u = np.asarray(axis, dtype=float)
    u = u / np.linalg.norm(u)
    z = np.array([0.0, 0.0, 1.0])
    v = np.cross(u, z)
    s = np.linalg.norm(v)
    c = float(u @ z)
    if s < 1e-14:
        return np.eye(3)
    vx = np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])
    return np.eye(3) + vx + vx @ vx * ((1 - c) / s**2)


@dataclass(frozen=True)
class PlaneWave:
    """Incident plane wave: E = amplitude * polarization * e^{i k dir.r}."""

    direction: np.ndarray
    polarization: np.ndarray
    amplitude: float
    omega: float

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float).reshape(3)
        p = np.asarray(self.polarization, dtype=complex).reshape(3)
        if abs(np.linalg.norm(d) - 1.0) > 1e-10:
            raise ValueError("plane-wave direction must be a unit vector")
        if abs(np.linalg.norm(p) - 1.0) > 1e-10:
            raise ValueError("plane-wave polarization must be a unit vector")
        if abs(np.vdot(d, p)) > 1e-10:
            raise ValueError("polarization must be transverse to direction")
        object.__setattr__(self, "direction", d)
        object.__setattr__(self, "polarization", p)


@dataclass
class GreenTensorValue:
    """Classical dyadic Green tensor of the scene at one frequency.

    At coincident points (r == r') the real part of the free-space
    contribution diverges and is omitted; `coincident` marks this, and
    the imaginary part (which sets decay rates) is exact.
    """

    G: np.ndarray
    r: np.ndarray
    rp: np.ndarray
    omega: float
    coincident: bool = False
    l_max: int = 0
    condition_estimate: float = 0.0
