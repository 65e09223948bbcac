"""Plane-wave scattering and field maps."""

import numpy as np
import pytest

from plasmonqe.constants import C_LIGHT, EPS0
from plasmonqe.em.cluster import PlaneWave, Sphere, SphereCluster
from plasmonqe.em.fields import PlaneSpec, field_map, scattered_field
from plasmonqe.em.materials import Material
from plasmonqe.errors import DomainError
from plasmonqe.numerics.vswf import free_dyadic_green

VAC = Material.vacuum()


def test_no_spheres_gives_incident_exactly():
    clus = SphereCluster((), VAC, 4)
    pw = PlaneWave([0, 0, 1.0], [1.0, 0, 0], 2.5, 4.5e15)
    r = np.array([10e-9, 5e-9, 30e-9])
    k = 4.5e15 / C_LIGHT
    E = scattered_field(clus, pw, r)
    assert np.allclose(E, 2.5 * np.array([1, 0, 0]) * np.exp(1j * k * r[2]), rtol=1e-14)


def test_small_sphere_matches_quasistatic_dipole():
    eps = 3.0
    Rs = 2.5e-9
    omega = 0.05 * C_LIGHT / Rs  # size parameter 0.05
    k = omega / C_LIGHT
    clus = SphereCluster((Sphere([0, 0, 0], Rs, Material.constant(eps)),), VAC, 6)
    pw = PlaneWave([0, 0, 1.0], [1.0, 0, 0], 1.0, omega)
    alpha = 4 * np.pi * EPS0 * Rs**3 * (eps - 1) / (eps + 2)
    rng = np.random.default_rng(2)
    for _ in range(4):
        r = rng.normal(size=3)
        r *= rng.uniform(3 * Rs, 8 * Rs) / np.linalg.norm(r)
        E_sc = scattered_field(clus, pw, r) - np.array([1, 0, 0]) * np.exp(1j * k * r[2])
        E_dip = (k**2 / EPS0) * free_dyadic_green(k, r, np.zeros(3)) @ (
            alpha * np.array([1.0, 0, 0])
        )
        assert np.max(np.abs(E_sc - E_dip)) / np.max(np.abs(E_dip)) < 0.02


def test_field_point_inside_sphere_rejected():
    clus = SphereCluster((Sphere([0, 0, 0], 10e-9, Material.constant(2.0)),), VAC, 4)
    pw = PlaneWave([0, 0, 1.0], [1.0, 0, 0], 1.0, 4.5e15)
    with pytest.raises(DomainError):
        scattered_field(clus, pw, [0, 0, 5e-9])


def test_field_map_masks_interiors_and_matches_pointwise():
    clus = SphereCluster((Sphere([0, 0, 0], 10e-9, Material.constant(-3 + 0.5j)),),
                         VAC, 8)
    pw = PlaneWave([0, 1.0, 0], [1.0, 0, 0], 1.0, 4.5e15)
    plane = PlaneSpec(axes="xz", extent_a=(-20e-9, 20e-9), extent_b=(-20e-9, 20e-9))
    fm = field_map(clus, pw, plane, resolution=21)
    centre = fm.abs_e[10, 10]  # grid point at the origin, inside
    assert np.isnan(centre)
    assert np.isfinite(fm.abs_e[0, 0])
    # identical values through the point API (same code path)
    p = fm.points[0, 0]
    E = scattered_field(clus, pw, p)
    assert np.linalg.norm(E) == fm.abs_e[0, 0]


def test_empty_cluster_map_uniform():
    clus = SphereCluster((), VAC, 2)
    pw = PlaneWave([0, 0, 1.0], [0, 1.0, 0], 3.0, 4.5e15)
    fm = field_map(clus, pw, PlaneSpec(), resolution=8)
    assert np.allclose(fm.abs_e, 3.0, atol=1e-12)
