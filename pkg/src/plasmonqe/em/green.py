"""Cluster dyadic Green tensor assembled from the multiple-scattering
solution.

G_total = G_free + G_scatter.  The scattered part expands a unit point
dipole at r' into regular waves about every sphere centre, solves the
coupled system, and evaluates the outgoing expansions at r; the three
dipole orientations give the three columns.

Collinear clusters are rotated internally so their axis lies along z
(the solver then works in decoupled azimuthal sectors); inputs and
outputs stay in the caller's frame.  A single sphere bypasses the
solver entirely and runs the whole chain in scaled (mantissa, exponent)
arithmetic, which stays exact at the multipole orders (beyond 100)
needed for emitters ~1 nm from the surface.

Solver factorisations are cached per (cluster, omega, l_max) so that
sweeps and multi-point evaluations reuse the LU decomposition.
"""

from __future__ import annotations

import threading
from collections import OrderedDict

import numpy as np

from ..errors import DomainError
from ..numerics.indexing import lm_arrays, scalar_block_size
from ..numerics.vswf import (
    free_dyadic_green,
    free_green_imag_coincident,
    green_source_coeffs,
    wave_sum,
)
from .cluster import GreenTensorValue, SphereCluster, rotation_to_z
from .mie import t_matrix_entries_scaled
from .solver import ClusterSolver

_CACHE_SIZE = 8
_lock = threading.Lock()
_frame_cache: "OrderedDict[int, tuple]" = OrderedDict()
_solver_cache: "OrderedDict[tuple, ClusterSolver]" = OrderedDict()


def canonical_frame(cluster: SphereCluster):
    """(R, rotated_cluster): R maps the caller frame to a frame where a
    collinear cluster's axis is the z direction (identity otherwise)."""
    key = id(cluster)
    with _lock:
        if key in _frame_cache:
            return _frame_cache[key][1:]
    axis = cluster.collinear_axis()
    if axis is None:
        R = np.eye(3)
        rot = cluster
    else:
        R = rotation_to_z(axis)
        if np.allclose(R, np.eye(3)):
            rot = cluster
        else:
            from .cluster import Sphere

            rot = SphereCluster(
                spheres=tuple(
                    Sphere(R @ s.center, s.radius, s.material) for s in cluster.spheres
                ),
                host=cluster.host,
                l_max=cluster.l_max,
            )
    with _lock:
        _frame_cache[key] = (cluster, R, rot)
        while len(_frame_cache) > _CACHE_SIZE:
            _frame_cache.popitem(last=False)
    return R, rot


def get_solver(cluster: SphereCluster, omega: float) -> ClusterSolver:
    """Cached factorised solver for (cluster, omega)."""
    key = (id(cluster), float(omega), cluster.l_max)
    with _lock:
        if key in _solver_cache:
            _solver_cache.move_to_end(key)
            return _solver_cache[key]
    solver = ClusterSolver(cluster, omega)
    with _lock:
        _solver_cache[key] = solver
        while len(_solver_cache) > _CACHE_SIZE:
            _solver_cache.popitem(last=False)
    return solver


def _require_exterior(cluster: SphereCluster, pts: np.ndarray, what: str):
    ok = cluster.is_exterior(pts)
    if not np.all(ok):
        raise DomainError(f"{what} lies inside a sphere")


def _single_sphere_scattered(cluster, r_pts, rp, omega, dirs):
    """Scattered columns for one sphere, scaled arithmetic throughout.

    The source-coefficient exponents are shared by the three dipole
    orientations (they come from the radial ladder alone), so the
    orientation mix acts on mantissas only.
    """
    k = cluster.host_wavenumber(omega)
    s = cluster.spheres[0]
    a_m, a_e = green_source_coeffs("regular", k, rp, s.center, cluster.l_max, scaled=True)
    te_m, te_e, tm_m, tm_e = t_matrix_entries_scaled(
        s.radius,
        s.material.permittivity(omega),
        cluster.host.permittivity(omega),
        omega,
        cluster.l_max,
    )
    L = scalar_block_size(cluster.l_max)
    ls, _ = lm_arrays(cluster.l_max)
    t_m = np.concatenate([te_m[ls], tm_m[ls]])
    t_e = np.concatenate([te_e[ls], tm_e[ls]])
    cols = []
    for j in range(dirs.shape[1]):
        bm = (a_m @ dirs[:, j]) * t_m
        cols.append(wave_sum(bm, "outgoing", k, r_pts - s.center, cluster.l_max,
                             coeff_ex=a_e[:, 0] + t_e))
    return np.stack(cols, axis=-1)


def scattered_green_columns(cluster: SphereCluster, r, rp, omega: float,
                            dirs: np.ndarray | None = None) -> np.ndarray:
    """G_scatter(r, r') @ dirs, evaluated in the caller frame.

    r may be a single point or an array of points (..., 3); dirs is a
    (3, ncol) matrix of dipole orientations at r' (default identity).
    """
    if dirs is None:
        dirs = np.eye(3)
    dirs = np.asarray(dirs, dtype=float)
    single_point = np.ndim(r) == 1
    R, rot = canonical_frame(cluster)
    rp_s = R @ np.asarray(rp, dtype=float)
    pts = np.atleast_2d(np.asarray(r, dtype=float))
    pts_s = pts @ R.T
    dirs_s = R @ dirs

    _require_exterior(rot, rp_s[None, :], "source point")
    _require_exterior(rot, pts_s, "field point")

    k = rot.host_wavenumber(omega)
    if rot.n_spheres == 0:
        out = np.zeros(pts.shape[:-1] + (3, dirs.shape[1]), dtype=complex)
        return out[0] if single_point else out
    if rot.n_spheres == 1:
        E_s = _single_sphere_scattered(rot, pts_s, rp_s, omega, dirs_s)
    else:
        solver = get_solver(rot, omega)
        L2 = 2 * scalar_block_size(rot.l_max)
        src = np.empty((rot.n_spheres, L2, dirs.shape[1]), dtype=complex)
        for i, s in enumerate(rot.spheres):
            A = green_source_coeffs("regular", k, rp_s, s.center, rot.l_max)
            src[i] = A @ dirs_s
        b = solver.solve(src)
        E_s = np.zeros(pts_s.shape[:-1] + (3, dirs.shape[1]), dtype=complex)
        for i, s in enumerate(rot.spheres):
            for j in range(dirs.shape[1]):
                E_s[..., j] += wave_sum(
                    b[i, :, j], "outgoing", k, pts_s - s.center, rot.l_max
                )
    # rotate field vectors back to the caller frame
    E = np.einsum("ab,...bj->...aj", R.T, E_s)
    return E[0] if single_point else E


def green_tensor(cluster: SphereCluster, r, rp, omega: float) -> GreenTensorValue:
    """Total dyadic Green tensor G(r, r', omega) of the scene.

    Coincident points are allowed: the imaginary part is exact (analytic
    free-space limit plus the regular scattered part) and the divergent
    real free-space part is omitted, flagged by `coincident`.
    """
    r = np.asarray(r, dtype=float).reshape(3)
    rp = np.asarray(rp, dtype=float).reshape(3)
    coincident = bool(np.all(r == rp))
    k = cluster.host_wavenumber(omega)
    if coincident:
        g_free = 1j * free_green_imag_coincident(np.real(k))
    else:
        g_free = free_dyadic_green(k, r, rp)
    if cluster.n_spheres:
        g_sc = scattered_green_columns(cluster, r, rp, omega)
        solver = get_solver(canonical_frame(cluster)[1], omega)
        cond = solver.condition_estimate
    else:
        g_sc = 0.0
        cond = 0.0
    return GreenTensorValue(
        G=g_free + g_sc,
        r=r,
        rp=rp,
        omega=omega,
        coincident=coincident,
        l_max=cluster.l_max,
        condition_estimate=cond,
    )
