"""Dense multiple-scattering solver: (I - T A) b = T a.

T is the block-diagonal Mie response, A the outgoing-to-regular
translation couplings between sphere centres.  Clusters whose centres
all lie along the z direction decouple into azimuthal sectors (axial
translation blocks conserve m), so each m solves independently at a
small fraction of the dense cost; general geometries assemble the full
matrix once per frequency and reuse its LU factorisation across
right-hand sides.

The raw system is catastrophically graded (T_l shrinks like (kR)^{4l+2}
while the couplings grow like h_{l+l'}(kd)), so the solve is performed
on the similarity-scaled unknowns b~ = b * |h_l(kR)| with sources
scaled by |j_l(kR)|: the scaled T~ = T |h_l(kR)|/|j_l(kR)| is O(1) and
the scaled couplings are bounded by ~(2R/d)^{l+l'}, keeping the matrix
well conditioned.  Conditioning of the scaled matrix is estimated from
the LU factors; estimates beyond the threshold raise
SolverConditionError carrying the estimate.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import get_lapack_funcs, lu_factor, lu_solve

from ..errors import SolverConditionError
from ..numerics.bessel import sph_h1n_scaled, sph_jn_scaled
from ..numerics.indexing import lm_arrays, lm_index, scalar_block_size
from ..numerics.translation import TranslationKind, axial_sector_block, general_matrix
from .cluster import SphereCluster
from .mie import t_matrix_entries_scaled

_COND_DEFAULT = 1e13


def _condition_estimate(M: np.ndarray, lu) -> float:
    gecon = get_lapack_funcs(("gecon",), (M,))[0]
    anorm = np.abs(M).sum(axis=0).max()
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0 or rcond == 0:
        return np.inf
    return 1.0 / rcond


class ClusterSolver:
    """Factorised scattering operator of one cluster at one frequency.

    Sources and solutions are per-sphere coefficient arrays of shape
    (n_spheres, 2*l_max*(l_max+2)); extra trailing axes (multiple
    right-hand sides) broadcast through.
    """

    def __init__(self, cluster: SphereCluster, omega: float,
                 cond_threshold: float = _COND_DEFAULT):
        self.cluster = cluster
        self.omega = float(omega)
        self.k = cluster.host_wavenumber(omega)
        self.l_max = cluster.l_max
        self.cond_threshold = cond_threshold
        self.condition_estimate = 0.0

        L = scalar_block_size(self.l_max)
        ls, _ = lm_arrays(self.l_max)
        ll = np.concatenate([ls, ls])
        eps_host = cluster.host.permittivity(omega)
        ns = cluster.n_spheres
        self._t_scaled = np.empty((ns, 2 * L), dtype=complex)  # T~ (O(1))
        self._row_u = np.empty((ns, 2 * L))                    # |j_l(kR_i)|
        self._col_s_inv = np.empty((ns, 2 * L))                # 1/|h_l(kR_i)|
        self._b_unscale = np.empty((ns, 2 * L))                # 1/|h_l(kR_i)|
        for i, s in enumerate(cluster.spheres):
            te_m, te_e, tm_m, tm_e = t_matrix_entries_scaled(
                s.radius, s.material.permittivity(omega), eps_host, omega, self.l_max
            )
            x = self.k * s.radius
            jm, je = sph_jn_scaled(self.l_max, complex(x))
            hm, he = sph_h1n_scaled(self.l_max, complex(x))
            t_m = np.concatenate([te_m[ls], tm_m[ls]])
            t_e = np.concatenate([te_e[ls], tm_e[ls]])
            with np.errstate(under="ignore"):
                tt = (
                    t_m
                    * (np.abs(hm[ll]) / np.abs(jm[ll]))
                    * np.exp2((t_e + he[ll] - je[ll]).astype(float))
                )
                self._t_scaled[i] = np.where(np.isfinite(tt), tt, 0.0)
                self._row_u[i] = np.abs(jm[ll]) * np.exp2(je[ll].astype(float))
                sinv = np.exp2(-he[ll].astype(float)) / np.abs(hm[ll])
                self._col_s_inv[i] = sinv
                self._b_unscale[i] = sinv

        axis = cluster.collinear_axis()
        self._axial = axis is not None and abs(abs(axis[2]) - 1.0) < 1e-12
        self._sector_lu: dict[int, tuple] = {}
        self._full_lu = None

    # -- sector path ---------------------------------------------------

    def _sector_indices(self, m: int) -> np.ndarray:
        L = scalar_block_size(self.l_max)
        lmin = max(1, abs(m))
        idx = [lm_index(l, m) for l in range(lmin, self.l_max + 1)]
        return np.array(idx + [L + i for i in idx])

    def _sector_factorization(self, m: int):
        if m in self._sector_lu:
            return self._sector_lu[m]
        idx = self._sector_indices(m)
        ns = self.cluster.n_spheres
        nb = idx.size
        centers = self.cluster.centers()
        M = np.eye(ns * nb, dtype=complex)
        for i in range(ns):
            ti = self._t_scaled[i, idx]
            ui = self._row_u[i, idx]
            for j in range(ns):
                if i == j:
                    continue
                dz = centers[i, 2] - centers[j, 2]
                W = axial_sector_block(
                    TranslationKind.OUTGOING_TO_REGULAR, m, dz, self.k, self.l_max
                )
                Ws = (ui * ti)[:, None] * W * self._col_s_inv[j, idx][None, :]
                M[i * nb : (i + 1) * nb, j * nb : (j + 1) * nb] = -Ws
        lu = lu_factor(M, overwrite_a=False, check_finite=False)
        cond = _condition_estimate(M, lu[0])
        if cond > self.cond_threshold:
            raise SolverConditionError(cond, self.cond_threshold)
        self.condition_estimate = max(self.condition_estimate, cond)
        fact = (lu, idx, nb)
        self._sector_lu[m] = fact
        return fact

    def _solve_sectors(self, sources: np.ndarray) -> np.ndarray:
        b = np.zeros_like(sources)
        ns = sources.shape[0]
        tail = (None,) * (sources.ndim - 2)
        for m in range(-self.l_max, self.l_max + 1):
            idx = self._sector_indices(m)
            src = sources[:, idx]
            if not np.any(src):
                continue
            lu, idx, nb = self._sector_factorization(m)
            rhs = (self._t_scaled[:, idx] * self._row_u[:, idx])[
                (slice(None), slice(None)) + tail
            ] * src
            sol = lu_solve(lu, rhs.reshape(ns * nb, -1), check_finite=False)
            b[:, idx] = sol.reshape(src.shape) * self._b_unscale[:, idx][
                (slice(None), slice(None)) + tail
            ]
        return b

    # -- general dense path ---------------------------------------------

    def _full_factorization(self):
        if self._full_lu is not None:
            return self._full_lu
        ns = self.cluster.n_spheres
        L2 = 2 * scalar_block_size(self.l_max)
        centers = self.cluster.centers()
        M = np.eye(ns * L2, dtype=complex)
        for i in range(ns):
            ti = self._t_scaled[i] * self._row_u[i]
            for j in range(ns):
                if i == j:
                    continue
                W = general_matrix(
                    TranslationKind.OUTGOING_TO_REGULAR,
                    centers[i] - centers[j],
                    self.k,
                    self.l_max,
                )
                M[i * L2 : (i + 1) * L2, j * L2 : (j + 1) * L2] = (
                    -ti[:, None] * W * self._col_s_inv[j][None, :]
                )
        lu = lu_factor(M, overwrite_a=True, check_finite=False)
        cond = _condition_estimate(M, lu[0])
        if cond > self.cond_threshold:
            raise SolverConditionError(cond, self.cond_threshold)
        self.condition_estimate = max(self.condition_estimate, cond)
        self._full_lu = lu
        return lu

    def solve(self, sources: np.ndarray) -> np.ndarray:
        """Outgoing coefficients b solving (I - T A) b = T a."""
        sources = np.asarray(sources, dtype=complex)
        ns = self.cluster.n_spheres
        L2 = 2 * scalar_block_size(self.l_max)
        if sources.shape[:2] != (ns, L2):
            raise ValueError(
                f"sources must have shape ({ns}, {L2}, ...), got {sources.shape}"
            )
        tail = (None,) * (sources.ndim - 2)
        sl = (slice(None), slice(None)) + tail
        if ns == 1:
            t_plain = self._t_scaled * self._row_u * self._b_unscale
            return t_plain[sl] * sources
        if self._axial:
            return self._solve_sectors(sources)
        lu = self._full_factorization()
        rhs = (self._t_scaled * self._row_u)[sl] * sources
        sol = lu_solve(lu, rhs.reshape(ns * L2, -1), check_finite=False)
        return sol.reshape(sources.shape) * self._b_unscale[sl]

    def residual(self, sources: np.ndarray, b: np.ndarray) -> float:
        """|| (I - T A) b - T a || / || T a || via explicit application,
        evaluated in the scaled variables (the raw variables span too
        many decades for a meaningful norm)."""
        ns = self.cluster.n_spheres
        centers = self.cluster.centers()
        tail = (None,) * (sources.ndim - 2)
        sl = (slice(None), slice(None)) + tail
        t_plain = self._t_scaled * self._row_u * self._b_unscale
        Ta = t_plain[sl] * sources
        lhs = b.copy()
        for i in range(ns):
            acc = np.zeros_like(b[0])
            for j in range(ns):
                if i == j:
                    continue
                W = general_matrix(
                    TranslationKind.OUTGOING_TO_REGULAR,
                    centers[i] - centers[j],
                    self.k,
                    self.l_max,
                )
                acc += np.tensordot(W, b[j], axes=(1, 0))
            lhs[i] -= t_plain[i][(slice(None),) + tail] * acc
        scale = 1.0 / self._b_unscale
        num = np.linalg.norm((lhs - Ta) * scale[sl])
        den = np.linalg.norm(Ta * scale[sl])
        return float(num / den) if den > 0 else float(num)


def solve_cluster(cluster: SphereCluster, source_coefficients, omega: float,
                  cond_threshold: float = _COND_DEFAULT) -> np.ndarray:
    """Functional one-shot interface over ClusterSolver.solve."""
    return ClusterSolver(cluster, omega, cond_threshold).solve(source_coefficients)
