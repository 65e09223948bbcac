"""Quantum-emitter decay rates from the classical Green tensor.

The decay-rate matrix of N two-level emitters at a common frequency is

    Gamma_AB = (2 omega^2 / (hbar eps0 c^2)) d_A . Im G(r_A, r_B, omega) . d_B

whose diagonal gives each emitter's total decay rate and whose
off-diagonal interference terms drive super- and subradiance.  Rates
are normalised against the free-space rate Gamma_0(omega, |d|) of the
same dipole.

Frequency sweeps evaluate one independent scattering problem per grid
point (optionally on a thread pool; the dense algebra releases the
GIL), recording per-point failures as row diagnostics without aborting
the sweep.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .constants import C_LIGHT, EPS0, HBAR, free_space_decay_rate
from .em.cluster import SphereCluster
from .em.green import green_tensor, scattered_green_columns
from .errors import DomainError
from .numerics.vswf import free_dyadic_green, free_green_imag_coincident


@dataclass(frozen=True)
class Emitter:
    """Two-level emitter: position (m), dipole moment vector (C m), and
    transition frequency (rad/s)."""

    position: np.ndarray
    dipole: np.ndarray
    omega_a: float

    def __post_init__(self):
        p = np.asarray(self.position, dtype=float).reshape(3)
        d = np.asarray(self.dipole, dtype=float).reshape(3)
        if np.linalg.norm(d) == 0:
            raise ValueError("emitter dipole moment must be nonzero")
        object.__setattr__(self, "position", p)
        object.__setattr__(self, "dipole", d)

    @property
    def dipole_magnitude(self) -> float:
        return float(np.linalg.norm(self.dipole))

    @property
    def orientation(self) -> np.ndarray:
        return self.dipole / self.dipole_magnitude


@dataclass
class DecayMatrix:
    """Gamma_AB matrix (1/s) of all emitters at one frequency."""

    gamma: np.ndarray
    omega: float
    emitters: tuple

    def __post_init__(self):
        g = np.asarray(self.gamma, dtype=float)
        sym = np.max(np.abs(g - g.T)) / max(np.max(np.abs(g)), 1e-300)
        if sym > 1e-8:
            raise ValueError(f"decay matrix asymmetric at {sym:.2e} relative")
        self.gamma = 0.5 * (g + g.T)

    @property
    def rates(self) -> np.ndarray:
        return np.diag(self.gamma)


def decay_matrix(cluster: SphereCluster, emitters, omega: float) -> DecayMatrix:
    """Full Gamma_AB matrix at the sweep frequency omega.

    Each emitter acts once as a source (one scattering solve per
    emitter, reusing the cluster factorisation), and the scattered field
    is read at every emitter position in one pass.
    """
    emitters = tuple(emitters)
    if not emitters:
        raise ValueError("need at least one emitter")
    positions = np.array([e.position for e in emitters])
    if cluster.n_spheres and not np.all(cluster.is_exterior(positions)):
        raise DomainError("an emitter lies inside a sphere")
    k = np.real(cluster.host_wavenumber(omega))
    pref = 2.0 * omega**2 / (HBAR * EPS0 * C_LIGHT**2)
    n = len(emitters)
    g = np.empty((n, n))
    for b, eb in enumerate(emitters):
        # free-space part, coincident diagonal handled analytically
        img_free = np.empty((n, 3))
        for a, ea in enumerate(emitters):
            if np.array_equal(ea.position, eb.position):
                img_free[a] = free_green_imag_coincident(k) @ eb.orientation
            else:
                img_free[a] = np.imag(
                    free_dyadic_green(k, ea.position, eb.position) @ eb.orientation
                )
        img = img_free
        if cluster.n_spheres:
            sc = scattered_green_columns(
                cluster, positions, eb.position, omega, eb.orientation[:, None]
            )[..., 0]
            img = img_free + np.imag(sc)
        for a, ea in enumerate(emitters):
            g[a, b] = (
                pref
                * ea.dipole_magnitude
                * eb.dipole_magnitude
                * float(ea.orientation @ img[a])
            )
    return DecayMatrix(gamma=g, omega=omega, emitters=emitters)


def normalized_rates(dm: DecayMatrix):
    """(Gamma/Gamma_0 per emitter, Gamma_AB/Gamma per ordered pair dict).

    Gamma_0 is evaluated at the matrix's frequency with each emitter's
    dipole magnitude; the pair ratio uses the geometric mean of the two
    diagonal rates (identical emitters make that simply Gamma).
    """
    diag = dm.rates
    if np.any(diag <= 0):
        raise ZeroDivisionError("vanishing diagonal decay rate; cannot normalise")
    g0 = np.array(
        [free_space_decay_rate(dm.omega, e.dipole_magnitude) for e in dm.emitters]
    )
    ratios = {}
    n = len(dm.emitters)
    for a in range(n):
        for b in range(a + 1, n):
            ratios[(a, b)] = float(dm.gamma[a, b] / np.sqrt(diag[a] * diag[b]))
    return diag / g0, ratios


@dataclass
class SweepResult:
    """Per-frequency decay-rate table over a sweep grid."""

    omega: np.ndarray
    gamma_over_gamma0: np.ndarray      # (n_omega, n_emitters)
    gamma_ab_over_gamma: dict          # (a, b) -> (n_omega,)
    gamma_abs: np.ndarray              # (n_omega, n_emitters), 1/s
    diagnostics: list = field(default_factory=list)
    l_max: int = 0

    @property
    def n_failed(self) -> int:
        return len(self.diagnostics)


def sweep(cluster: SphereCluster, emitters, omega_grid, threads: int = 1,
          progress=None) -> SweepResult:
    """Decay-rate spectra over an ascending frequency grid.

    Per-frequency failures are recorded in `diagnostics` as
    (index, omega, message) and leave NaN rows; the sweep continues.
    """
    omega_grid = np.asarray(omega_grid, dtype=float)
    if omega_grid.ndim != 1 or np.any(np.diff(omega_grid) <= 0):
        raise ValueError("omega grid must be 1-d ascending")
    emitters = tuple(emitters)
    n_om = omega_grid.size
    n_e = len(emitters)
    g_over = np.full((n_om, n_e), np.nan)
    g_abs = np.full((n_om, n_e), np.nan)
    pairs = [(a, b) for a in range(n_e) for b in range(a + 1, n_e)]
    ratios = {p: np.full(n_om, np.nan) for p in pairs}
    diagnostics = []

    def run_one(i):
        dm = decay_matrix(cluster, emitters, omega_grid[i])
        over, rr = normalized_rates(dm)
        return i, over, rr, dm.rates

    def consume(res):
        i, over, rr, rates = res
        g_over[i] = over
        g_abs[i] = rates
        for p in pairs:
            ratios[p][i] = rr[p]
        if progress:
            progress(i)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futs = {pool.submit(run_one, i): i for i in range(n_om)}
            for fut, i in futs.items():
                try:
                    consume(fut.result())
                except Exception as exc:  # noqa: BLE001 - row-level diagnostic
                    diagnostics.append((i, float(omega_grid[i]), repr(exc)))
    else:
        for i in range(n_om):
            try:
                consume(run_one(i))
            except Exception as exc:  # noqa: BLE001 - row-level diagnostic
                diagnostics.append((i, float(omega_grid[i]), repr(exc)))

    diagnostics.sort()
    return SweepResult(
        omega=omega_grid,
        gamma_over_gamma0=g_over,
        gamma_ab_over_gamma=ratios,
        gamma_abs=g_abs,
        diagnostics=diagnostics,
        l_max=cluster.l_max,
    )
