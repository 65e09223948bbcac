"""Pipeline runners tying scenes to CSV/JSON artifacts.

Output contracts (all CSV headers are stable):

* sweep:      omega_rad_s,gamma_over_gamma0,gamma_ab_over_gamma[,extras]
              with a JSON sidecar (<out>.meta.json) recording l_max, the
              convergence estimate, material provenance, grid, scene
              hash, wall time, and row diagnostics;
* dynamics:   '# key=value' metadata lines, then
              t_s,p,e_g,concurrence,delta_omega_m_t
              (concurrence empty for more than two emitters);
* field maps: a_m,b_m,abs_e in row-major grid order (NaN marks sphere
              interiors), plus a sidecar;
* figures:    one CSV per panel plus manifest.json listing panel ids,
              kinds, overlay series, and per-panel status.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.signal import find_peaks

from . import __version__
from .constants import ANGULAR_THZ, NM
from .coupling import decay_matrix, normalized_rates, sweep as run_coupling_sweep
from .dynamics import (
    DynamicsConfig,
    classify_coupling,
    collective_mode_for,
    extract_resonance,
    preparation_interval,
)
from .em.cluster import PlaneWave
from .em.fields import PlaneSpec, field_map
from .entanglement import entanglement_trace
from .errors import WeakCouplingError
from .scenes import Scene, validate_scene

PEAK_PROMINENCE = 0.03  # fraction of the spectrum maximum


@dataclass
class SweepRun:
    scene: Scene
    omega: np.ndarray
    gamma_over_gamma0: np.ndarray
    gamma_ab_over_gamma: dict
    gamma_abs: np.ndarray
    diagnostics: list
    meta: dict = field(default_factory=dict)

    @property
    def all_failed(self) -> bool:
        return len(self.diagnostics) == len(self.omega)

    def gamma_curve(self, emitter: int = 0) -> np.ndarray:
        return self.gamma_abs[:, emitter]

    def ratio_curve(self, pair=(0, 1)) -> np.ndarray:
        return self.gamma_ab_over_gamma[pair]

    def detected_peaks(self, emitter: int = 0):
        """Ascending peak frequencies of Gamma(omega) by prominence."""
        y = self.gamma_over_gamma0[:, emitter]
        ok = np.isfinite(y)
        yy = np.where(ok, y, 0.0)
        pk, _ = find_peaks(yy, prominence=PEAK_PROMINENCE * np.nanmax(yy))
        return self.omega[pk]


def perform_sweep(scene: Scene, threads: int = 1, l_max: int | None = None,
                  check_convergence: bool | None = None) -> SweepRun:
    validate_scene(scene)
    if l_max is not None:
        scene = scene.with_l_max(l_max)
    grid = scene.omega_grid()
    t0 = time.time()
    res = run_coupling_sweep(scene.cluster, scene.emitters, grid, threads=threads)
    wall = time.time() - t0

    if check_convergence is None:
        # cheap for collinear clusters; opt-in for full-matrix scenes
        check_convergence = scene.cluster.collinear_axis() is not None
    convergence = None
    if check_convergence and np.any(np.isfinite(res.gamma_over_gamma0[:, 0])):
        i_pk = int(np.nanargmax(res.gamma_over_gamma0[:, 0]))
        bumped = scene.with_l_max(scene.cluster.l_max + 5)
        dm = decay_matrix(bumped.cluster, scene.emitters, grid[i_pk])
        over, _ = normalized_rates(dm)
        base = res.gamma_over_gamma0[i_pk, 0]
        convergence = {
            "omega_rad_s": float(grid[i_pk]),
            "l_max": scene.cluster.l_max,
            "l_max_check": scene.cluster.l_max + 5,
            "relative_change": float(abs(over[0] / base - 1.0)),
        }

    mats = sorted({s.material.name for s in scene.cluster.spheres}
                  | {scene.cluster.host.name})
    meta = {
        "scene": scene.name,
        "scene_hash": scene.scene_hash(),
        "l_max": scene.cluster.l_max,
        "n_emitters": len(scene.emitters),
        "omega_grid_rad_s": [float(grid[0]), float(grid[-1]), int(grid.size)],
        "materials": mats,
        "wall_time_s": wall,
        "version": __version__,
        "convergence": convergence,
        "diagnostics": [
            {"index": i, "omega_rad_s": w, "error": msg}
            for i, w, msg in res.diagnostics
        ],
    }
    return SweepRun(
        scene=scene,
        omega=grid,
        gamma_over_gamma0=res.gamma_over_gamma0,
        gamma_ab_over_gamma=res.gamma_ab_over_gamma,
        gamma_abs=res.gamma_abs,
        diagnostics=res.diagnostics,
        meta=meta,
    )


def write_sweep_csv(run: SweepRun, out_path) -> None:
    out_path = Path(out_path)
    n_e = run.gamma_over_gamma0.shape[1]
    pairs = sorted(run.gamma_ab_over_gamma)
    cols = ["omega_rad_s", "gamma_over_gamma0"]
    if pairs:
        cols.append("gamma_ab_over_gamma")
    cols += [f"gamma_over_gamma0_e{i}" for i in range(1, n_e)]
    cols += [f"gamma_ab_over_gamma_{a}{b}" for a, b in pairs[1:]]
    with out_path.open("w", encoding="utf-8") as fh:
        fh.write(",".join(cols) + "\n")
        for i in range(run.omega.size):
            row = [repr(float(run.omega[i])), repr(float(run.gamma_over_gamma0[i, 0]))]
            if pairs:
                row.append(repr(float(run.gamma_ab_over_gamma[pairs[0]][i])))
            row += [repr(float(run.gamma_over_gamma0[i, j])) for j in range(1, n_e)]
            row += [repr(float(run.gamma_ab_over_gamma[p][i])) for p in pairs[1:]]
            fh.write(",".join(row) + "\n")
    with out_path.with_suffix(out_path.suffix + ".meta.json").open("w") as fh:
        json.dump(run.meta, fh, indent=1, sort_keys=True)


def run_sweep(scene: Scene, out_path, threads: int = 1, l_max: int | None = None,
              check_convergence: bool | None = None) -> SweepRun:
    run = perform_sweep(scene, threads=threads, l_max=l_max,
                        check_convergence=check_convergence)
    write_sweep_csv(run, out_path)
    return run


# -- dynamics ------------------------------------------------------------------


def select_resonance(run: SweepRun, peak: int | None = None,
                     window=None, emitter: int = 0):
    """ResonanceParams for a chosen spectral peak.

    `peak` indexes the detected peaks in ascending frequency (1-based);
    `window` gives explicit (lo, hi) in rad/s and wins when provided.
    """
    gamma = run.gamma_curve(emitter)
    ratio = run.ratio_curve()
    if window is None:
        peaks = run.detected_peaks(emitter)
        if peaks.size == 0:
            raise WeakCouplingError(0.0, 1.0)
        idx = (peak or 1) - 1
        if not 0 <= idx < peaks.size:
            raise ValueError(f"peak {peak} of {peaks.size} detected")
        w0 = peaks[idx]
        span = 0.06 * w0
        window = (w0 - span, w0 + span)
    return extract_resonance(run.omega, gamma, window, gamma_ratio=ratio)


def run_dynamics(scene: Scene, out_path, peak: int | None = None, window=None,
                 sweep_run: SweepRun | None = None, threads: int = 1,
                 allow_weak: bool = False, use_preparation_interval: bool = False):
    """Sweep -> resonance fit -> coupling gate -> amplitude -> trace CSV.

    Weak coupling raises WeakCouplingError quoting Omega/linewidth unless
    allow_weak is set (the trace is then produced if still oscillatory).
    """
    if sweep_run is None:
        sweep_run = perform_sweep(scene, threads=threads)
    rp = select_resonance(sweep_run, peak=peak, window=window)
    regime = classify_coupling(rp)
    if regime == "weak" and not allow_weak:
        raise WeakCouplingError(rp.rabi / rp.linewidth, 10.0)
    mode = collective_mode_for(len(scene.emitters), rp.gamma_ratio)
    t_grid = np.linspace(
        0.0, scene.t_max_linewidths / rp.linewidth, scene.n_times
    )
    delta_t = scene.delta_t_s
    if use_preparation_interval:
        delta_t = preparation_interval(rp)
    cfg = DynamicsConfig(t_grid=t_grid, delta_t=delta_t)
    trace = entanglement_trace(mode, rp, cfg)

    out_path = Path(out_path)
    with out_path.open("w", encoding="utf-8") as fh:
        fh.write(f"# scene={scene.name}\n")
        fh.write(f"# omega_m_rad_s={rp.omega_m!r}\n")
        fh.write(f"# linewidth_rad_s={rp.linewidth!r}\n")
        fh.write(f"# gamma_peak_1_s={rp.gamma!r}\n")
        fh.write(f"# gamma_ab_over_gamma={rp.gamma_ratio!r}\n")
        fh.write(f"# rabi_rad_s={rp.rabi!r}\n")
        fh.write(f"# g={mode.g!r}\n")
        fh.write(f"# mode={mode.label}\n")
        fh.write(f"# n_qubits={mode.n_qubits}\n")
        fh.write(f"# delta_t_s={delta_t!r}\n")
        fh.write(f"# coupling={regime}\n")
        fh.write(f"# fit_residual={rp.fit_residual!r}\n")
        fh.write("t_s,p,e_g,concurrence,delta_omega_m_t\n")
        for i, t in enumerate(trace.t_grid):
            conc = "" if trace.concurrence is None else repr(float(trace.concurrence[i]))
            fh.write(
                f"{float(t)!r},{float(trace.population[i])!r},"
                f"{float(trace.e_g[i])!r},{conc},{float(t * rp.linewidth)!r}\n"
            )
    return trace, rp, mode


# -- field maps ------------------------------------------------------------------


def default_plane(scene: Scene, span_factor: float = 1.6, resolution: int = 200) -> PlaneSpec:
    centers = scene.cluster.centers()
    radius = max(s.radius for s in scene.cluster.spheres)
    ext = np.abs(centers).max() + 2.5 * radius if len(centers) else 50e-9
    half = max(ext, 2.5 * radius)
    return PlaneSpec(axes="xz", offset=0.0,
                     extent_a=(-half, half), extent_b=(-half, half))


def run_fieldmap(scene: Scene, omega_rad_s: float, out_path, resolution: int = 200,
                 plane: PlaneSpec | None = None, direction=None, polarization=None):
    """Plane-wave field map over the xz plane through the cluster.

    Default illumination: normal incidence from +y (out of the map
    plane), polarized along x (the preset cluster axis); both
    overridable.
    """
    validate_scene(scene)
    if plane is None:
        plane = default_plane(scene, resolution=resolution)
    direction = np.array([0.0, 1.0, 0.0]) if direction is None else np.asarray(direction)
    polarization = np.array([1.0, 0.0, 0.0]) if polarization is None else np.asarray(polarization)
    pw = PlaneWave(direction, polarization, 1.0, omega_rad_s)
    t0 = time.time()
    fm = field_map(scene.cluster, pw, plane, resolution)
    out_path = Path(out_path)
    ax_a, ax_b = plane.axes[0], plane.axes[1]
    with out_path.open("w", encoding="utf-8") as fh:
        fh.write(f"{ax_a}_m,{ax_b}_m,abs_e\n")
        for i, av in enumerate(fm.axis_a):
            for j, bv in enumerate(fm.axis_b):
                fh.write(f"{float(av)!r},{float(bv)!r},{float(fm.abs_e[i, j])!r}\n")
    meta = {
        "scene": scene.name,
        "scene_hash": scene.scene_hash(),
        "omega_rad_s": float(omega_rad_s),
        "l_max": scene.cluster.l_max,
        "plane": {
            "axes": plane.axes,
            "offset_m": plane.offset,
            "extent_a_m": list(plane.extent_a),
            "extent_b_m": list(plane.extent_b),
            "resolution": resolution,
        },
        "direction": list(map(float, direction)),
        "polarization": [float(np.real(p)) for p in polarization],
        "wall_time_s": time.time() - t0,
        "version": __version__,
    }
    with out_path.with_suffix(out_path.suffix + ".meta.json").open("w") as fh:
        json.dump(meta, fh, indent=1, sort_keys=True)
    return fm
