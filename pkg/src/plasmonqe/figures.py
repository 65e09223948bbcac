"""Batch reproduction of the bundled example studies.

`reproduce_figures` runs the standard preset matrix and writes one CSV
per panel plus a manifest (manifest.json) describing panel kinds,
overlay series, and per-panel status.  Panels are isolated: a failure
marks that panel "failed" with the error message and the batch
continues.

Panel inventory (14):
  trace_trimer_d4 / _d2 / _d1     entanglement traces, one per gap
  spectrum_trimer_gamma / _ratio  decay rate and interference spectra
  map_single / map_gap_lo / map_gap_hi   field maps at the three
                                  resonances of the d=1 trimer
  trace_triangle_d1, spectrum_triangle_gamma / _ratio
  trace_tetra_d1, spectrum_tetra_gamma / _ratio
"""

from __future__ import annotations

import json
import time
import traceback
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .constants import ANGULAR_THZ
from .runners import perform_sweep, run_dynamics, run_fieldmap, write_sweep_csv
from .scenes import linear_trimer, single_sphere_pair, tetra_plus_center, triangle_trio

# angular-THz target frequencies of the bundled studies
TRIMER_TRACE_FREQS = {4.0: (4920.0,), 2.0: (4770.0, 5010.0), 1.0: (4530.0, 4800.0)}
TRIANGLE_TRACE_FREQS = (4460.0, 4710.0)
TETRA_TRACE_FREQS = (4540.0, 4950.0)
MAP_FREQS = {"map_single": 5470.0, "map_gap_lo": 4530.0, "map_gap_hi": 4800.0}


def _window(freq_thz: float, frac: float = 0.06):
    w0 = freq_thz * ANGULAR_THZ
    return (w0 * (1 - frac), w0 * (1 + frac))


def reproduce_figures(out_dir, threads: int = 1, fast: bool = False,
                      progress=print) -> dict:
    """Run the preset matrix into out_dir; returns the manifest dict.

    `fast` shrinks grids and truncations for smoke tests; production
    fidelity keeps the preset defaults.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    panels = []
    t_start = time.time()

    n_sweep = 60 if fast else 160
    n_sweep_full = 40 if fast else 90
    res_map = 40 if fast else 200
    lmax_tri = {1.0: (16 if fast else 26), 2.0: (14 if fast else 20),
                4.0: (14 if fast else 20)}
    lmax_tet = 14 if fast else 22
    n_times = 400 if fast else 2000

    def panel(pid, kind, title, xlabel, ylabel, overlays, status="ok", error=""):
        panels.append(
            dict(id=pid, kind=kind, title=title, xlabel=xlabel, ylabel=ylabel,
                 overlays=overlays, status=status, error=error)
        )

    def guarded(pid, kind, title, xlabel, ylabel, fn):
        try:
            overlays = fn()
            panel(pid, kind, title, xlabel, ylabel, overlays)
        except Exception as exc:  # noqa: BLE001 - per-panel isolation
            progress(f"[figures] panel {pid} failed: {exc!r}")
            panel(pid, kind, title, xlabel, ylabel, [], status="failed",
                  error="".join(traceback.format_exception_only(type(exc), exc)).strip())

    # -- trimer sweeps -------------------------------------------------
    sweeps = {}

    def trimer_sweeps():
        for d in (1.0, 2.0, 4.0):
            sc = replace(linear_trimer(d_nm=d), sweep=(3500.0, 6000.0, n_sweep))
            run = perform_sweep(sc, threads=threads)
            path = out / f"sweep_trimer_d{d:g}.csv"
            write_sweep_csv(run, path)
            sweeps[("trimer", d)] = (sc, run, path.name)
            progress(f"[figures] trimer d={d:g} sweep done")
        sc = replace(single_sphere_pair(), sweep=(3500.0, 6000.0, n_sweep))
        run = perform_sweep(sc, threads=threads)
        path = out / "sweep_single_sphere.csv"
        write_sweep_csv(run, path)
        sweeps[("single", 0)] = (sc, run, path.name)
        progress("[figures] single-sphere reference sweep done")

    trimer_sweeps()

    def spectrum_overlays(kind_key, ds, include_ref, column):
        ov = []
        styles = {1.0: "solid", 2.0: "dashed", 4.0: "dotted"}
        for d in ds:
            _, _, fname = sweeps[(kind_key, d)]
            ov.append(dict(csv=fname, x="omega_rad_s", y=column,
                           label=f"d = {d:g} nm", style=styles.get(d, "solid")))
        if include_ref and ("single", 0) in sweeps:
            ov.append(dict(csv=sweeps[("single", 0)][2], x="omega_rad_s",
                           y=column, label="single sphere", style="dashdot"))
        return ov

    guarded("spectrum_trimer_gamma", "spectrum", "Trimer decay rate",
            "omega (rad/s)", "Gamma / Gamma_0",
            lambda: spectrum_overlays("trimer", (1.0, 2.0, 4.0), True,
                                      "gamma_over_gamma0"))
    guarded("spectrum_trimer_ratio", "spectrum", "Trimer interference term",
            "omega (rad/s)", "Gamma_AB / Gamma",
            lambda: spectrum_overlays("trimer", (1.0, 2.0, 4.0), True,
                                      "gamma_ab_over_gamma"))

    # -- trimer traces --------------------------------------------------
    for d, freqs in TRIMER_TRACE_FREQS.items():
        pid = f"trace_trimer_d{d:g}"

        def make_trace(d=d, freqs=freqs):
            sc, run, _ = sweeps[("trimer", d)]
            sc = replace(sc, n_times=n_times)
            ov = []
            styles = ("solid", "dashed")
            for kfreq, f in enumerate(freqs):
                fname = f"trace_trimer_d{d:g}_w{f:g}.csv"
                run_dynamics(sc, out / fname, window=_window(f),
                             sweep_run=run, allow_weak=True)
                ov.append(dict(csv=fname, x="t_s", y="e_g",
                               label=f"omega = {f:g} angular THz",
                               style=styles[kfreq % 2]))
            return ov

        guarded(pid, "trace", f"Trimer entanglement, d = {d:g} nm",
                "t (s)", "E_G", make_trace)

    # -- field maps -------------------------------------------------------
    sc_map = linear_trimer(d_nm=1.0)
    for pid, f in MAP_FREQS.items():
        def make_map(pid=pid, f=f):
            fname = f"{pid}.csv"
            run_fieldmap(sc_map, f * ANGULAR_THZ, out / fname, resolution=res_map)
            return [dict(csv=fname, x="x_m", y="z_m", z="abs_e",
                         label=f"omega = {f:g} angular THz", style="heatmap")]

        guarded(pid, "heatmap", f"Field map at {f:g} angular THz",
                "x (m)", "z (m)", make_map)

    # -- triangle ----------------------------------------------------------
    def triangle_sweeps():
        for d in (1.0, 2.0, 4.0):
            sc = triangle_trio(d_nm=d, l_max=lmax_tri[d])
            sc = replace(sc, sweep=(3800.0, 5400.0, n_sweep_full))
            run = perform_sweep(sc, threads=threads, check_convergence=False)
            path = out / f"sweep_triangle_d{d:g}.csv"
            write_sweep_csv(run, path)
            sweeps[("triangle", d)] = (sc, run, path.name)
            progress(f"[figures] triangle d={d:g} sweep done")

    try:
        triangle_sweeps()
        have_triangle = True
    except Exception as exc:  # noqa: BLE001
        progress(f"[figures] triangle sweeps failed: {exc!r}")
        have_triangle = False

    guarded("spectrum_triangle_gamma", "spectrum", "Triangle decay rate",
            "omega (rad/s)", "Gamma / Gamma_0",
            lambda: spectrum_overlays("triangle", (1.0, 2.0, 4.0), False,
                                      "gamma_over_gamma0"))
    guarded("spectrum_triangle_ratio", "spectrum", "Triangle interference term",
            "omega (rad/s)", "Gamma_AB / Gamma",
            lambda: spectrum_overlays("triangle", (1.0, 2.0, 4.0), False,
                                      "gamma_ab_over_gamma"))

    def make_triangle_trace():
        if not have_triangle:
            raise RuntimeError("triangle sweeps unavailable")
        sc, run, _ = sweeps[("triangle", 1.0)]
        sc = replace(sc, n_times=n_times)
        ov = []
        for kfreq, f in enumerate(TRIANGLE_TRACE_FREQS):
            fname = f"trace_triangle_d1_w{f:g}.csv"
            run_dynamics(sc, out / fname, window=_window(f), sweep_run=run,
                         allow_weak=True)
            ov.append(dict(csv=fname, x="t_s", y="e_g",
                           label=f"omega = {f:g} angular THz",
                           style=("solid", "dashed")[kfreq % 2]))
        return ov

    guarded("trace_triangle_d1", "trace", "Triangle entanglement, d = 1 nm",
            "t (s)", "E_G", make_triangle_trace)

    # -- tetra + centre ------------------------------------------------------
    def tetra_sweep():
        sc = tetra_plus_center(d_nm=1.0, l_max=lmax_tet)
        sc = replace(sc, sweep=(4000.0, 5400.0, n_sweep_full))
        run = perform_sweep(sc, threads=threads, check_convergence=False)
        path = out / "sweep_tetra_d1.csv"
        write_sweep_csv(run, path)
        sweeps[("tetra", 1.0)] = (sc, run, path.name)
        progress("[figures] tetra sweep done")

    try:
        tetra_sweep()
        have_tetra = True
    except Exception as exc:  # noqa: BLE001
        progress(f"[figures] tetra sweep failed: {exc!r}")
        have_tetra = False

    guarded("spectrum_tetra_gamma", "spectrum", "Tetra+centre decay rate",
            "omega (rad/s)", "Gamma / Gamma_0",
            lambda: spectrum_overlays("tetra", (1.0,), False, "gamma_over_gamma0"))
    guarded("spectrum_tetra_ratio", "spectrum", "Tetra+centre interference term",
            "omega (rad/s)", "Gamma_AB / Gamma",
            lambda: spectrum_overlays("tetra", (1.0,), False, "gamma_ab_over_gamma"))

    def make_tetra_trace():
        if not have_tetra:
            raise RuntimeError("tetra sweep unavailable")
        sc, run, _ = sweeps[("tetra", 1.0)]
        sc = replace(sc, n_times=n_times)
        ov = []
        for kfreq, f in enumerate(TETRA_TRACE_FREQS):
            fname = f"trace_tetra_d1_w{f:g}.csv"
            run_dynamics(sc, out / fname, window=_window(f), sweep_run=run,
                         allow_weak=True)
            ov.append(dict(csv=fname, x="t_s", y="e_g",
                           label=f"omega = {f:g} angular THz",
                           style=("solid", "dashed")[kfreq % 2]))
        return ov

    guarded("trace_tetra_d1", "trace", "Tetra+centre entanglement, d = 1 nm",
            "t (s)", "E_G", make_tetra_trace)

    manifest = {
        "version": __version__,
        "created_wall_time_s": time.time() - t_start,
        "panels": panels,
    }
    with (out / "manifest.json").open("w") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)
    return manifest
