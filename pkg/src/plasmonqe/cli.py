"""Command-line interface.

Subcommands:
  sweep     decay-rate spectra over the scene's frequency grid
  dynamics  entanglement trace at a selected resonance
  fieldmap  plane-wave |E| map over the xz plane
  figures   the complete bundled study matrix plus manifest
  presets   list the named scene constructors
  validate  parse and validate a scene file

Frequencies on the command line are "angular THz" (1e12 rad/s)
throughout, matching the scene-file convention.
"""

from __future__ import annotations

import argparse
import json
import sys

from .constants import ANGULAR_THZ
from .errors import PlasmonQEError, WeakCouplingError
from .scenes import PRESETS, load_scene, save_scene, scene_from_dict


def _scene_from_args(args):
    if args.scene:
        scene = load_scene(args.scene)
    elif getattr(args, "preset", None):
        spec = {"preset": args.preset}
        if args.radius_nm is not None:
            spec["R_nm"] = args.radius_nm
        if args.gap_nm is not None:
            spec["d_nm"] = args.gap_nm
        scene = scene_from_dict(spec)
    else:
        raise SystemExit("either --scene PATH or --preset NAME is required")
    if getattr(args, "lmax", None):
        scene = scene.with_l_max(args.lmax)
    if getattr(args, "omega_thz", None):
        try:
            lo, hi, n = args.omega_thz.split(":")
            from dataclasses import replace

            scene = replace(scene, sweep=(float(lo), float(hi), int(n)))
        except ValueError:
            raise SystemExit("--omega-thz expects LO:HI:N (angular THz)")
    return scene


def _add_scene_args(p, with_grid=True):
    p.add_argument("--scene", help="scene JSON file")
    p.add_argument("--preset", choices=sorted(PRESETS), help="named preset scene")
    p.add_argument("--radius-nm", type=float, default=None, dest="radius_nm")
    p.add_argument("--gap-nm", type=float, default=None, dest="gap_nm")
    p.add_argument("--lmax", type=int, default=None, help="override multipole cutoff")
    if with_grid:
        p.add_argument("--omega-thz", default=None,
                       help="sweep grid LO:HI:N in angular THz")
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="plasmonqe", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="decay-rate spectra")
    _add_scene_args(p)
    p.add_argument("--out", required=True)
    p.add_argument("--no-convergence-check", action="store_true")

    p = sub.add_parser("dynamics", help="entanglement trace at a resonance")
    _add_scene_args(p)
    p.add_argument("--out", required=True)
    p.add_argument("--peak", type=int, default=None,
                   help="1-based index of the detected peak (ascending omega)")
    p.add_argument("--window-thz", default=None,
                   help="explicit fit window LO:HI in angular THz")
    p.add_argument("--allow-weak", action="store_true",
                   help="produce the trace even for weak coupling")

    p = sub.add_parser("fieldmap", help="plane-wave |E| map")
    _add_scene_args(p, with_grid=False)
    p.add_argument("--out", required=True)
    p.add_argument("--omega-thz", required=True, type=float,
                   help="map frequency in angular THz")
    p.add_argument("--resolution", type=int, default=200)

    p = sub.add_parser("figures", help="run the bundled study matrix")
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--fast", action="store_true", help="small smoke-test grids")

    p = sub.add_parser("presets", help="preset utilities")
    p.add_argument("action", choices=["list"])

    p = sub.add_parser("validate", help="validate a scene file")
    p.add_argument("--scene", required=True)
    p.add_argument("--echo", action="store_true",
                   help="write the normalised scene back to stdout")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "presets":
            for name in sorted(PRESETS):
                print(name)
            return 0

        if args.command == "validate":
            scene = load_scene(args.scene)
            print(f"scene '{scene.name or args.scene}' is valid "
                  f"({scene.cluster.n_spheres} spheres, "
                  f"{len(scene.emitters)} emitters, l_max {scene.cluster.l_max})")
            if args.echo:
                from .scenes import scene_to_dict

                json.dump(scene_to_dict(scene), sys.stdout, indent=1, sort_keys=True)
                print()
            return 0

        if args.command == "sweep":
            from .runners import run_sweep

            scene = _scene_from_args(args)
            run = run_sweep(scene, args.out, threads=args.threads,
                            check_convergence=(False if args.no_convergence_check
                                               else None))
            n_bad = len(run.diagnostics)
            print(f"sweep: {run.omega.size - n_bad}/{run.omega.size} points ok "
                  f"-> {args.out}")
            return 1 if run.all_failed else 0

        if args.command == "dynamics":
            from .runners import run_dynamics

            scene = _scene_from_args(args)
            window = None
            if args.window_thz:
                lo, hi = (float(x) for x in args.window_thz.split(":"))
                window = (lo * ANGULAR_THZ, hi * ANGULAR_THZ)
            try:
                trace, rp, mode = run_dynamics(
                    scene, args.out, peak=args.peak, window=window,
                    threads=args.threads, allow_weak=args.allow_weak
                )
            except WeakCouplingError as exc:
                print(f"refusing: {exc}", file=sys.stderr)
                return 2
            print(
                f"dynamics: mode g={mode.g:.4g} ({mode.label}), "
                f"Omega/linewidth = {rp.rabi / rp.linewidth:.3g}, "
                f"max E_G = {trace.e_g.max():.4g} -> {args.out}"
            )
            return 0

        if args.command == "fieldmap":
            from .runners import run_fieldmap

            scene = _scene_from_args(args)
            run_fieldmap(scene, args.omega_thz * ANGULAR_THZ, args.out,
                         resolution=args.resolution)
            print(f"fieldmap -> {args.out}")
            return 0

        if args.command == "figures":
            from .figures import reproduce_figures

            manifest = reproduce_figures(args.out, threads=args.threads,
                                         fast=args.fast)
            bad = [p["id"] for p in manifest["panels"] if p["status"] != "ok"]
            print(f"figures: {len(manifest['panels'])} panels, "
                  f"{len(bad)} failed -> {args.out}/manifest.json")
            return 0
    except PlasmonQEError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
