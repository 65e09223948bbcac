"""Render plasmonqe batch output (manifest.json + CSVs) into figures.

A read-only consumer of the CSV contract: nothing is recomputed.  All
rendering settings are pinned (size, fonts, colours, metadata) so that
re-running on the same manifest produces byte-identical image files.
Missing or failed panels are skipped with warnings; rendering never
fails the pipeline (the command always exits 0 once the manifest has
been read).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402 - backend must be set first
import numpy as np  # noqa: E402

STYLE = {
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 130,
    "savefig.dpi": 130,
    "font.family": "DejaVu Sans",
    "font.size": 10,
    "axes.prop_cycle": plt.cycler(
        color=["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"]
    ),
    "svg.hashsalt": "figplots",
}

LINESTYLES = {"solid": "-", "dashed": "--", "dotted": ":", "dashdot": "-."}

# fixed output metadata: no timestamps, no library versions
PNG_METADATA = {"Software": "figplots"}
SVG_METADATA = {"Date": None, "Creator": "figplots"}


@dataclass
class PanelSpec:
    """One renderable panel taken from the manifest."""

    panel_id: str
    kind: str  # trace | spectrum | heatmap
    title: str
    xlabel: str
    ylabel: str
    overlays: list
    status: str = "ok"

    @classmethod
    def from_manifest(cls, entry: dict) -> "PanelSpec":
        return cls(
            panel_id=entry["id"],
            kind=entry["kind"],
            title=entry.get("title", entry["id"]),
            xlabel=entry.get("xlabel", ""),
            ylabel=entry.get("ylabel", ""),
            overlays=entry.get("overlays", []),
            status=entry.get("status", "ok"),
        )


@dataclass
class RenderReport:
    rendered: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def warn(self, msg: str):
        self.warnings.append(msg)
        print(f"warning: {msg}", file=sys.stderr)


def _load_csv(path: Path):
    """Columns of a CSV with '#' metadata lines, as a dict of arrays."""
    with path.open(encoding="utf-8") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    header = lines[0].strip().split(",")
    data = np.genfromtxt(lines[1:], delimiter=",", dtype=float, missing_values="",
                         filling_values=np.nan)
    data = np.atleast_2d(data)
    return {name: data[:, i] for i, name in enumerate(header)}


def _render_lines(spec: PanelSpec, base: Path, report: RenderReport, ax):
    drawn = 0
    for ov in spec.overlays:
        csv_path = base / ov["csv"]
        if not csv_path.exists():
            report.warn(f"panel {spec.panel_id}: missing {ov['csv']}")
            continue
        cols = _load_csv(csv_path)
        x, y = ov.get("x"), ov.get("y")
        if x not in cols or y not in cols:
            report.warn(
                f"panel {spec.panel_id}: columns {x},{y} not in {ov['csv']}"
            )
            continue
        ax.plot(cols[x], cols[y],
                linestyle=LINESTYLES.get(ov.get("style", "solid"), "-"),
                label=ov.get("label", ov["csv"]))
        drawn += 1
    if drawn:
        ax.legend(frameon=False, fontsize=8)
    return drawn


def _render_heatmap(spec: PanelSpec, base: Path, report: RenderReport, ax, fig):
    drawn = 0
    for ov in spec.overlays:
        csv_path = base / ov["csv"]
        if not csv_path.exists():
            report.warn(f"panel {spec.panel_id}: missing {ov['csv']}")
            continue
        cols = _load_csv(csv_path)
        xname, yname, zname = ov.get("x"), ov.get("y"), ov.get("z", "abs_e")
        if any(c not in cols for c in (xname, yname, zname)):
            report.warn(f"panel {spec.panel_id}: heatmap columns missing in {ov['csv']}")
            continue
        xs = np.unique(cols[xname])
        ys = np.unique(cols[yname])
        z = np.full((xs.size, ys.size), np.nan)
        ix = np.searchsorted(xs, cols[xname])
        iy = np.searchsorted(ys, cols[yname])
        z[ix, iy] = cols[zname]
        cmap = plt.get_cmap("inferno").copy()
        cmap.set_bad("#606060")
        masked = np.ma.masked_invalid(z.T)
        pm = ax.pcolormesh(xs, ys, masked, cmap=cmap, shading="nearest")
        fig.colorbar(pm, ax=ax, label=ov.get("label", zname))
        ax.set_aspect("equal")
        drawn += 1
    return drawn


def render(manifest_path, out_dir, fmt: str = "png") -> RenderReport:
    """Render every ok panel of the manifest into out_dir.

    Returns the report with rendered files and warnings; the function
    never raises for per-panel problems.
    """
    manifest_path = Path(manifest_path)
    base = manifest_path.parent
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = RenderReport()
    manifest = json.loads(manifest_path.read_text())

    with plt.rc_context(STYLE):
        for entry in manifest.get("panels", []):
            spec = PanelSpec.from_manifest(entry)
            if spec.status != "ok":
                report.warn(f"panel {spec.panel_id}: status {spec.status}, skipped")
                continue
            fig, ax = plt.subplots()
            try:
                if spec.kind == "heatmap":
                    drawn = _render_heatmap(spec, base, report, ax, fig)
                else:
                    drawn = _render_lines(spec, base, report, ax)
                if not drawn:
                    report.warn(f"panel {spec.panel_id}: nothing to draw, skipped")
                    continue
                ax.set_title(spec.title)
                ax.set_xlabel(spec.xlabel)
                ax.set_ylabel(spec.ylabel)
                target = out / f"{spec.panel_id}.{fmt}"
                meta = PNG_METADATA if fmt == "png" else SVG_METADATA
                fig.savefig(target, format=fmt, metadata=meta)
                report.rendered.append(str(target))
            finally:
                plt.close(fig)
    return report


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="figplots-render",
        description="Render plasmonqe manifest output into figures.",
    )
    ap.add_argument("--manifest", required=True)
    ap.add_argument("--out", required=True)
    ap.add_argument("--format", choices=["png", "svg"], default="png")
    args = ap.parse_args(argv)
    report = render(args.manifest, args.out, fmt=args.format)
    print(f"rendered {len(report.rendered)} panels, "
          f"{len(report.warnings)} warnings")
    return 0


if __name__ == "__main__":
    sys.exit(main())
