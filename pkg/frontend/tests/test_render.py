"""Rendering determinism and failure isolation."""

import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from figplots.render import render


@pytest.fixture
def demo_dir(tmp_path):
    """A tiny manifest with one of each panel kind plus broken entries."""
    d = tmp_path / "data"
    d.mkdir()
    t = np.linspace(0, 1e-13, 40)
    with (d / "trace.csv").open("w") as fh:
        fh.write("# omega_m_rad_s=4.5e15\nt_s,p,e_g,concurrence,delta_omega_m_t\n")
        for i, tv in enumerate(t):
            p = float(0.4 * np.sin(2e14 * tv) ** 2)
            fh.write(f"{float(tv)!r},{p!r},{8 / 3 * p * (1 - p)!r},{p!r},"
                     f"{float(tv * 5e13)!r}\n")
    w = np.linspace(3.5e15, 6e15, 50)
    with (d / "spec.csv").open("w") as fh:
        fh.write("omega_rad_s,gamma_over_gamma0,gamma_ab_over_gamma\n")
        for wv in w:
            g = float(1e5 / (1 + ((wv - 4.5e15) / 5e13) ** 2))
            fh.write(f"{float(wv)!r},{g!r},{0.9!r}\n")
    with (d / "map.csv").open("w") as fh:
        fh.write("x_m,z_m,abs_e\n")
        for x in np.linspace(-1, 1, 12):
            for z in np.linspace(-1, 1, 12):
                v = float(np.nan if x * x + z * z < 0.2 else np.hypot(x, z))
                fh.write(f"{float(x)!r},{float(z)!r},{v!r}\n")
    manifest = {
        "panels": [
            {"id": "p_trace", "kind": "trace", "title": "trace", "xlabel": "t",
             "ylabel": "E_G", "status": "ok",
             "overlays": [{"csv": "trace.csv", "x": "t_s", "y": "e_g",
                           "label": "a", "style": "solid"},
                          {"csv": "trace.csv", "x": "t_s", "y": "concurrence",
                           "label": "b", "style": "dashed"}]},
            {"id": "p_spec", "kind": "spectrum", "title": "spec", "xlabel": "w",
             "ylabel": "G", "status": "ok",
             "overlays": [{"csv": "spec.csv", "x": "omega_rad_s",
                           "y": "gamma_over_gamma0", "label": "d=1", "style": "solid"}]},
            {"id": "p_map", "kind": "heatmap", "title": "map", "xlabel": "x",
             "ylabel": "z", "status": "ok",
             "overlays": [{"csv": "map.csv", "x": "x_m", "y": "z_m", "z": "abs_e",
                           "label": "|E|", "style": "heatmap"}]},
            {"id": "p_missing", "kind": "trace", "title": "m", "xlabel": "",
             "ylabel": "", "status": "ok",
             "overlays": [{"csv": "nope.csv", "x": "t_s", "y": "e_g"}]},
            {"id": "p_failed", "kind": "trace", "title": "f", "xlabel": "",
             "ylabel": "", "status": "failed", "error": "boom", "overlays": []},
        ]
    }
    (d / "manifest.json").write_text(json.dumps(manifest))
    return d


def test_render_all_kinds_and_warnings(demo_dir, tmp_path):
    out = tmp_path / "imgs"
    report = render(demo_dir / "manifest.json", out)
    names = sorted(Path(p).name for p in report.rendered)
    assert names == ["p_map.png", "p_spec.png", "p_trace.png"]
    assert len(report.warnings) == 3  # missing csv, empty panel, failed panel
    for p in report.rendered:
        assert Path(p).stat().st_size > 2000


@pytest.mark.parametrize("fmt", ["png", "svg"])
def test_rerender_byte_identical(demo_dir, tmp_path, fmt):
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    r1 = render(demo_dir / "manifest.json", out1, fmt=fmt)
    r2 = render(demo_dir / "manifest.json", out2, fmt=fmt)
    assert [Path(p).name for p in r1.rendered] == [Path(p).name for p in r2.rendered]
    for p1, p2 in zip(r1.rendered, r2.rendered):
        assert Path(p1).read_bytes() == Path(p2).read_bytes(), p1


def test_empty_manifest_zero_images_exit_zero(tmp_path, capsys):
    m = tmp_path / "manifest.json"
    m.write_text(json.dumps({"panels": []}))
    from figplots.render import main

    code = main(["--manifest", str(m), "--out", str(tmp_path / "o")])
    assert code == 0
    assert "rendered 0 panels" in capsys.readouterr().out


def test_cli_runs(demo_dir, tmp_path):
    res = subprocess.run(
        [sys.executable, "-m", "figplots.render", "--manifest",
         str(demo_dir / "manifest.json"), "--out", str(tmp_path / "o"),
         "--format", "png"],
        capture_output=True, text=True,
    )
    assert res.returncode == 0
    assert "rendered 3 panels" in res.stdout
