"""Scene configuration: preset geometries, JSON files, validation.

Scene files are JSON with units spelled out in the key names
(`R_nm`, `omega_thz_angular` = 1e12 rad/s, `dipole_moment_e_angstrom`
meaning |d| = e * X angstrom).  A scene either names a preset,

    {"preset": "linear_trimer", "R_nm": 10, "d_nm": 1}

or lists spheres and emitters explicitly; explicit fields override the
preset's.  Validation reports the offending entity by name.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace

import numpy as np

from .constants import ANGSTROM, ANGULAR_THZ, E_CHARGE, NM
from .coupling import Emitter
from .em.cluster import Sphere, SphereCluster
from .em.materials import Material, material_by_name
from .errors import SceneValidationError

DEFAULT_SWEEP = (3500.0, 6000.0, 200)  # angular THz lo, hi, points
DEFAULT_DIPOLE_E_ANGSTROM = 10.0
DEFAULT_OMEGA_A = 4800.0  # angular THz


@dataclass(frozen=True)
class Scene:
    cluster: SphereCluster
    emitters: tuple
    preset_name: str = ""
    sweep: tuple = DEFAULT_SWEEP  # (omega_lo, omega_hi) angular THz, n_points
    delta_t_s: float = 0.0
    t_max_linewidths: float = 20.0
    n_times: int = 2000
    name: str = ""
    raw: dict = field(default_factory=dict, repr=False, compare=False)

    def omega_grid(self) -> np.ndarray:
        lo, hi, n = self.sweep
        return np.linspace(lo * ANGULAR_THZ, hi * ANGULAR_THZ, int(n))

    def scene_hash(self) -> str:
        return hashlib.sha256(
            json.dumps(scene_to_dict(self), sort_keys=True).encode()
        ).hexdigest()[:16]

    def with_l_max(self, l_max: int) -> "Scene":
        cl = SphereCluster(self.cluster.spheres, self.cluster.host, l_max)
        return replace(self, cluster=cl)


def default_l_max(gap_nm: float) -> int:
    """Truncation default: 30 below 2 nm gaps, 20 otherwise."""
    return 30 if gap_nm < 2.0 else 20


# -- presets -----------------------------------------------------------------


def _dipole(direction, moment_e_angstrom=DEFAULT_DIPOLE_E_ANGSTROM):
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    return d * (E_CHARGE * moment_e_angstrom * ANGSTROM)


def linear_trimer(R_nm: float = 10.0, d_nm: float = 1.0, l_max: int | None = None) -> Scene:
    """Three spheres on the x axis, emitters at the two gap midpoints
    with dipoles along the axis."""
    R = R_nm * NM
    s = 2 * R + d_nm * NM
    ag = material_by_name("ag_johnson_christy")
    lm = default_l_max(d_nm) if l_max is None else l_max
    cluster = SphereCluster(
        (
            Sphere([-s, 0.0, 0.0], R, ag),
            Sphere([0.0, 0.0, 0.0], R, ag),
            Sphere([s, 0.0, 0.0], R, ag),
        ),
        Material.vacuum(),
        lm,
    )
    om_a = DEFAULT_OMEGA_A * ANGULAR_THZ
    emitters = (
        Emitter([-s / 2, 0.0, 0.0], _dipole([1, 0, 0]), om_a),
        Emitter([s / 2, 0.0, 0.0], _dipole([1, 0, 0]), om_a),
    )
    return Scene(cluster, emitters, preset_name="linear_trimer",
                 name=f"linear_trimer_R{R_nm:g}_d{d_nm:g}")


def triangle_trio(R_nm: float = 10.0, d_nm: float = 1.0, l_max: int | None = None) -> Scene:
    """Equilateral triangle in the xz plane, one emitter per edge gap
    midpoint with the dipole along that edge."""
    R = R_nm * NM
    s = 2 * R + d_nm * NM
    ag = material_by_name("ag_johnson_christy")
    lm = default_l_max(d_nm) if l_max is None else l_max
    a = s / np.sqrt(3.0)
    angles = np.deg2rad([90.0, 210.0, 330.0])
    verts = [np.array([a * np.cos(t), 0.0, a * np.sin(t)]) for t in angles]
    om_a = DEFAULT_OMEGA_A * ANGULAR_THZ
    emitters = []
    for i, j in ((0, 1), (1, 2), (2, 0)):
        mid = (verts[i] + verts[j]) / 2
        emitters.append(Emitter(mid, _dipole(verts[j] - verts[i]), om_a))
    cluster = SphereCluster(tuple(Sphere(v, R, ag) for v in verts),
                            Material.vacuum(), lm)
    return Scene(cluster, tuple(emitters), preset_name="triangle_trio",
                 name=f"triangle_trio_R{R_nm:g}_d{d_nm:g}")


def tetra_plus_center(R_nm: float = 10.0, d_nm: float = 1.0,
                      l_max: int | None = None) -> Scene:
    """Four vertex spheres of a tetrahedron around a centre sphere,
    emitters at the centre-vertex gap midpoints with dipoles along the
    centre-vertex axes."""
    R = R_nm * NM
    s = 2 * R + d_nm * NM
    ag = material_by_name("ag_johnson_christy")
    lm = default_l_max(d_nm) if l_max is None else l_max
    dirs = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / np.sqrt(3.0)
    spheres = [Sphere([0.0, 0.0, 0.0], R, ag)] + [Sphere(s * d, R, ag) for d in dirs]
    om_a = DEFAULT_OMEGA_A * ANGULAR_THZ
    emitters = tuple(Emitter(s / 2 * d, _dipole(d), om_a) for d in dirs)
    cluster = SphereCluster(tuple(spheres), Material.vacuum(), lm)
    return Scene(cluster, emitters, preset_name="tetra_plus_center",
                 name=f"tetra_plus_center_R{R_nm:g}_d{d_nm:g}")


def single_sphere_pair(R_nm: float = 10.0, d_nm: float = 1.0,
                       l_max: int | None = None) -> Scene:
    """One sphere with two emitters on opposite sides at the distance a
    gap midpoint would sit (no hot spots); the reference scene."""
    R = R_nm * NM
    ag = material_by_name("ag_johnson_christy")
    lm = default_l_max(d_nm) if l_max is None else l_max
    r_e = R + d_nm * NM / 2
    om_a = DEFAULT_OMEGA_A * ANGULAR_THZ
    cluster = SphereCluster((Sphere([0.0, 0.0, 0.0], R, ag),), Material.vacuum(), lm)
    emitters = (
        Emitter([-r_e, 0.0, 0.0], _dipole([1, 0, 0]), om_a),
        Emitter([r_e, 0.0, 0.0], _dipole([1, 0, 0]), om_a),
    )
    return Scene(cluster, emitters, preset_name="single_sphere_pair",
                 name=f"single_sphere_pair_R{R_nm:g}_d{d_nm:g}")


PRESETS = {
    "linear_trimer": linear_trimer,
    "triangle_trio": triangle_trio,
    "tetra_plus_center": tetra_plus_center,
    "single_sphere_pair": single_sphere_pair,
}


# -- geometry validation with entity naming -----------------------------------


def validate_scene(scene: Scene):
    """Raise SceneValidationError naming the first violated invariant."""
    sp = scene.cluster.spheres
    for i in range(len(sp)):
        for j in range(i + 1, len(sp)):
            gap = np.linalg.norm(sp[i].center - sp[j].center) - sp[i].radius - sp[j].radius
            if gap < 0:
                raise SceneValidationError(
                    f"spheres[{i}] and spheres[{j}] overlap by {-gap / NM:.3g} nm"
                )
    for n, e in enumerate(scene.emitters):
        for i, s in enumerate(sp):
            if np.linalg.norm(e.position - s.center) <= s.radius:
                raise SceneValidationError(
                    f"emitters[{n}] lies inside spheres[{i}]"
                )
    lo, hi, n = scene.sweep
    if not (lo < hi and n >= 2):
        raise SceneValidationError(f"sweep range invalid: {scene.sweep}")
    for mat in [scene.cluster.host] + [s.material for s in sp]:
        w0, w1 = mat.omega_range()
        if lo * ANGULAR_THZ < w0 or hi * ANGULAR_THZ > w1:
            raise SceneValidationError(
                f"sweep range [{lo:g}, {hi:g}] angular THz outside material "
                f"'{mat.name}' data range "
                f"[{w0 / ANGULAR_THZ:.0f}, {w1 / ANGULAR_THZ:.0f}]"
            )


# -- serialisation --------------------------------------------------------------


def _material_to_obj(mat: Material):
    if mat.name in ("vacuum", "johnson_christy_ag"):
        return {"vacuum": "vacuum", "johnson_christy_ag": "ag_johnson_christy"}[mat.name]
    if mat.kind == "constant":
        return {"kind": "constant", "eps": [mat.eps_const.real, mat.eps_const.imag]}
    if mat.kind == "drude":
        return {
            "kind": "drude",
            "eps_inf": mat.eps_inf,
            "omega_p_thz_angular": mat.omega_p / ANGULAR_THZ,
            "gamma_thz_angular": mat.gamma / ANGULAR_THZ,
        }
    raise SceneValidationError(
        f"tabulated material {mat.name!r} cannot be inlined; register it by name"
    )


def _material_from_obj(obj) -> Material:
    if isinstance(obj, str):
        return material_by_name(obj)
    kind = obj.get("kind")
    if kind == "constant":
        re_, im = obj["eps"]
        return Material.constant(complex(re_, im))
    if kind == "drude":
        return Material.drude(
            obj["eps_inf"],
            obj["omega_p_thz_angular"] * ANGULAR_THZ,
            obj["gamma_thz_angular"] * ANGULAR_THZ,
        )
    raise SceneValidationError(f"unknown material spec {obj!r}")


def scene_to_dict(scene: Scene) -> dict:
    return {
        "name": scene.name,
        "preset": scene.preset_name,
        "host": _material_to_obj(scene.cluster.host),
        "l_max": scene.cluster.l_max,
        # geometry is serialised in exact SI floats (used verbatim on
        # reload, so round-trips are bit-identical); the _nm/_e_angstrom
        # spellings remain accepted on input for hand-written files
        "spheres": [
            {
                "center_m": [float(c) for c in s.center],
                "radius_m": float(s.radius),
                "material": _material_to_obj(s.material),
            }
            for s in scene.cluster.spheres
        ],
        "emitters": [
            {
                "position_m": [float(c) for c in e.position],
                "dipole_cm": [float(c) for c in e.dipole],
                "omega_a_rad_s": float(e.omega_a),
            }
            for e in scene.emitters
        ],
        "sweep": {
            "omega_min_thz_angular": scene.sweep[0],
            "omega_max_thz_angular": scene.sweep[1],
            "n_points": scene.sweep[2],
        },
        "dynamics": {
            "delta_t_s": scene.delta_t_s,
            "t_max_linewidths": scene.t_max_linewidths,
            "n_times": scene.n_times,
        },
    }


def scene_from_dict(data: dict) -> Scene:
    scene = None
    if data.get("preset"):
        ctor = PRESETS.get(data["preset"])
        if ctor is None:
            raise SceneValidationError(
                f"unknown preset {data['preset']!r}; available: {sorted(PRESETS)}"
            )
        kwargs = {}
        if "R_nm" in data:
            kwargs["R_nm"] = float(data["R_nm"])
        if "d_nm" in data:
            kwargs["d_nm"] = float(data["d_nm"])
        if "l_max" in data:
            kwargs["l_max"] = int(data["l_max"])
        try:
            scene = ctor(**kwargs)
        except ValueError as exc:
            raise SceneValidationError(str(exc)) from exc

    if scene is None or "spheres" in data:
        host = _material_from_obj(data.get("host", "vacuum"))
        l_max = int(data.get("l_max", 20))
        spheres = []
        for i, rec in enumerate(data.get("spheres", [])):
            try:
                if "center_m" in rec:
                    center = np.asarray(rec["center_m"], float)
                else:
                    center = np.asarray(rec["center_nm"], float) * NM
                radius = (float(rec["radius_m"]) if "radius_m" in rec
                          else float(rec["radius_nm"]) * NM)
                spheres.append(Sphere(center, radius,
                                      _material_from_obj(rec["material"])))
            except (KeyError, ValueError) as exc:
                raise SceneValidationError(f"spheres[{i}]: {exc}") from exc
        emitters = []
        for i, rec in enumerate(data.get("emitters", [])):
            try:
                if "position_m" in rec:
                    pos = np.asarray(rec["position_m"], float)
                else:
                    pos = np.asarray(rec["position_nm"], float) * NM
                if "dipole_cm" in rec:
                    dip = np.asarray(rec["dipole_cm"], float)
                else:
                    dip = _dipole(
                        rec["dipole_direction"],
                        rec.get("dipole_moment_e_angstrom", DEFAULT_DIPOLE_E_ANGSTROM),
                    )
                om_a = (float(rec["omega_a_rad_s"]) if "omega_a_rad_s" in rec
                        else rec.get("omega_a_thz_angular", DEFAULT_OMEGA_A) * ANGULAR_THZ)
                emitters.append(Emitter(pos, dip, om_a))
            except (KeyError, ValueError) as exc:
                raise SceneValidationError(f"emitters[{i}]: {exc}") from exc
        # overlap errors out of SphereCluster get entity names from validate_scene
        pairs = [(i, j) for i in range(len(spheres)) for j in range(i + 1, len(spheres))]
        for i, j in pairs:
            gap = (
                np.linalg.norm(spheres[i].center - spheres[j].center)
                - spheres[i].radius
                - spheres[j].radius
            )
            if gap < 0:
                raise SceneValidationError(
                    f"spheres[{i}] and spheres[{j}] overlap by {-gap / NM:.3g} nm"
                )
        cluster = SphereCluster(tuple(spheres), host, l_max)
        scene = Scene(cluster, tuple(emitters), preset_name=data.get("preset", ""),
                      name=data.get("name", ""))
    elif "l_max" in data:
        scene = scene.with_l_max(int(data["l_max"]))

    if "sweep" in data:
        sw = data["sweep"]
        scene = replace(
            scene,
            sweep=(
                float(sw.get("omega_min_thz_angular", DEFAULT_SWEEP[0])),
                float(sw.get("omega_max_thz_angular", DEFAULT_SWEEP[1])),
                int(sw.get("n_points", DEFAULT_SWEEP[2])),
            ),
        )
    if "dynamics" in data:
        dy = data["dynamics"]
        scene = replace(
            scene,
            delta_t_s=float(dy.get("delta_t_s", 0.0)),
            t_max_linewidths=float(dy.get("t_max_linewidths", 20.0)),
            n_times=int(dy.get("n_times", 2000)),
        )
    if data.get("name"):
        scene = replace(scene, name=data["name"])
    validate_scene(scene)
    return scene


def load_scene(path) -> Scene:
    """Parse and validate a scene file; errors carry entity positions."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SceneValidationError(
            f"{path}: parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return scene_from_dict(data)


def save_scene(scene: Scene, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scene_to_dict(scene), fh, indent=1, sort_keys=True)
        fh.write("\n")
