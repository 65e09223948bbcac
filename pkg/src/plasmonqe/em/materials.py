"""Dispersive materials: tabulated optical constants, Drude metals, and
constants.

Tabulated data are (photon energy eV, n, k) tables converted to
eps = (n + ik)^2 on an angular-frequency grid; queries interpolate
linearly in omega on Re(eps) and Im(eps) separately and refuse to
extrapolate.  The bundled silver table is the standard thin-film
measurement set used throughout nanoplasmonics; an alternative data
directory can be supplied through the PLASMONQE_MATERIAL_DIR
environment variable.

Passivity (Im eps >= 0, time convention e^{-i omega t}) is asserted at
construction for tabulated data.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from ..constants import omega_from_ev
from ..errors import MaterialRangeError

MATERIAL_DIR_ENV = "PLASMONQE_MATERIAL_DIR"


@dataclass(frozen=True)
class Material:
    """Complex permittivity model; exactly one of the parameter sets is
    used depending on `kind` ("constant" | "drude" | "tabulated")."""

    kind: str
    eps_const: complex = 1.0 + 0.0j
    eps_inf: float = 1.0
    omega_p: float = 0.0
    gamma: float = 0.0
    table_omega: np.ndarray = field(default=None, repr=False)
    table_eps: np.ndarray = field(default=None, repr=False)
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("constant", "drude", "tabulated"):
            raise ValueError(f"unknown material kind {self.kind!r}")
        if self.kind == "tabulated":
            w = np.asarray(self.table_omega, dtype=float)
            e = np.asarray(self.table_eps, dtype=complex)
            if w.ndim != 1 or w.shape != e.shape:
                raise ValueError("tabulated material needs matching 1-d arrays")
            if not np.all(np.diff(w) > 0):
                raise ValueError("tabulated frequencies must be strictly increasing")
            if np.any(e.imag < -1e-12):
                raise ValueError("passive tabulated material requires Im eps >= 0")
            object.__setattr__(self, "table_omega", w)
            object.__setattr__(self, "table_eps", e)

    @classmethod
    def constant(cls, eps, name: str = "") -> "Material":
        return cls(kind="constant", eps_const=complex(eps), name=name or "constant")

    @classmethod
    def vacuum(cls) -> "Material":
        return cls.constant(1.0, name="vacuum")

    @classmethod
    def drude(cls, eps_inf: float, omega_p: float, gamma: float, name: str = "") -> "Material":
        return cls(kind="drude", eps_inf=eps_inf, omega_p=omega_p, gamma=gamma,
                   name=name or "drude")

    @classmethod
    def tabulated(cls, omega, eps, name: str = "") -> "Material":
        return cls(kind="tabulated", table_omega=np.asarray(omega, float),
                   table_eps=np.asarray(eps, complex), name=name or "tabulated")

    def permittivity(self, omega):
        """Complex eps at angular frequency omega (rad/s); vectorised."""
        w = np.asarray(omega, dtype=float)
        if self.kind == "constant":
            out = np.broadcast_to(self.eps_const, w.shape).copy()
        elif self.kind == "drude":
            out = self.eps_inf - self.omega_p**2 / (w**2 + 1j * self.gamma * w)
        else:
            lo, hi = self.table_omega[0], self.table_omega[-1]
            if np.any(w < lo) or np.any(w > hi):
                bad = w[(w < lo) | (w > hi)]
                raise MaterialRangeError(float(np.atleast_1d(bad)[0]), lo, hi)
            out = np.interp(w, self.table_omega, self.table_eps.real) + 1j * np.interp(
                w, self.table_omega, self.table_eps.imag
            )
        if np.ndim(omega) == 0:
            return complex(out)
        return out

    def omega_range(self):
        """(omega_min, omega_max) over which the material is defined."""
        if self.kind == "tabulated":
            return float(self.table_omega[0]), float(self.table_omega[-1])
        return 0.0, np.inf


def permittivity(mat: Material, omega):
    """Functional form of Material.permittivity."""
    return mat.permittivity(omega)


def load_nk_csv(path, name: str = "") -> Material:
    """Material from a CSV with header energy_ev,n,k (UTF-8, '.' decimal)."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [c.strip() for c in reader.fieldnames] != [
            "energy_ev",
            "n",
            "k",
        ]:
            raise ValueError(
                f"{path}: expected header 'energy_ev,n,k', got {reader.fieldnames}"
            )
        for rec in reader:
            rows.append((float(rec["energy_ev"]), float(rec["n"]), float(rec["k"])))
    rows.sort(key=lambda t: t[0])
    ev = np.array([r[0] for r in rows])
    nk = np.array([r[1] + 1j * r[2] for r in rows])
    return Material.tabulated(omega_from_ev(ev), nk**2, name=name or Path(path).stem)


def silver_johnson_christy() -> Material:
    """The bundled silver table (or its override from
    PLASMONQE_MATERIAL_DIR)."""
    override = os.environ.get(MATERIAL_DIR_ENV)
    if override:
        cand = Path(override) / "johnson_christy_ag.csv"
        if cand.exists():
            return load_nk_csv(cand, name="johnson_christy_ag")
    ref = resources.files("plasmonqe.em").joinpath("data/johnson_christy_ag.csv")
    with resources.as_file(ref) as p:
        return load_nk_csv(p, name="johnson_christy_ag")


_BY_NAME = {
    "vacuum": Material.vacuum,
    "ag_johnson_christy": silver_johnson_christy,
    "silver": silver_johnson_christy,
}


def material_by_name(name: str) -> Material:
    try:
        return _BY_NAME[name]()
    except KeyError:
        raise ValueError(
            f"unknown material name {name!r}; available: {sorted(_BY_NAME)}"
        ) from None
