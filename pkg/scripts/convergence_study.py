"""Development study: l_max convergence of gap decay rates for the
triangle and tetrahedron-plus-center geometries (d = 1 nm), and sector
path timing for the trimer.  Results inform production truncation
defaults; see notes in the repository docs."""

import json
import time

import numpy as np

from plasmonqe.constants import ANGSTROM, E_CHARGE
from plasmonqe.coupling import Emitter, decay_matrix, normalized_rates
from plasmonqe.em.cluster import Sphere, SphereCluster
from plasmonqe.em.materials import Material, silver_johnson_christy

DIP = E_CHARGE * 10 * ANGSTROM
AG = silver_johnson_christy()
VAC = Material.vacuum()
R = 10e-9
D = 1e-9
S = 2 * R + D

out = {}

# triangle in XZ plane
angles = np.deg2rad([90.0, 210.0, 330.0])
a = S / np.sqrt(3.0)
verts = np.array([[a * np.cos(t), 0.0, a * np.sin(t)] for t in angles])
edges = [(0, 1), (1, 2), (2, 0)]
emitters_tri = []
for i, j in edges:
    mid = (verts[i] + verts[j]) / 2
    direc = verts[j] - verts[i]
    direc = direc / np.linalg.norm(direc)
    emitters_tri.append(Emitter(mid, DIP * direc, 4.8e15))

rows = []
for lmax in (14, 18, 22, 26):
    tri = SphereCluster(tuple(Sphere(v, R, AG) for v in verts), VAC, lmax)
    for om in (4.46e15, 4.71e15):
        t0 = time.time()
        dm = decay_matrix(tri, emitters_tri, om)
        over, ratios = normalized_rates(dm)
        rows.append(
            dict(lmax=lmax, omega=om, gamma=float(over[0]),
                 ratio=float(ratios[(0, 1)]), secs=time.time() - t0)
        )
        print("tri", rows[-1], flush=True)
out["triangle"] = rows

# tetrahedron + centre
dirs = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / np.sqrt(3.0)
rows = []
for lmax in (14, 18, 22):
    spheres = [Sphere([0.0, 0.0, 0.0], R, AG)] + [Sphere(S * d, R, AG) for d in dirs]
    tet = SphereCluster(tuple(spheres), VAC, lmax)
    ems = [Emitter(S / 2 * d, DIP * d, 4.8e15) for d in dirs]
    for om in (4.54e15, 4.95e15):
        t0 = time.time()
        dm = decay_matrix(tet, ems, om)
        over, ratios = normalized_rates(dm)
        rows.append(
            dict(lmax=lmax, omega=om, gamma=float(over[0]),
                 ratio=float(ratios[(0, 1)]), secs=time.time() - t0)
        )
        print("tet", rows[-1], flush=True)
out["tetra"] = rows

with open("/root/pkg/scripts/convergence_study.json", "w") as fh:
    json.dump(out, fh, indent=1)
print("DONE")
