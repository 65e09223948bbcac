"""Single-sphere Mie response.

The sphere's T-matrix is diagonal in the VSWF basis; its entries follow
from tangential-field continuity at the surface,

    T_TE(l) = - [j_l(x_p) psi'_j(x_m) - j_l(x_m) psi'_j(x_p)]
              / [j_l(x_p) psi'_h(x_m) - h_l(x_m) psi'_j(x_p)],

    T_TM(l) = - [eps_p j_l(x_p) psi'_j(x_m) - eps_m j_l(x_m) psi'_j(x_p)]
              / [eps_p j_l(x_p) psi'_h(x_m) - eps_m h_l(x_m) psi'_j(x_p)],

with x_m = k_host R, x_p = k_sphere R and psi'_z(x) = d/dx [x z_l(x)].
The classical scattering coefficients relate as (a_l, b_l) =
(-T_TM, -T_TE); for a lossless sphere they satisfy |a_l - 1/2| = 1/2
(equivalently the T entries lie on |T + 1/2| = 1/2).

Everything is evaluated on scaled Bessel ladders so that orders far into
the underflow regime come out as exact zeros instead of NaNs; emitters
1 nm from a surface need orders beyond 100, where the plain products
would leave double precision.
"""

from __future__ import annotations

import numpy as np

from ..constants import C_LIGHT
from ..numerics.bessel import riccati_derivative_scaled, sph_h1n_scaled, sph_jn_scaled


def _combine(m1, e1, m2, e2):
    """m1*2^e1 - m2*2^e2 as (mant, ex) with shared exponent."""
    hi = np.maximum(e1, e2)
    return m1 * np.exp2((e1 - hi).astype(float)) - m2 * np.exp2((e2 - hi).astype(float)), hi


def t_matrix_entries_scaled(radius: float, eps_sphere: complex, eps_host: complex,
                            omega: float, l_max: int):
    """Diagonal T-matrix entries in scaled form:
    (t_te_mant, t_te_ex, t_tm_mant, t_tm_ex), indexed by l (slot 0 zero).

    The scaled form stays exact at orders where the plain entries
    underflow (|T_l| ~ (kR)^{4l} past l ~ 60 for 10 nm spheres)."""
    k_m = omega / C_LIGHT * np.sqrt(complex(eps_host))
    k_p = omega / C_LIGHT * np.sqrt(complex(eps_sphere))
    x_m = k_m * radius
    x_p = k_p * radius
    z = np.zeros(l_max + 1, dtype=complex)
    zi = np.zeros(l_max + 1, dtype=np.int64)
    if x_m == x_p:
        return z, zi, z.copy(), zi.copy()

    jm_m, jm_e = sph_jn_scaled(l_max, x_m)
    jp_m, jp_e = sph_jn_scaled(l_max, x_p)
    hm_m, hm_e = sph_h1n_scaled(l_max, x_m)
    pjm_m, pjm_e = riccati_derivative_scaled(jm_m, jm_e, x_m)
    pjp_m, pjp_e = riccati_derivative_scaled(jp_m, jp_e, x_p)
    phm_m, phm_e = riccati_derivative_scaled(hm_m, hm_e, x_m)

    eps_m = complex(eps_host)
    eps_p = complex(eps_sphere)

    with np.errstate(divide="ignore", invalid="ignore"):
        # TE
        n_m, n_e = _combine(jp_m * pjm_m, jp_e + pjm_e, jm_m * pjp_m, jm_e + pjp_e)
        d_m, d_e = _combine(jp_m * phm_m, jp_e + phm_e, hm_m * pjp_m, hm_e + pjp_e)
        te_m = -np.where(d_m != 0, n_m / np.where(d_m != 0, d_m, 1.0), 0.0)
        te_e = n_e - d_e
        # TM (the eps weights implement the k^2 jump of the radial flux)
        n_m, n_e = _combine(eps_p * jp_m * pjm_m, jp_e + pjm_e,
                            eps_m * jm_m * pjp_m, jm_e + pjp_e)
        d_m, d_e = _combine(eps_p * jp_m * phm_m, jp_e + phm_e,
                            eps_m * hm_m * pjp_m, hm_e + pjp_e)
        tm_m = -np.where(d_m != 0, n_m / np.where(d_m != 0, d_m, 1.0), 0.0)
        tm_e = n_e - d_e

    te_m[0] = tm_m[0] = 0.0
    te_e = np.where(te_m != 0, te_e, 0)
    tm_e = np.where(tm_m != 0, tm_e, 0)
    return te_m, te_e, tm_m, tm_e


def t_matrix_entries(radius: float, eps_sphere: complex, eps_host: complex,
                     omega: float, l_max: int):
    """Diagonal T-matrix entries (t_te, t_tm) as plain complex arrays
    indexed by l (slot 0 unused); orders whose entries underflow double
    precision come out as exact zeros (they scatter nothing)."""
    te_m, te_e, tm_m, tm_e = t_matrix_entries_scaled(
        radius, eps_sphere, eps_host, omega, l_max
    )
    with np.errstate(under="ignore"):
        t_te = te_m * np.exp2(np.minimum(te_e, 1023).astype(float))
        t_tm = tm_m * np.exp2(np.minimum(tm_e, 1023).astype(float))
    t_te = np.where(np.isfinite(t_te), t_te, 0.0)
    t_tm = np.where(np.isfinite(t_tm), t_tm, 0.0)
    return t_te, t_tm


def mie_coefficients(radius: float, eps_sphere: complex, eps_host: complex,
                     omega: float, n: int):
    """Classical scattering coefficients (a_n, b_n) of order n >= 1.

    Convention: the sphere T-matrix is diagonal with entries -a_n (TM)
    and -b_n (TE); in the quasi-static limit
    a_1 -> -(2i/3) x^3 (eps-1)/(eps+2) for a sphere in vacuum.
    """
    if n < 1:
        raise ValueError("Mie order n must be >= 1")
    if radius <= 0:
        raise ValueError("radius must be positive")
    t_te, t_tm = t_matrix_entries(radius, eps_sphere, eps_host, omega, n)
    return -t_tm[n], -t_te[n]
