"""Vector spherical wave functions and expansion coefficients.

Convention (fixed here once; every module inherits it):

* time dependence e^{-i omega t}, outgoing radial function h_l^(1);
* scalar harmonics Y_lm orthonormal on the unit sphere with
  Condon-Shortley phase, azimuthal factor e^{i m phi};
* vector spherical harmonics
      P_lm = r^ Y_lm,
      B_lm = r grad(Y_lm) / sqrt(l(l+1)),
      C_lm = -r^ x B_lm  (so C = (im Y/sin, -dY/dtheta)/sqrt(l(l+1))),
  each family orthonormal on the sphere;
* wave functions (z_l = j_l regular, h_l^(1) outgoing)
      M_lm = z_l(kr) C_lm                                  (TE)
      N_lm = sqrt(l(l+1)) z_l(kr)/(kr) P_lm
             + [kr z_l(kr)]'/(kr) B_lm                     (TM)

With these, the free-space dyadic Green function factorises as

    G0(r, r') = ik sum_n W3_n(r) (x) W1bar_n(r'),   |r| > |r'|,

where Wbar_lm = (-1)^m W_{l,-m} (conjugated angular part), a plane wave
expands with coefficients 4 pi i^l e^.C*_lm(k^) (TE) and
4 pi i^{l-1} e^.B*_lm(k^) (TM), and the single-sphere T-matrix is
diagonal with the entries computed in the Mie module.  All of these are
pinned against independent oracles in the test-suite.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from .angular import angular_tables
from .bessel import riccati_derivative, scaled_to_complex, sph_h1n_scaled, sph_jn_scaled
from .indexing import MultipoleIndex, Polarization, lm_index, scalar_block_size, tri_index

SQRT_6PI = np.sqrt(6.0 * np.pi)


def _spherical_frame(points: np.ndarray):
    """Radii, angles, and unit vectors (er, eth, eph) for points (..., 3).

    At the poles the phi = 0 meridian limit is used, which reproduces the
    (well-defined) VSWF values there.
    """
    pts = np.asarray(points, dtype=float)
    x, y, z = pts[..., 0], pts[..., 1], pts[..., 2]
    r = np.sqrt(x * x + y * y + z * z)
    rho = np.hypot(x, y)
    with np.errstate(invalid="ignore", divide="ignore"):
        cos_t = np.where(r > 0, z / np.where(r > 0, r, 1.0), 1.0)
    cos_t = np.clip(cos_t, -1.0, 1.0)
    sin_t = np.where(r > 0, rho / np.where(r > 0, r, 1.0), 0.0)
    phi = np.arctan2(y, x)
    cp, sp = np.cos(phi), np.sin(phi)
    er = np.stack([sin_t * cp, sin_t * sp, cos_t], axis=-1)
    eth = np.stack([cos_t * cp, cos_t * sp, -sin_t], axis=-1)
    eph = np.stack([-sp, cp, np.zeros_like(sp)], axis=-1)
    return r, cos_t, sin_t, phi, er, eth, eph


def _radial_ladders(kind: str, k: complex, r: np.ndarray, l_max: int, scaled: bool = False):
    """z_l(kr) and psi'_l(kr) ladders for l = 0..l_max over radii r."""
    kr = k * r.astype(complex)
    if kind == "regular":
        mant, ex = sph_jn_scaled(l_max, kr)
    elif kind == "outgoing":
        if np.any(r == 0):
            raise DomainError("outgoing waves have a pole at the expansion origin")
        mant, ex = sph_h1n_scaled(l_max, kr)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    if scaled:
        return kr, mant, ex
    z = scaled_to_complex(mant, ex)
    return kr, z, None


def _phase_powers(phi: np.ndarray, m_max: int) -> np.ndarray:
    """e^{i m phi} for m = -m_max..m_max, shaped (2*m_max+1,) + phi.shape."""
    out = np.empty((2 * m_max + 1,) + phi.shape, dtype=complex)
    base = np.exp(1j * phi)
    out[m_max] = 1.0
    for m in range(1, m_max + 1):
        out[m_max + m] = out[m_max + m - 1] * base
        out[m_max - m] = np.conj(out[m_max + m])
    return out


def _cs_phase(m) -> np.ndarray:
    """Condon-Shortley factor rho_m: (-1)^m for m >= 0, +1 for m < 0."""
    m = np.asarray(m)
    return np.where(m >= 0, np.where(m % 2 == 0, 1.0, -1.0), 1.0)


def vswf_eval(idx: MultipoleIndex, kind: str, k: complex, r) -> np.ndarray:
    """Field value of one M/N wave at point(s) r (shape (..., 3), metres).

    kind is "regular" or "outgoing"; k is the medium wavenumber (1/m).
    """
    pts = np.atleast_2d(np.asarray(r, dtype=float))
    l, m = idx.n, idx.m
    rr, cos_t, sin_t, phi, er, eth, eph = _spherical_frame(pts)

    at_origin = rr == 0
    if kind == "regular" and np.any(at_origin):
        # regular N waves with l = 1 take constant values at the origin
        out = np.zeros(pts.shape, dtype=complex)
        if idx.pol == Polarization.TM and l == 1:
            e_sph = {
                0: np.array([0, 0, 1.0], dtype=complex),
                1: np.array([-1.0, -1j, 0]) / np.sqrt(2.0),
                -1: np.array([1.0, -1j, 0]) / np.sqrt(2.0),
            }[m]
            out[at_origin] = e_sph / SQRT_6PI
        off = ~at_origin
        if np.any(off):
            out[off] = vswf_eval(idx, kind, k, pts[off])
        return out.reshape(np.shape(r))

    kr, z, _ = _radial_ladders(kind, k, rr, l, scaled=False)
    psi_p = riccati_derivative(z, kr)
    pt, pi, ta = angular_tables(cos_t, sin_t, l)
    row = tri_index(l, abs(m))
    eimp = np.exp(1j * m * phi)
    pref = _cs_phase(m) / np.sqrt(2.0 * np.pi * l * (l + 1.0)) * eimp

    if idx.pol == Polarization.TE:
        ang = 1j * m * pi[row][..., None] * eth - ta[row][..., None] * eph
        field = z[l][..., None] * pref[..., None] * ang
    else:
        ang_b = ta[row][..., None] * eth + 1j * m * pi[row][..., None] * eph
        ang_p = l * (l + 1.0) * pt[row][..., None] * er
        field = (pref / kr)[..., None] * (z[l][..., None] * ang_p + psi_p[l][..., None] * ang_b)
    return field.reshape(np.shape(r))


def wave_sum(coeffs: np.ndarray, kind: str, k: complex, points, l_max: int,
             coeff_ex: np.ndarray | None = None) -> np.ndarray:
    """E(points) = sum_n coeffs[n] * W_n^{kind}(k, points).

    coeffs has length 2*l_max*(l_max+2) (TE block then TM block).  When
    coeff_ex is given, coefficient n is coeffs[n] * 2**coeff_ex[n]
    (scaled representation for extreme-order chains); the combination is
    then performed per term so only genuine overflow of a physical term
    raises.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    rr, cos_t, sin_t, phi, er, eth, eph = _spherical_frame(pts)
    scaled = coeff_ex is not None
    kr, z_m, z_e = _radial_ladders(kind, k, rr, l_max, scaled=scaled)
    if not scaled:
        z = z_m
        psi_p = riccati_derivative(z, kr)
    pt, pi, ta = angular_tables(cos_t, sin_t, l_max)
    eimp = _phase_powers(phi, l_max)
    L = scalar_block_size(l_max)

    out = np.zeros(pts.shape, dtype=complex)
    inv_kr = 1.0 / np.where(kr == 0, 1.0, kr)
    for l in range(1, l_max + 1):
        if scaled:
            # combine radial mantissa/exponent with the coefficient
            # exponents per (l, m) term below
            zl_m, zl_e = z_m[l], z_e[l]
            zlm1_m, zlm1_e = z_m[l - 1], z_e[l - 1]
        else:
            zl = z[l]
            psl = psi_p[l]
        nrm = 1.0 / np.sqrt(2.0 * np.pi * l * (l + 1.0))
        for m in range(-l, l + 1):
            i_te = lm_index(l, m)
            i_tm = L + i_te
            c_te = coeffs[i_te]
            c_tm = coeffs[i_tm]
            if c_te == 0 and c_tm == 0:
                continue
            row = tri_index(l, abs(m))
            pref = (_cs_phase(m) * nrm) * eimp[l_max + m]
            if scaled:
                from ..errors import RangeError

                te_rad = tm_rad_z = tm_rad_p = 0.0
                if c_te != 0:
                    zl_here = zl_m * np.exp2((zl_e + coeff_ex[i_te]).astype(float))
                    if not np.all(np.isfinite(zl_here)):
                        raise RangeError("scaled wave-sum term overflowed")
                    te_rad = c_te * zl_here
                if c_tm != 0:
                    e_tm = coeff_ex[i_tm]
                    zl_tm = zl_m * np.exp2((zl_e + e_tm).astype(float))
                    # psi'_l = kr z_{l-1} - l z_l, assembled in scaled pieces
                    psl_tm = kr * zlm1_m * np.exp2((zlm1_e + e_tm).astype(float)) - l * zl_tm
                    if not (np.all(np.isfinite(zl_tm)) and np.all(np.isfinite(psl_tm))):
                        raise RangeError("scaled wave-sum term overflowed")
                    tm_rad_z = c_tm * zl_tm
                    tm_rad_p = c_tm * psl_tm
            else:
                te_rad = c_te * zl
                tm_rad_z = c_tm * zl
                tm_rad_p = c_tm * psi_p[l]
            if c_te != 0:
                ang = 1j * m * pi[row][..., None] * eth - ta[row][..., None] * eph
                out += (pref * te_rad)[..., None] * ang
            if c_tm != 0:
                ang_b = ta[row][..., None] * eth + 1j * m * pi[row][..., None] * eph
                ang_p = l * (l + 1.0) * pt[row][..., None] * er
                out += (pref * inv_kr)[..., None] * (
                    tm_rad_z[..., None] * ang_p + tm_rad_p[..., None] * ang_b
                )
    return out.reshape(np.shape(points))


def _vsh_at_direction(l_max: int, direction: np.ndarray):
    """C_lm and B_lm values (3-vectors) for all (l, m) at one unit vector.

    Returns (C, B) arrays of shape (L, 3) in block (l, m) order.
    """
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    _, cos_t, sin_t, phi, er, eth, eph = _spherical_frame(d[None, :])
    pt, pi, ta = angular_tables(cos_t, sin_t, l_max)
    L = scalar_block_size(l_max)
    C = np.zeros((L, 3), dtype=complex)
    B = np.zeros((L, 3), dtype=complex)
    for l in range(1, l_max + 1):
        nrm = 1.0 / np.sqrt(2.0 * np.pi * l * (l + 1.0))
        for m in range(-l, l + 1):
            row = tri_index(l, abs(m))
            pref = _cs_phase(m) * nrm * np.exp(1j * m * phi[0])
            C[lm_index(l, m)] = pref * (
                1j * m * pi[row][0] * eth[0] - ta[row][0] * eph[0]
            )
            B[lm_index(l, m)] = pref * (
                ta[row][0] * eth[0] + 1j * m * pi[row][0] * eph[0]
            )
    return C, B


def plane_wave_coeffs(direction, polarization, l_max: int) -> np.ndarray:
    """Regular-wave expansion coefficients of the unit plane wave
    pol^ e^{i k dir^ . r} about the origin.

    Returns a coefficient vector of length 2*l_max*(l_max+2); multiply by
    amplitude and the phase factor e^{i k dir . r_origin} to re-centre.
    """
    C, B = _vsh_at_direction(l_max, direction)
    pol = np.asarray(polarization, dtype=complex)
    L = scalar_block_size(l_max)
    coeffs = np.zeros(2 * L, dtype=complex)
    ls = np.concatenate([np.full(2 * l + 1, l) for l in range(1, l_max + 1)])
    il = 1j**ls
    coeffs[:L] = 4.0 * np.pi * il * (np.conj(C) @ pol)
    coeffs[L:] = 4.0 * np.pi * il / 1j * (np.conj(B) @ pol)
    return coeffs


def green_source_coeffs(kind: str, k: complex, r_source, origin, l_max: int,
                        scaled: bool = False):
    """Expansion coefficients, about `origin`, of the free-space dyadic
    Green function column G0(r, r_source) q^ in the region where it is
    `kind` (regular: |r - origin| < |r_source - origin|; outgoing: the
    opposite).  G carries its conventional 1/m units; multiply the field
    by mu0 omega^2 p for a physical dipole p.

    Returns an array (2L, 3): column j is the coefficient vector for a
    unit dipole along axis j.  With scaled=True returns (mant, ex).
    """
    rel = np.asarray(r_source, dtype=float) - np.asarray(origin, dtype=float)
    rr, cos_t, sin_t, phi, er, eth, eph = _spherical_frame(rel[None, :])
    # the bilinear factorisation pairs the field wave with the opposite
    # kind evaluated at the source, with conjugated angular part
    src_kind = "outgoing" if kind == "regular" else "regular"
    kr, z_m, z_e = _radial_ladders(src_kind, k, rr, l_max, scaled=True)
    psi_m = np.empty_like(z_m)
    psi_e = np.empty_like(z_e)
    # psi'_l in scaled arithmetic: kr z_{l-1} 2^{e_{l-1}} - l z_l 2^{e_l};
    # align exponents to the larger term
    for l in range(l_max + 1):
        if l == 0:
            a_m, a_e = z_m[0], z_e[0]
            b_m, b_e = (z_m[1], z_e[1]) if l_max >= 1 else (np.zeros_like(z_m[0]), z_e[0])
            hi = np.maximum(a_e, b_e)
            psi_m[0] = a_m * np.exp2((a_e - hi).astype(float)) - kr * b_m * np.exp2(
                (b_e - hi).astype(float)
            )
            psi_e[0] = hi
        else:
            a_e = z_e[l - 1]
            b_e = z_e[l]
            hi = np.maximum(a_e, b_e)
            psi_m[l] = kr * z_m[l - 1] * np.exp2((a_e - hi).astype(float)) - l * z_m[
                l
            ] * np.exp2((b_e - hi).astype(float))
            psi_e[l] = hi

    pt, pi, ta = angular_tables(cos_t, sin_t, l_max)
    L = scalar_block_size(l_max)
    mant = np.zeros((2 * L, 3), dtype=complex)
    ex = np.zeros((2 * L, 3), dtype=np.int64)
    ik = 1j * k
    inv_kr = 1.0 / kr[0]
    for l in range(1, l_max + 1):
        nrm = 1.0 / np.sqrt(2.0 * np.pi * l * (l + 1.0))
        for m in range(-l, l + 1):
            # coefficient on W_{l,m} = ik * (-1)^m W^{src}_{l,-m}(rel) . q^
            row = tri_index(l, abs(m))
            flip = -m
            par = -1.0 if abs(m) % 2 else 1.0  # literal (-1)^m
            pref = par * _cs_phase(flip) * nrm * np.exp(1j * flip * phi[0])
            ang_c = 1j * flip * pi[row][0] * eth[0] - ta[row][0] * eph[0]
            ang_b = ta[row][0] * eth[0] + 1j * flip * pi[row][0] * eph[0]
            ang_p = l * (l + 1.0) * pt[row][0] * er[0]
            mant[lm_index(l, m)] = ik * pref * z_m[l, 0] * ang_c
            ex[lm_index(l, m)] = z_e[l, 0]
            mant[L + lm_index(l, m)] = (
                ik * pref * inv_kr * (z_m[l, 0] * ang_p * np.exp2(float(z_e[l, 0] - psi_e[l, 0]))
                                      + psi_m[l, 0] * ang_b)
            )
            ex[L + lm_index(l, m)] = psi_e[l, 0]
    if scaled:
        return mant, ex
    return scaled_to_complex(mant, ex)


def free_dyadic_green(k: complex, r, rp) -> np.ndarray:
    """Closed-form free-space dyadic Green function G0(r, r'), 3x3, 1/m."""
    R = np.asarray(r, dtype=float) - np.asarray(rp, dtype=float)
    d = np.linalg.norm(R)
    if d == 0:
        raise DomainError("free-space Green function diverges at coincident points")
    u = R / d
    kd = k * d
    expf = np.exp(1j * kd) / (4.0 * np.pi * d)
    alpha = 1.0 + 1j / kd - 1.0 / kd**2
    beta = -1.0 - 3j / kd + 3.0 / kd**2
    return expf * (alpha * np.eye(3) + beta * np.outer(u, u))


def free_green_imag_coincident(k: float) -> np.ndarray:
    """Im G0(r, r) = (k / 6 pi) I, the analytic coincident-point limit."""
    return (k / (6.0 * np.pi)) * np.eye(3)
