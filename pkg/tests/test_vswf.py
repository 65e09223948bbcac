"""VSWF evaluation, plane-wave expansion, and the Green bilinear identity."""

import numpy as np
import pytest

from plasmonqe.errors import DomainError
from plasmonqe.numerics.indexing import (
    MultipoleIndex,
    Polarization,
    basis_size,
    lm_index,
    scalar_block_size,
)
from plasmonqe.numerics.vswf import (
    free_dyadic_green,
    free_green_imag_coincident,
    green_source_coeffs,
    plane_wave_coeffs,
    vswf_eval,
    wave_sum,
)

LAM = 400e-9
K = 2 * np.pi / LAM


def test_multipole_index_validation():
    with pytest.raises(ValueError):
        MultipoleIndex(0, 0, Polarization.TE)
    with pytest.raises(ValueError):
        MultipoleIndex(2, 3, Polarization.TM)
    assert MultipoleIndex(2, -2, 0).pol is Polarization.TE


def test_basis_size():
    assert basis_size(30) == 2 * 30 * 32
    assert scalar_block_size(3) == 15


def test_plane_wave_reconstruction():
    # partial-wave sum reproduces e^{ikz} x^ at r = (30, 40, 50) nm
    r = np.array([30e-9, 40e-9, 50e-9])
    c = plane_wave_coeffs([0, 0, 1.0], [1.0, 0, 0], 25)
    E = wave_sum(c, "regular", K, r, 25)
    E_ref = np.array([np.exp(1j * K * r[2]), 0, 0])
    assert np.max(np.abs(E - E_ref)) < 1e-8


def test_plane_wave_oblique_circular():
    d = np.array([1.0, 2.0, 2.0]) / 3.0
    lin = np.array([2.0, -1.0, 0.0])
    lin -= d * (lin @ d)
    lin /= np.linalg.norm(lin)
    pol = (lin + 1j * np.cross(d, lin)) / np.sqrt(2)
    c = plane_wave_coeffs(d, pol, 25)
    r = np.array([25e-9, -35e-9, 40e-9])
    E = wave_sum(c, "regular", K, r, 25)
    assert np.max(np.abs(E - pol * np.exp(1j * K * (d @ r)))) < 1e-8


def test_divergence_free_m_wave():
    idx = MultipoleIndex(3, 2, Polarization.TE)
    p0 = np.array([25e-9, 10e-9, 18e-9])
    h = 1e-12
    div = 0.0
    for i in range(3):
        dp = np.zeros(3)
        dp[i] = h
        div += (
            vswf_eval(idx, "outgoing", K, p0 + dp)[i]
            - vswf_eval(idx, "outgoing", K, p0 - dp)[i]
        ) / (2 * h)
    scale = np.linalg.norm(vswf_eval(idx, "outgoing", K, p0)) * K
    assert abs(div) / scale < 1e-6


def test_surface_orthogonality():
    # int M_{n,m} . conj(M_{n',m'}) dOmega = 0 for (n,m) != (n',m'),
    # Gauss-Legendre x trapezoid quadrature (exact degrees)
    l_max = 6
    nth, nph = 2 * l_max + 4, 4 * l_max + 5
    x, w = np.polynomial.legendre.leggauss(nth)
    phi = np.linspace(0, 2 * np.pi, nph, endpoint=False)
    th = np.arccos(x)
    R = 50e-9
    pts = np.stack(
        [
            R * np.outer(np.sin(th), np.cos(phi)),
            R * np.outer(np.sin(th), np.sin(phi)),
            R * np.outer(np.cos(th), np.ones_like(phi)),
        ],
        axis=-1,
    ).reshape(-1, 3)
    wq = (np.outer(w, np.ones_like(phi)) * (2 * np.pi / nph)).ravel()
    modes = [(1, 0), (1, 1), (2, -1), (3, 2), (4, -4)]
    fields = {
        lm: vswf_eval(MultipoleIndex(*lm, Polarization.TE), "regular", K, pts)
        for lm in modes
    }
    for i, lm1 in enumerate(modes):
        for lm2 in modes[i + 1 :]:
            ip = np.sum(wq * np.sum(fields[lm1] * np.conj(fields[lm2]), axis=1))
            norm = np.sqrt(
                np.sum(wq * np.sum(np.abs(fields[lm1]) ** 2, axis=1))
                * np.sum(wq * np.sum(np.abs(fields[lm2]) ** 2, axis=1))
            )
            assert abs(ip) / norm < 1e-9


def test_outgoing_pole_at_origin():
    with pytest.raises(DomainError):
        vswf_eval(MultipoleIndex(1, 0, Polarization.TE), "outgoing", K, [0.0, 0.0, 0.0])


def test_regular_at_origin_constants():
    # regular TM l=1 waves take finite constant values at the origin
    v = vswf_eval(MultipoleIndex(1, 0, Polarization.TM), "regular", K, [0.0, 0.0, 0.0])
    assert np.allclose(v, np.array([0, 0, 1.0]) / np.sqrt(6 * np.pi))
    v = vswf_eval(MultipoleIndex(1, 1, Polarization.TM), "regular", K, [0.0, 0.0, 0.0])
    assert np.allclose(v, np.array([-1.0, -1j, 0]) / np.sqrt(12 * np.pi))
    # and continuity: the value just off the origin matches
    v2 = vswf_eval(MultipoleIndex(1, 1, Polarization.TM), "regular", K, [1e-12, 2e-12, -1e-12])
    assert np.allclose(v, v2, atol=1e-9)


def test_green_bilinear_identity_both_branches():
    rp = np.array([3e-9, -4e-9, 5e-9])
    rr = np.array([20e-9, 15e-9, -10e-9])
    l_max = 30
    A = green_source_coeffs("outgoing", K, rp, [0, 0, 0], l_max)
    G = np.stack([wave_sum(A[:, j], "outgoing", K, rr, l_max) for j in range(3)], axis=1)
    G_ref = free_dyadic_green(K, rr, rp)
    assert np.max(np.abs(G - G_ref)) / np.max(np.abs(G_ref)) < 1e-12
    A = green_source_coeffs("regular", K, rr, [0, 0, 0], l_max)
    G = np.stack([wave_sum(A[:, j], "regular", K, rp, l_max) for j in range(3)], axis=1)
    G_ref = free_dyadic_green(K, rp, rr)
    assert np.max(np.abs(G - G_ref)) / np.max(np.abs(G_ref)) < 1e-12


def test_free_green_reciprocity_and_imag_limit():
    r1 = np.array([10e-9, 0, 5e-9])
    r2 = np.array([-7e-9, 3e-9, 12e-9])
    G12 = free_dyadic_green(K, r1, r2)
    G21 = free_dyadic_green(K, r2, r1)
    assert np.allclose(G12, G21.T, rtol=1e-13)
    # Im G -> (k/6pi) I as separation -> 0 (the closed form loses digits
    # to cancellation at tiny separations, hence the modest tolerance)
    scale = K / (6 * np.pi)
    Gc = free_dyadic_green(K, r1, r1 + 1e-13)
    assert np.max(np.abs(np.imag(Gc) - free_green_imag_coincident(K))) / scale < 1e-3
    Gc = free_dyadic_green(K, r1, r1 + np.array([0, 0, 1e-11]))
    assert np.max(np.abs(np.imag(Gc) - free_green_imag_coincident(K))) / scale < 1e-6
    with pytest.raises(DomainError):
        free_dyadic_green(K, r1, r1)


def test_wave_sum_scaled_matches_plain():
    l_max = 8
    rng = np.random.default_rng(0)
    c = rng.normal(size=basis_size(l_max)) + 1j * rng.normal(size=basis_size(l_max))
    pts = np.array([[30e-9, -20e-9, 10e-9], [5e-9, 40e-9, -25e-9]])
    plain = wave_sum(c, "outgoing", K, pts, l_max)
    scaled = wave_sum(c, "outgoing", K, pts, l_max, coeff_ex=np.zeros(len(c), np.int64))
    assert np.allclose(plain, scaled, rtol=1e-12)
