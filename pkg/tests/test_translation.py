"""Translation operators: identity, pointwise re-expansion oracle,
composition, and axial/general cross-validation."""

import numpy as np
import pytest

from plasmonqe.numerics.indexing import MultipoleIndex, Polarization, basis_size, lm_index
from plasmonqe.numerics.translation import (
    TranslationKind,
    axial_sector_block,
    general_matrix,
    translation,
)
from plasmonqe.numerics.vswf import plane_wave_coeffs, vswf_eval, wave_sum

LAM = 500e-9
K = 2 * np.pi / LAM


def test_zero_displacement_identity():
    T = translation(TranslationKind.REGULAR_TO_REGULAR, [0.0, 0.0, 0.0], K, 6)
    assert np.max(np.abs(T.entries - np.eye(basis_size(6)))) <= 1e-14


def test_outgoing_reexpansion_pointwise_oracle():
    # translate an outgoing VSWF by D, evaluate the regular re-expansion
    # at |r - O2| < |D|: matches direct evaluation to 1e-7 at l_max = 30
    l_max = 30
    D = np.array([0.0, 0.0, 21e-9])
    T = translation(TranslationKind.OUTGOING_TO_REGULAR, D, K, l_max)
    rng = np.random.default_rng(3)
    pts = D + rng.uniform(-1, 1, (4, 3)) * 5e-9
    for (l, m, pol) in [(1, 0, Polarization.TM), (3, -2, Polarization.TE), (5, 4, Polarization.TM)]:
        src = np.zeros(basis_size(l_max), complex)
        src[MultipoleIndex(l, m, pol).flat(l_max)] = 1.0
        creg = T.apply(src)
        direct = np.stack([vswf_eval(MultipoleIndex(l, m, pol), "outgoing", K, p) for p in pts])
        re_exp = wave_sum(creg, "regular", K, pts - D, l_max)
        assert np.max(np.abs(re_exp - direct)) / np.max(np.abs(direct)) < 1e-7


def test_general_oblique_reexpansion():
    l_max = 22
    D = np.array([12e-9, -9e-9, 15e-9])
    T = translation(TranslationKind.OUTGOING_TO_REGULAR, D, K, l_max)
    rng = np.random.default_rng(5)
    pts = D + rng.uniform(-1, 1, (4, 3)) * 4e-9
    for (l, m, pol) in [(2, 1, Polarization.TE), (4, -3, Polarization.TM)]:
        src = np.zeros(basis_size(l_max), complex)
        src[MultipoleIndex(l, m, pol).flat(l_max)] = 1.0
        creg = T.apply(src)
        direct = np.stack([vswf_eval(MultipoleIndex(l, m, pol), "outgoing", K, p) for p in pts])
        re_exp = wave_sum(creg, "regular", K, pts - D, l_max)
        assert np.max(np.abs(re_exp - direct)) / np.max(np.abs(direct)) < 1e-6


def test_regular_translation_on_plane_wave():
    # recentring a plane-wave expansion is an exact phase factor
    l_max = 20
    d_hat = np.array([0, 0, 1.0])
    pol = np.array([1.0, 0, 0])
    D = np.array([5e-9, 7e-9, -11e-9])
    c1 = plane_wave_coeffs(d_hat, pol, l_max)
    T = translation(TranslationKind.REGULAR_TO_REGULAR, D, K, l_max)
    c2 = T.apply(c1)
    c2_ref = c1 * np.exp(1j * K * (d_hat @ D))
    # compare low orders (truncation affects the highest orders only)
    sl = [MultipoleIndex(l, m, p).flat(l_max) for l in range(1, 9)
          for m in range(-l, l + 1) for p in (Polarization.TE, Polarization.TM)]
    assert np.max(np.abs(c2[sl] - c2_ref[sl])) / np.max(np.abs(c2_ref[sl])) < 1e-9


@pytest.mark.parametrize("lmaxes,d1,d2", [
    # displacements with k|d1+d2| ~ 13 so truncation is actually visible
    ((15, 20, 25, 30, 35), [0, 0, 600e-9], [0, 0, 450e-9]),          # axial path
    ((15, 19, 23), [350e-9, 120e-9, 380e-9], [-120e-9, 260e-9, 300e-9]),  # general
])
def test_composition_error_decreases_with_lmax(lmaxes, d1, d2):
    d1 = np.asarray(d1)
    d2 = np.asarray(d2)
    errs = []
    for l_max in lmaxes:
        T1 = translation(TranslationKind.REGULAR_TO_REGULAR, d1, K, l_max)
        T2 = translation(TranslationKind.REGULAR_TO_REGULAR, d2, K, l_max)
        T12 = translation(TranslationKind.REGULAR_TO_REGULAR, d1 + d2, K, l_max)
        prod = T2.entries @ T1.entries
        # compare on the low-order sub-block, which truncation converges
        sl = [MultipoleIndex(l, m, p).flat(l_max) for l in range(1, 7)
              for m in range(-l, l + 1) for p in (Polarization.TE, Polarization.TM)]
        sub = np.ix_(sl, sl)
        num = np.linalg.norm(T12.entries[sub] - prod[sub])
        den = np.linalg.norm(T12.entries[sub])
        errs.append(num / den)
    # strictly decreasing until the double-precision floor is reached
    assert all(b < a or b < 1e-13 for a, b in zip(errs, errs[1:])), errs
    assert errs[-1] < 1e-9, errs


def test_axial_general_cross_validation():
    l_max = 10
    dz = 17e-9
    A_gen = general_matrix(TranslationKind.OUTGOING_TO_REGULAR, np.array([0, 1e-22, dz]), K, l_max)
    T_ax = translation(TranslationKind.OUTGOING_TO_REGULAR, [0, 0, dz], K, l_max)
    assert np.max(np.abs(A_gen - T_ax.entries)) / np.max(np.abs(A_gen)) < 1e-12


def test_axial_sector_block_negative_dz():
    # inverse displacements compose to the identity on the low-order
    # block (the highest orders carry the truncation error)
    l_max = 10
    up = axial_sector_block(TranslationKind.REGULAR_TO_REGULAR, 1, 10e-9, K, l_max)
    dn = axial_sector_block(TranslationKind.REGULAR_TO_REGULAR, 1, -10e-9, K, l_max)
    eye = dn @ up
    nl = l_max  # orders 1..l_max for m = 1, per polarization
    rows = list(range(0, 3)) + list(range(nl, nl + 3))
    sub = np.ix_(rows, rows)
    assert np.max(np.abs((eye - np.eye(2 * nl))[sub])) < 1e-10


def test_nonfinite_displacement_rejected():
    with pytest.raises(ValueError):
        translation(TranslationKind.REGULAR_TO_REGULAR, [np.nan, 0, 0], K, 4)
    with pytest.raises(ValueError):
        translation(TranslationKind.REGULAR_TO_REGULAR, [0, 0, 1e-9], K, 0)
