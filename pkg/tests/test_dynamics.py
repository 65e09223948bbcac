"""Resonance extraction, closed-form amplitudes, and the kernel oracle."""

import numpy as np
import pytest
import sympy as sp

from plasmonqe.dynamics import (
    CollectiveMode,
    DynamicsConfig,
    ResonanceParams,
    STRONG_COUPLING_MIN_RATIO,
    amplitude,
    classify_coupling,
    collective_mode_for,
    extract_resonance,
    integrate_kernel,
    preparation_interval,
)
from plasmonqe.errors import NoPeakError, OverdampedRegimeError

DW = 5e13


def rp_with(ratio, dw=DW, gamma_ratio=0.9):
    # Omega = ratio * dw  <=>  gamma = ratio^2 * dw / 2
    return ResonanceParams(
        omega_m=4.8e15, linewidth=dw, gamma=ratio**2 * dw / 2.0, gamma_ratio=gamma_ratio
    )


def grid(dw=DW, n=1200, span=20.0):
    return np.linspace(0.0, span / dw, n)


# -- extraction ------------------------------------------------------------


def test_exact_lorentzian_recovery():
    w = np.linspace(4.0e15, 5.0e15, 800)
    y = 2e15 * (3e13) ** 2 / ((w - 4.5e15) ** 2 + (3e13) ** 2)
    rp = extract_resonance(w, y, (4.2e15, 4.8e15))
    assert abs(rp.omega_m - 4.5e15) / 4.5e15 < 1e-9
    assert abs(rp.linewidth - 3e13) / 3e13 < 1e-9
    assert abs(rp.gamma - 2e15) / 2e15 < 1e-9


def test_flat_curve_no_peak():
    w = np.linspace(4.0e15, 5.0e15, 200)
    with pytest.raises(NoPeakError):
        extract_resonance(w, np.full_like(w, 3.0), (4.1e15, 4.9e15))


def test_two_separated_peaks_windowed():
    w = np.linspace(4.0e15, 5.6e15, 1600)
    y = 2e15 * (6e12) ** 2 / ((w - 4.2e15) ** 2 + (6e12) ** 2) + 1.2e15 * (
        5e12
    ) ** 2 / ((w - 5.4e15) ** 2 + (5e12) ** 2)
    ra = extract_resonance(w, y, (4.1e15, 4.3e15))
    rb = extract_resonance(w, y, (5.3e15, 5.5e15))
    assert abs(ra.omega_m - 4.2e15) / 4.2e15 < 1e-6
    assert abs(rb.omega_m - 5.4e15) / 5.4e15 < 1e-6
    assert abs(ra.linewidth - 6e12) / 6e12 < 1e-5
    assert abs(rb.linewidth - 5e12) / 5e12 < 1e-5


def test_rabi_frequency_definition():
    rp = rp_with(20.0)
    assert rp.rabi == pytest.approx(np.sqrt(2 * rp.gamma * rp.linewidth), rel=1e-14)


# -- classification and mode selection --------------------------------------


def test_classification_thresholds():
    assert classify_coupling(rp_with(20.0)) == "strong"
    assert classify_coupling(rp_with(1e-3)) == "weak"
    assert classify_coupling(rp_with(STRONG_COUPLING_MIN_RATIO)) == "strong"  # inclusive


@pytest.mark.parametrize("n,ratio,g,label", [
    (2, 1.0, 2.0, "superradiant"),
    (2, -1.0, 2.0, "subradiant"),
    (3, 1.0, 3.0, "superradiant"),
    (3, -0.5, 1.5, "subradiant"),
    (4, -1 / 3, 4 / 3, "subradiant"),
    (4, 1.0, 4.0, "superradiant"),
])
def test_mode_selection(n, ratio, g, label):
    mode = collective_mode_for(n, ratio)
    assert mode.g == pytest.approx(g, rel=1e-12)
    assert mode.label == label


# -- closed form ------------------------------------------------------------


def test_amplitude_zero_at_t0():
    cfg = DynamicsConfig(t_grid=grid())
    c = amplitude(CollectiveMode(2.0, "superradiant"), rp_with(20.0), cfg)
    assert c[0] == 0.0


def test_two_emitter_form_matches_literal_transcription():
    # the general-g formula at g = 2, term by term against the explicit
    # two-emitter solution with Omega_1 = sqrt(2) Omega
    rp = rp_with(10.0)
    om, dw = rp.rabi, rp.linewidth
    t = grid()
    cfg = DynamicsConfig(t_grid=t, delta_t=0.0)
    mine = amplitude(CollectiveMode(2.0, "superradiant"), rp, cfg)
    om1 = np.sqrt(2.0) * om
    lit = (
        np.sqrt(2.0)
        * om**2
        * (dw * 1.0 - om)
        / ((om**2 + dw**2) * np.sqrt(om1**2 - dw**2))
        * np.exp(-dw * t / 2.0)
        * np.sin(np.sqrt(om1**2 - dw**2) * t / 2.0)
    )
    assert np.max(np.abs(mine - lit)) <= 1e-14 * np.max(np.abs(lit))


def test_symbolic_equivalence_of_special_cases():
    # the general-g coefficient reduces to each printed special case
    g_, om, dw, t, dt = sp.symbols("g Omega delta t dt", positive=True)
    nu = sp.sqrt(g_ * om**2 - dw**2)
    general = (
        sp.sqrt(g_) * om**2 * (dw * sp.exp(-dw * dt / 2) - om)
        / ((om**2 + dw**2) * nu) * sp.exp(-dw * (t + dt) / 2) * sp.sin(nu * t / 2)
    )
    cases = {
        2: sp.sqrt(2) * om**2 * (dw * sp.exp(-dw * dt / 2) - om)
        / ((om**2 + dw**2) * sp.sqrt(2 * om**2 - dw**2))
        * sp.exp(-dw * (t + dt) / 2) * sp.sin(sp.sqrt(2 * om**2 - dw**2) * t / 2),
        3: sp.sqrt(3) * om**2 * (dw * sp.exp(-dw * dt / 2) - om)
        / ((om**2 + dw**2) * sp.sqrt(3 * om**2 - dw**2))
        * sp.exp(-dw * (t + dt) / 2) * sp.sin(sp.sqrt(3 * om**2 - dw**2) * t / 2),
        sp.Rational(3, 2): (sp.sqrt(6) / 2) * om**2 * (dw * sp.exp(-dw * dt / 2) - om)
        / ((om**2 + dw**2) * sp.sqrt(sp.Rational(3, 2) * om**2 - dw**2))
        * sp.exp(-dw * (t + dt) / 2) * sp.sin(sp.sqrt(sp.Rational(3, 2) * om**2 - dw**2) * t / 2),
        sp.Rational(4, 3): sp.sqrt(sp.Rational(4, 3)) * om**2 * (dw * sp.exp(-dw * dt / 2) - om)
        / ((om**2 + dw**2) * sp.sqrt(sp.Rational(4, 3) * om**2 - dw**2))
        * sp.exp(-dw * (t + dt) / 2) * sp.sin(sp.sqrt(sp.Rational(4, 3) * om**2 - dw**2) * t / 2),
        4: 2 * om**2 * (dw * sp.exp(-dw * dt / 2) - om)
        / ((om**2 + dw**2) * sp.sqrt(4 * om**2 - dw**2))
        * sp.exp(-dw * (t + dt) / 2) * sp.sin(sp.sqrt(4 * om**2 - dw**2) * t / 2),
    }
    for gv, expr in cases.items():
        assert sp.simplify(general.subs(g_, gv) - expr) == 0


def test_overdamped_raises():
    cfg = DynamicsConfig(t_grid=grid())
    with pytest.raises(OverdampedRegimeError):
        amplitude(CollectiveMode(2.0, "superradiant"), rp_with(0.5), cfg)


def test_detuned_requires_kernel_path():
    cfg = DynamicsConfig(t_grid=grid(), detuning=1e13)
    with pytest.raises(ValueError):
        amplitude(CollectiveMode(2.0, "superradiant"), rp_with(20.0), cfg)


def test_envelope_bound_and_zero_spacing():
    rp = rp_with(20.0)
    mode = CollectiveMode(2.0, "superradiant")
    cfg = DynamicsConfig(t_grid=grid(n=6000), delta_t=0.0)
    c = amplitude(mode, rp, cfg)
    om, dw = rp.rabi, rp.linewidth
    nu = np.sqrt(2 * om**2 - dw**2)
    coef = abs(np.sqrt(2) * om**2 * (dw - om) / ((om**2 + dw**2) * nu))
    env = coef * np.exp(-dw * cfg.t_grid / 2.0)
    assert np.all(np.abs(c) <= env * (1 + 1e-12))
    # zeros at t_k = 2 pi k / nu within one grid step
    t = cfg.t_grid
    sign_flips = np.nonzero(np.diff(np.sign(c[1:])) != 0)[0] + 1
    for i in sign_flips[:6]:
        t_zero = t[i]
        k = np.round(t_zero * nu / (2 * np.pi))
        assert abs(t_zero - 2 * np.pi * k / nu) <= (t[1] - t[0]) * 1.01


def test_beat_frequency_grows_with_g():
    rp = rp_with(15.0)
    om, dw = rp.rabi, rp.linewidth
    beats = [np.sqrt(g * om**2 - dw**2) for g in (4 / 3, 1.5, 2.0, 3.0, 4.0)]
    assert all(b2 > b1 for b1, b2 in zip(beats, beats[1:]))


def test_envelope_efold_time_is_2_over_linewidth():
    rp = rp_with(25.0)
    for g in (1.5, 2.0, 4.0):
        cfg = DynamicsConfig(t_grid=np.array([0.0, 2.0 / rp.linewidth]))
        c = amplitude(CollectiveMode(g, "superradiant"), rp, cfg)
        # envelope at t = 2/dw is e^{-1} of the coefficient
        om, dw = rp.rabi, rp.linewidth
        nu = np.sqrt(g * om**2 - dw**2)
        coef = abs(c[1] / (np.exp(-1.0) * np.sin(nu * cfg.t_grid[1] / 2.0)))
        c0 = abs(
            np.sqrt(g) * om**2 * (dw - om) / ((om**2 + dw**2) * nu)
        )
        assert coef == pytest.approx(c0, rel=1e-12)


# -- kernel-integration oracle ----------------------------------------------


@pytest.mark.parametrize("g", [2.0, 3.0, 1.5, 4 / 3, 4.0])
def test_closed_form_matches_kernel_integration(g):
    rp = rp_with(20.0)
    cfg = DynamicsConfig(t_grid=grid(n=900), delta_t=preparation_interval(rp))
    mode = CollectiveMode(g, "superradiant" if g >= 2 else "subradiant")
    c_closed = amplitude(mode, rp, cfg)
    c_kernel = integrate_kernel(mode, rp, cfg)
    assert np.max(np.abs(np.abs(c_kernel) - np.abs(c_closed))) < 1e-3


def test_zero_kernel_keeps_source_injection_constant():
    # Gamma = 0 kills both kernel and source: C stays at 0
    rp = ResonanceParams(omega_m=4.8e15, linewidth=DW, gamma=0.0, gamma_ratio=0.0)
    cfg = DynamicsConfig(t_grid=grid(span=2.0), delta_t=1e-14)
    c = integrate_kernel(CollectiveMode(2.0, "superradiant"), rp, cfg)
    assert np.max(np.abs(c)) == 0.0


def test_kernel_vs_second_order_ode():
    # the same dynamics integrated through the equivalent local ODE
    # C'' + (i(omega_m - omega_a) + dw) C' + (g Omega^2/4) C = 0
    from scipy.integrate import solve_ivp

    rp = rp_with(20.0)
    g = 2.0
    om, dw = rp.rabi, rp.linewidth
    cfg = DynamicsConfig(t_grid=grid(n=700), delta_t=preparation_interval(rp))
    c_kernel = integrate_kernel(CollectiveMode(g, "superradiant"), rp, cfg,
                                step_factor=0.002)
    # initial slope from the preparation convolution at t = 0
    kappa = -(g / 2.0) * rp.gamma * dw
    tp = np.linspace(-cfg.delta_t, 0.0, 6001)
    c_e = np.exp(-dw * (tp + cfg.delta_t) / 2.0) * np.cos(om * (tp + cfg.delta_t) / 2.0)
    s0 = (1.0 / np.sqrt(g)) * kappa * np.trapezoid(np.exp(dw * tp) * c_e, tp)

    def rhs(t, y):
        c, cd = y
        return [cd, -(dw) * cd - (g * om**2 / 4.0) * c]

    sol = solve_ivp(rhs, (0, cfg.t_grid[-1]), [0.0, s0.real], t_eval=cfg.t_grid,
                    rtol=1e-11, atol=1e-16)
    assert np.max(np.abs(sol.y[0] - c_kernel.real)) < 1e-6 * np.max(np.abs(sol.y[0]))


def test_detuned_amplitude_smaller_than_resonant():
    rp = rp_with(20.0)
    mode = CollectiveMode(2.0, "superradiant")
    dt = preparation_interval(rp)
    res = integrate_kernel(mode, rp, DynamicsConfig(t_grid=grid(n=500), delta_t=dt))
    det = integrate_kernel(
        mode, rp, DynamicsConfig(t_grid=grid(n=500), delta_t=dt, detuning=5 * DW)
    )
    assert np.max(np.abs(det)) < np.max(np.abs(res))


def test_config_validation():
    with pytest.raises(ValueError):
        DynamicsConfig(t_grid=np.array([1e-15, 2e-15]))
    with pytest.raises(ValueError):
        DynamicsConfig(t_grid=np.array([0.0, 1e-15]), delta_t=-1.0)
    with pytest.raises(ValueError):
        CollectiveMode(0.0, "superradiant")
    with pytest.raises(ValueError):
        ResonanceParams(1e15, -1.0, 1e15, 0.5)
