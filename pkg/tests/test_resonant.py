import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from blochwave.core import HBAR, ConfigError, PulseSpec
from blochwave.interband import TwoBandModel
from blochwave.resonant import TwoLevelSystem, envelope_area, generalized_area, rwa_suite, solve_two_level

SYS = TwoLevelSystem(0.0, 1.5, 1.0)


def test_two_level_validation():
    with pytest.raises(ConfigError):
        TwoLevelSystem(1.0, 0.5, 1.0)
    with pytest.raises(ConfigError):
        TwoLevelSystem(0.0, 1.0, -1.0)


def test_rwa_resonant_values():
    r = rwa_suite(SYS, 0.075, 1.5)
    assert r.hbar_omegaR == pytest.approx(0.075)
    assert r.hbar_OmegaR == pytest.approx(0.075)
    assert r.detuning == 0.0
    assert r.dressed == pytest.approx((-0.0375, 0.0375, 1.4625, 1.5375))
    assert r.mollow == pytest.approx((1.425, 1.5, 1.575))
    assert not r.rwa_advisory


@given(st.floats(0.0, 1.0), st.floats(1.0, 2.0))
def test_rwa_dressed_splitting_is_generalized_rabi(F0, hw):
    r = rwa_suite(SYS, F0, hw)
    assert r.dressed[1] - r.dressed[0] == pytest.approx(r.hbar_OmegaR, abs=1e-12)
    assert r.dressed[3] - r.dressed[2] == pytest.approx(r.hbar_OmegaR, abs=1e-12)
    assert r.hbar_OmegaR ** 2 == pytest.approx(r.hbar_omegaR ** 2 + r.detuning ** 2, abs=1e-12)


def test_rwa_advisory_flag():
    assert rwa_suite(SYS, 0.5, 1.5).rwa_advisory


def test_w_full_against_rwa_ode():
    # oracle: rotating-frame equations i a1' = (wr/2) a2, i a2' = (wr/2) a1 - delta a2
    r = rwa_suite(SYS, 0.2, 1.4)
    wr, dl = r.hbar_omegaR / HBAR, r.detuning / HBAR

    def rhs(t, y):
        return -1j * np.array([0.5 * wr * y[1], 0.5 * wr * y[0] + dl * y[1]])

    t = np.linspace(0, 60, 41)
    sol = solve_ivp(rhs, (0, 60), np.array([1 + 0j, 0j]), t_eval=t, rtol=1e-11, atol=1e-13)
    w = np.abs(sol.y[1]) ** 2 - np.abs(sol.y[0]) ** 2
    assert np.allclose(r.w_full(t), w, atol=1e-8)
    assert np.allclose(r.w_generalized(t)[0], -1.0)


@settings(max_examples=6)
@given(st.floats(0.01, 0.3), st.floats(0.0, math.pi))
def test_bloch_vector_stays_on_sphere(F0, cep):
    p = PulseSpec(F0, 1.5, envelope="sine-square", fwhm=10.0, cep=cep)
    tr = solve_two_level(SYS, p, samples=301)
    assert np.max(np.abs(tr.norm - 1.0)) < 1e-8
    assert tr.table().shape == (301, 4)


def test_weak_resonant_pulse_follows_area():
    # a weak 2 pi envelope-area pulse returns the system to the ground state
    hw, d = 1.5, 1.0
    fwhm = 40.14979690941458
    p = PulseSpec(0.075, hw, envelope="sine-square", fwhm=fwhm)
    theta = envelope_area(p, d)
    assert theta[-1] == pytest.approx(2 * math.pi, rel=1e-6)
    tr = solve_two_level(TwoLevelSystem(0.0, hw, d), p)
    assert tr.w[-1] == pytest.approx(-1.0, abs=1e-3)
    mid = np.argmin(np.abs(tr.t - 0.5 * (p.t_start + p.t_end)))
    assert tr.w[mid] == pytest.approx(1.0, abs=0.02)


def test_generalized_area_flat_model():
    model = TwoBandModel.flat(1.5, 1.0)
    p = PulseSpec(0.075, 1.5, envelope="sine-square", fwhm=40.14979690941458)
    res = generalized_area(model, 0.0, p)
    assert res.area == pytest.approx(2 * math.pi, rel=1e-6)
    assert math.isinf(res.gamma_RP) and res.counting
    assert res.table().shape[1] == 2


def test_generalized_area_ponderomotive_flag():
    model = TwoBandModel.kane(9.0, 0.5, 4.9)
    p = PulseSpec(2.0, 1.8, envelope="sine-square", fwhm=5.0)
    res = generalized_area(model, 0.0, p)
    assert res.gamma_RP < 1 and not res.counting
    assert generalized_area(model, 0.0, p, Up=1e-3).counting
