import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import j0 as sp_j0

from blochwave.core import HBAR2_OVER_M0, ConfigError, EffectiveMass, KaneTwoBand, PulseSpec, TightBinding, material_lookup
from blochwave.regimes import (
    adiabaticity_report,
    channel_count,
    crosscheck_resonant_relation,
    ponderomotive,
    ponderomotive_ema,
    ponderomotive_kane_numeric,
    ponderomotive_tb,
)


def _mono(F0, hw, beta=0.0):
    return PulseSpec.cycles(F0, hw, 10, beta=beta)


def test_ponderomotive_ema_value():
    # F0^2 hbar^2/(4 m hw^2 / e^2) with hbar^2/m0 = 7.62 eV Å^2
    assert ponderomotive_ema(0.1, 1.65, 0.5) == pytest.approx(0.013994, rel=1e-4)


@given(st.floats(0.01, 2.0), st.floats(0.5, 3.0), st.floats(0.05, 2.0), st.floats(-1.0, 1.0))
def test_ponderomotive_ema_against_cycle_average(F0, hw, m, beta):
    # oracle: cycle-averaged kinetic energy hbar^2 A^2/(2 m) of the quiver motion
    def kinetic(theta):
        Ax = F0 / hw * math.sin(theta)
        Ay = -beta * F0 / hw * math.cos(theta)
        return HBAR2_OVER_M0 * (Ax ** 2 + Ay ** 2) / (2 * m)

    ref = quad(kinetic, 0, 2 * math.pi)[0] / (2 * math.pi)
    assert ponderomotive_ema(F0, hw, m, beta) == pytest.approx(ref, rel=1e-10)


@given(st.floats(0.01, 5.0))
def test_ponderomotive_tb_bessel_form(F0):
    pair = TightBinding(4.9, (10.65, -1.65, 0.2))
    hw = 1.65
    Eg = float(np.min(pair.energy(np.linspace(-math.pi / 4.9, math.pi / 4.9, 20001))))
    ref = 10.65 - 1.65 * sp_j0(F0 * 4.9 / hw) + 0.2 * sp_j0(2 * F0 * 4.9 / hw) - Eg
    assert ponderomotive_tb(F0, hw, pair, Eg) == pytest.approx(ref, abs=1e-10)


def test_ponderomotive_tb_default_gap_is_zone_center():
    pair = TightBinding(4.9, (10.65, -1.65))
    assert ponderomotive_tb(1e-6, 1.65, pair) == pytest.approx(0.0, abs=1e-10)


def test_ponderomotive_kane_numeric_parabolic_limit():
    band = KaneTwoBand(9.0, 0.5)
    weak = ponderomotive_kane_numeric(0.01, 1.8, band)
    assert weak == pytest.approx(ponderomotive_ema(0.01, 1.8, 0.5), rel=1e-3)
    # nonparabolicity lowers the gain at strong field
    assert ponderomotive_kane_numeric(2.0, 1.8, band) < ponderomotive_ema(2.0, 1.8, 0.5)


def test_ponderomotive_dispatch():
    p = _mono(0.2, 1.65)
    assert ponderomotive(p, EffectiveMass(0.5)) == pytest.approx(ponderomotive_ema(0.2, 1.65, 0.5))
    with pytest.raises(ConfigError):
        ponderomotive(p, object())


@pytest.mark.parametrize("Eg,Up,hw,expected", [(9.0, 0.0, 1.8, 6), (9.0, 0.3, 1.65, 6), (9.0, 2.0, 1.8, 7)])
def test_channel_count(Eg, Up, hw, expected):
    assert channel_count(Eg, Up, hw)[0] == expected


def test_channel_count_boundary_flag():
    assert channel_count(9.0, 0.0, 1.8) == (6, True)
    assert channel_count(9.0, 0.1, 1.8)[1] is False


@given(st.floats(0.1, 20.0), st.floats(0.0, 10.0), st.floats(0.5, 3.0))
def test_channel_count_monotone_in_up(Eg, Up, hw):
    assert channel_count(Eg, Up + 0.5, hw)[0] >= channel_count(Eg, Up, hw)[0]


def test_report_sio2_750nm():
    rep = adiabaticity_report(material_lookup("SiO2"), PulseSpec.cycles(1.0, 1239.84198 / 750, 10))
    assert rep.gamma_DL == pytest.approx(2.9641, abs=1e-4)
    assert rep.hbar_omegaB == pytest.approx(4.9)
    assert rep.gamma_RB == pytest.approx(0.37 / 4.9)
    assert "mass-from-dipole-estimate" in rep.flags
    d = rep.to_dict()
    assert set(d) >= {"gamma_K", "gamma_NP", "gamma_DL", "gamma_BH", "gamma_BP", "gamma_RF0", "gamma_RFg",
                      "gamma_RP", "gamma_RB", "N_tilde", "labels"}


@pytest.mark.parametrize("F0,label", [(0.01, "multiphoton"), (3.0, "adiabatic-tunneling")])
def test_keldysh_labels(F0, label):
    rep = adiabaticity_report(material_lookup("GaAs"), _mono(F0, 1.0), EffectiveMass(0.06))
    assert rep.labels[0] == label


def test_zero_field_report_is_finite_and_flagged():
    rep = adiabaticity_report(material_lookup("GaN"), _mono(0.0, 1.5), EffectiveMass(0.2))
    assert math.isinf(rep.gamma_K)
    assert "zero-ponderomotive-energy" in rep.flags
    assert rep.to_dict()["gamma_K"] == "inf"


def test_near_dynamic_localization_label():
    mat = material_lookup("SiO2")
    hw = 1.65
    F0 = 2.404825557695773 * hw / mat.a
    rep = adiabaticity_report(mat, _mono(F0, hw), EffectiveMass(0.2))
    assert "near-dynamic-localization" in rep.labels


@given(st.floats(0.05, 2.0), st.floats(0.0, 1.0))
def test_resonant_relation_when_mass_matches_dipole_estimate(F0, beta):
    # with m from xi = hbar / (2 sqrt(m Eg)) the two forms of gamma_K coincide
    mat = material_lookup("ZnO")
    rep = adiabaticity_report(mat, _mono(F0, 1.55, beta))
    assert crosscheck_resonant_relation(rep, beta) < 1e-12
