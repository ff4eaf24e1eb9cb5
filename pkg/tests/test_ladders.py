import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import airy

from blochwave.core import HBAR2_OVER_M0, ConfigError, TightBinding
from blochwave.ladders import (
    airy_ai,
    eta_function,
    fke_absorption,
    fke_theta,
    hybridization_fields,
    kane_ladder,
    localization_lengths,
    ws_fan,
    ws_levels,
    ws_pair,
)

BAND = TightBinding(4.9, (1.2, -1.65, 0.3))


def test_kane_ladder_spacing_and_mean():
    lad = kane_ladder(BAND, 0.2, rungs=range(-2, 3))
    assert lad.E_bar == pytest.approx(1.2, abs=1e-12)
    assert np.allclose(np.diff(lad.energies), 0.2 * 4.9)
    assert lad.hbar_omegaB == pytest.approx(0.98)


def test_kane_ladder_with_intraband_connection():
    # a k-dependent X_nn shifts E_bar by F0 times its zone average
    xnn = lambda k: 0.4 + 0.1 * np.cos(4.9 * k)
    lad = kane_ladder(BAND, 0.3, xnn=xnn)
    ref = 1.2 + 0.3 * quad(lambda k: 0.4 + 0.1 * math.cos(4.9 * k), -math.pi / 4.9, math.pi / 4.9)[0] * 4.9 / (
        2 * math.pi)
    assert lad.E_bar == pytest.approx(ref, abs=1e-12)


def test_kane_ladder_rejects_zero_field():
    with pytest.raises(ConfigError):
        kane_ladder(BAND, 0.0)


@given(st.floats(0.05, 2.0), st.integers(-3, 3))
def test_eta_is_zone_periodic_on_rungs(F0, ell):
    # at a rung energy the phase accumulated across one zone is a multiple of 2 pi
    lad = kane_ladder(BAND, F0, rungs=[ell])
    E = float(lad.energies[0])
    a = BAND.a
    k = np.array([-math.pi / a, math.pi / a])
    eta = eta_function(BAND, F0, E, k)
    assert abs(eta[0] - eta[1]) < 1e-8


def test_eta_not_single_valued_off_rung():
    F0 = 0.5
    E = kane_ladder(BAND, F0, rungs=[0]).E_bar + 0.3 * F0 * BAND.a
    eta = eta_function(BAND, F0, E, np.array([-math.pi / BAND.a, math.pi / BAND.a]))
    assert abs(eta[0] - eta[1]) > 0.5


def test_eta_unit_modulus_and_origin():
    eta = eta_function(BAND, 0.4, 2.0, np.linspace(-0.5, 0.5, 11))
    assert np.allclose(np.abs(eta), 1.0)
    assert eta_function(BAND, 0.4, 2.0, 0.0) == pytest.approx(1.0)


def test_localization_lengths_values_and_arrays():
    l_sc, l_k = localization_lengths(3.3, 3.0, 0.1)
    assert l_sc == pytest.approx(33.0)
    assert l_k == pytest.approx(math.hypot(33.0, 3.0))
    F = np.geomspace(0.01, 20, 7)
    l_sc, l_k = localization_lengths(3.3, 3.0, F)
    assert np.all(np.diff(l_sc) < 0) and np.all(l_k >= 3.0)
    with pytest.raises(ConfigError):
        localization_lengths(3.3, 3.0, 0.0)


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0, 2))
def test_ws_pair_against_eigvalsh(Ec, Ev, V):
    H = np.array([[Ec, V], [V, Ev]])
    assert np.allclose(ws_pair(Ec, Ev, V), np.linalg.eigvalsh(H), atol=1e-12)


def test_ws_levels_matrix_and_validation():
    rungs = [0.0, 1.0, 2.5]
    V = np.array([[0, 0.2, 0.05], [0.2, 0, 0.1j], [0.05, -0.1j, 0]])
    lev = ws_levels(rungs, V)
    assert np.allclose(lev.energies, np.linalg.eigvalsh(np.diag(rungs) + V))
    assert ws_levels(rungs, V, truncation=2).gap == pytest.approx(math.hypot(1.0, 0.4))
    with pytest.raises(ConfigError, match="Hermitian"):
        ws_levels(rungs, np.array([[0, 0.2, 0], [0.1, 0, 0], [0, 0, 0]]))
    with pytest.raises(ConfigError):
        ws_levels(rungs, 0.1)
    with pytest.raises(ConfigError):
        ws_levels(rungs, V, truncation=4)


def test_hybridization_fields():
    f = hybridization_fields(9.0, 4.9, ell_max=3)
    assert f == pytest.approx({1: 9.0 / 4.9, 2: 9.0 / 9.8, 3: 9.0 / 14.7})
    with pytest.raises(ConfigError):
        hybridization_fields(-1.0, 4.9)


def test_ws_fan_uncoupled_is_ladder_union():
    F = [0.3, 0.7]
    rows = ws_fan(4.5, -4.5, 4.9, F, {}, rung_range=range(-1, 2))
    for F0 in F:
        e = rows[rows[:, 0] == F0, 2]
        ref = np.sort(np.concatenate([4.5 + np.arange(-1, 2) * F0 * 4.9, -4.5 + np.arange(-1, 2) * F0 * 4.9]))
        assert np.allclose(e, ref)


def test_ws_fan_coupling_opens_anticrossing():
    # at F0 a = (Ec - Ev)/1 rung 0 of c meets rung 1 of v; Xi[1] splits them by 2 F0 Xi
    F0 = 9.0 / 4.9
    rows = ws_fan(4.5, -4.5, 4.9, [F0], {1: 0.15}, rung_range=range(0, 2))
    e = rows[:, 2]
    pair = np.sort(np.abs(e - 4.5))[:2]
    assert pair == pytest.approx([F0 * 0.15, F0 * 0.15], rel=1e-9)


def test_airy_against_scipy():
    x = np.linspace(-10, 10, 81)
    assert np.allclose(airy_ai(x), airy(x)[0], rtol=1e-6, atol=1e-12)


def test_fke_theta_value():
    assert fke_theta(0.1, 0.2) == pytest.approx((0.01 * HBAR2_OVER_M0 / 0.4) ** (1 / 3))


def test_fke_absorption_normalization_and_monotone():
    Eg, m, F0 = 3.45, 0.2, 0.05
    theta, rel, raw = fke_absorption([Eg - fke_theta(F0, m)], F0, m, Eg)
    assert rel[0] == pytest.approx(1.0)
    w = np.linspace(Eg - 1.0, Eg - 0.05, 30)
    _, rel, _ = fke_absorption(w, F0, m, Eg)
    assert np.all(np.diff(rel[w < Eg - theta]) > 0)


def test_fke_stronger_field_raises_tail():
    w = np.array([3.0])
    _, _, weak = fke_absorption(w, 0.02, 0.2, 3.45)
    _, _, strong = fke_absorption(w, 0.1, 0.2, 3.45)
    assert strong[0] > weak[0]


def test_fke_gap_guard():
    with pytest.raises(ConfigError, match="below Eg"):
        fke_absorption([3.45], 0.05, 0.2, 3.45)
    with pytest.raises(ConfigError):
        fke_absorption([3.0], 0.0, 0.2, 3.45)
