import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blochwave.core import HBAR, HBAR2_OVER_M0, ConfigError, EffectiveMass, NumericalError, PulseSpec
from blochwave.geometry import (
    TESLA,
    anomalous_trajectory,
    chern_and_curvature,
    chern_model,
    eigenvectors,
    ssh_model,
    wilson_loop_phase,
    ws_ladder_with_zak,
    zak_phase,
)


@pytest.mark.parametrize("u,C", [(-1.0, 1), (-3.0, 0), (1.0, -1), (3.0, 0)])
def test_chern_numbers(u, C):
    res = chern_and_curvature(chern_model(u), n=60)
    assert res.chern == C
    assert res.residual < 1e-9 and not res.flagged


def test_bands_carry_opposite_chern_and_occupied_sum():
    lo = chern_and_curvature(chern_model(-1.0), band=0, n=48)
    hi = chern_and_curvature(chern_model(-1.0), band=1, n=48)
    assert lo.chern == -hi.chern
    both = chern_and_curvature(chern_model(-1.0), band=0, n=48, occupied=[0, 1])
    assert both.sigma_xy == 0.0
    assert lo.report()["sigma_xy_units"] == "e^2/hbar"


@settings(max_examples=10)
@given(st.integers(0, 2 ** 32 - 1))
def test_chern_and_curvature_gauge_invariant(seed):
    rng = np.random.default_rng(seed)
    model = chern_model(-1.0)
    base = chern_and_curvature(model, n=32)
    phases = rng.uniform(0, 2 * math.pi, (32, 32))
    res = chern_and_curvature(model, n=32, gauge_phases=phases)
    assert res.chern == base.chern
    assert np.allclose(res.curvature, base.curvature, atol=1e-10)


def test_quantum_metric_is_psd_and_bounds_curvature():
    res = chern_and_curvature(chern_model(-1.2), n=64)
    ev = np.linalg.eigvalsh(res.metric)
    assert ev.min() > -1e-12
    # tr g >= |Omega| holds pointwise; allow discretization slack on the plaquette average
    tr = np.trace(res.metric, axis1=-2, axis2=-1)
    assert np.mean(tr) >= np.mean(np.abs(res.curvature)) * 0.95


def test_total_curvature_is_chern_times_two_pi():
    res = chern_and_curvature(chern_model(-1.0), n=40)
    dk = 2 * math.pi / 40
    assert np.sum(res.curvature) * dk ** 2 == pytest.approx(2 * math.pi * res.chern, abs=1e-9)


def test_gap_closure_raises():
    with pytest.raises(NumericalError):
        chern_and_curvature(chern_model(-2.0), n=40)
    with pytest.raises(ConfigError):
        chern_and_curvature(ssh_model(1.0, 2.0))
    with pytest.raises(ConfigError):
        eigenvectors(ssh_model(1.0, 2.0), np.zeros((3, 1)), 2)


@pytest.mark.parametrize("t1,t2,zak", [(1.0, 2.0, math.pi), (2.0, 1.0, 0.0), (0.3, 1.0, math.pi)])
def test_zak_phase_ssh(t1, t2, zak):
    assert zak_phase(ssh_model(t1, t2), n=200) == pytest.approx(zak, abs=1e-9)


@settings(max_examples=10)
@given(st.integers(0, 2 ** 32 - 1))
def test_zak_phase_gauge_invariant(seed):
    phases = np.random.default_rng(seed).uniform(0, 2 * math.pi, 128)
    model = ssh_model(0.7, 1.3)
    assert zak_phase(model, n=128, gauge_phases=phases) == pytest.approx(zak_phase(model, n=128), abs=1e-9)


def test_wilson_loop_of_rotating_spinor():
    # an equatorial loop of spinors encloses solid angle 2 pi: Berry phase pi
    phi = np.linspace(0, 2 * math.pi, 400, endpoint=False)
    states = np.stack([np.ones_like(phi), np.exp(1j * phi)], axis=-1) / math.sqrt(2)
    assert abs(wilson_loop_phase(states)) == pytest.approx(math.pi, abs=1e-9)
    # a spinor tilted by theta encloses solid angle 2 pi (1 - cos theta)
    th = 0.6
    s = np.stack([np.full_like(phi, math.cos(th / 2)), math.sin(th / 2) * np.exp(1j * phi)], axis=-1)
    assert abs(wilson_loop_phase(s)) == pytest.approx(math.pi * (1 - math.cos(th)), rel=1e-4)


def test_ws_ladder_zak_shift():
    plain = ws_ladder_with_zak(0.0, 4.0, 0.1, 0.0)
    shifted = ws_ladder_with_zak(0.0, 4.0, 0.1, math.pi)
    assert np.allclose(shifted - plain, 0.2)
    with pytest.raises(ConfigError):
        ws_ladder_with_zak(0.0, 4.0, 0.0, 0.0)


def test_anomalous_velocity_sign_and_magnitude():
    band = EffectiveMass(1.0)
    F, Om = 0.05, 2.0
    tr = anomalous_trajectory(band, Om, [F, 0.0], [0.0, 0.0], duration=4.0, samples=41)
    vy = np.gradient(tr.r[:, 1], tr.t)
    assert np.allclose(vy, -F * Om / HBAR, rtol=1e-8)
    # the x motion is ordinary acceleration against the field
    assert tr.r[-1, 0] == pytest.approx(-0.5 * HBAR2_OVER_M0 / HBAR ** 2 * F * 4.0 ** 2, rel=1e-8)


def test_zero_curvature_reduces_to_group_velocity():
    band = EffectiveMass(0.4)
    p = PulseSpec(0.2, 1.5, envelope="sine-square", fwhm=4.0)
    tr = anomalous_trajectory(band, 0.0, p, [0.05, 0.0], duration=p.duration, t_start=p.t_start, samples=401)
    K = 0.05 + p.vector_potential(tr.t) / HBAR
    assert np.allclose(tr.K[:, 0], K, atol=1e-12)
    vx = HBAR2_OVER_M0 * K / 0.4 / HBAR
    from scipy.integrate import cumulative_simpson
    assert np.allclose(tr.r[:, 0], cumulative_simpson(vx, x=tr.t, initial=0.0), atol=1e-6)
    assert np.allclose(tr.r[:, 1], 0.0)


def test_magnetic_field_conserves_band_energy():
    band = EffectiveMass(0.2)
    tr = anomalous_trajectory(band, 0.0, [0.0, 0.0], [0.1, 0.0], duration=50.0, B=20 * TESLA, samples=201)
    E = band.energy_vec(tr.K)
    assert np.max(np.abs(E - E[0])) < 1e-9 * E[0]
    # cyclotron motion: K rotates, so its direction changes
    assert abs(tr.K[-1, 1]) > 1e-4


def test_magnetic_field_with_curvature_converges():
    band = EffectiveMass(0.5)
    tr = anomalous_trajectory(band, 0.5, [0.01, 0.0], [0.0, 0.0], duration=5.0, B=10 * TESLA, samples=51)
    assert np.all(np.isfinite(tr.r))


def test_anomalous_needs_2d_or_3d():
    with pytest.raises(ConfigError):
        anomalous_trajectory(EffectiveMass(1.0), 1.0, [0.1], [0.0])
