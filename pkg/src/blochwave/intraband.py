"""Single-band field-driven kinematics, harmonic spectra, charge and energy transfer."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .core import (
    HBAR,
    HBAR_OVER_M0,
    ConfigError,
    EffectiveMass,
    KaneTwoBand,
    PulseSpec,
    TightBinding,
)
from .special import j0

__all__ = [
    "TrajectoryResult",
    "HarmonicSpectrum",
    "MIN_SAMPLES_PER_CYCLE",
    "trajectory",
    "cumulative_richardson",
    "cycle_drift",
    "cycle_drift_analytic",
    "drift_scale",
    "hhg_spectrum",
    "transferred_charge",
    "energy_transfer",
    "EnergyTransfer",
    "rms_relative_difference",
]

MIN_SAMPLES_PER_CYCLE = 16


@dataclass(frozen=True)
class TrajectoryResult:
    """Time samples (fs), K (1/Å), group velocity (Å/fs) and displacement (Å)."""

    t: np.ndarray
    K: np.ndarray
    v: np.ndarray
    dx: np.ndarray
    richardson_error: float = 0.0

    def table(self) -> np.ndarray:
        return np.column_stack([self.t, self.K, self.v, self.dx])


def cumulative_richardson(func, t: np.ndarray, rtol: float = 1e-8, max_level: int = 12):
    """Cumulative integral of ``func`` sampled at ``t`` with Richardson control.

    The trapezoid rule is applied on the sample grid refined by successive
    factors of two; two consecutive levels give the Richardson estimate
    ``T_h + (T_h - T_2h)/3`` and its error bound.  Refinement stops when the
    bound falls below ``rtol`` times the largest magnitude of the result.

    Returns
    -------
    values : ndarray
        Extrapolated cumulative integral at ``t`` (zero at ``t[0]``).
    error : float
        Final error estimate (absolute).
    """
    t = np.asarray(t, dtype=float)
    prev = None
    for level in range(max_level + 1):
        sub = 2 ** level
        fine = np.concatenate(
            [np.linspace(a, b, sub, endpoint=False) for a, b in zip(t[:-1], t[1:])] + [t[-1:]]
        ) if sub > 1 else t
        cur = cumulative_trapezoid(func(fine), fine, initial=0.0)[::sub]
        if prev is not None:
            corr = (cur - prev) / 3.0
            err = float(np.max(np.abs(corr)))
            scale = max(float(np.max(np.abs(cur))), np.finfo(float).tiny)
            if err <= rtol * scale:
                return cur + corr, err
        prev = cur
    return cur, err


def _check_sampling(pulse: PulseSpec, samples: int):
    per_cycle = samples / pulse.n_cycles
    if per_cycle < MIN_SAMPLES_PER_CYCLE:
        need = int(math.ceil(MIN_SAMPLES_PER_CYCLE * pulse.n_cycles))
        raise ConfigError(
            f"undersampled trajectory: {per_cycle:.1f} samples per carrier cycle; "
            f"use at least {MIN_SAMPLES_PER_CYCLE} per cycle (samples >= {need})"
        )


def trajectory(band, k0: float, pulse: PulseSpec, samples: int = 4096, rtol: float = 1e-8) -> TrajectoryResult:
    """Semiclassical single-band trajectory over the pulse window.

    For a parabolic band the closed forms ``v = hbar K/m`` and
    ``dx = (hbar k0 (t - t_start) + int A dt)/m`` are used (the time
    integral of A by Richardson-controlled quadrature); otherwise the group
    velocity of the band is integrated with Richardson control.
    """
    if not isinstance(band, (EffectiveMass, TightBinding, KaneTwoBand)):
        raise ConfigError("trajectory needs an EffectiveMass, TightBinding or KaneTwoBand band")
    _check_sampling(pulse, samples)
    t = np.linspace(pulse.t_start, pulse.t_end, int(samples))
    K = k0 + pulse.vector_potential(t) / HBAR
    v = band.velocity(K)
    if isinstance(band, EffectiveMass):
        intA, err = cumulative_richardson(pulse.vector_potential, t, rtol)
        dx = HBAR_OVER_M0 * (k0 * (t - t[0]) + intA / HBAR) / band.mass
        err = HBAR_OVER_M0 * err / HBAR / abs(band.mass)
    else:
        dx, err = cumulative_richardson(lambda s: band.velocity(k0 + pulse.vector_potential(s) / HBAR), t, rtol)
    return TrajectoryResult(t=t, K=K, v=v, dx=dx, richardson_error=err)


def rms_relative_difference(values, reference) -> float:
    """sqrt(mean((values - reference)^2)) / sqrt(mean(reference^2))."""
    values = np.asarray(values, dtype=float)
    reference = np.asarray(reference, dtype=float)
    scale = math.sqrt(float(np.mean(reference ** 2)))
    if scale == 0:
        raise ConfigError("reference series is identically zero")
    return math.sqrt(float(np.mean((values - reference) ** 2))) / scale


def _nearest_neighbour(band: TightBinding) -> float:
    if not isinstance(band, TightBinding) or band.l_max != 1:
        raise ConfigError("cycle drift needs a nearest-neighbour tight-binding band (l_max = 1)")
    return band.eps[1]


def drift_scale(band: TightBinding, photon_energy: float) -> float:
    """Single-cycle free drift scale |eps1| a T0 / hbar, Å."""
    eps1 = _nearest_neighbour(band)
    period = 2 * math.pi * HBAR / photon_energy
    return abs(eps1) * band.a * period / HBAR


def cycle_drift(band: TightBinding, k0: float, gamma_DL: float, photon_energy: float = 1.65,
                samples: int = 256) -> float:
    """Net displacement over one carrier period of F = F0 cos(omega0 t), Å.

    The field amplitude is fixed by ``gamma_DL = F0 a / hbar omega0``.  The
    integrand is periodic and smooth, so the uniform periodic rule with
    ``samples`` points converges exponentially.
    """
    _nearest_neighbour(band)
    period = 2 * math.pi * HBAR / photon_energy
    theta = 2 * math.pi * np.arange(samples) / samples
    K = k0 - gamma_DL / band.a * np.sin(theta)
    return float(np.mean(band.velocity(K)) * period)


def cycle_drift_analytic(band: TightBinding, k0: float, gamma_DL: float, photon_energy: float = 1.65) -> float:
    """Closed form -(eps1 a T0/hbar) sin(k0 a) J0(gamma_DL), Å."""
    eps1 = _nearest_neighbour(band)
    period = 2 * math.pi * HBAR / photon_energy
    return -(eps1 * band.a * period / HBAR) * math.sin(k0 * band.a) * j0(gamma_DL)


@dataclass(frozen=True)
class HarmonicSpectrum:
    """Harmonic order grid, spectral intensity and cutoff estimate."""

    order: np.ndarray
    intensity: np.ndarray
    cutoff_estimate: float
    window: str = "hann (periodic, full record)"

    @property
    def intensity_db(self) -> np.ndarray:
        peak = float(np.max(self.intensity)) or 1.0
        with np.errstate(divide="ignore"):
            return 10.0 * np.log10(np.maximum(self.intensity / peak, 1e-300))

    def band_power(self, lo: float, hi: float) -> float:
        sel = (self.order >= lo) & (self.order < hi)
        return float(np.sum(self.intensity[sel]))


def hhg_spectrum(band, k0: float, pulse: PulseSpec, samples_per_cycle: int = 256) -> HarmonicSpectrum:
    """Intraband harmonic spectrum |FFT(w v)|^2 with a periodic Hann window.

    The record spans the full pulse window sampled uniformly (endpoint
    excluded) so that an integer number of cycles maps harmonics onto bins.
    """
    if pulse.n_cycles < 8 - 1e-9:
        raise ConfigError(
            f"pulse spans {pulse.n_cycles:.2f} cycles; harmonic spectra need >= 8 "
            "(use a monochromatic envelope with a longer window)"
        )
    n = int(round(pulse.n_cycles * samples_per_cycle))
    t = pulse.t_start + pulse.duration * np.arange(n) / n
    K = k0 + pulse.vector_potential(t) / HBAR
    v = band.velocity(K)
    window = 0.5 - 0.5 * np.cos(2 * math.pi * np.arange(n) / n)
    spec = np.abs(np.fft.rfft(v * window)) ** 2
    order = np.arange(spec.size) / pulse.n_cycles
    if isinstance(band, TightBinding):
        cutoff = band.l_max * pulse.F0 * band.a / pulse.photon_energy
    else:
        cutoff = 1.0
    return HarmonicSpectrum(order=order, intensity=spec, cutoff_estimate=cutoff)


def transferred_charge(populations: np.ndarray, t: np.ndarray, masses, drive: PulseSpec,
                       delay: float, area: float) -> float:
    """Charge transferred by injected carriers moving in a delayed drive.

    ``Q = sum_{n,k} 2 S / m_n * int f_n(k, t) A(t - delay) dt`` with the
    elementary charge and m0 absorbed by the unit system (a factor
    ``hbar/m0 / hbar`` converts V·fs/Å into velocity).  ``populations`` has
    shape (bands, k, time) and carries occupation densities per Å^3, so Q is
    in units of e.
    """
    f = np.asarray(populations, dtype=float)
    t = np.asarray(t, dtype=float)
    if f.ndim == 2:
        f = f[None]
    if f.ndim != 3 or f.shape[-1] != t.size:
        raise ConfigError(
            f"population grid mismatch: expected (bands, k, {t.size}) samples, got {f.shape}"
        )
    m = np.atleast_1d(np.asarray(masses, dtype=float))
    if m.size != f.shape[0] or np.any(m == 0):
        raise ConfigError("need one nonzero mass per band")
    A = drive.vector_potential(t - delay)
    per_band = np.trapezoid(f.sum(axis=1) * A, t, axis=-1)
    return float(2.0 * area * HBAR_OVER_M0 / HBAR * np.sum(per_band / m))


@dataclass(frozen=True)
class EnergyTransfer:
    W: np.ndarray
    W_max: float
    W_irrev: float


def energy_transfer(field, polarization=None, t=None, dt: float | None = None, current=None) -> EnergyTransfer:
    """Work done by the field on the medium, W(t) = int F dP/dt dt.

    Pass either ``polarization`` (centered differences give dP/dt) or the
    current density ``current`` directly.  Times come from ``t`` or a
    uniform step ``dt``.
    """
    F = np.asarray(field, dtype=float)
    if F.size < 3:
        raise ConfigError("energy transfer needs at least 3 samples")
    if t is None:
        if dt is None:
            raise ConfigError("pass sample times t or a uniform step dt")
        t = np.arange(F.size) * float(dt)
    t = np.asarray(t, dtype=float)
    if t.shape != F.shape:
        raise ConfigError("field and time grids differ")
    steps = np.diff(t)
    if np.any(steps <= 0) or np.ptp(steps) > 1e-9 * np.mean(steps):
        raise ConfigError("energy transfer needs a common uniform time grid")
    if current is not None:
        J = np.asarray(current, dtype=float)
    elif polarization is not None:
        P = np.asarray(polarization, dtype=float)
        if P.shape != F.shape:
            raise ConfigError("field and polarization grids differ")
        J = np.gradient(P, t)
    else:
        raise ConfigError("pass polarization or current")
    W = cumulative_trapezoid(F * J, t, initial=0.0)
    return EnergyTransfer(W=W, W_max=float(np.max(W)), W_irrev=float(W[-1]))
