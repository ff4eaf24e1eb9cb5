"""Two-level strong-drive physics and the generalized Rabi frequency.

Amplitude convention: with ``omega21 = (E2 - E1)/hbar`` the interaction
picture amplitudes obey

    i hbar da1/dt = F(t) d12 exp(-i omega21 t) a2
    i hbar da2/dt = F(t) d12 exp(+i omega21 t) a1

with a real, non-negative dipole ``d12``; the system starts in level 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp, trapezoid

from .core import HBAR, ConfigError, NumericalError, PulseSpec
from .interband import TwoBandModel

__all__ = [
    "TwoLevelSystem",
    "BlochTrajectory",
    "RWAResult",
    "rwa_suite",
    "solve_two_level",
    "AreaResult",
    "generalized_area",
    "envelope_area",
    "RWA_ADVISORY",
]

RWA_ADVISORY = 0.1


@dataclass(frozen=True)
class TwoLevelSystem:
    """Energies E1 < E2 (eV) and dipole length d12 >= 0 (Å)."""

    E1: float
    E2: float
    d12: float

    def __post_init__(self):
        if not self.E2 > self.E1:
            raise ConfigError("two-level system needs E2 > E1")
        if not self.d12 >= 0:
            raise ConfigError("dipole d12 must be non-negative")

    @property
    def omega21(self) -> float:
        return (self.E2 - self.E1) / HBAR


@dataclass(frozen=True)
class RWAResult:
    """Rotating-wave analytics for a constant drive (frequencies in eV)."""

    hbar_omegaR: float
    hbar_OmegaR: float
    detuning: float
    dressed: tuple[float, float, float, float]
    mollow: tuple[float, float, float]
    rwa_advisory: bool

    def w_generalized(self, t):
        """w(t) = -cos(Omega_R t) with the generalized Rabi frequency."""
        return -np.cos(self.hbar_OmegaR / HBAR * np.asarray(t, dtype=float))

    def w_full(self, t):
        """Standard RWA solution including the detuning contrast factor."""
        t = np.asarray(t, dtype=float)
        if self.hbar_OmegaR == 0:
            return -np.ones_like(t)
        contrast = (self.hbar_omegaR / self.hbar_OmegaR) ** 2
        return -1.0 + 2.0 * contrast * np.sin(0.5 * self.hbar_OmegaR / HBAR * t) ** 2


def rwa_suite(sys: TwoLevelSystem, F0: float, photon_energy: float) -> RWAResult:
    """Rabi frequencies, dressed levels and Mollow line positions.

    Dressed levels are ``E1 + (Delta -+ Omega)/2 hbar`` and
    ``E2 - (Delta -+ Omega)/2 hbar`` with ``Delta = omega21 - omega0``; the
    Mollow triplet sits at ``omega0`` and ``omega0 +- Omega``.
    """
    hwr = F0 * sys.d12
    delta = (sys.E2 - sys.E1) - photon_energy
    hOm = math.hypot(hwr, delta)
    dressed = (
        sys.E1 + 0.5 * (delta - hOm),
        sys.E1 + 0.5 * (delta + hOm),
        sys.E2 - 0.5 * (delta + hOm),
        sys.E2 - 0.5 * (delta - hOm),
    )
    mollow = (photon_energy - hOm, photon_energy, photon_energy + hOm)
    return RWAResult(hbar_omegaR=hwr, hbar_OmegaR=hOm, detuning=delta, dressed=dressed, mollow=mollow,
                     rwa_advisory=hwr / photon_energy > RWA_ADVISORY)


@dataclass(frozen=True)
class BlochTrajectory:
    """Bloch-vector samples u, v, w at times t (fs)."""

    t: np.ndarray
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    @property
    def norm(self) -> np.ndarray:
        return np.sqrt(self.u ** 2 + self.v ** 2 + self.w ** 2)

    def table(self) -> np.ndarray:
        return np.column_stack([self.t, self.u, self.v, self.w])


def solve_two_level(sys: TwoLevelSystem, pulse: PulseSpec, rtol: float = 1e-10, atol: float = 1e-12,
                    samples: int = 2001, method: str = "DOP853") -> BlochTrajectory:
    """Exact numerical two-level dynamics without the rotating-wave approximation."""
    w21 = sys.omega21
    d = sys.d12

    def rhs(t, y):
        a1, a2 = y
        F = float(pulse.field(t))
        c = F * d / HBAR
        return np.array([-1j * c * np.exp(-1j * w21 * t) * a2, -1j * c * np.exp(1j * w21 * t) * a1])

    t_eval = np.linspace(pulse.t_start, pulse.t_end, int(samples))
    max_step = pulse.period / 8
    sol = solve_ivp(rhs, (pulse.t_start, pulse.t_end), np.array([1.0 + 0j, 0.0 + 0j]), method=method,
                    t_eval=t_eval, rtol=rtol, atol=atol, max_step=max_step)
    if not sol.success:
        raise NumericalError(f"two-level integration failed at t = {sol.t[-1]:.6g} fs: {sol.message}")
    a1, a2 = sol.y
    u = 2 * np.real(np.conj(a1) * a2)
    v = 2 * np.imag(np.conj(a2) * a1)
    w = np.abs(a2) ** 2 - np.abs(a1) ** 2
    return BlochTrajectory(t=sol.t, u=u, v=v, w=w)


def envelope_area(pulse: PulseSpec, d12: float, t=None, samples: int = 20001) -> np.ndarray:
    """Cumulative envelope area theta(t) = (d12/hbar) int F0 g(t') dt'."""
    from scipy.integrate import cumulative_trapezoid

    if t is None:
        t = np.linspace(pulse.t_start, pulse.t_end, samples)
    t = np.asarray(t, dtype=float)
    return cumulative_trapezoid(pulse.envelope_amplitude(t) * d12 / HBAR, t, initial=0.0)


@dataclass(frozen=True)
class AreaResult:
    """Generalized Rabi frequency series and pulse area."""

    t: np.ndarray
    hbar_OmegaR: np.ndarray
    area: float
    gamma_RP: float
    counting: bool

    def table(self) -> np.ndarray:
        return np.column_stack([self.t, self.hbar_OmegaR])


def generalized_area(model: TwoBandModel, k: float, pulse: PulseSpec, Up: float | None = None,
                     samples: int = 20001) -> AreaResult:
    """Generalized Rabi frequency and pulse area for one crystal momentum.

    ``hbar Omega_R(t) = sqrt((F_env(t) |xi_cv(K(t))|)^2 + (Ecv(K(t)) - hbar omega0)^2)``
    with ``F_env = F0 g(t)`` the field envelope.  The area is the
    trapezoid integral of Omega_R over the pulse window.  ``gamma_RP`` uses
    ``Up`` if given (otherwise the parabolic value from ``model.mass``);
    the area is marked non-counting when ``gamma_RP <= 1``.
    """
    from .regimes import ponderomotive_ema

    t = np.linspace(pulse.t_start, pulse.t_end, int(samples))
    K = k + pulse.vector_potential(t) / HBAR
    wr = pulse.envelope_amplitude(t) * np.abs(model.dipole(K))
    delta = model.Ecv(K) - pulse.photon_energy
    hOm = np.hypot(wr, delta)
    area = float(trapezoid(hOm, t) / HBAR)
    if Up is None:
        Up = ponderomotive_ema(pulse.F0, pulse.photon_energy, model.mass, pulse.beta) if model.mass else 0.0
    peak = pulse.F0 * float(np.max(np.abs(model.dipole(K))))
    gamma_rp = math.inf if Up == 0 else peak / Up
    return AreaResult(t=t, hbar_OmegaR=hOm, area=area, gamma_RP=gamma_rp, counting=gamma_rp > 1)
