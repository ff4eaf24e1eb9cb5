"""Characteristic frequencies, adiabaticity parameters and regime labels."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import (
    HBAR,
    HBAR2_OVER_M0,
    ConfigError,
    EffectiveMass,
    KaneTwoBand,
    MaterialRecord,
    PulseSpec,
    TightBinding,
)
from .special import j0, j0_zeros

__all__ = [
    "RegimeReport",
    "ponderomotive",
    "ponderomotive_ema",
    "ponderomotive_tb",
    "ponderomotive_kane_numeric",
    "channel_count",
    "adiabaticity_report",
    "crosscheck_resonant_relation",
    "KELDYSH_THRESHOLDS",
    "RABI_THRESHOLDS",
    "DL_PROXIMITY",
]

KELDYSH_THRESHOLDS = (1.0 / 3.0, 3.0)
RABI_THRESHOLDS = (1.0 / 3.0, 3.0)
DL_PROXIMITY = 0.1
_J0_ROOTS = j0_zeros(20)


def ponderomotive_ema(F0: float, photon_energy: float, mass: float, beta: float = 0.0) -> float:
    """Parabolic-band ponderomotive energy, eV.

    ``Up = F0^2 (1 + beta^2) (hbar^2/m0) / (4 m (hbar omega0)^2)``.
    """
    if mass is None or not mass > 0:
        raise ConfigError("EMA ponderomotive energy needs a positive reduced mass")
    return F0 ** 2 * (1.0 + beta ** 2) * HBAR2_OVER_M0 / (4.0 * mass * photon_energy ** 2)


def ponderomotive_tb(F0: float, photon_energy: float, pair: TightBinding, Eg: float | None = None) -> float:
    """Tight-binding ponderomotive energy, eV.

    ``Up = sum_l eps_cv,l J0(l hbar omega_B / hbar omega0) - Eg`` where
    ``pair`` holds the conduction-minus-valence coefficients.  ``Eg``
    defaults to the pair energy at k = 0 (a direct gap at zone centre).
    """
    if not isinstance(pair, TightBinding):
        raise ConfigError("tight-binding ponderomotive energy needs the eps_cv,l sequence")
    gap = float(sum(pair.eps)) if Eg is None else float(Eg)
    x = F0 * pair.a / photon_energy
    return float(sum(e * j0(ell * x) for ell, e in enumerate(pair.eps))) - gap


def ponderomotive_kane_numeric(F0: float, photon_energy: float, band: KaneTwoBand, samples: int = 4096) -> float:
    """Cycle-averaged Kane pair energy minus Eg for a pair born at k = 0."""
    theta = 2 * math.pi * np.arange(samples) / samples
    K = -F0 / photon_energy * np.sin(theta)
    return float(np.mean(band.energy(K)) - band.Eg)


def ponderomotive(pulse: PulseSpec, bands) -> float:
    """Ponderomotive energy for the chosen band model.

    Parameters
    ----------
    pulse : PulseSpec
    bands : EffectiveMass, KaneTwoBand or TightBinding
        ``EffectiveMass`` and ``KaneTwoBand`` use the parabolic formula with
        their (reduced) mass; ``TightBinding`` is read as the cv difference
        series.
    """
    if isinstance(bands, TightBinding):
        return ponderomotive_tb(pulse.F0, pulse.photon_energy, bands)
    if isinstance(bands, (EffectiveMass, KaneTwoBand)):
        return ponderomotive_ema(pulse.F0, pulse.photon_energy, abs(bands.mass), pulse.beta)
    raise ConfigError(f"unsupported band model {type(bands).__name__}")


def channel_count(Eg: float, Up: float, photon_energy: float) -> tuple[int, bool]:
    """Minimum photon number floor((Eg + Up)/hbar omega0 + 1) and a boundary flag."""
    x = (Eg + Up) / photon_energy
    return int(math.floor(x + 1.0)), bool(abs(x - round(x)) < 1e-12)


@dataclass(frozen=True)
class RegimeReport:
    """All dimensionless strong-field parameters for one pulse and material."""

    N: float
    gamma_K: float
    gamma_NP: float
    gamma_DL: float
    gamma_BH: float
    gamma_BP: float
    gamma_RF0: float
    gamma_RFg: float
    gamma_RP: float
    gamma_RB: float
    hbar_omegaB: float
    hbar_omegaR: float
    Up: float
    N_tilde: int
    labels: tuple[str, ...]
    flags: tuple[str, ...] = ()
    Up_model: str = "ema"
    Up_kane_numeric: float | None = None
    gamma_K_kane_numeric: float | None = None
    dl_nearest_root: float | None = None
    photon_energy: float = float("nan")
    Eg: float = float("nan")

    def to_dict(self) -> dict:
        out = asdict(self)
        out["labels"] = list(self.labels)
        out["flags"] = list(self.flags)
        for key, val in out.items():
            if isinstance(val, float) and math.isinf(val):
                out[key] = "inf"
        return out


def _safe_div(num: float, den: float) -> float:
    return math.inf if den == 0 else num / den


def adiabaticity_report(material: MaterialRecord, pulse: PulseSpec, bands=None) -> RegimeReport:
    """Evaluate every adiabaticity parameter and attach regime labels.

    ``bands`` selects the ponderomotive model.  When omitted, a parabolic
    band is used whose reduced mass comes from ``material.m_reduced`` or,
    failing that, from inverting the interband dipole estimate
    ``xi = hbar / (2 sqrt(m Eg))``; the latter is flagged.
    """
    flags = []
    if bands is None:
        if material.m_reduced is not None:
            bands = EffectiveMass(material.m_reduced)
        else:
            if not material.xi_max > 0:
                raise ConfigError("need a band model, a reduced mass or a nonzero xi_max")
            m = HBAR2_OVER_M0 / (4.0 * material.xi_max ** 2 * material.Eg)
            bands = EffectiveMass(m)
            flags.append("mass-from-dipole-estimate")
    up = ponderomotive(pulse, bands)
    model = "tight-binding" if isinstance(bands, TightBinding) else "ema"
    up_kane = gamma_k_kane = None
    if isinstance(bands, KaneTwoBand):
        up_kane = ponderomotive_kane_numeric(pulse.F0, pulse.photon_energy, bands)
        gamma_k_kane = math.sqrt(material.Eg / (4 * up_kane)) if up_kane > 0 else math.inf
    hw0 = pulse.photon_energy
    Eg = material.Eg
    hwB = pulse.F0 * material.a
    hwR = pulse.F0 * material.xi_max
    if up <= 0:
        flags.append("zero-ponderomotive-energy")
        up = max(up, 0.0)
    gamma_K = math.sqrt(Eg / (4 * up)) if up > 0 else math.inf
    gamma_DL = hwB / hw0
    gamma_RF0 = hwR / hw0
    n_tilde, boundary = channel_count(Eg, up, hw0)
    if boundary:
        flags.append("channel-boundary")
    labels = []
    lo, hi = KELDYSH_THRESHOLDS
    labels.append("multiphoton" if gamma_K > hi else "adiabatic-tunneling" if gamma_K < lo else "diabatic-tunneling")
    lo, hi = RABI_THRESHOLDS
    labels.append("ERF" if gamma_RF0 < lo else "rabi-tunneling" if gamma_RF0 > hi else "CWRF")
    nearest = float(_J0_ROOTS[np.argmin(np.abs(_J0_ROOTS - gamma_DL))])
    if abs(gamma_DL - nearest) < DL_PROXIMITY:
        labels.append("near-dynamic-localization")
    return RegimeReport(
        N=Eg / hw0,
        gamma_K=gamma_K,
        gamma_NP=up / hw0,
        gamma_DL=gamma_DL,
        gamma_BH=hwB / Eg,
        gamma_BP=_safe_div(hwB, up),
        gamma_RF0=gamma_RF0,
        gamma_RFg=hwR / Eg,
        gamma_RP=_safe_div(hwR, up),
        gamma_RB=material.xi_max / material.a,
        hbar_omegaB=hwB,
        hbar_omegaR=hwR,
        Up=up,
        N_tilde=n_tilde,
        labels=tuple(labels),
        flags=tuple(flags),
        Up_model=model,
        Up_kane_numeric=up_kane,
        gamma_K_kane_numeric=gamma_k_kane,
        dl_nearest_root=nearest,
        photon_energy=hw0,
        Eg=Eg,
    )


def crosscheck_resonant_relation(report: RegimeReport, beta: float = 0.0) -> float:
    """Relative residual of ``gamma_K = 1 / (2 gamma_RF0 sqrt(1 + beta^2))``."""
    if report.gamma_RF0 == 0 or math.isinf(report.gamma_K):
        return math.nan
    rhs = 1.0 / (2.0 * report.gamma_RF0 * math.sqrt(1.0 + beta ** 2))
    return abs(report.gamma_K - rhs) / report.gamma_K
