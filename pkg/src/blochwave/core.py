"""Units, materials, pulse waveforms, band dispersions and kinematics.

Unit system: energies in eV, times in fs, lengths in Å, fields in V/Å, and
the elementary charge set to 1 so that field times length is an energy in eV.
The vector potential is then measured in V·fs/Å and ``A/hbar`` is a
wavenumber in 1/Å.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

__all__ = [
    "HBAR",
    "HBAR2_OVER_M0",
    "HBAR_OVER_M0",
    "HC_EV_NM",
    "Constants",
    "CONSTANTS",
    "BlochwaveError",
    "ConfigError",
    "NumericalError",
    "UnknownMaterialError",
    "MaterialRecord",
    "MATERIALS",
    "material_lookup",
    "PulseSpec",
    "sine_square_duration",
    "EffectiveMass",
    "KaneTwoBand",
    "TightBinding",
    "BandDispersion",
    "KGrid",
    "waveform",
    "kinetic_momentum",
]


@dataclass(frozen=True)
class Constants:
    """Physical constants in the eV/fs/Å system with e = 1."""

    hbar: float = 0.6582119569  # eV fs
    hbar2_over_m0: float = 7.6199682  # eV Å^2
    hc: float = 1239.84198  # eV nm

    @property
    def hbar_over_m0(self) -> float:
        """hbar/m0 in Å^2/fs."""
        return self.hbar2_over_m0 / self.hbar


CONSTANTS = Constants()
HBAR = CONSTANTS.hbar
HBAR2_OVER_M0 = CONSTANTS.hbar2_over_m0
HBAR_OVER_M0 = CONSTANTS.hbar_over_m0
HC_EV_NM = CONSTANTS.hc


class BlochwaveError(Exception):
    """Base class for package errors."""


class ConfigError(BlochwaveError, ValueError):
    """Invalid user input or configuration."""


class NumericalError(BlochwaveError, RuntimeError):
    """A numerical procedure failed to reach its tolerance."""


class UnknownMaterialError(ConfigError, KeyError):
    """Requested material is not in the embedded table."""

    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


# Materials -------------------------------------------------------------------


@dataclass(frozen=True)
class MaterialRecord:
    """Static material parameters.

    Attributes
    ----------
    name, structure : str
        Identifier and crystal structure label.
    Eg : float
        Fundamental band gap, eV.
    a, c : float
        Lattice constants, Å (``c`` only for non-cubic lattices).
    xi_max : float
        Peak interband dipole matrix element, Å.
    m_reduced : float, optional
        Reduced electron-hole mass in units of m0.
    hoppings : dict, optional
        ``{band: ((l, eps_l), ...)}`` cosine-series coefficients in eV.
    wannier_extent : float, optional
        Wannier-function extent, Å.
    bandwidth : float, optional
        Band width, eV.
    """

    name: str
    structure: str
    Eg: float
    a: float
    xi_max: float
    c: float | None = None
    m_reduced: float | None = None
    hoppings: dict | None = None
    wannier_extent: float | None = None
    bandwidth: float | None = None

    def __post_init__(self):
        if not self.Eg > 0:
            raise ConfigError(f"{self.name}: Eg must be positive, got {self.Eg}")
        if not self.a > 0:
            raise ConfigError(f"{self.name}: lattice constant a must be positive")
        if not self.xi_max >= 0:
            raise ConfigError(f"{self.name}: xi_max must be non-negative")
        if self.m_reduced is not None and not self.m_reduced > 0:
            raise ConfigError(f"{self.name}: m_reduced must be positive")
        for band, pairs in (self.hoppings or {}).items():
            ells = [int(p[0]) for p in pairs]
            if any(e < 0 for e in ells) or any(b <= a for a, b in zip(ells, ells[1:])):
                raise ConfigError(
                    f"{self.name}: hopping indices for band {band!r} must be >= 0 and strictly increasing"
                )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "structure": self.structure,
            "Eg": self.Eg,
            "a": self.a,
            "c": self.c,
            "xi_max": self.xi_max,
            "m_reduced": self.m_reduced,
            "hoppings": self.hoppings,
            "wannier_extent": self.wannier_extent,
            "bandwidth": self.bandwidth,
        }


MATERIALS: dict[str, MaterialRecord] = {
    rec.name.lower(): rec
    for rec in (
        MaterialRecord("GaAs", "zb", Eg=1.43, a=5.65, xi_max=3.42),
        MaterialRecord("GaN", "wz", Eg=3.45, a=3.19, c=5.19, xi_max=1.74),
        MaterialRecord("ZnO", "wz", Eg=3.3, a=3.26, c=5.22, xi_max=1.46),
        MaterialRecord("C", "fcc", Eg=7.4, a=3.57, xi_max=1.06),
        MaterialRecord("MgO", "fcc", Eg=7.8, a=4.2, xi_max=0.96),
        MaterialRecord("SiO2", "trig", Eg=9.0, a=4.9, c=5.4, xi_max=0.37),
    )
}

_ALIASES = {
    "alpha-gan": "gan",
    "a-gan": "gan",
    "diamond": "c",
    "alpha-sio2": "sio2",
    "a-sio2": "sio2",
    "quartz": "sio2",
}


def material_lookup(name: str) -> MaterialRecord:
    """Return an embedded material record (case-insensitive name)."""
    key = str(name).strip().lower()
    key = _ALIASES.get(key, key)
    try:
        return MATERIALS[key]
    except KeyError:
        available = ", ".join(r.name for r in MATERIALS.values())
        raise UnknownMaterialError(f"unknown material {name!r}; available: {available}") from None


# Pulses ----------------------------------------------------------------------


def sine_square_duration(fwhm: float) -> float:
    """Total duration of a sin^2 field envelope with the given intensity FWHM.

    The intensity envelope is sin^4, whose half-maximum points sit at
    ``x = arcsin(2**-0.25)/pi`` of the total duration from either edge.
    """
    return fwhm / (1.0 - 2.0 * math.asin(2.0 ** -0.25) / math.pi)


def _smooth_step(x):
    """C-infinity step rising from 0 (x<=0) to 1 (x>=1)."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        f0 = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        f1 = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1.0 - x, 1.0)), 0.0)
    return f0 / (f0 + f1)


_ENVELOPES = ("monochromatic", "sine-square", "rectangular")


@dataclass(frozen=True)
class PulseSpec:
    """Analytic laser waveform.

    The major-axis field is ``F(t) = F0 * g(t) * cos(omega0 (t - t0) + cep)``;
    with ellipticity ``beta`` the minor-axis field is
    ``beta * F0 * g(t) * sin(omega0 (t - t0) + cep)``.

    Attributes
    ----------
    F0 : float
        Peak field amplitude, V/Å.
    photon_energy : float
        Carrier photon energy hbar*omega0, eV.
    envelope : {"monochromatic", "sine-square", "rectangular"}
        ``monochromatic`` is a constant envelope over ``window`` (optionally
        switched on and off by C-infinity ramps of ``ramp_cycles`` cycles);
        ``sine-square`` is a sin^2 field envelope of intensity FWHM ``fwhm``
        centred at ``t0``; ``rectangular`` is a constant envelope without
        ramps, admitted for analytic pulse-area tests.
    fwhm : float, optional
        Intensity FWHM in fs (sine-square only).
    cep : float
        Carrier phase at ``t0`` (the envelope peak), rad.
    beta : float
        Ellipticity in [-1, 1].
    window : (float, float), optional
        ``(t_start, t_end)`` in fs.  Required for monochromatic and
        rectangular envelopes; derived from ``fwhm`` for sine-square.
    t0 : float
        Carrier reference time / envelope centre, fs.
    ramp_cycles : float
        Length of each C-infinity switch-on/off ramp (monochromatic only).
    """

    F0: float
    photon_energy: float
    envelope: str = "monochromatic"
    fwhm: float | None = None
    cep: float = 0.0
    beta: float = 0.0
    window: tuple[float, float] | None = None
    t0: float = 0.0
    ramp_cycles: float = 0.0

    def __post_init__(self):
        if not (self.F0 >= 0 and math.isfinite(self.F0)):
            raise ConfigError(f"F0 must be finite and >= 0, got {self.F0}")
        if not (self.photon_energy > 0 and math.isfinite(self.photon_energy)):
            raise ConfigError(f"photon energy must be > 0, got {self.photon_energy}")
        if self.envelope not in _ENVELOPES:
            raise ConfigError(f"envelope must be one of {_ENVELOPES}, got {self.envelope!r}")
        if abs(self.beta) > 1:
            raise ConfigError(f"ellipticity beta must lie in [-1, 1], got {self.beta}")
        if self.envelope == "sine-square":
            if self.fwhm is None or not self.fwhm > 0:
                raise ConfigError(f"sine-square envelope needs FWHM > 0, got {self.fwhm}")
            if self.window is None:
                half = 0.5 * sine_square_duration(self.fwhm)
                object.__setattr__(self, "window", (self.t0 - half, self.t0 + half))
            else:
                raise ConfigError("sine-square window is derived from fwhm and t0; do not pass window")
        else:
            if self.window is None:
                raise ConfigError(f"{self.envelope} envelope requires window=(t_start, t_end)")
        ts, te = (float(v) for v in self.window)
        if not te > ts:
            raise ConfigError(f"window must satisfy t_end > t_start, got {self.window}")
        object.__setattr__(self, "window", (ts, te))
        if self.ramp_cycles < 0:
            raise ConfigError("ramp_cycles must be >= 0")
        if self.ramp_cycles and self.envelope != "monochromatic":
            raise ConfigError("ramp_cycles applies to the monochromatic envelope only")
        if 2 * self.ramp_cycles * self.period > (te - ts) * (1 + 1e-12):
            raise ConfigError("ramps longer than the window")

    # construction helpers
    @classmethod
    def from_wavelength(cls, F0: float, wavelength_nm: float, **kw) -> "PulseSpec":
        """Build a pulse from the carrier wavelength in nm."""
        if not wavelength_nm > 0:
            raise ConfigError("wavelength must be positive")
        return cls(F0=F0, photon_energy=HC_EV_NM / wavelength_nm, **kw)

    @classmethod
    def cycles(cls, F0: float, photon_energy: float, n_cycles: float, ramp_cycles: float = 0.0,
               **kw) -> "PulseSpec":
        """Monochromatic pulse starting at t=0 spanning ``n_cycles`` flat cycles plus ramps."""
        period = 2 * math.pi * HBAR / photon_energy
        total = (n_cycles + 2 * ramp_cycles) * period
        return cls(F0=F0, photon_energy=photon_energy, envelope="monochromatic",
                   window=(0.0, total), ramp_cycles=ramp_cycles, **kw)

    # derived quantities
    @property
    def omega0(self) -> float:
        """Carrier angular frequency, rad/fs."""
        return self.photon_energy / HBAR

    @property
    def period(self) -> float:
        """Carrier period T0, fs."""
        return 2 * math.pi / self.omega0

    @property
    def t_start(self) -> float:
        return self.window[0]

    @property
    def t_end(self) -> float:
        return self.window[1]

    @property
    def duration(self) -> float:
        return self.window[1] - self.window[0]

    @property
    def n_cycles(self) -> float:
        return self.duration / self.period

    def circular_components(self) -> tuple[float, float]:
        """Amplitudes (|F+|, |F-|) of the two circular components."""
        return 0.5 * self.F0 * (1 + self.beta), 0.5 * self.F0 * (1 - self.beta)

    def envelope_value(self, t) -> np.ndarray:
        """Dimensionless envelope g(t), zero outside the window."""
        t = np.asarray(t, dtype=float)
        ts, te = self.window
        inside = (t >= ts) & (t <= te)
        if self.envelope == "sine-square":
            g = np.sin(math.pi * (t - ts) / (te - ts)) ** 2
        elif self.envelope == "monochromatic" and self.ramp_cycles > 0:
            r = self.ramp_cycles * self.period
            g = _smooth_step((t - ts) / r) * _smooth_step((te - t) / r)
        else:
            g = np.ones_like(t)
        return np.where(inside, g, 0.0)

    def envelope_amplitude(self, t) -> np.ndarray:
        """Instantaneous field envelope F0*g(t), V/Å."""
        return self.F0 * self.envelope_value(t)

    def _carrier_phase(self, t):
        return self.omega0 * (np.asarray(t, dtype=float) - self.t0) + self.cep

    def field(self, t) -> np.ndarray:
        """Major-axis field F(t), V/Å."""
        return self.F0 * self.envelope_value(t) * np.cos(self._carrier_phase(t))

    def field_vector(self, t) -> np.ndarray:
        """Field components (major, minor) stacked on the last axis."""
        g = self.F0 * self.envelope_value(t)
        ph = self._carrier_phase(t)
        return np.stack([g * np.cos(ph), self.beta * g * np.sin(ph)], axis=-1)

    def vector_potential(self, t) -> np.ndarray:
        """Major-axis A(t) = -int_{t_start}^{t} F dt', V·fs/Å."""
        return self._integral(t, minor=False)

    def vector_potential_vector(self, t) -> np.ndarray:
        """Vector potential components (major, minor) on the last axis."""
        return np.stack([self._integral(t, minor=False), self._integral(t, minor=True)], axis=-1)

    # closed-form antiderivatives
    def _integral(self, t, minor: bool) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        ts, te = self.window
        tc = np.clip(t, ts, te)
        u = tc - ts
        psi = self._carrier_phase(ts)
        if minor:
            psi = psi - 0.5 * math.pi  # sin(x) = cos(x - pi/2)
            amp = self.beta * self.F0
        else:
            amp = self.F0
        if amp == 0.0:
            return np.zeros_like(t)
        w0 = self.omega0
        if self.envelope == "sine-square":
            big_omega = 2 * math.pi / (te - ts)
            integ = 0.5 * _cos_integral(w0, psi, u) - 0.25 * (
                _cos_integral(w0 + big_omega, psi, u) + _cos_integral(w0 - big_omega, psi, u)
            )
        elif self.envelope == "monochromatic" and self.ramp_cycles > 0:
            return -amp * self._ramped_integral(tc, minor)
        else:
            integ = _cos_integral(w0, psi, u)
        return -amp * integ

    def _ramped_integral(self, tc: np.ndarray, minor: bool) -> np.ndarray:
        """int_{ts}^{t} g(t') c(t') dt' for the ramped envelope.

        The flat part has a closed form; each ramp is integrated with a
        composite 10-point Gauss-Legendre rule on a fixed partition of 64
        panels per cycle, accurate to rounding for the smooth integrand.
        """
        ts, te = self.window
        r = self.ramp_cycles * self.period
        shift = -0.5 * math.pi if minor else 0.0
        table = _ramp_table(self, minor)
        flat = lambda lo, hi: _cos_integral(self.omega0, self._carrier_phase(lo) + shift, hi - lo)
        out = np.empty_like(tc)
        first = tc <= ts + r
        last = tc > te - r
        mid = ~(first | last)
        out[first] = table.partial(0, tc[first])
        out[mid] = table.total(0) + flat(ts + r, tc[mid])
        out[last] = table.total(0) + flat(ts + r, te - r) + table.partial(1, tc[last])
        return out


def _cos_integral(w: float, psi: float, u):
    """int_0^u cos(w s + psi) ds, stable for w -> 0."""
    u = np.asarray(u, dtype=float)
    half = 0.5 * w * u
    return u * np.cos(half + psi) * np.sinc(half / math.pi)


class _RampTable:
    """Cumulative Gauss-Legendre tables for the two ramp segments."""

    def __init__(self, integrand, segments, panels_per_cycle: int, period: float):
        self._nodes, self._weights = leggauss(10)
        self._integrand = integrand
        self._edges = []
        self._cum = []
        for lo, hi in segments:
            n = max(4, int(math.ceil((hi - lo) / period * panels_per_cycle)))
            edges = np.linspace(lo, hi, n + 1)
            vals = self._gl(edges[:-1], edges[1:])
            self._edges.append(edges)
            self._cum.append(np.concatenate([[0.0], np.cumsum(vals)]))

    def _gl(self, a, b):
        a = np.asarray(a, dtype=float)[..., None]
        b = np.asarray(b, dtype=float)[..., None]
        x = 0.5 * (b - a) * self._nodes + 0.5 * (a + b)
        return 0.5 * (b - a)[..., 0] * (self._integrand(x) @ self._weights)

    def total(self, seg: int) -> float:
        return float(self._cum[seg][-1])

    def partial(self, seg: int, t) -> np.ndarray:
        edges = self._edges[seg]
        i = np.clip(np.searchsorted(edges, t, side="right") - 1, 0, len(edges) - 2)
        return self._cum[seg][i] + self._gl(edges[i], t)


@functools.lru_cache(maxsize=64)
def _ramp_table(pulse: "PulseSpec", minor: bool) -> _RampTable:
    ts, te = pulse.window
    r = pulse.ramp_cycles * pulse.period
    shift = -0.5 * math.pi if minor else 0.0

    def integrand(x):
        return pulse.envelope_value(x) * np.cos(pulse._carrier_phase(x) + shift)

    return _RampTable(integrand, [(ts, ts + r), (te - r, te)], 64, pulse.period)


def waveform(pulse: PulseSpec, t):
    """Field and vector potential of ``pulse`` at times ``t``.

    Returns
    -------
    F, A : ndarray
        Major-axis field (V/Å) and vector potential (V·fs/Å) with
        ``A(t_start) = 0``.
    """
    return pulse.field(t), pulse.vector_potential(t)


def kinetic_momentum(k, pulse: PulseSpec, t, reduce_to_bz: bool = False, a: float | None = None):
    """Field-shifted crystal momentum K(t) = k + A(t)/hbar (1/Å).

    ``k`` and ``t`` broadcast against each other.  With ``reduce_to_bz`` the
    result is folded into [-pi/a, pi/a).
    """
    K = np.asarray(k, dtype=float) + pulse.vector_potential(t) / HBAR
    if reduce_to_bz:
        if a is None or not a > 0:
            raise ConfigError("BZ reduction needs a positive lattice constant a")
        g = 2 * math.pi / a
        K = np.mod(K + math.pi / a, g) - math.pi / a
    return K


# Band dispersions ------------------------------------------------------------


def _ksq(k):
    k = np.asarray(k, dtype=float)
    return k * k


@dataclass(frozen=True)
class EffectiveMass:
    """Parabolic band E = offset + hbar^2 k^2 / (2 m m0).

    ``k`` may be a scalar/array (1D) or carry a trailing vector axis when
    passed to :meth:`gradient`.
    """

    mass: float
    offset: float = 0.0

    def __post_init__(self):
        if self.mass == 0 or not math.isfinite(self.mass):
            raise ConfigError("effective mass must be finite and nonzero")

    def energy(self, k):
        return self.offset + HBAR2_OVER_M0 * _ksq(k) / (2 * self.mass)

    def velocity(self, k):
        """Group velocity (1/hbar) dE/dk in Å/fs."""
        return HBAR_OVER_M0 * np.asarray(k, dtype=float) / self.mass

    def energy_vec(self, k):
        k = np.asarray(k, dtype=float)
        return self.offset + HBAR2_OVER_M0 * np.sum(k * k, axis=-1) / (2 * self.mass)

    def gradient(self, k):
        """dE/dk (eV·Å) for vector k on the last axis."""
        return HBAR2_OVER_M0 * np.asarray(k, dtype=float) / self.mass


@dataclass(frozen=True)
class KaneTwoBand:
    """Nonparabolic pair energy Ecv = Eg sqrt(1 + hbar^2 k^2 / (m Eg))."""

    Eg: float
    mass: float

    def __post_init__(self):
        if not self.Eg > 0 or not self.mass > 0:
            raise ConfigError("Kane band needs Eg > 0 and m > 0")

    def energy(self, k):
        return self.Eg * np.sqrt(1.0 + HBAR2_OVER_M0 * _ksq(k) / (self.mass * self.Eg))

    def velocity(self, k):
        k = np.asarray(k, dtype=float)
        return (HBAR2_OVER_M0 * k / self.mass) / self.energy(k) / HBAR

    def energy_vec(self, k):
        k = np.asarray(k, dtype=float)
        return self.energy(np.sqrt(np.sum(k * k, axis=-1)))

    def gradient(self, k):
        k = np.asarray(k, dtype=float)
        return HBAR2_OVER_M0 * k / self.mass / self.energy_vec(k)[..., None]

    @property
    def xi_estimate(self) -> float:
        """Interband dipole estimate hbar / (2 sqrt(m Eg)) in Å."""
        return 0.5 * math.sqrt(HBAR2_OVER_M0 / (self.mass * self.Eg))


@dataclass(frozen=True)
class TightBinding:
    """Cosine-series band E(k) = sum_l eps_l cos(l k a).

    ``eps[l]`` is the coefficient of order ``l`` (``eps[0]`` is the on-site
    term).  For vector ``k`` the series is applied on each Cartesian axis
    with the on-site term counted once (simple cubic/square lattice).
    """

    a: float
    eps: tuple[float, ...]

    def __post_init__(self):
        if not self.a > 0:
            raise ConfigError("tight-binding lattice constant must be positive")
        eps = tuple(float(e) for e in self.eps)
        if len(eps) < 1 or not all(math.isfinite(e) for e in eps):
            raise ConfigError("tight-binding needs a finite, nonempty coefficient list")
        object.__setattr__(self, "eps", eps)

    @classmethod
    def from_pairs(cls, a: float, pairs: Sequence[tuple[int, float]]) -> "TightBinding":
        """Build from sparse ``(l, eps_l)`` pairs."""
        ells = [int(p[0]) for p in pairs]
        if any(e < 0 for e in ells) or any(b <= a_ for a_, b in zip(ells, ells[1:])):
            raise ConfigError("hopping indices must be >= 0 and strictly increasing")
        eps = [0.0] * (max(ells) + 1 if ells else 1)
        for ell, val in pairs:
            eps[int(ell)] = float(val)
        return cls(a=a, eps=tuple(eps))

    @property
    def l_max(self) -> int:
        return len(self.eps) - 1

    @property
    def ells(self) -> np.ndarray:
        return np.arange(len(self.eps))

    def energy(self, k):
        k = np.asarray(k, dtype=float)
        out = np.zeros_like(k)
        for ell, e in enumerate(self.eps):
            out = out + e * np.cos(ell * k * self.a)
        return out

    def velocity(self, k):
        """(1/hbar) dE/dk = -(a/hbar) sum_l l eps_l sin(l k a), Å/fs."""
        k = np.asarray(k, dtype=float)
        out = np.zeros_like(k)
        for ell, e in enumerate(self.eps[1:], start=1):
            out = out - ell * e * np.sin(ell * k * self.a)
        return out * self.a / HBAR

    def curvature_mass(self) -> float:
        """Effective mass (m0 units) from the curvature at k = 0."""
        d2 = -sum(ell * ell * e for ell, e in enumerate(self.eps)) * self.a ** 2
        if d2 == 0:
            raise ConfigError("band is flat at k=0; no curvature mass")
        return HBAR2_OVER_M0 / d2

    def energy_vec(self, k):
        k = np.asarray(k, dtype=float)
        out = np.full(k.shape[:-1], self.eps[0])
        for ell, e in enumerate(self.eps[1:], start=1):
            out = out + e * np.sum(np.cos(ell * k * self.a), axis=-1)
        return out

    def gradient(self, k):
        k = np.asarray(k, dtype=float)
        out = np.zeros_like(k)
        for ell, e in enumerate(self.eps[1:], start=1):
            out = out - ell * e * self.a * np.sin(ell * k * self.a)
        return out

    def __sub__(self, other: "TightBinding") -> "TightBinding":
        if not isinstance(other, TightBinding) or other.a != self.a:
            return NotImplemented
        n = max(len(self.eps), len(other.eps))
        a = list(self.eps) + [0.0] * (n - len(self.eps))
        b = list(other.eps) + [0.0] * (n - len(other.eps))
        return TightBinding(self.a, tuple(x - y for x, y in zip(a, b)))


BandDispersion = EffectiveMass | KaneTwoBand | TightBinding


# k grids ---------------------------------------------------------------------


@dataclass(frozen=True)
class KGrid:
    """Uniform periodic k grid.

    Each axis spans ``[-f pi/a, f pi/a)`` with ``f`` the extent in Brillouin
    zone fractions; the upper endpoint is identified with the lower one.
    """

    counts: tuple[int, ...]
    extents: tuple[float, ...] = field(default=None)  # type: ignore[assignment]
    a: float = 1.0

    def __post_init__(self):
        counts = tuple(int(c) for c in np.atleast_1d(self.counts))
        if not 1 <= len(counts) <= 3:
            raise ConfigError("k grid dimension must be 1 to 3")
        if any(c < 2 for c in counts):
            raise ConfigError("k grid needs at least 2 points per axis")
        extents = self.extents
        extents = (1.0,) * len(counts) if extents is None else tuple(float(e) for e in np.atleast_1d(extents))
        if len(extents) != len(counts) or any(not e > 0 for e in extents):
            raise ConfigError("k grid extents must be positive, one per axis")
        if not self.a > 0:
            raise ConfigError("k grid lattice constant must be positive")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "extents", extents)

    @property
    def dim(self) -> int:
        return len(self.counts)

    def axis(self, i: int) -> np.ndarray:
        half = self.extents[i] * math.pi / self.a
        n = self.counts[i]
        return -half + 2 * half * np.arange(n) / n

    def spacing(self, i: int) -> float:
        return 2 * self.extents[i] * math.pi / self.a / self.counts[i]

    def points(self) -> np.ndarray:
        """All points, shape (N, dim) in 1/Å (C order)."""
        axes = [self.axis(i) for i in range(self.dim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    @property
    def size(self) -> int:
        return int(np.prod(self.counts))
