"""Static-field structure: Kane ladders, localization lengths, coupled ladders, Franz-Keldysh."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import cumulative_simpson

from .core import HBAR2_OVER_M0, ConfigError, TightBinding
from .special import airy_ai

__all__ = [
    "KaneLadder",
    "kane_ladder",
    "eta_function",
    "localization_lengths",
    "WSLevels",
    "ws_levels",
    "ws_pair",
    "hybridization_fields",
    "ws_fan",
    "fke_theta",
    "fke_absorption",
    "airy_ai",
    "FKE_GUARD",
]

FKE_GUARD = 1e-6


@dataclass(frozen=True)
class KaneLadder:
    """Rungs of one band in a static field.

    ``energies[i]`` is the energy of rung ``rungs[i]``; ``E_bar`` is the zone
    average of the (modified) band energy and ``hbar_omegaB = F0 a``.
    """

    band_index: int
    rungs: np.ndarray
    energies: np.ndarray
    E_bar: float
    hbar_omegaB: float
    F0: float
    a: float


def _modified_energy(band: TightBinding, xnn, F0: float) -> Callable:
    if callable(xnn):
        return lambda k: band.energy(k) + F0 * np.asarray(xnn(k), dtype=float)
    return lambda k: band.energy(k) + F0 * float(xnn)


def kane_ladder(band: TightBinding, F0: float, xnn: float | Callable = 0.0, rungs: Sequence[int] = range(-3, 4),
                band_index: int = 0, quad_points: int = 512) -> KaneLadder:
    """Kane rung energies E_l = E_bar + l F0 a.

    ``E_bar`` is the zone average of ``E(k) + F0 X_nn(k)`` computed with the
    periodic trapezoid rule on ``quad_points`` nodes.
    """
    if not F0 > 0:
        raise ConfigError("Kane ladder needs F0 > 0 (ladder undefined at zero field)")
    e_mod = _modified_energy(band, xnn, F0)
    k = -math.pi / band.a + 2 * math.pi / band.a * np.arange(quad_points) / quad_points
    e_bar = float(np.mean(e_mod(k)))
    ells = np.asarray(list(rungs), dtype=int)
    hwb = F0 * band.a
    return KaneLadder(band_index=band_index, rungs=ells, energies=e_bar + ells * hwb, E_bar=e_bar,
                      hbar_omegaB=hwb, F0=F0, a=band.a)


def eta_function(band: TightBinding, F0: float, energy: float, kx, xnn: float | Callable = 0.0,
                 points: int = 4097) -> np.ndarray:
    """Hybrid Kane phase function eta(kx) = exp(-(i/F0) int_0^kx [E - E'(k)] dk).

    The phase integral is evaluated by cumulative Simpson quadrature on a
    uniform grid covering [-pi/a, pi/a] and interpolated to ``kx``.
    """
    if not F0 > 0:
        raise ConfigError("eta needs F0 > 0")
    e_mod = _modified_energy(band, xnn, F0)
    kx = np.asarray(kx, dtype=float)
    span = max(math.pi / band.a, float(np.max(np.abs(kx))) if kx.size else 0.0)
    n = points if points % 2 else points + 1
    half = np.linspace(0.0, span, n)
    pos = cumulative_simpson(energy - e_mod(half), x=half, initial=0.0)
    neg = -cumulative_simpson(energy - e_mod(-half), x=half, initial=0.0)
    grid = np.concatenate([-half[:0:-1], half])
    integral = np.concatenate([neg[:0:-1], pos])
    phase = np.interp(kx, grid, integral)
    return np.exp(-1j * phase / F0)


def localization_lengths(bandwidth: float, wannier_extent: float, F0):
    """Semiclassical and Kane-state localization lengths (Å).

    ``L_SC = bandwidth / F0`` and ``L_K = sqrt(L_SC^2 + L_W^2)``.
    """
    F0 = np.asarray(F0, dtype=float)
    if np.any(~(F0 > 0)):
        raise ConfigError("localization lengths need F0 > 0")
    if bandwidth < 0 or wannier_extent < 0:
        raise ConfigError("bandwidth and Wannier extent must be non-negative")
    l_sc = bandwidth / F0
    l_k = np.hypot(l_sc, wannier_extent)
    if l_sc.ndim == 0:
        return float(l_sc), float(l_k)
    return l_sc, l_k


@dataclass(frozen=True)
class WSLevels:
    """Eigenvalues of coupled ladder rungs (ascending) and their inputs."""

    energies: np.ndarray
    rungs: np.ndarray
    couplings: np.ndarray

    @property
    def gap(self) -> float:
        e = self.energies
        return float(e[1] - e[0]) if e.size == 2 else float(np.min(np.diff(e)))


def ws_pair(E_c: float, E_v: float, V: complex) -> tuple[float, float]:
    """Two-rung anticrossing E+- = (Ec + Ev)/2 +- sqrt((Ec - Ev)^2 + 4|V|^2)/2."""
    mean = 0.5 * (E_c + E_v)
    half = 0.5 * math.sqrt((E_c - E_v) ** 2 + 4.0 * abs(V) ** 2)
    return mean - half, mean + half


def ws_levels(rungs: Sequence[float], couplings, truncation: int | None = None, hermitian_tol: float = 1e-12) -> WSLevels:
    """Levels of coupled Kane rungs.

    Parameters
    ----------
    rungs : sequence of float
        Uncoupled rung energies (eV), the diagonal.
    couplings : complex or (n, n) array
        A single coupling V (two rungs) or the full coupling matrix whose
        off-diagonal elements are the V terms; it must be Hermitian.
    truncation : int, optional
        Number of levels kept (default: all).  Two levels use the closed form.
    """
    diag = np.asarray(rungs, dtype=float)
    n = diag.size if truncation is None else int(truncation)
    if n < 2:
        raise ConfigError("truncation must be >= 2")
    if n > diag.size:
        raise ConfigError("truncation exceeds the number of rungs supplied")
    diag = diag[:n]
    if np.ndim(couplings) == 0:
        if n != 2:
            raise ConfigError("a scalar coupling applies to two rungs only")
        V = np.array([[0.0, complex(couplings)], [np.conj(complex(couplings)), 0.0]])
    else:
        V = np.asarray(couplings, dtype=complex)
        if V.shape[0] < n or V.shape[1] < n:
            raise ConfigError("coupling matrix smaller than the truncation")
        V = V[:n, :n].copy()
        if np.max(np.abs(V - V.conj().T)) > hermitian_tol:
            raise ConfigError("coupling matrix is not Hermitian")
        np.fill_diagonal(V, 0.0)
    if n == 2:
        e = np.array(ws_pair(diag[0], diag[1], V[0, 1]))
    else:
        e = np.linalg.eigvalsh(np.diag(diag) + V)
    return WSLevels(energies=e, rungs=diag, couplings=V)


def hybridization_fields(Eg: float, a: float, ell_max: int = 5) -> dict[int, float]:
    """Fields F0 = Eg / (l a) at which rung l of one ladder meets the other band."""
    if not Eg > 0 or not a > 0:
        raise ConfigError("need Eg > 0 and a > 0")
    return {ell: Eg / (ell * a) for ell in range(1, int(ell_max) + 1)}


def ws_fan(E_bar_c: float, E_bar_v: float, a: float, F0_grid, Xi: dict[int, float], rung_range=range(-4, 5),
           window: tuple[float, float] | None = None) -> np.ndarray:
    """Coupled two-ladder spectrum versus field.

    Rung ``i`` of the conduction ladder couples to rung ``i + l`` of the
    valence ladder with ``V_l = F0 * Xi[l]``.  Returns rows
    (F0, level_index, energy), sorted by level within each field.
    """
    rows = []
    idx = list(rung_range)
    for F0 in np.asarray(F0_grid, dtype=float):
        ec = E_bar_c + np.array(idx) * F0 * a
        ev = E_bar_v + np.array(idx) * F0 * a
        n = len(idx)
        H = np.diag(np.concatenate([ec, ev])).astype(complex)
        for i in range(n):
            for j in range(n):
                ell = idx[j] - idx[i]
                if ell in Xi:
                    H[i, n + j] = F0 * Xi[ell]
                    H[n + j, i] = np.conj(F0 * Xi[ell])
        e = np.linalg.eigvalsh(H)
        if window is not None:
            e = e[(e >= window[0]) & (e <= window[1])]
        rows.extend((F0, lvl, en) for lvl, en in enumerate(e))
    return np.array(rows)


def fke_theta(F0, m: float):
    """Electro-optic energy hbar*theta_x = (F0^2 hbar^2 / (2 m))^(1/3), eV."""
    if not m > 0:
        raise ConfigError("reduced mass must be positive")
    return np.cbrt(np.asarray(F0, dtype=float) ** 2 * HBAR2_OVER_M0 / (2.0 * m))


def fke_absorption(omega, F0: float, m: float, Eg: float, guard: float = FKE_GUARD):
    """Below-gap field-induced absorption tail.

    Parameters
    ----------
    omega : float or array
        Photon energy hbar*omega, eV; must stay below ``Eg - guard``.

    Returns
    -------
    theta : float
        hbar*theta_x, eV.
    alpha_rel : ndarray
        ``(theta/d) exp(-(4/3)(d/theta)^{3/2} + 4/3)`` with ``d = Eg - hbar omega``:
        the proportionality theta^{3/2}/d exp(...) normalized to 1 at d = theta.
    alpha_raw : ndarray
        Unnormalized theta^{3/2}/d exp(...) for comparisons across fields.
    """
    if not F0 > 0:
        raise ConfigError("Franz-Keldysh absorption needs F0 > 0")
    w = np.asarray(omega, dtype=float)
    if np.any(w >= Eg - guard):
        raise ConfigError(
            f"photon energy must stay below Eg - {guard:g} eV: the 1/(Eg - hbar omega) prefactor diverges at the gap"
        )
    theta = float(fke_theta(F0, m))
    d = Eg - w
    expo = np.exp(-4.0 / 3.0 * (d / theta) ** 1.5)
    raw = theta ** 1.5 / d * expo
    rel = raw / (theta ** 0.5 * math.exp(-4.0 / 3.0))
    return theta, rel, raw
