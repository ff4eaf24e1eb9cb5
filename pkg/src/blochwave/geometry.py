"""Band geometry of two-band models: Zak phase, Chern number, quantum metric.

Discrete, gauge-invariant constructions are used throughout: link
overlaps between neighbouring eigenvectors, their products around closed
loops (Wilson loops and plaquettes), and projector differences for the
Fubini-Study metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_trapezoid, solve_ivp

from .core import HBAR, ConfigError, NumericalError, PulseSpec
from .intraband import cumulative_richardson

__all__ = [
    "BlochModel2Band",
    "eigenvectors",
    "zak_phase",
    "wilson_loop_phase",
    "GeometryResult",
    "chern_and_curvature",
    "ws_ladder_with_zak",
    "AnomalousTrajectory",
    "anomalous_trajectory",
    "ssh_model",
    "chern_model",
    "TESLA",
    "GAP_TOL",
    "SIGMA_XY_NOTE",
]

GAP_TOL = 1e-6
TESLA = 1e-5  # V fs / Å^2
SIGMA_XY_NOTE = (
    "sigma_xy uses the prefactor e^2/hbar applied to the Chern sum; "
    "the conventional conductance quantum is e^2/h, a factor 2*pi smaller"
)

_PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex)


@dataclass(frozen=True)
class BlochModel2Band:
    """H(k) = d0(k) 1 + d(k) . sigma from a vectorized d-vector callable.

    ``d(k)`` receives an array of shape (..., dim) and returns (..., 3);
    ``d0`` is optional.  Momenta are in units of the inverse lattice
    constant (the zone is [-pi, pi) per axis).
    """

    d: Callable
    dim: int = 1
    d0: Callable | None = None

    def hamiltonian(self, k: np.ndarray) -> np.ndarray:
        dv = np.asarray(self.d(k), dtype=float)
        H = np.einsum("...i,ijk->...jk", dv, _PAULI)
        if self.d0 is not None:
            H = H + np.asarray(self.d0(k), dtype=float)[..., None, None] * np.eye(2)
        return H


def ssh_model(t1: float, t2: float) -> BlochModel2Band:
    """d(k) = (t1 + t2 cos k, t2 sin k, 0)."""
    return BlochModel2Band(lambda k: np.stack([t1 + t2 * np.cos(k[..., 0]), t2 * np.sin(k[..., 0]),
                                               np.zeros(k.shape[:-1])], axis=-1), dim=1)


def chern_model(u: float) -> BlochModel2Band:
    """d(k) = (sin kx, sin ky, u + cos kx + cos ky)."""
    return BlochModel2Band(lambda k: np.stack([np.sin(k[..., 0]), np.sin(k[..., 1]),
                                               u + np.cos(k[..., 0]) + np.cos(k[..., 1])], axis=-1), dim=2)


def _grid(n: int, dim: int) -> np.ndarray:
    ax = -math.pi + 2 * math.pi * np.arange(n) / n
    mesh = np.meshgrid(*([ax] * dim), indexing="ij")
    return np.stack(mesh, axis=-1)


def eigenvectors(model: BlochModel2Band, k: np.ndarray, band: int) -> np.ndarray:
    """Normalized eigenvectors of band 0 (lower) or 1 (upper); gap checked."""
    if band not in (0, 1):
        raise ConfigError("band index must be 0 (lower) or 1 (upper)")
    dv = np.asarray(model.d(k), dtype=float)
    gap = 2 * np.linalg.norm(dv, axis=-1)
    if np.min(gap) < GAP_TOL:
        raise NumericalError(f"band gap closes on the grid (min gap {np.min(gap):.3e})")
    _, vecs = np.linalg.eigh(model.hamiltonian(k))
    return vecs[..., :, band]


def _links(u: np.ndarray, axis: int) -> np.ndarray:
    return np.sum(np.conj(u) * np.roll(u, -1, axis=axis), axis=-1)


def wilson_loop_phase(states: np.ndarray) -> float:
    """-Im log prod <u_j|u_{j+1}> around a closed sequence of states (rad)."""
    links = np.sum(np.conj(states) * np.roll(states, -1, axis=0), axis=-1)
    if np.min(np.abs(links)) < GAP_TOL:
        raise NumericalError("vanishing link overlap: gap closure or grid too coarse")
    return float(-np.angle(np.prod(links / np.abs(links))))


def zak_phase(model: BlochModel2Band, band: int = 0, n: int = 400, gauge_phases: np.ndarray | None = None) -> float:
    """Zak phase of a 1D band in [0, 2 pi) from the discrete Wilson loop.

    ``gauge_phases`` optionally redresses each eigenvector by exp(i phase);
    the result is invariant under this.
    """
    if model.dim != 1:
        raise ConfigError("Zak phase needs a one-dimensional model")
    k = _grid(n, 1)
    u = eigenvectors(model, k, band)
    if gauge_phases is not None:
        u = u * np.exp(1j * np.asarray(gauge_phases))[:, None]
    phase = float(np.mod(wilson_loop_phase(u), 2 * math.pi))
    return 0.0 if 2 * math.pi - phase < 1e-10 else phase


@dataclass(frozen=True)
class GeometryResult:
    """Plaquette curvature, Chern number and quantum metric of one band."""

    kx: np.ndarray
    ky: np.ndarray
    plaquette_phase: np.ndarray
    curvature: np.ndarray
    chern: int
    chern_raw: float
    residual: float
    sigma_xy: float
    metric: np.ndarray
    flagged: bool
    notes: dict = field(default_factory=dict)

    def report(self) -> dict:
        return {"C": self.chern, "residual": self.residual, "sigma_xy": self.sigma_xy,
                "sigma_xy_units": "e^2/hbar", "flagged": self.flagged, **self.notes}


def chern_and_curvature(model: BlochModel2Band, band: int = 0, n: int = 200, occupied=None,
                        gauge_phases: np.ndarray | None = None) -> GeometryResult:
    """Chern number from plaquette phases on an n x n grid.

    Each plaquette phase is the argument of the product of the four link
    overlaps around it, in (-pi, pi]; the Chern number is their sum over
    2 pi, traversed in fixed C order.  ``sigma_xy`` is the Chern sum over
    ``occupied`` bands (default: the requested band) in units of e^2/hbar.
    The Fubini-Study metric comes from symmetric projector differences.
    """
    if model.dim != 2:
        raise ConfigError("Chern number needs a two-dimensional model")
    k = _grid(n, 2)
    u = eigenvectors(model, k, band)
    if gauge_phases is not None:
        u = u * np.exp(1j * np.asarray(gauge_phases))[..., None]
    ux = _links(u, 0)
    uy = _links(u, 1)
    if min(np.min(np.abs(ux)), np.min(np.abs(uy))) < GAP_TOL:
        raise NumericalError("vanishing link overlap: gap closure or grid too coarse")
    loop = ux * np.roll(uy, -1, axis=0) * np.conj(np.roll(ux, -1, axis=1)) * np.conj(uy)
    phase = -np.angle(loop)
    dk = 2 * math.pi / n
    raw = float(np.sum(phase) / (2 * math.pi))
    chern = int(round(raw))
    residual = abs(raw - chern)
    occ = [band] if occupied is None else list(occupied)
    total = 0
    for b in occ:
        total += chern if b == band else chern_and_curvature(model, b, n).chern
    P = u[..., :, None] * np.conj(u[..., None, :])
    D = [(np.roll(P, -1, axis=ax) - np.roll(P, 1, axis=ax)) / (2 * dk) for ax in (0, 1)]
    g = np.empty(u.shape[:2] + (2, 2))
    for i in range(2):
        for j in range(2):
            g[..., i, j] = 0.5 * np.real(np.einsum("...ab,...ba->...", D[i], D[j]))
    ax = _grid(n, 1)[:, 0]
    return GeometryResult(kx=ax, ky=ax, plaquette_phase=phase, curvature=phase / dk ** 2, chern=chern,
                          chern_raw=raw, residual=residual, sigma_xy=float(total), metric=g,
                          flagged=residual > 0.01, notes={"sigma_xy_note": SIGMA_XY_NOTE})


def ws_ladder_with_zak(E_bar: float, a: float, F0: float, zak: float, rungs=range(-3, 4)) -> np.ndarray:
    """Zak-shifted rungs E_l = E_bar + a F0 (l + zak / 2 pi)."""
    if not F0 > 0:
        raise ConfigError("Wannier-Stark ladder needs F0 > 0")
    ells = np.asarray(list(rungs), dtype=float)
    return E_bar + a * F0 * (ells + zak / (2 * math.pi))


# Anomalous-velocity dynamics --------------------------------------------------


@dataclass(frozen=True)
class AnomalousTrajectory:
    t: np.ndarray
    K: np.ndarray
    r: np.ndarray


def _as_field(F, dim: int) -> Callable:
    if isinstance(F, PulseSpec):
        def f(t):
            vec = np.zeros(dim)
            comp = F.field_vector(t)
            vec[: min(2, dim)] = comp[: min(2, dim)]
            return vec
        return f
    if callable(F):
        return lambda t: np.asarray(F(t), dtype=float)
    const = np.asarray(F, dtype=float)
    return lambda t: const


def _cross(a, b):
    """Cross product treating 2-vectors as lying in the xy plane."""
    a = np.concatenate([a, [0.0]]) if a.shape[-1] == 2 else a
    b = np.concatenate([b, [0.0]]) if b.shape[-1] == 2 else b
    return np.cross(a, b)


def anomalous_trajectory(band, curvature: Callable | float, F, k0, r0=None, duration: float = 10.0,
                         B=None, samples: int = 2001, t_start: float = 0.0, fp_tol: float = 1e-12,
                         fp_max_iter: int = 200, rtol: float = 1e-12, atol: float = 1e-14) -> AnomalousTrajectory:
    """Wavepacket dynamics with anomalous velocity.

    Integrates ``dK/dt = -(F + dr/dt x B)/hbar`` and
    ``dr/dt = grad E/hbar - dK/dt x Omega`` (e = 1).

    Parameters
    ----------
    band : band with ``gradient(k)`` and ``energy_vec(k)``
    curvature : callable or float
        Omega(K): a z-component (2D, scalar) or a 3-vector.
    F : PulseSpec, callable t -> vector, or constant vector (V/Å)
    B : vector, optional
        Constant magnetic field in V·fs/Å^2 (1 T = ``TESLA``).
    """
    k0 = np.atleast_1d(np.asarray(k0, dtype=float))
    dim = k0.size
    if dim not in (2, 3):
        raise ConfigError("anomalous trajectories need 2D or 3D momenta")
    r0 = np.zeros(dim) if r0 is None else np.asarray(r0, dtype=float)
    field_fn = _as_field(F, dim)
    omega_fn = curvature if callable(curvature) else (lambda K, c=float(curvature): c)

    def omega_vec(K):
        om = np.asarray(omega_fn(K), dtype=float)
        if om.ndim == 0:
            return np.array([0.0, 0.0, float(om)])
        return om

    t = t_start + np.linspace(0.0, duration, int(samples))
    if B is None:
        # K follows from the field alone; r by Richardson-controlled quadrature
        if isinstance(F, PulseSpec):
            def K_of(tt):
                return k0 + F.vector_potential_vector(tt)[..., :dim] / HBAR
        else:
            Fs = np.array([field_fn(s) for s in t])
            Kt = k0 + cumulative_trapezoid(-Fs / HBAR, t, axis=0, initial=0.0)

            def K_of(tt):
                tt = np.atleast_1d(tt)
                return np.stack([np.interp(tt, t, Kt[:, i]) for i in range(dim)], axis=-1)

        def rdot(tt, comp):
            K = K_of(tt)
            v = band.gradient(K)[..., comp] / HBAR
            f = np.array([field_fn(s) for s in np.atleast_1d(tt)])
            om = np.array([omega_vec(kk) for kk in K])
            kdot = -f / HBAR
            if dim == 2:
                kdot = np.concatenate([kdot, np.zeros((kdot.shape[0], 1))], axis=-1)
            return v - np.cross(kdot, om)[:, comp]

        K = K_of(t)
        r = np.stack([r0[i] + cumulative_richardson(lambda s, i=i: rdot(s, i), t)[0] for i in range(dim)], axis=-1)
        return AnomalousTrajectory(t=t, K=K, r=r)

    Bv = np.asarray(B, dtype=float)
    if Bv.size == 1:
        Bv = np.array([0.0, 0.0, float(Bv)])

    def velocities(tt, K):
        f = field_fn(tt)
        grad = band.gradient(K) / HBAR
        om = omega_vec(K)
        rdot = grad.copy()
        for it in range(fp_max_iter):
            kdot = -(f + _cross(rdot, Bv)[:dim]) / HBAR
            new = grad - _cross(kdot, om)[:dim]
            delta = float(np.max(np.abs(new - rdot)))
            rdot = new
            if delta <= fp_tol * max(1.0, float(np.max(np.abs(new)))):
                kdot = -(f + _cross(rdot, Bv)[:dim]) / HBAR
                return kdot, rdot
        raise NumericalError(
            f"anomalous-velocity fixed point did not converge at t = {tt:.6g} fs "
            f"(last update {delta:.3e}); |Omega B|/hbar may exceed 1"
        )

    def rhs(tt, y):
        kdot, rdot = velocities(tt, y[:dim])
        return np.concatenate([kdot, rdot])

    sol = solve_ivp(rhs, (t[0], t[-1]), np.concatenate([k0, r0]), method="DOP853", t_eval=t, rtol=rtol, atol=atol)
    if not sol.success:
        raise NumericalError(f"anomalous trajectory integration failed: {sol.message}")
    return AnomalousTrajectory(t=sol.t, K=sol.y[:dim].T, r=sol.y[dim:].T)
