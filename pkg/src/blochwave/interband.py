"""Two-band dynamics in the Houston basis.

The state of each crystal momentum k is expanded in instantaneous Bloch
states at K(t) = k + A(t)/hbar.  In the interaction picture the amplitudes
obey

    i hbar d b_c/dt = V_cv(t) exp(+i phi(t)) b_v
    i hbar d b_v/dt = V_vc(t) exp(-i phi(t)) b_c

with ``V_cv = F(t) xi_cv(K(t))`` and ``hbar dphi/dt = Ecv(K) + F (xi_cc - xi_vv)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_simpson, solve_ivp

from .core import (
    HBAR,
    ConfigError,
    KaneTwoBand,
    KGrid,
    NumericalError,
    PulseSpec,
    TightBinding,
)
from .regimes import channel_count, ponderomotive_ema

__all__ = [
    "TwoBandModel",
    "Tolerances",
    "TwoBandTrajectory",
    "DensityMatrixTrajectory",
    "time_grid",
    "houston_amplitude_first_order",
    "accumulated_phase",
    "dyson_correction",
    "dyson_series",
    "propagate_two_band",
    "propagate_with_dephasing",
    "RateScan",
    "excitation_rate_scan",
    "closing_analysis",
    "count_local_maxima",
    "MAX_DYSON_ORDER",
]

MAX_DYSON_ORDER = 3


@dataclass(frozen=True)
class TwoBandModel:
    """Pair energy, interband dipole and diagonal connections of a two-band model.

    Attributes
    ----------
    Ecv : callable
        K (1/Å) -> conduction-minus-valence energy (eV), vectorized.
    xi_cv : complex or callable
        Interband dipole (Å), constant or K -> complex array.
    xi_nn : callable, optional
        K -> xi_cc - xi_vv (Å); omitted means no geometric phase.
    a : float
        Lattice constant (Å), used for k-grid units.
    Eg : float
        Minimum of Ecv (eV).
    """

    Ecv: Callable
    xi_cv: complex | Callable
    a: float
    Eg: float
    xi_nn: Callable | None = None
    label: str = "two-band"
    mass: float | None = None

    @classmethod
    def kane(cls, Eg: float, mass: float, a: float = 1.0, xi: complex | None = None) -> "TwoBandModel":
        """Kane model with the dipole estimate hbar/(2 sqrt(m Eg)) by default."""
        band = KaneTwoBand(Eg, mass)
        return cls(Ecv=band.energy, xi_cv=band.xi_estimate if xi is None else xi, a=a, Eg=Eg,
                   label="kane", mass=mass)

    @classmethod
    def tight_binding(cls, conduction: TightBinding, valence: TightBinding, xi: complex | Callable,
                      xi_nn: Callable | None = None, check_points: int = 4096) -> "TwoBandModel":
        """Pair of cosine-series bands sharing one lattice constant."""
        pair = conduction - valence
        k = np.linspace(-math.pi / pair.a, math.pi / pair.a, check_points)
        e = pair.energy(k)
        if np.min(e) <= 0:
            raise ConfigError("tight-binding pair energy must stay positive over the zone")
        return cls(Ecv=pair.energy, xi_cv=xi, a=pair.a, Eg=float(np.min(e)), xi_nn=xi_nn,
                   label="tight-binding")

    @classmethod
    def flat(cls, Ecv: float, xi: complex, a: float = 1.0) -> "TwoBandModel":
        """k-independent pair energy: the two-level limit."""
        if not Ecv > 0:
            raise ConfigError("flat pair energy must be positive")
        return cls(Ecv=lambda K: np.full(np.shape(K), float(Ecv)), xi_cv=xi, a=a, Eg=float(Ecv),
                   label="flat")

    def dipole(self, K) -> np.ndarray:
        if callable(self.xi_cv):
            return np.asarray(self.xi_cv(K), dtype=complex)
        return np.full(np.shape(K), complex(self.xi_cv))

    def phase_rate(self, K, F) -> np.ndarray:
        """Modified pair energy Ecv + F (xi_cc - xi_vv), eV."""
        e = np.asarray(self.Ecv(K), dtype=float)
        if self.xi_nn is not None:
            e = e + F * np.asarray(self.xi_nn(K), dtype=float)
        return e


@dataclass(frozen=True)
class Tolerances:
    """Integrator and quadrature controls."""

    rtol: float = 1e-10
    atol: float = 1e-12
    method: str = "DOP853"
    samples_per_period: int = 24
    n_output: int = 201
    max_step: float | None = None
    first_step: float | None = None


def _k_array(kgrid) -> np.ndarray:
    if isinstance(kgrid, KGrid):
        pts = kgrid.points()
        if kgrid.dim != 1:
            raise ConfigError("two-band propagation here is one-dimensional; pass a 1D KGrid")
        return pts[:, 0]
    return np.atleast_1d(np.asarray(kgrid, dtype=float))


def time_grid(model: TwoBandModel, k, pulse: PulseSpec, samples_per_period: int = 24,
              t_end: float | None = None) -> np.ndarray:
    """Uniform grid resolving the fastest interband phase along all trajectories.

    An odd number of points is used so that Simpson weights apply.
    """
    t_end = pulse.t_end if t_end is None else t_end
    if t_end <= pulse.t_start:
        return np.array([pulse.t_start, pulse.t_start])
    probe = np.linspace(pulse.t_start, t_end, int(64 * max(1.0, (t_end - pulse.t_start) / pulse.period)) + 1)
    A = pulse.vector_potential(probe) / HBAR
    k = np.atleast_1d(np.asarray(k, dtype=float))
    K = np.concatenate([k.min() + A, k.max() + A])
    emax = max(float(np.max(np.abs(model.phase_rate(K, pulse.F0)))), pulse.photon_energy)
    fastest = 2 * math.pi * HBAR / emax
    dt = min(fastest, pulse.period) / samples_per_period
    n = int(math.ceil((t_end - pulse.t_start) / dt))
    n += n % 2  # even number of intervals
    return np.linspace(pulse.t_start, t_end, n + 1)


def _couplings(model: TwoBandModel, k: np.ndarray, pulse: PulseSpec, t: np.ndarray):
    """Interaction-picture coupling V_cv exp(i phi) on (k, t), eV."""
    F = pulse.field(t)
    K = k[:, None] + pulse.vector_potential(t)[None, :] / HBAR
    rate = model.phase_rate(K, F[None, :])
    phi = _cumulative(rate, t) / HBAR
    V = F[None, :] * model.dipole(K)
    return V * np.exp(1j * phi), t


def _cumulative(y: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Cumulative Simpson integral along the last axis (complex-safe)."""
    if np.iscomplexobj(y):
        return _cumulative(y.real, t) + 1j * _cumulative(y.imag, t)
    return cumulative_simpson(y, x=t, axis=-1, initial=0.0)


def dyson_series(model: TwoBandModel, k, pulse: PulseSpec, t: float | None = None, order: int = 1,
                 samples_per_period: int = 24, max_order: int = MAX_DYSON_ORDER) -> np.ndarray:
    """Conduction amplitude contributions up to ``order``.

    Returns an array of shape (order, len(k)); row ``n-1`` holds the n-th
    nonvanishing term, which contains ``2n - 1`` alternating interband
    insertions (cv, vc, cv, ...) in time-ordered nested integrals evaluated
    by iterated cumulative Simpson quadrature.
    """
    if not 1 <= int(order) <= max_order:
        raise ConfigError(f"Dyson order must lie in 1..{max_order} (cost guard), got {order}")
    k = np.atleast_1d(np.asarray(k, dtype=float))
    tt = time_grid(model, k, pulse, samples_per_period, t_end=pulse.t_end if t is None else min(t, pulse.t_end))
    g, _ = _couplings(model, k, pulse, tt)
    out = []
    c = -1j / HBAR * _cumulative(g, tt)
    out.append(c[:, -1])
    for _ in range(1, order):
        v = -1j / HBAR * _cumulative(np.conj(g) * c, tt)
        c = -1j / HBAR * _cumulative(g * v, tt)
        out.append(c[:, -1])
    return np.array(out)


def accumulated_phase(model: TwoBandModel, k, pulse: PulseSpec, t: float, samples_per_period: int = 24) -> np.ndarray:
    """phi(t) = (1/hbar) int_{t_start}^{t} [Ecv(K) + F (xi_cc - xi_vv)] dt'.

    Beyond the pulse the field vanishes and K is frozen, so the phase grows
    linearly at the final pair energy.
    """
    k = np.atleast_1d(np.asarray(k, dtype=float))
    t_in = min(t, pulse.t_end)
    tt = time_grid(model, k, pulse, samples_per_period, t_end=t_in)
    K = k[:, None] + pulse.vector_potential(tt)[None, :] / HBAR
    rate = model.phase_rate(K, pulse.field(tt)[None, :])
    phi = _cumulative(rate, tt)[:, -1] / HBAR
    if t > pulse.t_end:
        K_end = k + float(pulse.vector_potential(pulse.t_end)) / HBAR
        phi = phi + model.phase_rate(K_end, 0.0) * (t - pulse.t_end) / HBAR
    return phi


def houston_amplitude_first_order(model: TwoBandModel, k, pulse: PulseSpec, t: float | None = None,
                                  samples_per_period: int = 24, frame: str = "interaction") -> np.ndarray:
    """First-order conduction amplitude a_c(t) = -(i/hbar) int V_cv exp(i phi) dt1.

    ``frame="interaction"`` returns the slowly varying amplitude (its modulus
    is the occupation amplitude); ``frame="houston"`` multiplies by
    ``exp(-i phi(t))``, the relative dynamic phase of the conduction Houston
    state.  ``t`` defaults to the end of the pulse.
    """
    if frame not in ("interaction", "houston"):
        raise ConfigError(f"unknown frame {frame!r}")
    amp = dyson_series(model, k, pulse, t, 1, samples_per_period)[0]
    if frame == "houston":
        tt = pulse.t_end if t is None else t
        amp = amp * np.exp(-1j * accumulated_phase(model, k, pulse, tt, samples_per_period))
    return amp


def dyson_correction(model: TwoBandModel, k, pulse: PulseSpec, t: float | None = None, order: int = 1,
                     samples_per_period: int = 24, max_order: int = MAX_DYSON_ORDER) -> np.ndarray:
    """The ``order``-th term of the Dyson series for the conduction amplitude."""
    return dyson_series(model, k, pulse, t, order, samples_per_period, max_order)[-1]


# Full propagation --------------------------------------------------------------


@dataclass(frozen=True)
class TwoBandTrajectory:
    """Sampled interaction-picture amplitudes, shape (time, k, 2) as (b_v, b_c)."""

    t: np.ndarray
    k: np.ndarray
    amplitudes: np.ndarray
    phase: np.ndarray | None = None

    @property
    def populations(self) -> np.ndarray:
        """Conduction populations, shape (time, k)."""
        return np.abs(self.amplitudes[..., 1]) ** 2

    @property
    def final_populations(self) -> np.ndarray:
        return self.populations[-1]

    @property
    def norm_drift(self) -> np.ndarray:
        """max_t | |b_v|^2 + |b_c|^2 - 1 | per k."""
        norm = np.sum(np.abs(self.amplitudes) ** 2, axis=-1)
        return np.max(np.abs(norm - 1.0), axis=0)

    def coherence(self) -> np.ndarray:
        """Schroedinger-frame interband coherence rho_cv = b_c conj(b_v) exp(-i phi)."""
        if self.phase is None:
            raise ConfigError("trajectory carries no phase record")
        bv, bc = self.amplitudes[..., 0], self.amplitudes[..., 1]
        return bc * np.conj(bv) * np.exp(-1j * self.phase)

    def interband_polarization(self, model: "TwoBandModel", pulse: PulseSpec, weights=None) -> np.ndarray:
        """k-averaged interband polarization P(t) = -2 Re(conj(xi_cv(K)) rho_cv), e·Å.

        The sign makes ``int F dP/dt dt`` the energy taken up by the
        system.  ``weights`` (default uniform, summing to one) set the k
        average.
        """
        K = self.k[None, :] + pulse.vector_potential(self.t)[:, None] / HBAR
        p = -2.0 * np.real(np.conj(model.dipole(K)) * self.coherence())
        w = np.full(self.k.size, 1.0 / self.k.size) if weights is None else np.asarray(weights, dtype=float)
        return p @ w


@dataclass(frozen=True)
class DensityMatrixTrajectory:
    """Sampled density matrices, shape (time, k, 2, 2) in the (v, c) basis."""

    t: np.ndarray
    k: np.ndarray
    rho: np.ndarray
    T2: float

    @property
    def populations(self) -> np.ndarray:
        return self.rho[..., 1, 1].real

    @property
    def final_populations(self) -> np.ndarray:
        return self.populations[-1]

    @property
    def purity(self) -> np.ndarray:
        return np.einsum("...ij,...ji->...", self.rho, self.rho).real

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.rho)


class _Drive:
    """Evaluates F, K and the phase rate for the ODE right-hand sides."""

    def __init__(self, model: TwoBandModel, k: np.ndarray, pulse: PulseSpec):
        self.model, self.k, self.pulse = model, k, pulse

    def __call__(self, t: float):
        F = float(self.pulse.field(t))
        K = self.k + float(self.pulse.vector_potential(t)) / HBAR
        return F, F * self.model.dipole(K), self.model.phase_rate(K, F) / HBAR


def _solve(rhs, y0, pulse, t_eval, tol: Tolerances, k):
    kw = {}
    if tol.max_step is not None:
        kw["max_step"] = tol.max_step
    if tol.first_step is not None:
        kw["first_step"] = tol.first_step
    sol = solve_ivp(rhs, (pulse.t_start, pulse.t_end), y0, method=tol.method, t_eval=t_eval,
                    rtol=tol.rtol, atol=tol.atol, **kw)
    if not sol.success:
        raise NumericalError(
            f"integrator failed at t = {sol.t[-1]:.6g} fs ({sol.message}); "
            f"k range [{k.min():.4g}, {k.max():.4g}] 1/Å"
        )
    return sol


def _output_times(pulse: PulseSpec, n: int) -> np.ndarray:
    return np.linspace(pulse.t_start, pulse.t_end, max(2, int(n)))


def propagate_two_band(model: TwoBandModel, kgrid, pulse: PulseSpec, tolerances: Tolerances | None = None) -> TwoBandTrajectory:
    """Integrate the two-band Houston equations for every k.

    All k points are advanced together by one adaptive embedded
    Runge-Kutta integration (error control is per component, so each k is
    held to the same tolerance).  The phase phi is carried as an extra
    real state and is therefore integrated to the same tolerance as the
    amplitudes.
    """
    tol = tolerances or Tolerances()
    k = _k_array(kgrid)
    nk = k.size
    drive = _Drive(model, k, pulse)

    def rhs(t, y):
        bv, bc, phi = y[:nk], y[nk:2 * nk], y[2 * nk:].real
        _, V, w = drive(t)
        ph = np.exp(1j * phi)
        dbc = -1j / HBAR * V * ph * bv
        dbv = -1j / HBAR * np.conj(V) * np.conj(ph) * bc
        return np.concatenate([dbv, dbc, w.astype(complex)])

    y0 = np.concatenate([np.ones(nk, complex), np.zeros(nk, complex), np.zeros(nk, complex)])
    t_eval = _output_times(pulse, tol.n_output)
    sol = _solve(rhs, y0, pulse, t_eval, tol, k)
    amps = np.stack([sol.y[:nk].T, sol.y[nk:2 * nk].T], axis=-1)
    return TwoBandTrajectory(t=sol.t, k=k, amplitudes=amps, phase=sol.y[2 * nk:].real.T)


def propagate_with_dephasing(model: TwoBandModel, kgrid, pulse: PulseSpec, T2: float | None,
                             tolerances: Tolerances | None = None) -> DensityMatrixTrajectory:
    """Two-band Bloch equations with pure dephasing of the interband coherence.

    ``T2`` in fs; ``None`` or ``math.inf`` disables dephasing.  Populations
    are not relaxed.
    """
    if T2 is None:
        T2 = math.inf
    if not (T2 > 0):
        raise ConfigError(f"T2 must be positive or infinite, got {T2}")
    gamma = 0.0 if math.isinf(T2) else 1.0 / T2
    tol = tolerances or Tolerances()
    k = _k_array(kgrid)
    nk = k.size
    drive = _Drive(model, k, pulse)

    def rhs(t, y):
        rcc, rcv, phi = y[:nk].real, y[nk:2 * nk], y[2 * nk:].real
        _, V, w = drive(t)
        g = V * np.exp(1j * phi)
        drcc = 2.0 / HBAR * np.imag(g * np.conj(rcv))
        drcv = -1j / HBAR * g * (1.0 - 2.0 * rcc) - gamma * rcv
        return np.concatenate([drcc.astype(complex), drcv, w.astype(complex)])

    y0 = np.zeros(3 * nk, complex)
    t_eval = _output_times(pulse, tol.n_output)
    sol = _solve(rhs, y0, pulse, t_eval, tol, k)
    rcc = sol.y[:nk].real.T
    rcv = sol.y[nk:2 * nk].T
    rho = np.empty(rcc.shape + (2, 2), complex)
    rho[..., 0, 0] = 1.0 - rcc
    rho[..., 1, 1] = rcc
    rho[..., 1, 0] = rcv
    rho[..., 0, 1] = np.conj(rcv)
    return DensityMatrixTrajectory(t=sol.t, k=k, rho=rho, T2=T2)


def count_local_maxima(values, threshold: float = 0.05, periodic: bool = True) -> int:
    """Number of strict local maxima above ``threshold`` times the peak."""
    f = np.asarray(values, dtype=float)
    if f.size < 3 or np.max(f) <= 0:
        return 0
    left = np.roll(f, 1)
    right = np.roll(f, -1)
    is_max = (f > left) & (f >= right) & (f > threshold * np.max(f))
    if not periodic:
        is_max[[0, -1]] = False
    return int(np.sum(is_max))


# Rate scans --------------------------------------------------------------------


@dataclass(frozen=True)
class RateScan:
    """Cycle-averaged excitation rate versus field amplitude.

    ``rate`` is the k-averaged final conduction population divided by the
    pulse duration (1/fs).
    """

    F0: np.ndarray
    rate: np.ndarray
    N_tilde: np.ndarray
    closing: np.ndarray
    gamma_NP: np.ndarray
    Up: np.ndarray
    metadata: dict = field(default_factory=dict)

    def table(self) -> np.ndarray:
        return np.column_stack([self.F0, self.rate, self.N_tilde, self.closing.astype(int)])


def excitation_rate_scan(model: TwoBandModel, pulses, kgrid, method: str = "first-order",
                         samples_per_period: int = 24, tolerances: Tolerances | None = None,
                         workers: int = 1) -> RateScan:
    """Excitation rate for a family of monochromatic pulses.

    Parameters
    ----------
    model : TwoBandModel
        Needs ``mass`` for the parabolic ponderomotive energy that sets the
        channel count.
    pulses : sequence of PulseSpec
        Monochromatic pulses (ramps allowed) of at least 10 cycles.
    kgrid : KGrid or array of k (1/Å)
    method : {"first-order", "tdse"}
    workers : int
        Thread count for the per-field loop; ordering is deterministic.
    """
    pulses = list(pulses)
    if not pulses:
        raise ConfigError("empty pulse family")
    for p in pulses:
        if p.envelope != "monochromatic":
            raise ConfigError("rate scans need monochromatic pulses")
        if p.n_cycles < 10 - 1e-9:
            raise ConfigError(f"rate scans need >= 10 cycles, got {p.n_cycles:.2f}")
    if model.mass is None:
        raise ConfigError("rate scan needs the model's reduced mass for the channel count")
    if method not in ("first-order", "tdse"):
        raise ConfigError(f"unknown rate method {method!r}")
    k = _k_array(kgrid)

    def one(p: PulseSpec) -> float:
        if method == "first-order":
            pop = np.abs(houston_amplitude_first_order(model, k, p, samples_per_period=samples_per_period)) ** 2
        else:
            pop = propagate_two_band(model, k, p, tolerances).final_populations
        return float(np.mean(pop)) / p.duration

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as ex:
            rates = list(ex.map(one, pulses))
    else:
        rates = [one(p) for p in pulses]
    F0 = np.array([p.F0 for p in pulses])
    hw = np.array([p.photon_energy for p in pulses])
    up = np.array([ponderomotive_ema(p.F0, p.photon_energy, model.mass, p.beta) for p in pulses])
    ntil = np.array([channel_count(model.Eg, u, w)[0] for u, w in zip(up, hw)])
    rates = np.array(rates)
    closing = np.zeros(len(pulses), bool)
    closing[1:] = rates[1:] < rates[:-1]
    meta = {
        "rate_definition": "k-averaged final conduction population / pulse duration",
        "method": method,
        "n_k": int(k.size),
        "model": model.label,
    }
    return RateScan(F0=F0, rate=rates, N_tilde=ntil, closing=closing, gamma_NP=up / hw, Up=up, metadata=meta)


def _slope(x, y) -> float:
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def closing_analysis(scan: RateScan, below: tuple[float, float] = (0.1, 0.5),
                     closing_window: tuple[float, float] = (0.5, 1.5)) -> dict:
    """Locate the first channel closing and the growth slopes around it.

    * ``slope_below``: least-squares log-log slope over ``below`` (a range of
      gamma_NP in the perturbative multiphoton stretch).
    * first closing: the grid interval inside ``closing_window`` with the
      largest drop of log(rate).
    * ``slope_above``: end-to-end log-log slope of the branch that follows,
      from its minimum to the last point before the next decrease.
    """
    g, r, F = scan.gamma_NP, scan.rate, scan.F0
    sel = (g >= below[0]) & (g <= below[1])
    out = {"slope_below": _slope(F[sel], r[sel]) if sel.sum() >= 2 else math.nan}
    logr = np.log(r)
    drops = np.where(np.diff(logr) < 0)[0]
    cand = [i for i in drops if closing_window[0] <= g[i + 1] <= closing_window[1]]
    if not cand:
        out.update(first_closing_gamma_NP=math.nan, slope_above=math.nan, decreasing_near_one=False)
        return out
    i = min(cand, key=lambda j: logr[j + 1] - logr[j])
    lo = i + 1
    while lo + 1 < r.size and r[lo + 1] < r[lo]:
        lo += 1
    hi = lo
    while hi + 1 < r.size and r[hi + 1] >= r[hi]:
        hi += 1
    out["first_closing_gamma_NP"] = float(g[i + 1])
    out["branch_gamma_NP"] = (float(g[lo]), float(g[hi]))
    out["slope_above"] = math.log(r[hi] / r[lo]) / math.log(F[hi] / F[lo]) if hi > lo else math.nan
    out["decreasing_near_one"] = True
    return out
