"""Self-contained special functions: Bessel J0/J1 and Airy Ai.

Both are implemented with a convergent power series near the origin and the
standard large-argument asymptotic expansion further out.  The seams are
placed where the truncation error of the asymptotic branch drops below
roughly 1e-11 while the cancellation loss of the series stays modest.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

__all__ = ["j0", "j1", "j0_zeros", "airy_ai", "J0_SEAM", "AIRY_SEAM"]

J0_SEAM = 12.0
AIRY_SEAM = 6.0

_SERIES_TERMS = 60
_ASYM_TERMS = 30


def _bessel_series(x: np.ndarray, order: int) -> np.ndarray:
    """Power series for J_order, order in {0, 1}."""
    half = x / 2.0
    q = -(half * half)
    term = np.ones_like(x) if order == 0 else half.copy()
    total = term.copy()
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * (k + order))
        total = total + term
    return total


def _bessel_asymptotic(x: np.ndarray, order: int) -> np.ndarray:
    """Hankel expansion J_nu(x) ~ sqrt(2/(pi x)) (P cos chi - Q sin chi)."""
    mu = 4.0 * order * order
    z = 8.0 * x
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    smallest = np.full_like(x, np.inf)
    p_best = p.copy()
    q_best = q.copy()
    for k in range(1, 2 * _ASYM_TERMS):
        term = term * (mu - (2 * k - 1) ** 2) / (k * z)
        # stop each point at its smallest term (optimal truncation)
        keep = np.abs(term) < smallest
        smallest = np.where(keep, np.abs(term), smallest)
        if k % 2 == 1:
            sign = -1.0 if (k // 2) % 2 else 1.0
            q = q + sign * term
        else:
            sign = -1.0 if (k // 2) % 2 else 1.0
            p = p + sign * term
        p_best = np.where(keep, p, p_best)
        q_best = np.where(keep, q, q_best)
    chi = x - (0.5 * order + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (p_best * np.cos(chi) - q_best * np.sin(chi))


def _bessel(x, order: int):
    arr = np.asarray(x, dtype=float)
    ax = np.abs(arr)
    out = np.empty_like(ax)
    small = ax < J0_SEAM
    if np.any(small):
        out[small] = _bessel_series(ax[small], order)
    if np.any(~small):
        out[~small] = _bessel_asymptotic(ax[~small], order)
    if order == 1:
        out = np.where(arr < 0, -out, out)
    if np.ndim(x) == 0:
        return float(out)
    return out


def j0(x):
    """Bessel function of the first kind, order zero.

    Parameters
    ----------
    x : float or array_like
        Real argument.

    Returns
    -------
    float or ndarray
        J0(x), absolute accuracy about 1e-12 on [0, 50].
    """
    return _bessel(x, 0)


def j1(x):
    """Bessel function of the first kind, order one (odd in x)."""
    return _bessel(x, 1)


def j0_zeros(count: int) -> np.ndarray:
    """First ``count`` positive zeros of J0.

    McMahon's estimate brackets each root, which is then polished with
    Brent's method on the internal J0.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    roots = []
    for s in range(1, count + 1):
        beta = (s - 0.25) * math.pi
        guess = beta + 1.0 / (8.0 * beta) - 124.0 / (3.0 * (8.0 * beta) ** 3)
        lo, hi = guess - 0.3, guess + 0.3
        roots.append(brentq(j0, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200))
    return np.array(roots)


# Airy function ---------------------------------------------------------------

_AI0 = 0.355028053887817239260063186004
_AIP0 = 0.258819403792806798405183560189


def _airy_series(x: np.ndarray) -> np.ndarray:
    x3 = x ** 3
    f_term = np.ones_like(x)
    g_term = x.copy()
    f = f_term.copy()
    g = g_term.copy()
    for k in range(1, 80):
        f_term = f_term * x3 / ((3 * k - 1) * (3 * k))
        g_term = g_term * x3 / ((3 * k) * (3 * k + 1))
        f = f + f_term
        g = g + g_term
    return _AI0 * f - _AIP0 * g


def _airy_u(n_terms: int) -> np.ndarray:
    u = np.empty(n_terms)
    u[0] = 1.0
    for k in range(1, n_terms):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k)
    return u


_U = _airy_u(40)


def _airy_positive(x: np.ndarray) -> np.ndarray:
    zeta = 2.0 / 3.0 * x ** 1.5
    total = np.zeros_like(x)
    term_prev = np.full_like(x, np.inf)
    active = np.ones_like(x, dtype=bool)
    for k, uk in enumerate(_U):
        term = (-1) ** k * uk / zeta ** k
        active = active & (np.abs(term) < term_prev)
        total = total + np.where(active, term, 0.0)
        term_prev = np.where(active, np.abs(term), term_prev)
    return np.exp(-zeta) / (2.0 * math.sqrt(math.pi) * x ** 0.25) * total


def _airy_negative(x: np.ndarray) -> np.ndarray:
    ax = -x
    zeta = 2.0 / 3.0 * ax ** 1.5
    p = np.zeros_like(ax)
    q = np.zeros_like(ax)
    prev = np.full_like(ax, np.inf)
    active = np.ones_like(ax, dtype=bool)
    for k, uk in enumerate(_U):
        term = uk / zeta ** k
        active = active & (np.abs(term) < prev)
        prev = np.where(active, np.abs(term), prev)
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p = p + np.where(active, sign * term, 0.0)
        else:
            q = q + np.where(active, sign * term, 0.0)
    phase = zeta + math.pi / 4.0
    return (p * np.sin(phase) - q * np.cos(phase)) / (math.sqrt(math.pi) * ax ** 0.25)


def airy_ai(x):
    """Airy function Ai(x) for real arguments.

    Maclaurin series for ``|x| <= 6`` and the standard asymptotic forms
    beyond.  Relative accuracy is about 1e-7 near the positive seam (the
    series loses digits to cancellation there) and better elsewhere.
    """
    arr = np.asarray(x, dtype=float)
    out = np.empty_like(arr)
    mid = np.abs(arr) <= AIRY_SEAM
    pos = arr > AIRY_SEAM
    neg = arr < -AIRY_SEAM
    if np.any(mid):
        out[mid] = _airy_series(arr[mid])
    if np.any(pos):
        out[pos] = _airy_positive(arr[pos])
    if np.any(neg):
        out[neg] = _airy_negative(arr[neg])
    if np.ndim(x) == 0:
        return float(out)
    return out
