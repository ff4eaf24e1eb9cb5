import math

import mpmath
import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given
from hypothesis import strategies as st

from blochwave.special import AIRY_SEAM, J0_SEAM, airy_ai, j0, j0_zeros, j1


def test_j0_matches_scipy_on_dense_grid():
    x = np.linspace(0.0, 50.0, 20001)
    assert np.max(np.abs(j0(x) - sp.j0(x))) < 1e-10


def test_j1_matches_scipy_on_dense_grid():
    x = np.linspace(0.0, 50.0, 20001)
    assert np.max(np.abs(j1(x) - sp.j1(x))) < 1e-10


@pytest.mark.parametrize("x", [J0_SEAM - 1e-9, J0_SEAM, J0_SEAM + 1e-9])
def test_j0_continuous_across_seam(x):
    assert abs(j0(x) - float(mpmath.besselj(0, x))) < 1e-11


@given(st.floats(min_value=-80.0, max_value=80.0, allow_nan=False))
def test_j0_even_and_bounded(x):
    assert j0(x) == pytest.approx(j0(-x), abs=1e-15)
    assert abs(j0(x)) <= 1.0 + 1e-12


@given(st.floats(min_value=0.0, max_value=60.0))
def test_j1_is_minus_derivative_of_j0(x):
    h = 1e-5
    deriv = (j0(x + h) - j0(x - h)) / (2 * h)
    assert deriv == pytest.approx(-j1(x), abs=1e-8)


def test_j0_zeros_against_mpmath():
    zeros = j0_zeros(10)
    ref = [float(mpmath.besseljzero(0, n)) for n in range(1, 11)]
    assert np.max(np.abs(zeros - ref)) < 1e-12


def test_j0_zeros_rejects_nonpositive_count():
    with pytest.raises(ValueError):
        j0_zeros(0)


def test_scalar_in_scalar_out():
    assert isinstance(j0(1.0), float)
    assert isinstance(airy_ai(0.5), float)
    assert j0(np.array([1.0, 2.0])).shape == (2,)


def test_airy_at_origin():
    ref = 1.0 / (3 ** (2 / 3) * math.gamma(2 / 3))
    assert airy_ai(0.0) == pytest.approx(ref, rel=1e-14)


def test_airy_against_mpmath_relative():
    x = np.concatenate([np.linspace(-20, 20, 801), [AIRY_SEAM - 1e-9, AIRY_SEAM + 1e-9]])
    ours = airy_ai(x)
    ref = np.array([float(mpmath.airyai(v)) for v in x])
    # relative on the decaying side, absolute on the oscillating side
    pos = x > 0
    assert np.max(np.abs(ours[pos] - ref[pos]) / np.abs(ref[pos])) < 1e-6
    assert np.max(np.abs(ours[~pos] - ref[~pos])) < 1e-7


def test_airy_deep_tail_underflows_gracefully():
    v = airy_ai(np.array([50.0, 200.0, 1e4]))
    assert np.all(np.isfinite(v)) and np.all(v >= 0)
    assert v[0] == pytest.approx(float(mpmath.airyai(50)), rel=1e-6)


@given(st.floats(min_value=-15.0, max_value=15.0))
def test_airy_satisfies_airy_equation(x):
    h = 1e-3
    second = (airy_ai(x + h) - 2 * airy_ai(x) + airy_ai(x - h)) / h ** 2
    assert second == pytest.approx(x * airy_ai(x), abs=2e-5)
