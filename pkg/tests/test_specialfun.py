import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zfr.specialfun import digamma, psi

# Computed with mpmath.digamma at 50 digits.
PSI_1 = -0.5772156649015329
PSI_HALF = -1.9635100260214235


def test_known_values():
    assert abs(psi(1.0) - PSI_1) <= 2 * math.ulp(PSI_1)
    assert abs(psi(0.5) - PSI_HALF) <= 2 * math.ulp(PSI_HALF)
    assert abs(psi(0.5) - (-float(mpmath.euler) - 2 * math.log(2))) < 1e-15


def test_recurrence_at_two():
    assert abs(psi(2.0) - (psi(1.0) + 1.0)) <= 2 * math.ulp(psi(2.0))


def test_random_recurrence():
    rng = np.random.default_rng(7)
    xs = rng.uniform(0.1, 50.0, 1000)
    worst = max(abs(psi(x + 1) - psi(x) - 1 / x) for x in xs)
    assert worst <= 1e-12


@given(st.floats(0.05, 200.0))
def test_against_mpmath(x):
    mpmath.mp.dps = 30
    ref = float(mpmath.digamma(x))
    assert abs(psi(x) - ref) <= 1e-14 * max(1.0, abs(ref))


@given(st.floats(0.05, 0.95))
def test_reflection(x):
    assert abs(psi(1 - x) - psi(x) - math.pi / math.tan(math.pi * x)) <= 1e-11


def test_increasing():
    xs = np.linspace(0.1, 30, 500)
    vals = [psi(x) for x in xs]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_error_estimate_is_small_and_honest():
    mpmath.mp.dps = 30
    for x in (0.3, 1.0, 7.5, 120.0):
        r = digamma(x)
        assert 0 < r.est_abs_error < 1e-13
        assert abs(r.value - float(mpmath.digamma(x))) <= r.est_abs_error + math.ulp(r.value)


@pytest.mark.parametrize("x", [0.0, -1.0, math.inf, math.nan])
def test_domain(x):
    with pytest.raises(ValueError):
        psi(x)
