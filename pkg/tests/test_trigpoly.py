import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zfr.config import BoundConfig
from zfr.trigpoly import (
    MT16_COEFFS,
    NotAdmissibleError,
    PolyError,
    TrigPoly,
    dumps_poly,
    eval_grid,
    eval_poly,
    load_poly,
    loads_poly,
    require_admissible,
    save_poly,
    verify_admissible,
)

coeff_lists = st.lists(st.floats(0, 5, allow_nan=False), min_size=2, max_size=8)


def test_square_vanishes_at_pi(square_poly):
    assert abs(eval_poly(square_poly, math.pi)) <= 4 * math.ulp(8.0)


def test_square_identity_on_grid(square_poly):
    phi = np.linspace(0, math.pi, 1001)
    exact = 2 * (1 + np.cos(phi)) ** 2
    assert np.max(np.abs(eval_grid(square_poly, phi) - exact)) <= 4 * math.ulp(8.0)


def test_mt16_sum_against_mpmath(poly16):
    mpmath.mp.dps = 40
    oracle = mpmath.fsum(mpmath.mpf(s) for s in MT16_COEFFS)
    assert abs(eval_poly(poly16, 0.0) - float(oracle)) < 1e-14
    assert abs(eval_poly(poly16, 0.0) - 4.5229878) < 5e-8


@given(coeff_lists, st.floats(-10, 10))
def test_even(coeffs, phi):
    p = TrigPoly(tuple(coeffs))
    assert eval_poly(p, -phi) == eval_poly(p, phi)


@given(coeff_lists, st.floats(-7, 7))
def test_grid_matches_direct_sum(coeffs, phi):
    p = TrigPoly(tuple(coeffs))
    scale = max(1.0, sum(coeffs))
    assert abs(eval_grid(p, np.array([phi]))[0] - eval_poly(p, phi)) <= 1e-12 * scale


def test_square_admissible(square_poly):
    rep = verify_admissible(square_poly)
    assert rep.admissible


def test_one_three_not_admissible():
    p = TrigPoly((1.0, 3.0))
    assert eval_poly(p, math.pi) == -2.0
    rep = verify_admissible(p)
    assert not rep.nonneg_ok and not rep.admissible
    with pytest.raises(NotAdmissibleError):
        require_admissible(p)


def test_coefficient_sign_and_order_conditions():
    assert not verify_admissible(TrigPoly((2.0, 1.0))).a0_lt_a1_ok
    assert not verify_admissible(TrigPoly((1.0, 2.0, -0.1))).coeff_sign_ok


def test_mt16_admissible(poly16):
    # Red: the printed coefficients dip to about -2.0e-4 near phi = 2.0608.
    assert verify_admissible(poly16).admissible


def test_mt16_minimum_confirmed_by_mpmath(poly16):
    rep = verify_admissible(poly16)
    mpmath.mp.dps = 30
    a = [mpmath.mpf(s) for s in MT16_COEFFS]
    f = lambda x: mpmath.fsum(ak * mpmath.cos(k * x) for k, ak in enumerate(a))
    x = mpmath.findroot(lambda x: mpmath.diff(f, x), rep.witness_phi)
    assert abs(float(f(x)) - rep.grid_min) < 1e-9
    assert float(f(x)) < 0


def test_grid_bound_is_below_grid_minimum(square_poly):
    rep = verify_admissible(square_poly, grid_points=101)
    assert rep.min_value_lower_bound <= rep.grid_min


@given(coeff_lists, st.floats(0.01, 100))
@settings(max_examples=50)
def test_lower_bound_scales_linearly(coeffs, lam):
    p = TrigPoly(tuple(coeffs))
    cfg = BoundConfig(nonneg_grid_points=2001)
    lo = verify_admissible(p, cfg).min_value_lower_bound
    lo_scaled = verify_admissible(p.scaled(lam), cfg).min_value_lower_bound
    assert lo_scaled == pytest.approx(lam * lo, rel=1e-9, abs=1e-12 * lam * max(1.0, sum(coeffs)))


def test_file_roundtrip(tmp_path, poly16):
    path = tmp_path / "p.json"
    save_poly(poly16, path)
    assert load_poly(path).coeffs == poly16.coeffs
    assert loads_poly(dumps_poly(poly16)) == poly16


@pytest.mark.parametrize("text", [
    "{bad",
    '{"degree": 2, "coeffs": ["1", "2"]}',
    '{"degree": 1, "coeffs": ["1", "x"]}',
    '{"coeffs": ["1", "2"]}',
    '[1, 2]',
])
def test_malformed_files(text):
    with pytest.raises(PolyError):
        loads_poly(text)
