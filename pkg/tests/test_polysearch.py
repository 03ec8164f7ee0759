import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zfr.polysearch import (
    AnnealConfig,
    Objective,
    anneal,
    c1_ratio,
    lift_to_admissible,
    objective_value,
)
from zfr.trigpoly import NotAdmissibleError, TrigPoly, verify_admissible

DEG4_START = TrigPoly((1.0, 4 / 3, 1 / 3))


def test_c1_ratio_mt16(poly16):
    assert c1_ratio(poly16.coeffs) == pytest.approx(12.24106100, abs=1e-6)


def test_objective_inf_when_inadmissible():
    assert objective_value(TrigPoly((1.0, 3.0))) == math.inf


def test_square_poly_worse(poly16, square_poly):
    assert objective_value(square_poly) > c1_ratio(poly16.coeffs)


@given(st.integers(-20, 20))
def test_scale_invariant_exact_scaling(j):
    p = TrigPoly((1.0, 1.74, 1.13, 0.51, 0.13))
    v = c1_ratio(p.coeffs)
    assert abs(c1_ratio(p.scaled(4.0**j).coeffs) - v) <= 4 * math.ulp(v)


@given(st.floats(0.01, 100))
def test_scale_invariant(lam):
    # Rounding the scaled coefficients alone costs a few ulps in a1 - a0.
    p = TrigPoly((1.0, 1.74, 1.13, 0.51, 0.13))
    v = c1_ratio(p.coeffs)
    assert abs(c1_ratio(p.scaled(lam).coeffs) - v) <= 16 * math.ulp(v)


def test_lift(poly16):
    lifted = lift_to_admissible(poly16)
    assert verify_admissible(lifted).admissible
    assert lifted.coeffs[1:] == poly16.coeffs[1:]
    assert 0 < lifted.coeffs[0] - poly16.coeffs[0] < 3e-4


def test_anneal_rejects_inadmissible():
    with pytest.raises(NotAdmissibleError):
        anneal(TrigPoly((1.0, 3.0)), AnnealConfig(degree=2, steps=10))


def test_anneal_never_worse(poly16):
    start = lift_to_admissible(poly16)
    res = anneal(start, AnnealConfig(degree=16, steps=10_000, seed=3))
    assert res.best_value <= objective_value(start) + 1e-9
    assert verify_admissible(res.best).admissible


def test_anneal_deterministic():
    acfg = AnnealConfig(degree=4, steps=2000, seed=11)
    a = anneal(DEG4_START, acfg)
    b = anneal(DEG4_START, acfg)
    assert a.trace == b.trace
    assert a.best == b.best


def test_anneal_degree4_improves():
    res = anneal(DEG4_START, AnnealConfig(degree=4, steps=100_000, seed=0))
    assert res.best_value < res.start_value
    # Degree-4 polynomials sit well above the degree-16 value.
    assert 12.24 < res.best_value < 13.0
    assert verify_admissible(res.best).admissible


def test_trace_monotone_best():
    res = anneal(DEG4_START, AnnealConfig(degree=4, steps=3000, seed=5))
    best = [row[3] for row in res.trace]
    assert all(b <= a for a, b in zip(best, best[1:]))
    assert res.trace_csv().startswith("step,temperature,current_value,best_value\n")


@pytest.mark.parametrize("kw", [{"degree": 0}, {"degree": 4, "steps": 0},
                                {"degree": 4, "cooling_rate": 1.0}, {"degree": 4, "move_scale": 0}])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        AnnealConfig(**kw)


def test_exceptional_objective(poly16):
    v = objective_value(poly16, which=Objective.R_EXCEPTIONAL, check=False)
    assert v == pytest.approx(12.43436, abs=1e-3)
