import math

import numpy as np
import pytest

from zfr.classical import HALF_GAP
from zfr.exceptional import (
    ConstraintError,
    InfeasibleError,
    NoRootError,
    RegionB,
    RegionC,
    RegionSplit,
    cA_closed_form,
    compute_R,
    eval_EB,
    eval_EC,
    optimize_cA,
    optimize_region,
    region_a_rhs,
    search_split,
    smallest_root_in_c,
)
from zfr.trigpoly import TrigPoly

SPLIT_1 = RegionSplit(1.021, 2.374)
SPLIT_2 = RegionSplit(1.0015, 2.318)


@pytest.fixture(scope="module")
def result2(poly16):
    return compute_R(poly16, SPLIT_2)


# --- region A -------------------------------------------------------------

@pytest.mark.parametrize("d1,r,inv", [(1.021, 2.1426, 12.5494), (1.0015, 2.1163, 9.7946)])
def test_cA_printed_points(d1, r, inv):
    assert 1 / cA_closed_form(d1, r) == pytest.approx(inv, abs=1e-3)


def test_cA_boundary():
    r = 2.0
    d1 = r / (1 + HALF_GAP * r)
    expected = -HALF_GAP * r * r / (1 + HALF_GAP * r)
    # The discriminant is zero only up to rounding; its square root is ~1e-8.
    assert cA_closed_form(d1, r) == pytest.approx(expected, abs=1e-7)


@pytest.mark.parametrize("d1,r", [(1.021, 2.1426), (1.0015, 2.1163), (0.9, 3.0)])
def test_cA_satisfies_equation(d1, r):
    assert abs(region_a_rhs(d1, r, cA_closed_form(d1, r))) <= 1e-10


def test_cA_negative_discriminant():
    with pytest.raises(ValueError):
        cA_closed_form(2.0, 1.0)


@pytest.mark.parametrize("d1,r,inv", [(1.021, 2.1426, 12.5494), (1.0015, 2.1163, 9.7946)])
def test_optimize_cA(d1, r, inv):
    r_star, inv_star = optimize_cA(d1)
    assert r_star == pytest.approx(r, abs=1e-3)
    assert inv_star == pytest.approx(inv, abs=1e-3)


def test_optimize_cA_monotone():
    vals = [optimize_cA(d1)[1] for d1 in np.linspace(0.9, 1.08, 10)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_optimize_cA_infeasible_for_large_d1():
    with pytest.raises(InfeasibleError):
        optimize_cA(1.1)


# --- regions B and C ----------------------------------------------------------

@pytest.mark.parametrize("split,r,inv", [(SPLIT_1, 0.2366, 12.43922), (SPLIT_2, 0.2363, 12.43355)])
def test_EB_printed_pairs(poly16, split, r, inv):
    assert abs(eval_EB(poly16, split, r, 1 / inv)) <= 1e-4


@pytest.mark.parametrize("d2,r,inv", [(2.374, 0.2477, 12.42548), (2.318, 0.2473, 12.43436)])
def test_EC_printed_pairs(poly16, d2, r, inv):
    assert abs(eval_EC(poly16, d2, r, 1 / inv)) <= 1e-4


def test_EB_limit_c_to_zero(poly16):
    E = RegionB(poly16, SPLIT_2)
    assert float(E(0.2, 1e-12)) == pytest.approx(float(E(0.2, 0.0)), abs=1e-9)


def test_EC_increasing_in_c(poly16):
    E = RegionC(poly16, 2.374)
    c = np.linspace(0.01, 0.2, 200)
    assert np.all(np.diff(E(0.2477, c)) > 0)


def test_constraints(poly16):
    with pytest.raises(ConstraintError):
        eval_EB(poly16, SPLIT_2, 1.5, 0.05)
    with pytest.raises(ConstraintError):
        eval_EC(poly16, 2.318, 0.01, 0.5)


def test_root_scan_printed(poly16):
    scan = smallest_root_in_c(RegionC(poly16, 2.374), 0.2477)
    assert 1 / scan.c == pytest.approx(12.42548, abs=1e-3)
    assert scan.rising
    scan = smallest_root_in_c(RegionB(poly16, SPLIT_1), 0.2366)
    assert 1 / scan.c == pytest.approx(12.43922, abs=1e-3)


class _Positive(RegionC):
    def __call__(self, r, c):
        return np.ones(np.broadcast(r, c).shape)


def test_no_root(poly16):
    with pytest.raises(NoRootError):
        smallest_root_in_c(_Positive(poly16, 2.318), 0.25)


@pytest.mark.parametrize("d2,r,inv", [(2.318, 0.2473, 12.43436), (2.374, 0.2477, 12.42548)])
def test_optimize_region_C(poly16, d2, r, inv):
    opt = optimize_region(RegionC(poly16, d2))
    assert opt.r == pytest.approx(r, abs=1e-3)
    assert opt.inv == pytest.approx(inv, abs=1e-3)


def test_optimize_region_B(result2):
    assert result2.B.r == pytest.approx(0.2363, abs=1e-3)
    assert result2.B.inv == pytest.approx(12.43355, abs=1e-3)


# --- compute_R, search ---------------------------------------------------------

def test_compute_R(poly16, result2):
    assert result2.R == pytest.approx(12.43436, abs=1e-3)
    assert compute_R(poly16, SPLIT_1).R == pytest.approx(12.5494, abs=1e-3)


def test_optimum_residuals(result2):
    for opt in (result2.B, result2.C):
        assert abs(opt.residual) <= 1e-4
        assert opt.constraints_ok
        assert opt.sign_changes >= 1


def test_root_sign_feasibility(poly16, result2):
    for E, opt in ((RegionB(poly16, SPLIT_2), result2.B), (RegionC(poly16, SPLIT_2.d2), result2.C)):
        assert E(opt.r, opt.c - 1e-9) < 0 <= E(opt.r, opt.c + 1e-9)


def test_degenerate_split():
    with pytest.raises(ValueError):
        RegionSplit(2.0, 2.0)


def test_region_rejects_bad_polynomial():
    with pytest.raises(ValueError):
        RegionC(TrigPoly((2.0, 1.0)), 2.3)


def test_single_cell_search_matches_compute_R(poly16, result2):
    res = search_split(poly16, (1.0015, 1.0015), (2.318, 2.318), workers=1)
    assert len(res.cells) == 1
    assert res.best.R == result2.R


def test_search_near_refined_split(poly16):
    res = search_split(poly16, (1.0014, 1.0016), (2.317, 2.319), workers=2)
    assert len(res.cells) == 9
    assert res.best.R <= 12.43436 + 1e-4
    assert res.best.R == min(c.R for c in res.cells)


def test_search_threads_deterministic(poly16):
    a = search_split(poly16, (1.0015, 1.0016), (2.318, 2.319), workers=1)
    b = search_split(poly16, (1.0015, 1.0016), (2.318, 2.319), workers=3)
    assert a.best.split == b.best.split and a.best.R == b.best.R
    assert [c.R for c in a.cells] == [c.R for c in b.cells]


def test_first_case_worse(poly16, result2):
    res = search_split(poly16, (1.021, 1.021), (2.373, 2.375), workers=2)
    assert res.best.R == pytest.approx(12.5494, abs=1e-3)
    assert res.best.R > result2.R
