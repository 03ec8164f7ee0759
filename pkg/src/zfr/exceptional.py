"""Low-height (|t| < 1) zero-free region and the exceptional-zero constant R.

Zero ordinates are split into three ranges by t log d_L in (0, d1], (d1, d2]
and (d2, log d_L).  Writing sigma - 1 = r / log d_L and 1 - beta = c / log d_L,
each range yields an inequality 0 <= E(r, c) that a zero must satisfy.  For a
fixed r the admissible c start at the first root of E; r is then chosen to make
1/c as small as possible, and R is the largest 1/c over the three ranges.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .classical import HALF_GAP
from .trigpoly import TrigPoly

log = logging.getLogger(__name__)

C_SCAN_STEP = 1e-6
R_COARSE = 1e-3
R_FINE = 1e-4
R_XTOL = 1e-6
A_R_MAX = 10.0
BISECT_TOL = 1e-12


class ConstraintError(ValueError):
    pass


class NoRootError(ValueError):
    pass


class InfeasibleError(ValueError):
    pass


@dataclass(frozen=True)
class RegionSplit:
    d1: float
    d2: float

    def __post_init__(self):
        if not (0 < self.d1 < self.d2):
            raise ValueError(f"need 0 < d1 < d2, got d1={self.d1}, d2={self.d2}")


# --- region A: closed form ---------------------------------------------------

def region_a_rhs(d1, r, c):
    """Right-hand side of the inequality 0 <= 1/r - 2(r+c)/((r+c)^2+d1^2) + (1-kappa)/2."""
    u = r + c
    return 1.0 / r - 2.0 * u / (u * u + d1 * d1) + HALF_GAP


def cA_closed_form(d1, r):
    """Smallest c satisfying the region-A inequality for this (d1, r)."""
    w = 1.0 + HALF_GAP * r
    disc = r * r - d1 * d1 * w * w
    if np.any(np.asarray(disc) < 0):
        raise ValueError(f"negative discriminant for d1={d1}, r={r}")
    return (np.sqrt(disc) - HALF_GAP * r * r) / w


def _inv_cA(d1, r):
    w = 1.0 + HALF_GAP * r
    disc = r * r - d1 * d1 * w * w
    with np.errstate(invalid="ignore", divide="ignore"):
        c = (np.sqrt(np.where(disc >= 0, disc, np.nan)) - HALF_GAP * r * r) / w
        return np.where(c > 0, 1.0 / c, np.inf)


def optimize_cA(d1: float, *, r_max: float = A_R_MAX, step: float = R_FINE, xatol: float = R_XTOL):
    """Minimize 1/c_A over r in (d1, r_max].  Returns (r*, 1/c_A)."""
    if d1 <= 0:
        raise ValueError("d1 must be positive")
    rs = d1 + step * np.arange(1, int(math.floor((r_max - d1) / step)) + 1)
    inv = _inv_cA(d1, rs)
    i = int(np.argmin(inv))
    if not np.isfinite(inv[i]):
        raise InfeasibleError(f"no r in ({d1}, {r_max}] gives a positive c_A")
    lo, hi = rs[max(i - 1, 0)], rs[min(i + 1, len(rs) - 1)]
    res = minimize_scalar(lambda r: float(_inv_cA(d1, r)), bounds=(lo, hi), method="bounded",
                          options={"xatol": xatol * 1e-3})
    if res.fun <= inv[i]:
        return float(res.x), float(res.fun)
    return float(rs[i]), float(inv[i])


# --- regions B and C ---------------------------------------------------------

class Region:
    """E(r, c) for one ordinate range, with its feasibility box."""

    name = "?"

    def __init__(self, p: TrigPoly, d2: float):
        if p.degree < 1:
            raise ValueError("polynomial needs degree >= 1")
        self.p = p
        self.a = p.a
        self.a0, self.a1 = float(p.coeffs[0]), float(p.coeffs[1])
        if not 0 < self.a0 < self.a1:
            raise ValueError("need 0 < a0 < a1")
        self.d2 = float(d2)
        self.const = HALF_GAP * math.fsum(p.coeffs)

    def c_max(self, r):
        """Upper end of the open c-interval allowed for this r."""
        return np.minimum.reduce(
            [np.ones_like(np.asarray(r, float)), r * (self.a1 - self.a0) / self.a0,
             4 * self.d2 * self.d2 / r - r]
        )

    def violations(self, r: float, c: float) -> list[str]:
        out = []
        if not 0 < r < 1:
            out.append("0 < r < 1")
        if not 0 < c < 1:
            out.append("0 < c < 1")
        if not self.a0 / (self.a1 - self.a0) * c < r:
            out.append("a0/(a1-a0) c < r")
        if not self.d2 > math.sqrt(r * (r + c)) / 2:
            out.append("d2 > sqrt(r(r+c))/2")
        return out

    def check(self, r: float, c: float) -> None:
        bad = self.violations(r, c)
        if bad:
            raise ConstraintError(f"region {self.name}: violated {', '.join(bad)} at r={r}, c={c}")

    def __call__(self, r, c):
        raise NotImplementedError


class RegionB(Region):
    name = "B"

    def __init__(self, p: TrigPoly, split: RegionSplit):
        super().__init__(p, split.d2)
        self.split = split
        self.d1 = split.d1

    def __call__(self, r, c):
        a0, a1, d1, d2 = self.a0, self.a1, self.d1, self.d2
        u = r + c
        u2 = u * u
        d1s, d2s = d1 * d1, d2 * d2
        v = (
            a0 / r - a1 / u + a1 * r / (r * r + d1s) - a0 * u / (u2 + d1s)
            - a0 * u / (u2 + d2s) - a1 * u / (u2 + 4 * d2s) + self.const
        )
        for k in range(2, len(self.a)):
            ak = self.a[k]
            if ak == 0:
                continue
            v = v + ak * (
                r / (r * r + k * k * d1s)
                - u / (u2 + (k - 1) ** 2 * d2s)
                - u / (u2 + (k + 1) ** 2 * d2s)
            )
        return v


class RegionC(Region):
    name = "C"

    def __call__(self, r, c):
        a0, a1, d2s = self.a0, self.a1, self.d2 * self.d2
        u = r + c
        return a0 / r - a1 / u + a1 * r / (r * r + d2s) - a0 * u / (u * u + d2s) + self.const


def eval_EB(p: TrigPoly, split: RegionSplit, r: float, c: float) -> float:
    E = RegionB(p, split)
    E.check(r, c)
    return float(E(r, c))


def eval_EC(p: TrigPoly, d2: float, r: float, c: float) -> float:
    E = RegionC(p, d2)
    E.check(r, c)
    return float(E(r, c))


# --- root scanning -------------------------------------------------------------

@dataclass(frozen=True)
class RootScan:
    c: float
    sign_changes: int
    rising: bool  # E < 0 just below the root


def _scan(E: Region, r: np.ndarray, step: float):
    """First sign change of E(r_i, .) on the c-grid, bisected, for every r_i.

    Returns (c_root, sign_change_count, rising); c_root is nan where E keeps
    one sign over the feasibility box.
    """
    r = np.atleast_1d(np.asarray(r, float))
    hi = E.c_max(r)
    n = int(math.floor(float(np.max(hi)) / step))
    roots = np.full(r.shape, np.nan)
    counts = np.zeros(r.shape, int)
    rising = np.zeros(r.shape, bool)
    if n < 2:
        return roots, counts, rising
    cs = step * np.arange(1, n + 1)
    # Row chunks bound the (r, c) working set to a few million cells.
    rows = max(1, 4_000_000 // n)
    for start in range(0, len(r), rows):
        sl = slice(start, start + rows)
        rr = r[sl, None]
        inside = cs[None, :] < hi[sl, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = E(rr, cs[None, :])
        pos = vals >= 0
        change = (pos[:, 1:] != pos[:, :-1]) & inside[:, 1:]
        counts[sl] = change.sum(axis=1)
        has = change.any(axis=1)
        idx = np.argmax(change, axis=1)
        ridx = np.arange(len(idx))
        rising[sl] = has & ~pos[ridx, idx]
        lo = cs[idx].astype(float)
        up = cs[idx + 1].astype(float)
        flo = vals[ridx, idx]
        rsub = r[sl]
        for _ in range(200):
            if np.all(up - lo <= BISECT_TOL):
                break
            mid = 0.5 * (lo + up)
            fm = E(rsub, mid)
            same = (fm >= 0) == (flo >= 0)
            lo = np.where(same, mid, lo)
            flo = np.where(same, fm, flo)
            up = np.where(same, up, mid)
        roots[sl] = np.where(has, 0.5 * (lo + up), np.nan)
    return roots, counts, rising


def smallest_root_in_c(E: Region, r: float, *, step: float = C_SCAN_STEP) -> RootScan:
    """Smallest c in the feasibility box where E(r, .) changes sign."""
    roots, counts, rising = _scan(E, np.array([r]), step)
    if np.isnan(roots[0]):
        raise NoRootError(f"E_{E.name}(r={r}, .) keeps one sign on its feasibility box")
    return RootScan(float(roots[0]), int(counts[0]), bool(rising[0]))


def _inv_root(E: Region, r, step):
    roots, _, rising = _scan(E, r, step)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(rising & (roots > 0), 1.0 / roots, np.inf)


@dataclass(frozen=True)
class RegionOptimum:
    region: str
    r: float
    c: float
    inv: float
    sign_changes: int
    residual: float
    violations: tuple[str, ...] = ()

    @property
    def constraints_ok(self) -> bool:
        return not self.violations


def optimize_region(
    E: Region,
    *,
    coarse: float = R_COARSE,
    fine: float = R_FINE,
    xatol: float = R_XTOL,
    c_step: float = 1e-3,
    final_step: float = C_SCAN_STEP,
) -> RegionOptimum:
    """Choose r in (0, 1) minimizing 1/c, where c is the first root of E(r, .)."""
    rs = coarse * np.arange(1, int(round(1 / coarse)))
    inv = _inv_root(E, rs, c_step)
    i = int(np.argmin(inv))
    if not np.isfinite(inv[i]):
        raise InfeasibleError(f"region {E.name}: no r in (0, 1) yields a root")
    lo = max(rs[i] - 2 * coarse, fine)
    hi = min(rs[i] + 2 * coarse, 1 - fine)
    rf = lo + fine * np.arange(int(round((hi - lo) / fine)) + 1)
    invf = _inv_root(E, rf, c_step)
    j = int(np.argmin(invf))
    best_r, best_inv = float(rf[j]), float(invf[j])
    res = minimize_scalar(
        lambda r: float(_inv_root(E, np.array([r]), c_step)[0]),
        bounds=(max(best_r - fine, fine / 2), min(best_r + fine, 1 - fine / 2)),
        method="bounded",
        options={"xatol": xatol},
    )
    if np.isfinite(res.fun) and res.fun <= best_inv:
        best_r = float(res.x)
    scan = smallest_root_in_c(E, best_r, step=final_step)
    c = scan.c
    return RegionOptimum(
        E.name, best_r, c, 1.0 / c, scan.sign_changes, float(E(best_r, c)),
        tuple(E.violations(best_r, c)),
    )


# --- putting it together -----------------------------------------------------------

@dataclass(frozen=True)
class ExceptionalResult:
    split: RegionSplit
    rA: float
    invA: float
    B: RegionOptimum
    C: RegionOptimum

    @property
    def cA(self) -> float:
        return 1.0 / self.invA

    rB = property(lambda self: self.B.r)
    cB = property(lambda self: self.B.c)
    invB = property(lambda self: self.B.inv)
    rC = property(lambda self: self.C.r)
    cC = property(lambda self: self.C.c)
    invC = property(lambda self: self.C.inv)

    @property
    def R(self) -> float:
        return max(self.invA, self.invB, self.invC)

    @property
    def constraints_ok(self) -> bool:
        return self.B.constraints_ok and self.C.constraints_ok

    def as_dict(self) -> dict:
        return {
            "d1": self.split.d1,
            "d2": self.split.d2,
            "A": {"r": self.rA, "c": self.cA, "inv_c": self.invA},
            "B": _opt_dict(self.B),
            "C": _opt_dict(self.C),
            "R": self.R,
            "constraints_ok": self.constraints_ok,
        }


def _opt_dict(o: RegionOptimum) -> dict:
    return {
        "r": o.r,
        "c": o.c,
        "inv_c": o.inv,
        "sign_changes": o.sign_changes,
        "residual": o.residual,
        "violations": list(o.violations),
    }


def compute_R(p: TrigPoly, split: RegionSplit, **kw) -> ExceptionalResult:
    rA, invA = optimize_cA(split.d1)
    B = optimize_region(RegionB(p, split), **kw)
    C = optimize_region(RegionC(p, split.d2), **kw)
    return ExceptionalResult(split, rA, invA, B, C)


@dataclass(frozen=True)
class SearchCell:
    d1: float
    d2: float
    invA: float
    invB: float
    invC: float
    feasible: bool
    note: str = ""

    @property
    def R(self) -> float:
        return max(self.invA, self.invB, self.invC) if self.feasible else math.inf


@dataclass
class SearchResult:
    best: ExceptionalResult | None
    cells: list[SearchCell] = field(default_factory=list)

    @property
    def skipped(self) -> list[SearchCell]:
        return [c for c in self.cells if not c.feasible]


def _axis(rng, step):
    lo, hi = (rng, rng) if np.isscalar(rng) else rng
    n = int(round((hi - lo) / step)) if hi > lo else 0
    # Rounded to the step's decimals so grid values print cleanly.
    dp = max(0, -int(math.floor(math.log10(step))) + 2)
    return [round(lo + i * step, dp) for i in range(n + 1)]


def default_workers() -> int:
    env = os.environ.get("ZFR_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def search_split(
    p: TrigPoly,
    d1_range,
    d2_range,
    steps=(1e-4, 1e-3),
    *,
    workers: int | None = None,
    **kw,
) -> SearchResult:
    """Exhaustive grid over (d1, d2); returns the split with the smallest R.

    Region A depends only on d1 and region C only on d2, so those optima are
    computed once per axis value.  Infeasible cells are kept in the cell log.
    """
    d1s = _axis(d1_range, steps[0])
    d2s = _axis(d2_range, steps[1])
    workers = workers or default_workers()

    def a_opt(d1):
        try:
            return optimize_cA(d1)
        except (InfeasibleError, ValueError) as exc:
            return exc

    def c_opt(d2):
        try:
            return optimize_region(RegionC(p, d2), **kw)
        except (InfeasibleError, NoRootError) as exc:
            return exc

    pairs = [(d1, d2) for d1 in d1s for d2 in d2s]

    def b_opt(pair):
        d1, d2 = pair
        if not d1 < d2:
            return ValueError("d1 >= d2")
        try:
            return optimize_region(RegionB(p, RegionSplit(d1, d2)), **kw)
        except (InfeasibleError, NoRootError) as exc:
            return exc

    with ThreadPoolExecutor(max_workers=workers) as pool:
        A = dict(zip(d1s, pool.map(a_opt, d1s)))
        C = dict(zip(d2s, pool.map(c_opt, d2s)))
        B = list(pool.map(b_opt, pairs))

    out = SearchResult(None)
    best_R = math.inf
    for (d1, d2), b in zip(pairs, B):
        a, c = A[d1], C[d2]
        errs = [x for x in (a, b, c) if isinstance(x, Exception)]
        if errs:
            log.debug("skipping cell d1=%s d2=%s: %s", d1, d2, errs[0])
            out.cells.append(SearchCell(d1, d2, math.nan, math.nan, math.nan, False, str(errs[0])))
            continue
        res = ExceptionalResult(RegionSplit(d1, d2), a[0], a[1], b, c)
        ok = res.constraints_ok
        out.cells.append(SearchCell(d1, d2, res.invA, res.invB, res.invC, ok,
                                    "" if ok else "constraint violation"))
        # Strict '<' keeps the first cell in grid order on ties.
        if ok and res.R < best_R:
            best_R, out.best = res.R, res
    return out
