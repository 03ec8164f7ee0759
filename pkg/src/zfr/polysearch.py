"""Simulated annealing over admissible cosine polynomials."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .classical import HALF_GAP
from .config import BoundConfig
from .exceptional import InfeasibleError, NoRootError, RegionSplit, compute_R
from .trigpoly import NotAdmissibleError, TrigPoly, verify_admissible

SEARCH_GRID_POINTS = 10**4 + 1


class Objective(str, enum.Enum):
    C1_RATIO = "C1_ratio"
    R_EXCEPTIONAL = "R_exceptional"


@dataclass(frozen=True)
class AnnealConfig:
    degree: int
    seed: int = 0
    initial_temp: float = 1.0
    cooling_rate: float = 0.9995
    steps: int = 10_000
    move_scale: float = 0.05
    objective: Objective = Objective.C1_RATIO
    split: RegionSplit = RegionSplit(1.0015, 2.318)

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be positive")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if not 0 < self.cooling_rate < 1:
            raise ValueError("cooling_rate must lie in (0, 1)")
        if not (self.initial_temp > 0 and self.move_scale > 0):
            raise ValueError("initial_temp and move_scale must be positive")
        object.__setattr__(self, "objective", Objective(self.objective))


def c1_ratio(coeffs) -> float:
    """c1/M: the coefficient of log d_L in the zero-free region."""
    a0, a1 = coeffs[0], coeffs[1]
    if not 0 < a0 < a1:
        return math.inf
    # (sqrt(a1) - sqrt(a0))^2 without the cancellation of the direct form.
    M = ((a1 - a0) / (math.sqrt(a1) + math.sqrt(a0))) ** 2
    return HALF_GAP * math.fsum(coeffs) / M


def objective_value(p: TrigPoly, cfg: BoundConfig | None = None, which=Objective.C1_RATIO,
                    *, split: RegionSplit | None = None, check: bool = True) -> float:
    """Scalar to minimize; +inf for inadmissible or infeasible polynomials."""
    which = Objective(which)
    if check and not verify_admissible(p, cfg).admissible:
        return math.inf
    if which is Objective.C1_RATIO:
        return c1_ratio(p.coeffs)
    try:
        return compute_R(p, split or RegionSplit(1.0015, 2.318)).R
    except (InfeasibleError, NoRootError, ValueError):
        return math.inf


def lift_to_admissible(p: TrigPoly, cfg: BoundConfig | None = None) -> TrigPoly:
    """Raise a_0 just enough for p to certify as non-negative.

    Useful for seeding the search from published coefficients that dip slightly
    below zero.  Coefficient signs and a_0 < a_1 are not repaired.
    """
    cfg = cfg or BoundConfig()
    rep = verify_admissible(p, cfg)
    if rep.nonneg_ok:
        return p
    shift = -rep.min_value_lower_bound + cfg.nonneg_tol
    return TrigPoly((p.coeffs[0] + shift,) + p.coeffs[1:])


class _CoarseChecker:
    """Admissibility on a fixed coarse grid, via a precomputed cosine matrix."""

    def __init__(self, degree: int, points: int, tol: float):
        phi = np.linspace(0.0, math.pi, points)
        self.cos = np.cos(np.outer(phi, np.arange(degree + 1)))
        self.tol = tol

    def __call__(self, a: np.ndarray) -> bool:
        return bool(a.min() >= 0 and a[0] < a[1] and (self.cos @ a).min() >= -self.tol)


@dataclass
class AnnealResult:
    best: TrigPoly
    best_value: float
    trace: list[tuple[int, float, float, float]] = field(default_factory=list)
    start_value: float = math.nan

    def trace_csv(self) -> str:
        lines = ["step,temperature,current_value,best_value"]
        lines += [f"{s},{T!r},{cur!r},{b!r}" for s, T, cur, b in self.trace]
        return "\n".join(lines) + "\n"


def anneal(start: TrigPoly, acfg: AnnealConfig, cfg: BoundConfig | None = None) -> AnnealResult:
    """Metropolis search with geometric cooling.

    a_0 is pinned to 1; each move perturbs one of a_1..a_n by a Gaussian of
    scale move_scale * temperature and clamps it at 0.  Candidates are screened
    on a coarse grid; the returned polynomial is certified on the full grid.
    """
    cfg = cfg or BoundConfig()
    report = verify_admissible(start, cfg)
    if not report.admissible:
        raise NotAdmissibleError(report)
    if start.degree > acfg.degree:
        raise ValueError("start polynomial exceeds the search degree")
    p0 = start.padded(acfg.degree)
    cur = p0.a / p0.coeffs[0]

    def f(a):
        if acfg.objective is Objective.C1_RATIO:
            return c1_ratio(a)
        return objective_value(TrigPoly(tuple(a)), cfg, acfg.objective, split=acfg.split, check=False)

    coarse = _CoarseChecker(acfg.degree, SEARCH_GRID_POINTS, cfg.nonneg_tol)
    rng = np.random.default_rng(acfg.seed)
    start_value = objective_value(start, cfg, acfg.objective, split=acfg.split, check=False)
    cur_val = f(cur)
    best, best_val = cur.copy(), cur_val
    snapshots = [(best.copy(), best_val)]
    T = acfg.initial_temp
    trace = [(0, T, cur_val, best_val)]
    for step in range(1, acfg.steps + 1):
        j = int(rng.integers(1, acfg.degree + 1))
        cand = cur.copy()
        cand[j] = max(0.0, cand[j] + rng.normal(0.0, acfg.move_scale * T))
        if coarse(cand):
            val = f(cand)
            if val <= cur_val or rng.random() < math.exp(-(val - cur_val) / T):
                cur, cur_val = cand, val
                if val < best_val:
                    best, best_val = cand.copy(), val
                    snapshots.append((best.copy(), best_val))
        T *= acfg.cooling_rate
        trace.append((step, T, cur_val, best_val))

    # The coarse grid can miss narrow dips; fall back to the latest snapshot
    # that survives full certification (the start always does).
    for a, v in reversed(snapshots):
        cand = TrigPoly(tuple(float(x) for x in a))
        if verify_admissible(cand, cfg).admissible:
            best_poly, best_val = cand, float(v)
            break
    return AnnealResult(best_poly, best_val, trace, start_value)
