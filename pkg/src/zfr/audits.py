"""Numerical audits of the monotonicity and maximization claims behind the bounds.

Each audit returns an AuditResult instead of raising; callers decide whether a
failure is fatal.  Derivatives are central differences with step 1e-6.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classical import (
    KAPPA,
    SIGMA_MAX,
    BETA_MIN,
    Sigma_k,
    Xi,
    Xi1,
    Xi2,
    eval_F_array,
    h_func,
    sigma1,
    stechkin_gap,
)
from .config import BoundConfig
from .specialfun import psi

FD_STEP = 1e-6
MAX_TOL = 1e-10
SIGMA_LO = 1.0 + 1e-6
T_HI = 100.0


@dataclass(frozen=True)
class AuditResult:
    name: str
    passed: bool
    worst: float
    detail: str = ""

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def _grid(cfg: BoundConfig):
    sig = np.linspace(SIGMA_LO, 1.0 + cfg.epsilon, cfg.grid_points_sigma)
    t = np.linspace(1.0, T_HI, cfg.grid_points_t)
    return np.meshgrid(sig, t, indexing="ij")


def sigma_max_audit(cfg: BoundConfig) -> AuditResult:
    """Grid maximum of Sigma_k over (1, 1+eps] x [1, 100] sits at (1+eps, 1)."""
    S, T = _grid(cfg)
    s = 1.0 + cfg.epsilon
    worst, bad = -np.inf, []
    for k in range(1, cfg.kmax + 1):
        corner = float(Sigma_k(s, 1.0, k))
        excess = float(np.max(Sigma_k(S, T, k))) - corner
        tail = float(Sigma_k(s, 1e8, k))
        worst = max(worst, excess)
        if excess > MAX_TOL or not tail < corner:
            bad.append(k)
    return AuditResult(
        f"Sigma_k max at (1+eps,1), eps={cfg.epsilon}",
        not bad,
        worst,
        f"max excess {worst:.3e}" + (f"; failing k={bad}" if bad else ""),
    )


def sigma_derivative_audit(cfg: BoundConfig, points: int = 100) -> AuditResult:
    """d/dt Sigma_k < 0 for t >= 1 and d/dsigma Sigma_k(sigma, 1) > 0 on [1, 1.15]."""
    sig = np.linspace(1.0 + FD_STEP, SIGMA_MAX, points)
    t = np.geomspace(1.0 + FD_STEP, T_HI, points)
    S, T = np.meshgrid(sig, t, indexing="ij")
    bad = []
    worst = -np.inf
    for k in range(1, cfg.kmax + 1):
        dt = (Sigma_k(S, T + FD_STEP, k) - Sigma_k(S, T - FD_STEP, k)) / (2 * FD_STEP)
        ds = (Sigma_k(sig + FD_STEP, 1.0, k) - Sigma_k(sig - FD_STEP, 1.0, k)) / (2 * FD_STEP)
        worst = max(worst, float(dt.max()), float(-ds.min()))
        if dt.max() >= 0 or ds.min() <= 0:
            bad.append(k)
    return AuditResult(
        "Sigma_k decreasing in t, increasing in sigma",
        not bad,
        worst,
        "ok" if not bad else f"failing k={bad}",
    )


def h_monotone_audit(epsilon: float = SIGMA_MAX - 1, points: int = 1000) -> AuditResult:
    sig = np.linspace(1.0 + FD_STEP, 1.0 + epsilon, points)
    d = (h_func(sig + FD_STEP) - h_func(sig - FD_STEP)) / (2 * FD_STEP)
    return AuditResult(
        f"h increasing on (1, {1 + epsilon:g}]",
        bool(d.min() > 0),
        float(d.min()),
        f"min dh/dsigma {d.min():.3e}",
    )


def d_eps_audit(epsilon: float, points: int = 200) -> AuditResult:
    """Both gamma branches are negative and increase in sigma up to 1 + eps."""
    sig = np.linspace(1.0 + epsilon / points, 1.0 + epsilon, points)
    branches = np.array(
        [[0.5 * (psi((s + d) / 2) - KAPPA * psi((sigma1(s) + d) / 2)) for s in sig] for d in (0, 1)]
    )
    negative = bool(branches.max() < 0)
    increasing = bool(np.all(np.diff(branches, axis=1) > 0))
    return AuditResult(
        f"d_eps(0) branches negative and maximal at 1+eps, eps={epsilon}",
        negative and increasing,
        float(branches.max()),
        f"max branch value {branches.max():.6f}, increasing={increasing}",
    )


def xi1_nonpositive_audit(n: int = 10_000, seed: int = 1) -> AuditResult:
    rng = np.random.default_rng(seed)
    sig = rng.uniform(1.0, SIGMA_MAX, n)
    k = rng.integers(1, 17, n)
    t = np.exp(rng.uniform(np.log(1e-3), np.log(1e3), n))
    d = rng.integers(0, 2, n)
    v = Xi1(sig, k, t, d)
    return AuditResult(
        "Xi_1 <= 0 at random points",
        bool(v.max() <= 0),
        float(v.max()),
        f"max Xi_1 {v.max():.3e} over {n} points",
    )


def xi2_max_audit(cfg: BoundConfig) -> AuditResult:
    """Grid maximum of Xi_2 over (1, 1+eps] x [1, 100] sits at (1+eps, 1)."""
    S, T = _grid(cfg)
    s = 1.0 + cfg.epsilon
    worst, bad = -np.inf, []
    for k in range(1, cfg.kmax + 1):
        for d in (0, 1):
            excess = float(np.max(Xi2(S, k, T, d)) - Xi2(s, k, 1.0, d))
            worst = max(worst, excess)
            if excess > MAX_TOL:
                bad.append((k, d))
    detail = f"max excess {worst:.3e}"
    if bad:
        detail += "; failing (k, delta)=" + ",".join(f"({k},{d})" for k, d in bad)
    return AuditResult(f"Xi_2 max at (1+eps,1), eps={cfg.epsilon}", not bad, worst, detail)


def xi_limit_audit(cfg: BoundConfig, points: int = 50) -> AuditResult:
    """Xi(., t, delta) increases to its limit 0 for delta = 0, and delta = 1 with k >= 4."""
    sig = np.linspace(1.0, SIGMA_MAX, points)
    t = np.geomspace(1.0 + FD_STEP, 1e4, 400)
    S, T = np.meshgrid(sig, t, indexing="ij")
    bad = []
    worst = -np.inf
    for k in range(1, cfg.kmax + 1):
        for d in (0, 1):
            if d == 1 and k < 4:
                continue
            far = float(np.max(Xi(sig, k, 1e8, d)))
            dt = (Xi(S, k, T + FD_STEP, d) - Xi(S, k, T - FD_STEP, d)) / (2 * FD_STEP)
            worst = max(worst, far)
            if far > 1e-12 or dt.min() <= 0:
                bad.append((k, d))
    return AuditResult(
        "Xi increasing to 0 (delta=0; delta=1, k>=4)",
        not bad,
        worst,
        "ok" if not bad else f"failing (k, delta)={bad}",
    )


def stechkin_F_audit(n: int = 10_000, seed: int = 2) -> AuditResult:
    """F(s, z) - kappa F(s1', z) >= 0 for 1 < sigma <= 1.25, 0 < Re z < 1."""
    rng = np.random.default_rng(seed)
    sig = rng.uniform(1.0, 1.25, n)
    sig[sig == 1.0] = 1.125
    t = rng.uniform(-50, 50, n)
    z = rng.uniform(0.0, 1.0, n) + 1j * (t + rng.normal(0, 5, n))
    z.real[z.real == 0.0] = 0.5
    val = eval_F_array(sig + 1j * t, z) - KAPPA * eval_F_array(sigma1(sig) + 1j * t, z)
    return AuditResult(
        "Stechkin F-inequality",
        bool(val.min() >= -1e-12),
        float(val.min()),
        f"min {val.min():.3e} over {n} points",
    )


def stechkin_gap_audit(points: int = 400) -> AuditResult:
    sig = np.linspace(1.0, SIGMA_MAX, points + 1)[1:]
    beta = np.linspace(BETA_MIN, 1.0, points)
    S, B = np.meshgrid(sig, beta, indexing="ij")
    g = stechkin_gap(S, B)
    return AuditResult(
        "g(sigma, beta) <= 0 on (1, 1.15] x [0.85, 1]",
        bool(g.max() <= 1e-12),
        float(g.max()),
        f"max g {g.max():.3e}",
    )


def all_audits(cfg: BoundConfig) -> list[AuditResult]:
    return [
        sigma_max_audit(cfg),
        sigma_derivative_audit(cfg),
        h_monotone_audit(),
        d_eps_audit(cfg.epsilon),
        xi1_nonpositive_audit(),
        xi2_max_audit(cfg),
        xi_limit_audit(cfg),
        stechkin_F_audit(),
        stechkin_gap_audit(),
    ]
