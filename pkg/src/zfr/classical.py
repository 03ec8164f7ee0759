"""Zero-free region constants for |t| >= 1.

Every quantity here is a closed-form real expression in sigma, t, k and the
switch delta in {0, 1}; the complex points sigma + ikt only enter implicitly.
Array arguments broadcast through the numpy-based formulas, which the audit
grids rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from decimal import ROUND_CEILING, Decimal

import numpy as np

from .config import BoundConfig, ConfigError, check_epsilon
from .specialfun import psi
from .trigpoly import TrigPoly, require_admissible

KAPPA = 1.0 / math.sqrt(5.0)
# (1 - kappa)/2, the weight of log d_L in the differenced explicit formula.
HALF_GAP = (1.0 - KAPPA) / 2.0

SIGMA_MAX = 1.15
BETA_MIN = 0.85

# (C1, C2, C3, C4) as published for eps = 0.01.
PUBLISHED_CONSTANTS = (12.2411, 9.5347, 0.05017, 2.2692)


class AuditError(RuntimeError):
    """A numerically audited monotonicity/maximization claim did not hold."""

    def __init__(self, result):
        super().__init__(f"audit failed: {result.name}: {result.detail}")
        self.result = result


class PoleError(ZeroDivisionError):
    pass


def kappa() -> float:
    return KAPPA


def sigma1(sigma):
    """Positive root of x^2 - x = sigma^2 (the shifted abscissa)."""
    s = np.asarray(sigma, dtype=float)
    if not np.all(np.isfinite(s)):
        raise ValueError("sigma must be finite")
    out = (1.0 + np.sqrt(1.0 + 4.0 * s * s)) / 2.0
    return float(out) if out.ndim == 0 else out


SIGMA1_AT_1 = sigma1(1.0)


def eval_F(s_re: float, s_im: float, z_re: float, z_im: float) -> float:
    """Re(1/(s - z) + 1/(s - 1 + conj(z)))."""
    s = complex(s_re, s_im)
    z = complex(z_re, z_im)
    d1 = s - z
    d2 = s - 1 + z.conjugate()
    if d1 == 0 or d2 == 0:
        raise PoleError(f"F has a pole at s={s}, z={z}")
    return (1 / d1 + 1 / d2).real


def eval_F_array(s, z):
    return (1.0 / (s - z) + 1.0 / (s - 1.0 + np.conj(z))).real


def stechkin_gap(sigma, beta):
    """g(sigma, beta), the remainder after isolating -1/(sigma - beta)."""
    s1 = sigma1(sigma)
    if np.any(np.asarray(s1) == np.asarray(beta)):
        raise PoleError("sigma1 equals beta")
    return -1.0 / (sigma - 1.0 + beta) + KAPPA / (s1 - beta) + KAPPA / (s1 - 1.0 + beta)


def h_func(sigma):
    s1 = sigma1(sigma)
    return 1.0 / sigma - KAPPA / s1 - KAPPA / (s1 - 1.0)


def alpha_eps(epsilon: float) -> float:
    check_epsilon(epsilon)
    return float(h_func(1.0 + epsilon))


def Sigma_k(sigma, t, k):
    """F(sigma + ikt, 1) - kappa F(sigma1 + ikt, 1) written out in reals."""
    s1 = sigma1(sigma)
    kt2 = (k * t) ** 2
    sm = sigma - 1.0
    if np.any((np.asarray(sm) == 0) & (np.asarray(kt2) == 0)):
        raise PoleError("Sigma_0 is singular at sigma = 1")
    return (
        sigma / (sigma * sigma + kt2)
        + sm / (sm * sm + kt2)
        - KAPPA * s1 / (s1 * s1 + kt2)
        - KAPPA * (s1 - 1.0) / ((s1 - 1.0) ** 2 + kt2)
    )


def round_up(x: float, dp: int) -> float:
    """Smallest dp-decimal number >= x (exact on the binary value of x)."""
    q = Decimal(1).scaleb(-dp)
    return float(Decimal(x).quantize(q, rounding=ROUND_CEILING))


def round_up_published(x: float) -> float:
    """Ceiling at 4 decimals, or 4 significant digits when that is finer."""
    if x == 0:
        return 0.0
    dp = max(4, 3 - math.floor(math.log10(abs(x))))
    return round_up(x, dp)


# --- gamma factor -----------------------------------------------------------

def d_eps_branches(epsilon: float) -> tuple[float, float]:
    s = 1.0 + epsilon
    s1 = sigma1(s)
    return tuple(0.5 * (psi((s + d) / 2.0) - KAPPA * psi((s1 + d) / 2.0)) for d in (0, 1))


def d_eps0(epsilon: float) -> float:
    check_epsilon(epsilon)
    return max(d_eps_branches(epsilon))


def Xi1(sigma, k, t, delta):
    s1 = sigma1(sigma)
    kt2 = (k * t) ** 2
    a = sigma + delta
    b = s1 + delta
    return -a / (2.0 * (a * a + kt2)) + KAPPA * b / (2.0 * (b * b + kt2))


def Xi2(sigma, k, t, delta):
    s1 = sigma1(sigma)
    kt = k * t
    return 0.25 * np.log1p(((sigma + delta) / kt) ** 2) - 0.25 * KAPPA * np.log1p(
        ((s1 + delta) / kt) ** 2
    )


def Xi(sigma, k, t, delta):
    return Xi1(sigma, k, t, delta) + Xi2(sigma, k, t, delta)


class AmbiguousRootError(RuntimeError):
    pass


def _dXi_dt(sigma, k, t, delta, step=1e-6):
    return (Xi(sigma, k, t + step, delta) - Xi(sigma, k, t - step, delta)) / (2 * step)


def t_star(k: int, epsilon: float, *, t_max: float = 1e3, scan_points: int = 20001) -> float:
    """Unique t >= 1 where d/dt Xi(1 + eps, k, t, 1) vanishes, else 1."""
    if k not in (1, 2, 3):
        raise ValueError("t_star is only defined for k in {1, 2, 3}")
    check_epsilon(epsilon)
    s = 1.0 + epsilon
    ts = np.geomspace(1.0, t_max, scan_points)
    ts[0] = 1.0 + 1e-6  # keep the central difference inside t >= 1
    d = _dXi_dt(s, k, ts, 1)
    sign = np.sign(d)
    changes = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    if len(changes) == 0:
        return 1.0
    if len(changes) > 1:
        raise AmbiguousRootError(
            f"dXi/dt changes sign {len(changes)} times for k={k}, eps={epsilon}"
        )
    lo, hi = float(ts[changes[0]]), float(ts[changes[0] + 1])
    flo = float(_dXi_dt(s, k, lo, 1))
    while hi - lo > 1e-8:
        mid = 0.5 * (lo + hi)
        fm = float(_dXi_dt(s, k, mid, 1))
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def A_bound(k: int, delta: int, epsilon: float) -> float:
    """Method II bound on Xi over sigma in (1, 1 + eps], t >= 1."""
    check_epsilon(epsilon)
    if delta == 0 or k not in (1, 2):
        return 0.0
    if k == 1:
        return float(Xi(1.0 + epsilon, 1, 1.0, 1))
    # k = 2 uses the eps = 0.15 value for every eps.
    return float(Xi(SIGMA_MAX, 2, 1.0, 1))


def _mccurley_terms(k: int, delta: int) -> float:
    # Both theta_i replaced by their worst case +1.
    return (
        (math.pi / 2 - math.atan((1 + delta) / k)) / (2 * k)
        + KAPPA * (math.pi / 2 - math.atan((SIGMA1_AT_1 + delta) / k)) / (2 * k)
    )


def C1(k: int, delta: int, epsilon: float, *, clamp: bool = False) -> float:
    xi2 = float(Xi2(1.0 + epsilon, k, 1.0, delta))
    if clamp:
        xi2 = max(xi2, 0.0)
    return HALF_GAP * math.log(k / 2) + xi2 + _mccurley_terms(k, delta)


def C2(k: int, delta: int, epsilon: float) -> float:
    return HALF_GAP * math.log(k / 2) + A_bound(k, delta, epsilon) + _mccurley_terms(k, delta)


def S1k(k: int, epsilon: float, *, clamp: bool = False) -> float:
    """Method I bound.

    With ``clamp=True`` the Xi_2 value at t = 1 is replaced by
    max(Xi_2, 0): for delta = 0 and larger k, Xi_2 is negative at t = 1 and
    increases towards 0, so the unclamped value is not a supremum over t.
    """
    check_epsilon(epsilon)
    return max(C1(k, d, epsilon, clamp=clamp) for d in (0, 1))


def S2k(k: int, epsilon: float) -> float:
    check_epsilon(epsilon)
    return max(C2(k, d, epsilon) for d in (0, 1))


def Sk(k: int, epsilon: float, *, clamp: bool = False) -> float:
    return min(S1k(k, epsilon, clamp=clamp), S2k(k, epsilon))


# --- tables ---------------------------------------------------------------

@dataclass(frozen=True)
class GammaRow:
    k: int
    Sigma_raw: float
    B_eps: float
    S1: float
    S2: float
    S: float

    @property
    def method(self) -> str:
        return "II" if self.S2 < self.S1 else "I"


@dataclass(frozen=True)
class GammaBoundTable:
    epsilon: float
    alpha_eps: float
    d_eps0: float
    rows: tuple[GammaRow, ...]
    audits: tuple = field(default=(), compare=False)

    def row(self, k: int) -> GammaRow:
        return self.rows[k - 1]

    @property
    def B(self) -> list[float]:
        return [r.B_eps for r in self.rows]

    @property
    def audits_ok(self) -> bool:
        return all(a.passed for a in self.audits)


def B_eps_table(cfg: BoundConfig, *, audit: bool = True) -> list[float]:
    """Sigma_k(1 + eps, 1) rounded up, for k = 1..kmax.

    Raises AuditError unless the grid maximum of Sigma_k sits at (1 + eps, 1)
    and the rounded values strictly decrease in k.
    """
    from . import audits

    if audit:
        for res in (
            audits.sigma_max_audit(cfg),
            audits.sigma_derivative_audit(cfg),
        ):
            if not res.passed:
                raise AuditError(res)
    s = 1.0 + cfg.epsilon
    out = [round_up(float(Sigma_k(s, 1.0, k)), cfg.table_round_dp) for k in range(1, cfg.kmax + 1)]
    if any(b >= a for a, b in zip(out, out[1:])):
        from .audits import AuditResult

        raise AuditError(AuditResult("B_eps decreasing in k", False, math.nan, f"values {out}"))
    return out


def gamma_bound_table(cfg: BoundConfig, *, audit: bool = True, clamp: bool = False) -> GammaBoundTable:
    from . import audits

    eps = cfg.epsilon
    results = []
    if audit:
        h_res = audits.h_monotone_audit(eps)
        if not h_res.passed:
            raise AuditError(h_res)
        results.append(h_res)
    B = B_eps_table(cfg, audit=audit)
    if audit:
        results.extend(
            [
                audits.sigma_max_audit(cfg),
                audits.sigma_derivative_audit(cfg),
                audits.d_eps_audit(eps),
                audits.xi1_nonpositive_audit(),
                audits.xi2_max_audit(cfg),
                audits.xi_limit_audit(cfg),
            ]
        )
    s = 1.0 + eps
    rows = []
    for k in range(1, cfg.kmax + 1):
        s1v = S1k(k, eps, clamp=clamp)
        s2v = S2k(k, eps)
        rows.append(GammaRow(k, float(Sigma_k(s, 1.0, k)), B[k - 1], s1v, s2v, min(s1v, s2v)))
    return GammaBoundTable(eps, alpha_eps(eps), d_eps0(eps), tuple(rows), tuple(results))


# --- final constants -------------------------------------------------------

@dataclass(frozen=True)
class RegionConstants:
    epsilon: float
    c1: float
    c2: float
    c3: float
    c4: float
    M: float
    M_closed: float
    r_star: float

    @property
    def C(self) -> tuple[float, float, float, float]:
        return (self.c1 / self.M, self.c2 / self.M, self.c3 / self.M, self.c4 / self.M)

    C1 = property(lambda self: self.C[0])
    C2 = property(lambda self: self.C[1])
    C3 = property(lambda self: self.C[2])
    C4 = property(lambda self: self.C[3])

    @property
    def published(self) -> tuple[float, float, float, float]:
        return tuple(round_up_published(c) for c in self.C)


def width_factor(a0: float, a1: float):
    """Maximizer r* and maximum M of a1/(1 + r) - a0/r over r > 0."""
    if not 0 < a0 < a1:
        raise ValueError("need 0 < a0 < a1")
    r = math.sqrt(a0) / (math.sqrt(a1) - math.sqrt(a0))
    return r, a1 / (1 + r) - a0 / r


def region_constants(
    p: TrigPoly, cfg: BoundConfig, *, table: GammaBoundTable | None = None, check: bool = True
) -> RegionConstants:
    if check:
        require_admissible(p, cfg)
    a = p.coeffs
    n = p.degree
    if table is None:
        table = gamma_bound_table(replace(cfg, kmax=n))
    elif len(table.rows) < n:
        raise ConfigError(f"table covers k <= {len(table.rows)}, polynomial has degree {n}")
    c1 = HALF_GAP * math.fsum(a)
    c2 = HALF_GAP * math.fsum(a[1:])
    c3 = math.fsum(
        [a[0] * (table.d_eps0 - HALF_GAP * math.log(math.pi))]
        + [a[k] * (HALF_GAP * math.log(k / math.pi) + table.row(k).S) for k in range(1, n + 1)]
    )
    c4 = math.fsum([table.alpha_eps * a[0]] + [a[k] * table.row(k).B_eps for k in range(1, n + 1)])
    r, M = width_factor(a[0], a[1])
    M_closed = (math.sqrt(a[1]) - math.sqrt(a[0])) ** 2
    return RegionConstants(cfg.epsilon, c1, c2, c3, c4, M, M_closed, r)


def zero_free_width(consts, logdL: float, nL: int, t: float, *, published: bool = False) -> float:
    """1/(C1 log d_L + C2 n_L log t + C3 n_L + C4).

    `consts` is a RegionConstants or a plain (C1, C2, C3, C4) tuple.
    """
    if isinstance(consts, RegionConstants):
        C = consts.published if published else consts.C
    else:
        C = tuple(consts)
    if logdL < 0 or nL < 1 or t < 1:
        raise ValueError("need log d_L >= 0, n_L >= 1 and t >= 1")
    denom = C[0] * logdL + C[1] * nL * math.log(t) + C[2] * nL + C[3]
    if denom <= 0:
        raise ValueError(f"non-positive denominator {denom}")
    return 1.0 / denom
