"""Non-negative cosine polynomials p(phi) = sum_k a_k cos(k phi).

A polynomial is *admissible* when it is non-negative for every angle, all of
its coefficients are non-negative and a_0 < a_1.  Non-negativity is certified
numerically on a uniform grid over [0, pi] (the polynomial is even and
2*pi-periodic), with a curvature correction covering the gaps between nodes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.polynomial import chebyshev

from .config import BoundConfig

# Mossinghoff-Trudgian degree-16 polynomial, a_0 .. a_16, verbatim decimals.
MT16_COEFFS = (
    "1",
    "1.74126664022806",
    "1.128282822804652",
    "0.5065272432186642",
    "0.1253566902628852",
    "2.372710620e-26",
    "2.818732841e-22",
    "0.01201214561729989",
    "0.006875849760911001",
    "2.064157910e-23",
    "6.601587090e-11",
    "0.001608306592372963",
    "0.001017994683287104",
    "6.728831293e-11",
    "3.682448595e-11",
    "2.949853019e-6",
    "0.00003713656497",
)


class PolyError(ValueError):
    """Malformed polynomial input."""


class NotAdmissibleError(ValueError):
    def __init__(self, report: "AdmissibilityReport"):
        super().__init__(f"polynomial is not admissible: {report.summary()}")
        self.report = report


@dataclass(frozen=True)
class TrigPoly:
    coeffs: tuple[float, ...]
    # Original decimal strings, when the polynomial came from text.
    source: tuple[str, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        coeffs = tuple(float(a) for a in self.coeffs)
        if not coeffs:
            raise PolyError("a polynomial needs at least one coefficient")
        if not all(math.isfinite(a) for a in coeffs):
            raise PolyError("coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def a(self) -> np.ndarray:
        return np.asarray(self.coeffs)

    @classmethod
    def from_strings(cls, values) -> "TrigPoly":
        strings = tuple(str(v).strip() for v in values)
        try:
            coeffs = tuple(float(s) for s in strings)
        except ValueError as exc:
            raise PolyError(f"bad coefficient: {exc}") from None
        return cls(coeffs, source=strings)

    def scaled(self, factor: float) -> "TrigPoly":
        return TrigPoly(tuple(factor * a for a in self.coeffs))

    def padded(self, degree: int) -> "TrigPoly":
        if degree < self.degree:
            raise PolyError("cannot pad to a lower degree")
        return TrigPoly(self.coeffs + (0.0,) * (degree - self.degree))

    def lipschitz(self) -> float:
        """Upper bound for |p'| (sum of k*a_k, absolute values)."""
        return math.fsum(k * abs(a) for k, a in enumerate(self.coeffs))

    def curvature(self) -> float:
        """Upper bound for |p''| (sum of k^2*a_k, absolute values)."""
        return math.fsum(k * k * abs(a) for k, a in enumerate(self.coeffs))


def mt16() -> TrigPoly:
    return TrigPoly.from_strings(MT16_COEFFS)


def eval_poly(p: TrigPoly, phi: float) -> float:
    """Evaluate sum_k a_k cos(k*phi) with compensated summation."""
    return math.fsum(a * math.cos(k * phi) for k, a in enumerate(p.coeffs))


def eval_grid(p: TrigPoly, phi) -> np.ndarray:
    # sum a_k cos(k phi) == sum a_k T_k(cos phi); Clenshaw is stable here.
    return chebyshev.chebval(np.cos(np.asarray(phi, dtype=float)), p.a)


@dataclass(frozen=True)
class AdmissibilityReport:
    nonneg_ok: bool
    coeff_sign_ok: bool
    a0_lt_a1_ok: bool
    min_value_lower_bound: float
    witness_phi: float
    grid_min: float = float("nan")
    grid_points: int = 0

    @property
    def admissible(self) -> bool:
        return self.nonneg_ok and self.coeff_sign_ok and self.a0_lt_a1_ok

    def summary(self) -> str:
        return (
            f"nonneg_ok={self.nonneg_ok} coeff_sign_ok={self.coeff_sign_ok} "
            f"a0_lt_a1_ok={self.a0_lt_a1_ok} "
            f"min_lower_bound={self.min_value_lower_bound:.3e} "
            f"at phi={self.witness_phi:.9f}"
        )


def grid_minimum(p: TrigPoly, points: int, chunk: int = 1 << 18) -> tuple[float, float]:
    """Minimum of p over `points` equispaced nodes of [0, pi] and its location.

    Chunks are reduced in a fixed order, so ties resolve to the smallest angle.
    """
    h = math.pi / (points - 1)
    best_val, best_phi = math.inf, 0.0
    for start in range(0, points, chunk):
        idx = np.arange(start, min(points, start + chunk))
        phi = idx * h
        vals = eval_grid(p, phi)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val, best_phi = float(vals[i]), float(phi[i])
    return best_val, best_phi


def verify_admissible(
    p: TrigPoly, cfg: BoundConfig | None = None, *, grid_points: int | None = None
) -> AdmissibilityReport:
    cfg = cfg or BoundConfig()
    n = grid_points or cfg.nonneg_grid_points
    if n < 2:
        raise ValueError("grid needs at least 2 points")
    a = p.coeffs
    h = math.pi / (n - 1)
    gmin, phi = grid_minimum(p, n)
    # Interior minima are critical points, so the nearest node (within h/2)
    # exceeds the true minimum by at most max|p''| * h^2 / 8.
    lower = gmin - p.curvature() * h * h / 8
    return AdmissibilityReport(
        nonneg_ok=lower >= -cfg.nonneg_tol,
        coeff_sign_ok=all(x >= 0 for x in a),
        a0_lt_a1_ok=len(a) > 1 and a[0] < a[1],
        min_value_lower_bound=lower,
        witness_phi=phi,
        grid_min=gmin,
        grid_points=n,
    )


def require_admissible(p: TrigPoly, cfg: BoundConfig | None = None) -> AdmissibilityReport:
    report = verify_admissible(p, cfg)
    if not report.admissible:
        raise NotAdmissibleError(report)
    return report


# --- file format -----------------------------------------------------------

def poly_to_dict(p: TrigPoly) -> dict:
    coeffs = list(p.source) if p.source else [repr(a) for a in p.coeffs]
    return {"degree": p.degree, "coeffs": coeffs}


def dumps_poly(p: TrigPoly) -> str:
    return json.dumps(poly_to_dict(p), indent=1) + "\n"


def loads_poly(text: str) -> TrigPoly:
    try:
        # Keep numeric literals as text so they are rounded exactly once.
        obj = json.loads(text, parse_float=str, parse_int=str)
    except json.JSONDecodeError as exc:
        raise PolyError(f"not a JSON document: {exc}") from None
    if not isinstance(obj, dict) or "coeffs" not in obj or "degree" not in obj:
        raise PolyError('expected an object with "degree" and "coeffs"')
    coeffs = obj["coeffs"]
    if not isinstance(coeffs, list) or not all(isinstance(c, str) for c in coeffs):
        raise PolyError('"coeffs" must be an array of decimal strings')
    try:
        degree = int(obj["degree"])
    except (TypeError, ValueError):
        raise PolyError('"degree" must be an integer') from None
    if degree != len(coeffs) - 1:
        raise PolyError(f"degree {degree} does not match {len(coeffs)} coefficients")
    return TrigPoly.from_strings(coeffs)


def load_poly(path) -> TrigPoly:
    return loads_poly(Path(path).read_text())


def save_poly(p: TrigPoly, path) -> None:
    Path(path).write_text(dumps_poly(p))
