"""Real digamma function psi = Gamma'/Gamma."""

from __future__ import annotations

import math
from dataclasses import dataclass

# B_2n / (2n) for n = 1..7 (B_2 .. B_14).
_ASYMPTOTIC = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)
# |B_16| / 16, the first omitted term's coefficient.
_TAIL = 3617.0 / 8160.0
_SHIFT = 10.0
_EPS = 2.0**-52


@dataclass(frozen=True)
class DigammaResult:
    value: float
    est_abs_error: float

    def __float__(self):
        return self.value


def digamma(x: float) -> DigammaResult:
    """psi(x) for real x > 0.

    The argument is shifted up with psi(x) = psi(x + 1) - 1/x until it is at
    least 10, then the asymptotic series
    ln x - 1/(2x) - sum_{n<=7} B_2n / (2n x^2n) is used.

    The error estimate combines the first omitted series term with a rounding
    bound proportional to the magnitudes summed.  It is below 1e-12 unless x
    is tiny (roughly x < 1e-3), where |psi(x)| ~ 1/x itself is large.
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError(f"digamma is defined here only for finite x > 0, got {x!r}")
    shifts = []
    while x < _SHIFT:
        shifts.append(-1.0 / x)
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    for coef in reversed(_ASYMPTOTIC):
        series = series * inv2 + coef
    series *= inv2
    log_x = math.log(x)
    value = math.fsum([log_x, -0.5 / x, -series, *shifts])
    rounding = 4 * _EPS * (abs(log_x) + 1.0 + math.fsum(abs(s) for s in shifts))
    truncation = _TAIL * inv2**8
    return DigammaResult(value, rounding + truncation)


def psi(x: float) -> float:
    return digamma(x).value
