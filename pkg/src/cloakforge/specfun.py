"""Integer-order cylinder functions J_n, Y_n, H_n^(1) for real positive argument.

Values come from scipy.special (AMOS / Cephes).  The ascending small-argument
series are kept here as well: they are the independent reference the test
suite checks the library values against, and the coefficient formulas reused
by :mod:`cloakforge.powerlog`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError, InvalidArgumentError

EULER_GAMMA = 0.57721566490153286061


def digamma_int(m: int) -> float:
    """psi(m) for a positive integer m: -gamma + sum_{l<m} 1/l."""
    if m < 1:
        raise DomainError(f"digamma_int needs m >= 1, got {m}")
    return -EULER_GAMMA + math.fsum(1.0 / l for l in range(1, m))


@dataclass(frozen=True)
class CylFunValue:
    order: int
    argument: float
    j: float
    y: float
    jp: float
    yp: float

    @property
    def h(self) -> complex:
        return complex(self.j, self.y)

    @property
    def hp(self) -> complex:
        return complex(self.jp, self.yp)


def _check_arg(t, *, allow_zero: bool):
    t = float(t)
    if not math.isfinite(t):
        raise InvalidArgumentError(f"argument must be finite, got {t!r}")
    if t < 0 or (t == 0 and not allow_zero):
        raise DomainError(f"argument must be {'>=' if allow_zero else '>'} 0, got {t!r}")
    return t


def _reflect(n: int):
    n = int(n)
    return abs(n), (-1.0 if (n < 0 and n % 2) else 1.0)


def bessel_j(n: int, t: float) -> float:
    t = _check_arg(t, allow_zero=True)
    m, sign = _reflect(n)
    if t == 0.0:
        return 1.0 if m == 0 else 0.0
    return sign * float(special.jv(m, t))


def bessel_y(n: int, t: float) -> float:
    t = _check_arg(t, allow_zero=False)
    m, sign = _reflect(n)
    return sign * float(special.yv(m, t))


def hankel1(n: int, t: float) -> complex:
    return complex(bessel_j(n, t), bessel_y(n, t))


def bessel_jp(n: int, t: float) -> float:
    t = _check_arg(t, allow_zero=True)
    m, sign = _reflect(n)
    return sign * float(special.jvp(m, t))


def bessel_yp(n: int, t: float) -> float:
    t = _check_arg(t, allow_zero=False)
    m, sign = _reflect(n)
    return sign * float(special.yvp(m, t))


def hankel1p(n: int, t: float) -> complex:
    return complex(bessel_jp(n, t), bessel_yp(n, t))


def cyl_values(n: int, t: float) -> CylFunValue:
    """All four real values at once (one argument check, one reflection)."""
    t = _check_arg(t, allow_zero=False)
    m, sign = _reflect(n)
    return CylFunValue(
        order=int(n),
        argument=t,
        j=sign * float(special.jv(m, t)),
        y=sign * float(special.yv(m, t)),
        jp=sign * float(special.jvp(m, t)),
        yp=sign * float(special.yvp(m, t)),
    )


# --- ascending series -------------------------------------------------------

def j_series(n: int, t: float, terms: int = 30) -> float:
    """Truncated ascending series sum_l (-t^2/4)^l / (l! (n+l)!) * (t/2)^n."""
    m, sign = _reflect(n)
    q = -0.25 * t * t
    term = (0.5 * t) ** m / math.factorial(m)
    total = term
    for l in range(1, terms):
        term *= q / (l * (m + l))
        total += term
    return sign * total


def y_series(n: int, t: float, terms: int = 30) -> float:
    """Truncated ascending series for Y_n built from its three groups."""
    m, sign = _reflect(n)
    half = 0.5 * t
    q = 0.25 * t * t
    singular = 0.0
    for l in range(m):
        singular += math.factorial(m - l - 1) / math.factorial(l) * q ** l
    singular *= -half ** (-m) / math.pi
    log_part = (2.0 / math.pi) * math.log(half) * j_series(m, t, terms)
    tail = 0.0
    for l in range(terms):
        c = (digamma_int(l + 1) + digamma_int(m + l + 1)) * (-q) ** l
        tail += c / (math.factorial(l) * math.factorial(m + l))
    tail *= -half ** m / math.pi
    return sign * (singular + log_part + tail)


def large_order_bound(n: int, t: float) -> float:
    """Leading large-order estimate (e t / 2n)^n / sqrt(2 pi n) for |J_n(t)|."""
    m = abs(int(n))
    return (math.e * t / (2 * m)) ** m / math.sqrt(2 * math.pi * m)


def wronskian_residual(n: int, t: float) -> float:
    """|J Y' - J' Y - 2/(pi t)| scaled by pi t / 2."""
    v = cyl_values(n, t)
    return abs(v.j * v.yp - v.jp * v.y - 2.0 / (np.pi * t)) * np.pi * t / 2.0
