"""Truncated series in t^k (ln t)^j with a tracked validity window.

``ln t`` is a formal symbol, so products and inverses are exact operations on
a dense (k, j) coefficient table.  Each series records ``kmax``: every term of
the true function with power <= kmax is represented exactly (up to floating
point); nothing is known beyond it and reads there are refused.
"""

from __future__ import annotations

import functools
import math

import numpy as np
from scipy.signal import convolve2d

from .errors import NotInvertibleError, SeriesCapacityError, WindowError

DEFAULT_LOG_CAPACITY = 16
_LEAD_LOG_RTOL = 1e-12

# "double" is fast enough for optimization loops; "extended" (x87 long double,
# ~19 digits) keeps coefficient roundoff well below o(t^2N) remainders at t ~ 1e-4.
PRECISIONS = {"double": np.float64, "extended": np.longdouble}
_PI = {"double": np.float64(math.pi),
       "extended": np.longdouble("3.14159265358979323846264338327950288")}
_EULER = {"double": np.float64(0.57721566490153286061),
          "extended": np.longdouble("0.57721566490153286060651209008240243")}


def real_type(precision: str):
    try:
        return PRECISIONS[precision]
    except KeyError:
        raise ValueError(f"precision must be one of {sorted(PRECISIONS)}, got {precision!r}")


def pi(precision: str = "double"):
    return _PI[precision]


class PowerLogSeries:
    """sum_{k=kmin}^{kmax} sum_{j=0}^{jmax} c[k, j] t^k (ln t)^j + o(t^kmax)."""

    __slots__ = ("kmin", "kmax", "coeff", "jcap")

    def __init__(self, kmin: int, kmax, coeff, jcap: int = DEFAULT_LOG_CAPACITY):
        coeff = np.array(coeff, ndmin=2)
        coeff = coeff.astype(np.result_type(coeff.dtype, np.complex128), copy=False)
        if coeff.shape[1] == 0:
            coeff = np.zeros((coeff.shape[0], 1), coeff.dtype)
        if math.isinf(kmax):
            kmax = math.inf
        else:
            kmax = int(kmax)
            rows = max(0, kmax - kmin + 1)
            if coeff.shape[0] < rows:
                pad = np.zeros((rows - coeff.shape[0], coeff.shape[1]), coeff.dtype)
                coeff = np.vstack([coeff, pad])
            coeff = coeff[:rows]
        if not np.isfinite(coeff).all():
            raise ValueError("series coefficients must be finite")
        self.kmin = int(kmin)
        self.kmax = kmax
        self.jcap = int(jcap)
        self.coeff = _trim_logs(coeff)
        if self.jmax > self.jcap:
            raise SeriesCapacityError(f"log power {self.jmax} exceeds capacity {self.jcap}")

    @property
    def exact(self) -> bool:
        """True for a finite polynomial with no truncation error."""
        return math.isinf(self.kmax)

    # -- constructors --------------------------------------------------------
    @classmethod
    def constant(cls, c: complex, kmax=math.inf, jcap: int = DEFAULT_LOG_CAPACITY):
        return cls.monomial(c, 0, 0, kmax, jcap)

    @classmethod
    def monomial(cls, c: complex, k: int, j: int = 0, kmax=math.inf,
                 jcap: int = DEFAULT_LOG_CAPACITY):
        """c t^k (ln t)^j; exact unless a finite kmax is given."""
        table = np.zeros((1, j + 1), np.result_type(np.asarray(c).dtype, np.complex128))
        table[0, j] = c
        return cls(k, kmax, table, jcap)

    # -- inspection ----------------------------------------------------------
    @property
    def jmax(self) -> int:
        return self.coeff.shape[1] - 1

    @property
    def dtype(self):
        return self.coeff.dtype

    def coefficient(self, k: int, j: int = 0) -> complex:
        if k > self.kmax:
            raise WindowError(f"t^{k} is beyond the valid window (kmax={self.kmax})")
        if k < self.kmin or k >= self.kmin + self.coeff.shape[0] or j > self.jmax or j < 0:
            return 0j
        return complex(self.coeff[k - self.kmin, j])

    def __call__(self, t):
        t = np.asarray(t, dtype=self.coeff.real.dtype)
        lt = np.log(t)
        out = np.zeros(t.shape, self.coeff.dtype)
        for i in range(self.coeff.shape[0]):
            k = self.kmin + i
            row = self.coeff[i]
            if not np.any(row):
                continue
            out = out + (t ** k) * np.polynomial.polynomial.polyval(lt, row)
        return complex(out) if out.ndim == 0 else out

    def __repr__(self):
        return f"PowerLogSeries(kmin={self.kmin}, kmax={self.kmax}, jmax={self.jmax})"

    def stripped(self) -> "PowerLogSeries":
        """Drop leading rows that are exactly zero, raising kmin."""
        nz = np.flatnonzero(np.any(self.coeff != 0, axis=1))
        if nz.size == 0 or nz[0] == 0:
            return self
        return PowerLogSeries(self.kmin + int(nz[0]), self.kmax, self.coeff[nz[0]:], self.jcap)

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        return series_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return series_scale(self, -1.0)

    def __sub__(self, other):
        return series_add(self, -other if isinstance(other, PowerLogSeries) else -other)

    def __rsub__(self, other):
        return series_add(-self, other)

    def __mul__(self, other):
        if isinstance(other, PowerLogSeries):
            return series_mul(self, other)
        return series_scale(self, other)

    __rmul__ = __mul__

    def shift(self, p: int) -> "PowerLogSeries":
        """Multiply by t^p."""
        return PowerLogSeries(self.kmin + p, self.kmax + p, self.coeff, self.jcap)

    def deriv(self) -> "PowerLogSeries":
        """d/dt, term by term: k t^(k-1) L^j + j t^(k-1) L^(j-1)."""
        c = self.coeff
        ks = np.arange(self.kmin, self.kmin + c.shape[0])[:, None]
        out = ks * c
        if c.shape[1] > 1:
            out[:, :-1] += c[:, 1:] * np.arange(1, c.shape[1])[None, :]
        return PowerLogSeries(self.kmin - 1, self.kmax - 1, out, self.jcap).stripped()

    def truncate(self, kmax: int) -> "PowerLogSeries":
        return PowerLogSeries(self.kmin, min(kmax, self.kmax), self.coeff, self.jcap)


def _trim_logs(c: np.ndarray) -> np.ndarray:
    if c.shape[1] == 1 or c[:, -1].any():
        return c
    nzc = np.flatnonzero(c.any(axis=0))
    last = int(nzc[-1]) if nzc.size else 0
    return c[:, : last + 1]


def series_add(a: PowerLogSeries, b) -> PowerLogSeries:
    if not isinstance(b, PowerLogSeries):
        b = PowerLogSeries.constant(b, math.inf, a.jcap)
    kmin = min(a.kmin, b.kmin)
    kmax = min(a.kmax, b.kmax)
    top = max(a.kmin + a.coeff.shape[0], b.kmin + b.coeff.shape[0]) - 1
    if not math.isinf(kmax):
        top = min(top, kmax)
    jn = max(a.coeff.shape[1], b.coeff.shape[1])
    out = np.zeros((max(0, top - kmin + 1), jn), np.result_type(a.dtype, b.dtype))
    for s in (a, b):
        rows = max(0, min(s.coeff.shape[0], top - s.kmin + 1))
        off = s.kmin - kmin
        out[off:off + rows, : s.coeff.shape[1]] += s.coeff[:rows]
    return PowerLogSeries(kmin, kmax, out, min(a.jcap, b.jcap))


def series_scale(a: PowerLogSeries, c) -> PowerLogSeries:
    return PowerLogSeries(a.kmin, a.kmax, a.coeff * c, a.jcap)


def series_mul(a: PowerLogSeries, b: PowerLogSeries) -> PowerLogSeries:
    kmin = a.kmin + b.kmin
    kmax = min(a.kmax + b.kmin, b.kmax + a.kmin)
    jcap = min(a.jcap, b.jcap)
    if a.coeff.shape[0] == 0 or b.coeff.shape[0] == 0:
        return PowerLogSeries(kmin, kmax, np.zeros((0, 1), np.result_type(a.dtype, b.dtype)), jcap)
    full = convolve2d(a.coeff, b.coeff)
    if not math.isinf(kmax):
        full = full[: max(0, kmax - kmin + 1)]
    return PowerLogSeries(kmin, kmax, full, jcap)


def series_inv(a: PowerLogSeries) -> PowerLogSeries:
    """1/a, valid through -kmin + (kmax - kmin) of a's stripped form."""
    a = a.stripped()
    if a.coeff.shape[0] == 0 or a.coeff[0, 0] == 0:
        raise NotInvertibleError("leading coefficient is zero")
    lead = a.coeff[0]
    c0 = lead[0]
    if np.any(np.abs(lead[1:]) > _LEAD_LOG_RTOL * abs(c0)):
        raise NotInvertibleError("leading term carries a logarithm")
    if a.exact and a.coeff.shape[0] > 1:
        raise NotInvertibleError("inverse of a non-monomial polynomial needs a finite window")
    if a.exact:
        return PowerLogSeries(-a.kmin, math.inf, np.array([[1 / c0]]), a.jcap)
    depth = a.kmax - a.kmin
    # a = c0 t^m (1 + u), u of order >= 1 relative
    rel = a.coeff / c0
    rel[0] = 0
    u = PowerLogSeries(0, depth, rel, a.jcap)
    neg_u = -u
    total = PowerLogSeries.constant(a.dtype.type(1), depth, a.jcap)
    term = total
    for _ in range(depth):
        term = series_mul(term, neg_u).truncate(depth)
        total = series_add(total, term)
    return series_scale(total, 1 / c0).shift(-a.kmin)


# --- Bessel-function series --------------------------------------------------

KINDS = ("J", "Y", "H1", "J'", "Y'", "H1'")


def _factorial(m: int, R):
    return R(math.factorial(m))


def _digamma(m: int, precision: str):
    R = real_type(precision)
    total = R(0)
    for l in range(1, m):
        total += R(1) / R(l)
    return total - _EULER[precision]


def _j_rows(n: int, half, kmax: int, R) -> dict:
    """{power: coefficient} for J_n(a t), nonnegative n, half = a/2."""
    out = {}
    l = 0
    while n + 2 * l <= kmax:
        out[n + 2 * l] = (-1) ** l * half ** (n + 2 * l) / (_factorial(l, R) * _factorial(n + l, R))
        l += 1
    return out


def _series_from(kmin: int, kmax: int, terms: dict, jmax: int, jcap: int, R) -> PowerLogSeries:
    ctype = np.result_type(R, np.complex128)
    table = np.zeros((max(0, kmax - kmin + 1), jmax + 1), ctype)
    for (k, j), v in terms.items():
        if k <= kmax:
            table[k - kmin, j] += v
    return PowerLogSeries(kmin, kmax, table, jcap)


@functools.lru_cache(maxsize=512)
def _bessel_base(kind: str, n: int, a, kmax: int, jcap: int, precision: str) -> PowerLogSeries:
    # cached: J feeds J', H1 and H1'; results are never mutated in place
    R = real_type(precision)
    half = R(a) / R(2)
    if kind == "J":
        rows = _j_rows(n, half, kmax, R)
        return _series_from(n, max(kmax, n - 1), {(k, 0): v for k, v in rows.items()}, 0, jcap, R)
    # Y_n(a t) = singular group + (2/pi) ln(a t / 2) J_n(a t) + digamma group
    pi_ = _PI[precision]
    terms = {}

    def acc(key, v):
        terms[key] = terms.get(key, R(0)) + v

    for l in range(n):
        c = -_factorial(n - l - 1, R) / _factorial(l, R) * half ** (2 * l - n) / pi_
        acc((2 * l - n, 0), c)
    log_half = np.log(half)
    for k, v in _j_rows(n, half, kmax, R).items():
        acc((k, 1), 2 * v / pi_)
        acc((k, 0), 2 * log_half * v / pi_)
    l = 0
    while n + 2 * l <= kmax:
        k = n + 2 * l
        c = (_digamma(l + 1, precision) + _digamma(n + l + 1, precision)) * (-1) ** l * half ** k
        c /= _factorial(l, R) * _factorial(n + l, R)
        acc((k, 0), -c / pi_)
        l += 1
    y = _series_from(-n, kmax, terms, 1, jcap, R)
    if kind == "Y":
        return y
    j = _bessel_base("J", n, a, kmax, jcap, precision)
    return series_add(j, series_scale(y, 1j))


def series_bessel(kind: str, n: int, a, kmax: int, jcap: int = DEFAULT_LOG_CAPACITY,
                  precision: str = "double") -> PowerLogSeries:
    """Series in t of J_n, Y_n, H_n^(1) or their derivatives at argument a t.

    ``kmax`` is the highest power of t that must be exact in the result.
    Derivatives are f'(a t) = (1/a) d/dt f(a t), built term by term.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if not a > 0:
        raise ValueError(f"scale must be > 0, got {a!r}")
    R = real_type(precision)
    m = abs(int(n))
    sign = R(-1) if (n < 0 and m % 2) else R(1)
    if kind.endswith("'"):
        base = _bessel_base(kind[:-1], m, a, kmax + 1, jcap, precision)
        out = series_scale(base.deriv(), sign / R(a))
    else:
        out = series_scale(_bessel_base(kind, m, a, kmax, jcap, precision), sign)
    return out.stripped()


def leading_power(kind: str, n: int) -> int:
    """Nominal lowest power of t in series_bessel(kind, n, ...)."""
    m = abs(int(n))
    base = m if kind.startswith("J") else -m
    if kind.endswith("'"):
        return base - 1 if not (kind == "J'" and m == 0) else 1
    return base
