"""Rigorous real arithmetic: exact rationals where possible, mpmath intervals otherwise.

Interval endpoints are always stored as exact fractions (dyadic when they come
from mpmath), so every comparison made on them is exact.
"""
from __future__ import annotations

import decimal
import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv
from mpmath.libmp import to_rational

DEFAULT_PREC = 128
INF = math.inf

# the shared interval context starts at certificate grade; callers may raise it
if iv.prec < DEFAULT_PREC:
    iv.prec = DEFAULT_PREC


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


@contextmanager
def precision(bits: int):
    old = iv.prec
    iv.prec = int(bits)
    try:
        yield
    finally:
        iv.prec = old


def _rat(mpf_tuple) -> Fraction:
    p, q = to_rational(mpf_tuple)
    return Fraction(int(p), int(q))


def _iv_from_fraction(x: Fraction):
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: object  # Fraction, or INF for an unbounded upper end

    def __post_init__(self):
        if self.hi != INF and self.lo > self.hi:
            raise ValueError("empty interval")

    @classmethod
    def point(cls, x) -> "Interval":
        x = as_fraction(x)
        return cls(x, x)

    @classmethod
    def from_iv(cls, x) -> "Interval":
        lo, hi = x._mpi_
        return cls(_rat(lo), _rat(hi))

    def to_iv(self):
        if self.hi == INF:
            raise ValueError("unbounded interval")
        return iv.mpf([_iv_from_fraction(self.lo).a, _iv_from_fraction(self.hi).b])

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def finite(self) -> bool:
        return self.hi != INF

    @property
    def width(self):
        return INF if self.hi == INF else self.hi - self.lo

    @property
    def mid(self) -> float:
        return float(self.lo) if self.hi == INF else float((self.lo + self.hi) / 2)

    def contains(self, x) -> bool:
        x = as_fraction(x)
        return self.lo <= x and (self.hi == INF or x <= self.hi)

    def __add__(self, other):
        o = other if isinstance(other, Interval) else Interval.point(other)
        hi = INF if INF in (self.hi, o.hi) else self.hi + o.hi
        return Interval(self.lo + o.lo, hi)

    __radd__ = __add__

    def __neg__(self):
        if self.hi == INF:
            raise ValueError("cannot negate an unbounded interval")
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        o = other if isinstance(other, Interval) else Interval.point(other)
        return self + (-o)

    def __rsub__(self, other):
        return Interval.point(other) - self

    def __mul__(self, other):
        o = other if isinstance(other, Interval) else Interval.point(other)
        if not (self.finite and o.finite):
            if self.lo >= 0 and o.lo >= 0:
                return Interval(self.lo * o.lo, INF if (self.hi != 0 and o.hi != 0) else Fraction(0))
            raise ValueError("unbounded product of signed intervals")
        c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi]
        return Interval(min(c), max(c))

    __rmul__ = __mul__

    def scale(self, k) -> "Interval":
        return self * Interval.point(k)

    def decimal_strings(self, digits: int) -> tuple:
        return (fraction_to_decimal(self.lo, digits, floor=True),
                "inf" if self.hi == INF else fraction_to_decimal(self.hi, digits, floor=False))

    def to_json(self, digits: int = 40) -> dict:
        lo, hi = self.decimal_strings(digits)
        return {"lo": lo, "hi": hi, "exact": self.is_exact}

    def __repr__(self):
        if self.is_exact:
            return f"Interval({self.lo})"
        return f"Interval[{float(self.lo):.12g}, {float(self.hi) if self.finite else 'inf'}]"


def fraction_to_decimal(x: Fraction, digits: int, floor: bool) -> str:
    """Decimal string with ``digits`` significant digits, rounded outward."""
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = decimal.ROUND_FLOOR if floor else decimal.ROUND_CEILING
        return str(decimal.Decimal(x.numerator) / decimal.Decimal(x.denominator))


def digits_for(bits: int) -> int:
    return int(math.ceil(bits * math.log10(2))) + 2


# -- real quantities -----------------------------------------------------------

def _int_root(n: int, k: int):
    if n < 0:
        return None
    r = round(n ** (1.0 / k)) if n < (1 << 1000) else None
    if r is None:
        lo, hi = 0, 1 << (n.bit_length() // k + 1)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid ** k < n:
                lo = mid + 1
            else:
                hi = mid
        r = lo
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** k == n:
            return cand
    return None


class Real:
    """A positive real known in closed form: exact() when rational, else interval()."""

    def exact(self) -> Fraction | None:
        raise NotImplementedError

    def interval(self) -> Interval:
        raise NotImplementedError

    def pow(self, t) -> "Real":
        raise NotImplementedError

    def value(self) -> Interval:
        x = self.exact()
        return Interval.point(x) if x is not None else self.interval()


@dataclass(frozen=True)
class RPow(Real):
    """q ** t for rational q > 0 and rational t."""

    q: Fraction
    t: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "q", as_fraction(self.q))
        object.__setattr__(self, "t", as_fraction(self.t))
        if self.q <= 0:
            raise ValueError("base must be positive")

    def exact(self):
        q, t = self.q, self.t
        if t.denominator == 1:
            return q ** t.numerator
        k = t.denominator
        a, b = _int_root(q.numerator, k), _int_root(q.denominator, k)
        if a is None or b is None:
            return None
        return Fraction(a, b) ** t.numerator

    def interval(self):
        x = self.exact()
        if x is not None:
            return Interval.point(x)
        base = _iv_from_fraction(self.q)
        expo = _iv_from_fraction(self.t)
        return Interval.from_iv(iv.exp(expo * iv.log(base)))

    def pow(self, s):
        return RPow(self.q, self.t * as_fraction(s))


@dataclass(frozen=True)
class RExp(Real):
    """e ** x for rational x."""

    x: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", as_fraction(self.x))

    def exact(self):
        return Fraction(1) if self.x == 0 else None

    def interval(self):
        if self.x == 0:
            return Interval.point(1)
        return Interval.from_iv(iv.exp(_iv_from_fraction(self.x)))

    def pow(self, s):
        return RExp(self.x * as_fraction(s))


@dataclass(frozen=True)
class RInterval(Real):
    """A positive real known only through an enclosing interval, raised to t."""

    enclosure: Interval
    t: Fraction = Fraction(1)

    def exact(self):
        if self.enclosure.is_exact and self.t == 1:
            return self.enclosure.lo
        return None

    def interval(self):
        if self.t == 1:
            return self.enclosure
        x = self.enclosure.to_iv()
        return Interval.from_iv(iv.exp(_iv_from_fraction(self.t) * iv.log(x)))

    def pow(self, s):
        return RInterval(self.enclosure, self.t * as_fraction(s))


@dataclass(frozen=True)
class LogValue:
    """coeff * ln(arg): a parameter such as beta = ln(|A|/3), kept symbolic."""

    arg: Fraction
    coeff: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "arg", as_fraction(self.arg))
        object.__setattr__(self, "coeff", as_fraction(self.coeff))
        if self.arg <= 0:
            raise ValueError("logarithm of a non-positive number")

    def interval(self) -> Interval:
        if self.arg == 1 or self.coeff == 0:
            return Interval.point(0)
        return Interval.from_iv(_iv_from_fraction(self.coeff) * iv.log(_iv_from_fraction(self.arg)))

    def __float__(self):
        return float(self.coeff) * math.log(self.arg)

    def describe(self) -> str:
        c = "" if self.coeff == 1 else f"{self.coeff}*"
        return f"{c}ln({self.arg})"


def log_compare(x: LogValue, y: LogValue) -> int:
    """Exact sign of x - y for two logarithms of rationals."""
    D = x.coeff.denominator * y.coeff.denominator
    ex, ey = int(x.coeff * D), int(y.coeff * D)
    a, b = x.arg ** ex, y.arg ** ey
    return (a > b) - (a < b)


def param_interval(x) -> Interval:
    """Interval for a log-scale parameter given as LogValue or a rational/float."""
    if isinstance(x, LogValue):
        return x.interval()
    if isinstance(x, Interval):
        return x
    return Interval.point(as_fraction(x))


def exp_neg(beta) -> Real:
    """e^{-beta}, exact when beta is an integer multiple of a logarithm of a rational."""
    if isinstance(beta, LogValue):
        return RPow(beta.arg, -beta.coeff)
    return RExp(-as_fraction(beta))


def describe_param(x) -> str:
    if isinstance(x, LogValue):
        return x.describe()
    return str(as_fraction(x))
