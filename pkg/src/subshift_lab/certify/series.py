"""Weighted series over a forbidden-word profile with rigorous tail bounds.

The series is  sum_n n**p * |F_n| * base**(n/d), summed exactly (or in interval
arithmetic) up to the truncation and bounded above it by a geometric tail
model |F_n| <= C * r**n.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from mpmath import iv

from ..errors import SeriesUnbounded
from .intervals import INF, Interval, Real, RPow, as_fraction


@dataclass(frozen=True)
class Profile:
    """Minimal count-profile interface shared with ForbiddenList."""

    counter: Callable[[int], int]
    horizon: int
    complete: bool = False
    tail: object = None
    label: str = ""

    def count(self, n: int) -> int:
        if n < 1 or (self.complete and n > self.horizon):
            return 0
        return int(self.counter(n))


def as_real(base) -> Real:
    if isinstance(base, Real):
        return base
    return RPow(as_fraction(base))


@dataclass(frozen=True)
class SeriesSpec:
    profile: object                  # ForbiddenList, HeavySet, or Profile
    p: int = 0                       # weight n**p
    base: object = Fraction(1)       # Real or rational
    d: int = 1                       # exponent n/d
    m: int | None = None             # truncation (defaults to the profile horizon)
    tail: object = None              # TailModel (defaults to the profile's own)
    start: int = 1
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.p not in (0, 1, 2):
            raise ValueError("weight exponent p must be 0, 1 or 2")
        if self.d < 1:
            raise ValueError("length divisor must be positive")

    @property
    def truncation(self) -> int:
        return self.profile.horizon if self.m is None else self.m

    @property
    def tail_model(self):
        return self.tail if self.tail is not None else getattr(self.profile, "tail", None)

    def ratio(self) -> Real:
        return as_real(self.base).pow(Fraction(1, self.d))

    def describe(self) -> str:
        w = {0: "", 1: "n*", 2: "n^2*"}[self.p]
        e = "n" if self.d == 1 else f"n/{self.d}"
        return self.label or f"sum {w}|F_n|*base^({e})"


def _poly_tail_exact(p: int, y: Fraction, N: int) -> Fraction:
    """sum_{n>=N} n**p * y**n for 0 <= y < 1."""
    if y == 0:
        return Fraction(0)
    yN = y ** N
    one = 1 - y
    if p == 0:
        return yN / one
    if p == 1:
        return yN * (N - (N - 1) * y) / one ** 2
    return yN * (N * N - (2 * N * N - 2 * N - 1) * y + (N - 1) ** 2 * y * y) / one ** 3


def _poly_tail_iv(p: int, y, N: int):
    yN = y ** N
    one = 1 - y
    if p == 0:
        return yN / one
    if p == 1:
        return yN * (N - (N - 1) * y) / one ** 2
    return yN * (N * N - (2 * N * N - 2 * N - 1) * y + (N - 1) ** 2 * y * y) / one ** 3


def _tail(spec: SeriesSpec, x: Interval) -> Interval:
    m = spec.truncation
    prof = spec.profile
    if getattr(prof, "complete", False) and m >= prof.horizon:
        return Interval.point(0)
    model = spec.tail_model
    if model is None:
        raise SeriesUnbounded("series unbounded above, cannot certify: no tail model beyond "
                              f"length {m}")
    C, r = as_fraction(model.C), as_fraction(model.r)
    if C == 0:
        return Interval.point(0)
    N = m + 1
    if x.is_exact:
        y = r * x.lo
        if y >= 1:
            return Interval(Fraction(0), INF)
        return Interval.point(C * _poly_tail_exact(spec.p, y, N))
    y_hi = Interval.point(r) * x
    if y_hi.hi >= 1:
        return Interval(Fraction(0), INF)
    lo = Interval.from_iv(_poly_tail_iv(spec.p, Interval.point(y_hi.lo).to_iv(), N))
    hi = Interval.from_iv(_poly_tail_iv(spec.p, Interval.point(y_hi.hi).to_iv(), N))
    return Interval(C * max(lo.lo, Fraction(0)), C * hi.hi)


def partial_sums(spec: SeriesSpec):
    """Yield (n, partial sum through n) over the materialized range."""
    x = spec.ratio().value()
    m = spec.truncation
    if x.is_exact:
        xv = x.lo
        total = Fraction(0)
        for n in range(spec.start, m + 1):
            c = spec.profile.count(n)
            if c:
                total += (n ** spec.p) * c * xv ** n
            yield n, Interval.point(total)
    else:
        xi = x.to_iv()
        total = iv.mpf(0)
        for n in range(spec.start, m + 1):
            c = spec.profile.count(n)
            if c:
                total = total + iv.mpf(n ** spec.p) * iv.mpf(c) * xi ** n
            yield n, Interval.from_iv(total)


def eval_series(spec: SeriesSpec) -> Interval:
    """Interval rigorously containing the full infinite sum."""
    head = Interval.point(0)
    for _, head in partial_sums(spec):
        pass
    return head + _tail(spec, spec.ratio().value())


def first_crossing(spec: SeriesSpec, bound: Interval):
    """Smallest n whose partial sum already reaches the bound (None if none does)."""
    for n, s in partial_sums(spec):
        if s.lo >= bound.hi:
            return n
    return None
