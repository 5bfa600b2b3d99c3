"""Pliss times: indices where every trailing window average stays above a threshold."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import SequenceBoundViolated


def _exact(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class IndexSet:
    """A finite set of positive integers observed over the prefix [1, length]."""

    members: tuple
    length: int
    window: int | None = None

    def __contains__(self, n) -> bool:
        return n in set(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def count_upto(self, n: int) -> int:
        return sum(1 for k in self.members if k <= n)

    def prefix_densities(self) -> list:
        """|S ∩ [1, n]| / n for n = 1..length, as exact fractions."""
        inside = set(self.members)
        out, c = [], 0
        for n in range(1, self.length + 1):
            c += n in inside
            out.append(Fraction(c, n))
        return out

    def lower_density(self, burn_in: int = 0) -> Fraction:
        """Smallest prefix density over n > burn_in (the finite stand-in for liminf)."""
        dens = self.prefix_densities()[burn_in:]
        return min(dens) if dens else Fraction(0)

    def is_syndetic(self, N: int | None = None) -> bool:
        """Every window {k, ..., k+N-1} inside the observed prefix meets the set."""
        N = self.window if N is None else N
        if N is None or N < 1:
            raise ValueError("a positive window size is required")
        inside = set(self.members)
        return all(any(k + i in inside for i in range(N)) for k in range(1, self.length - N + 2))

    def max_gap(self) -> int:
        pts = [0, *sorted(self.members), self.length + 1]
        return max(b - a for a, b in zip(pts, pts[1:])) - 1


@dataclass(frozen=True)
class PlissReport:
    index_set: IndexSet
    density: Fraction
    average: Fraction
    bound: Fraction            # (average - beta) / (A - beta)
    bound_holds_every_prefix: bool


def pliss_set(a: Sequence, A, beta) -> PlissReport:
    """Indices n with (a_{k+1}+...+a_n)/(n-k) >= beta for every 0 <= k < n.

    ``a[0]`` is a_1.  Floats are converted exactly, so the comparison is exact.
    """
    A, beta = _exact(A), _exact(beta)
    vals = [_exact(x) for x in a]
    for i, x in enumerate(vals, 1):
        if x < 0 or x > A:
            raise SequenceBoundViolated(f"a_{i} = {x} outside [0, {A}]")
    # n qualifies iff T_n >= T_k for all k < n, where T_k = a_1+...+a_k - beta*k
    members = []
    best = Fraction(0)
    t = Fraction(0)
    for n, x in enumerate(vals, 1):
        t += x - beta
        if t >= best:
            members.append(n)
            best = t
    S = IndexSet(tuple(members), len(vals))
    n = len(vals)
    avg = sum(vals, Fraction(0)) / n if n else Fraction(0)
    holds = True
    bound = Fraction(0)
    if A > beta:
        bound = (avg - beta) / (A - beta)
        run, count = Fraction(0), 0
        inside = set(members)
        for k, x in enumerate(vals, 1):
            run += x
            count += k in inside
            if Fraction(count, k) < (run / k - beta) / (A - beta):
                holds = False
                break
    return PlissReport(S, S.lower_density() if n else Fraction(0), avg, bound, holds)


def pliss_set_bruteforce(a: Sequence, beta) -> list:
    """Direct window search; the reference the fast scan is tested against."""
    beta = _exact(beta)
    vals = [_exact(x) for x in a]
    out = []
    for n in range(1, len(vals) + 1):
        if all(sum(vals[k:n], Fraction(0)) >= beta * (n - k) for k in range(n)):
            out.append(n)
    return out
