"""Graded forbidden-word lists.

A list is either explicit (a finite word set, possibly the truncation of an
infinite list), implicit (a membership rule with an optional exact counter),
or profile-only (just the counts |F_n|, enough for every series check).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from ..errors import HorizonUnsupported
from .alphabet import Alphabet, Word, is_subword

DEFAULT_HORIZON = 24
MATERIALIZE_LIMIT = 1 << 22


@dataclass(frozen=True)
class TailModel:
    """Geometric tail claim |F_n| <= C * r**n for every n beyond the horizon."""

    C: Fraction
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "C", Fraction(self.C))
        object.__setattr__(self, "r", Fraction(self.r))
        if self.C < 0 or self.r < 0:
            raise ValueError("tail model constants must be non-negative")

    def bound(self, n: int) -> Fraction:
        return self.C * self.r ** n


class ForbiddenList:
    def __init__(
        self,
        alphabet: Alphabet,
        *,
        words: Iterable[Sequence[int]] | None = None,
        predicate: Callable[[Word], bool] | None = None,
        counter: Callable[[int], int] | None = None,
        generator: Callable[[int], Iterable[Word]] | None = None,
        horizon: int | None = None,
        complete: bool | None = None,
        tail: TailModel | None = None,
        rule=None,
        label: str = "",
        materialize_limit: int = MATERIALIZE_LIMIT,
    ):
        self.alphabet = alphabet
        self.tail = tail
        self.rule = rule
        self.label = label
        self.materialize_limit = materialize_limit
        self._predicate = predicate
        self._counter = counter
        self._generator = generator
        self._cache: dict[int, frozenset] = {}
        self.normalized_flag = False

        if words is not None:
            graded: dict[int, set] = {}
            for w in words:
                w = alphabet.check(w)
                if not w:
                    raise ValueError("the empty word cannot be forbidden")
                graded.setdefault(len(w), set()).add(w)
            top = max(graded, default=0)
            self.horizon = top if horizon is None else int(horizon)
            if self.horizon < top:
                raise ValueError("horizon shorter than the longest listed word")
            for n in range(1, self.horizon + 1):
                self._cache[n] = frozenset(graded.get(n, ()))
            self.kind = "explicit"
            self.complete = True if complete is None else bool(complete)
        elif predicate is not None or counter is not None or generator is not None:
            self.horizon = DEFAULT_HORIZON if horizon is None else int(horizon)
            self.kind = "implicit" if (predicate or generator) else "profile"
            self.complete = bool(complete) if complete is not None else False
        else:
            raise ValueError("need words, a rule, or a counter")
        if self.horizon < 0:
            raise ValueError("horizon must be non-negative")
        if tail is not None:
            self._validate_tail()

    # -- constructors -------------------------------------------------------
    @classmethod
    def explicit(cls, alphabet, words, **kw) -> "ForbiddenList":
        return cls(alphabet, words=words, **kw)

    @classmethod
    def from_profile(cls, alphabet, counts, horizon, **kw) -> "ForbiddenList":
        """Profile-only list; ``counts`` is a callable n -> |F_n| or a sequence for n = 1..horizon."""
        if callable(counts):
            fn = counts
        else:
            seq = [int(c) for c in counts]

            def fn(n, seq=seq):
                return seq[n - 1] if 1 <= n <= len(seq) else 0

        return cls(alphabet, counter=fn, horizon=horizon, **kw)

    @classmethod
    def empty(cls, alphabet) -> "ForbiddenList":
        return cls(alphabet, words=[], complete=True)

    # -- graded access ------------------------------------------------------
    def _check_n(self, n):
        if n < 1:
            return False
        if n > self.horizon:
            if self.complete:
                return False
            raise HorizonUnsupported(f"length {n} beyond horizon {self.horizon}")
        return True

    def words(self, n: int) -> frozenset:
        if not self._check_n(n):
            return frozenset()
        if n in self._cache:
            return self._cache[n]
        if self._generator is not None:
            found = frozenset(tuple(w) for w in self._generator(n))
        elif self._predicate is not None:
            q = self.alphabet.size
            if q ** n > self.materialize_limit:
                raise HorizonUnsupported(
                    f"materializing length {n} needs {q}^{n} membership tests; horizon unsupported"
                )
            found = frozenset(w for w in itertools.product(range(q), repeat=n) if self._predicate(w))
        else:
            raise HorizonUnsupported("profile-only list has no words to materialize")
        if self._counter is not None and self._counter(n) != len(found):
            raise ValueError(f"counter and rule disagree at length {n}")
        if self.tail is not None and len(found) > self.tail.bound(n):
            raise ValueError(f"tail model violated at length {n}")
        self._cache[n] = found
        return found

    def count(self, n: int) -> int:
        if not self._check_n(n):
            return 0
        if n in self._cache:
            return len(self._cache[n])
        if self._counter is not None:
            return int(self._counter(n))
        return len(self.words(n))

    def can_materialize(self, n: int) -> bool:
        try:
            for k in range(1, min(n, self.horizon) + 1):
                self.words(k)
        except HorizonUnsupported:
            return False
        return n <= self.horizon or self.complete

    def words_upto(self, m: int | None = None) -> list:
        m = self.horizon if m is None else m
        out = []
        for n in range(1, m + 1):
            out.extend(sorted(self.words(n)))
        return out

    @property
    def profile(self) -> tuple:
        return tuple(self.count(n) for n in range(1, self.horizon + 1))

    @property
    def max_length(self) -> int:
        return max((n for n in range(1, self.horizon + 1) if self.count(n)), default=0)

    @property
    def is_empty(self) -> bool:
        return self.complete and self.max_length == 0

    def contains(self, w: Sequence[int]) -> bool:
        w = tuple(w)
        n = len(w)
        if n in self._cache:
            return w in self._cache[n]
        if self._predicate is not None:
            return bool(self._predicate(w))
        return w in self.words(n)

    # -- derived lists ------------------------------------------------------
    def _validate_tail(self):
        for n in range(1, self.horizon + 1):
            if n in self._cache or self._counter is not None:
                if self.count(n) > self.tail.bound(n):
                    raise ValueError(f"tail model C={self.tail.C}, r={self.tail.r} violated at n={n}")

    def truncate(self, m: int) -> "ForbiddenList":
        words = [w for n in range(1, min(m, self.horizon) + 1) for w in self.words(n)]
        complete = self.complete and m >= self.max_length
        return ForbiddenList(self.alphabet, words=words, horizon=m, complete=complete,
                             tail=self.tail, label=self.label)

    def normalized(self) -> "ForbiddenList":
        """Drop words containing a strictly shorter forbidden word (off by default; flagged)."""
        kept: list = []
        for w in self.words_upto():
            if not any(is_subword(v, w) for v in kept if len(v) < len(w)):
                kept.append(w)
        out = ForbiddenList(self.alphabet, words=kept, horizon=self.horizon,
                            complete=self.complete, tail=self.tail, label=self.label)
        out.normalized_flag = True
        return out

    def __repr__(self):
        cheap = self.kind != "implicit" or self._counter is not None
        prof = self.profile if cheap and self.horizon <= 12 else "..."
        return (f"ForbiddenList({self.kind}, |A|={self.alphabet.size}, horizon={self.horizon}, "
                f"complete={self.complete}, profile={prof})")
