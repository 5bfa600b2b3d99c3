"""Heavy subwords, good-word sets, and exhaustive concatenation checks."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .certify.intervals import Interval, RPow
from .certify.series import SeriesSpec, eval_series
from .core.automaton import AvoidanceAutomaton
from .core.forbidden import ForbiddenList
from .core.language import ENUMERATION_LIMIT, enumerate_language, extendable_states, reachable_after
from .errors import EnumerationTooLarge, PreconditionViolated
from .weights import WeightParams, g_weight

HEAVY = Fraction(1, 3)
HEAVY_PRIME = Fraction(1, 4)


def _is_heavy_length(i: int, n: int, fraction: Fraction) -> bool:
    # length i is at least n * fraction, compared exactly
    return i * fraction.denominator >= n * fraction.numerator


@dataclass(frozen=True, eq=False)
class HeavySet:
    fraction: Fraction
    sets: dict                 # n -> frozenset of words
    horizon: int
    complete: bool
    source: ForbiddenList = field(repr=False)
    tail = None

    def words(self, n: int) -> frozenset:
        return self.sets.get(n, frozenset())

    def count(self, n: int) -> int:
        return len(self.words(n))

    @property
    def max_length(self) -> int:
        return max((n for n, s in self.sets.items() if s), default=0)

    def all_words(self) -> frozenset:
        return frozenset().union(*self.sets.values()) if self.sets else frozenset()

    def counting_bound(self, i: int) -> int:
        """sum_{n=i}^{floor(i/fraction)} (n - i + 1) |F_n|."""
        top = min(math.floor(i / self.fraction), self.source.horizon)
        return sum((n - i + 1) * self.source.count(n) for n in range(i, top + 1))


def heavy_subwords(forbidden: ForbiddenList, fraction=HEAVY) -> HeavySet:
    fraction = Fraction(fraction)
    graded: dict = {}
    for v in forbidden.words_upto():
        n = len(v)
        for i in range(1, n + 1):
            if not _is_heavy_length(i, n, fraction):
                continue
            bucket = graded.setdefault(i, set())
            for s in range(n - i + 1):
                bucket.add(v[s:s + i])
    sets = {i: frozenset(b) for i, b in graded.items()}
    return HeavySet(fraction, sets, forbidden.horizon, forbidden.complete, forbidden)


def has_heavy_end(w, heavy: HeavySet) -> bool:
    w = tuple(w)
    for i in range(1, min(len(w), heavy.max_length) + 1):
        hs = heavy.sets.get(i)
        if hs and (w[:i] in hs or w[len(w) - i:] in hs):
            return True
    return False


@dataclass
class GoodWordSet:
    fraction: Fraction
    sets: dict                         # n -> list of words (lexicographic)
    heavy: HeavySet | None
    notion: str = "locally admissible (L~)"
    forbidden: ForbiddenList | None = None

    def words(self, n: int) -> list:
        return self.sets[n]

    def count(self, n: int) -> int:
        return len(self.sets[n])

    @property
    def lengths(self) -> list:
        return sorted(self.sets)


def good_words(n: int, forbidden: ForbiddenList, fraction, automaton: AvoidanceAutomaton,
               limit: int = ENUMERATION_LIMIT, heavy: HeavySet | None = None) -> GoodWordSet:
    """Words of L~_n with no heavy prefix and no heavy suffix."""
    fraction = Fraction(fraction)
    heavy = heavy or heavy_subwords(forbidden, fraction)
    words = enumerate_language(automaton, n, limit)
    kept = [w for w in words if not has_heavy_end(w, heavy)]
    return GoodWordSet(fraction, {n: kept}, heavy, forbidden=forbidden)


def good_word_family(forbidden: ForbiddenList, fraction, automaton: AvoidanceAutomaton,
                     max_len: int, limit: int = ENUMERATION_LIMIT) -> GoodWordSet:
    fraction = Fraction(fraction)
    heavy = heavy_subwords(forbidden, fraction)
    sets = {}
    for n in range(1, max_len + 1):
        sets[n] = good_words(n, forbidden, fraction, automaton, limit, heavy).sets[n]
    return GoodWordSet(fraction, sets, heavy, forbidden=forbidden)


# -- concatenation checks -------------------------------------------------------

@dataclass
class ConcatReport:
    arity: int
    max_len: int
    t: int
    checked: int
    failures: list               # dicts with the witness and the reason
    method: str
    R: int = 0
    notion: str = "consistent at extendability horizon t"
    total_failures: int | None = None

    @property
    def n_failures(self) -> int:
        return len(self.failures) if self.total_failures is None else self.total_failures

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"arity": self.arity, "max_len": self.max_len, "t": self.t, "checked": self.checked,
                "failures": self.failures, "n_failures": self.n_failures, "method": self.method,
                "R": self.R, "conclusion": self.notion}


def _state_image(trans, states: frozenset, word, dead) -> frozenset:
    out = set()
    for s in states:
        for a in word:
            s = trans[s][a]
            if s == dead:
                break
        if s != dead:
            out.add(s)
    return frozenset(out)


def _verify_by_states(goodset: GoodWordSet, arity: int, max_len: int, aut: AvoidanceAutomaton,
                      t: int, max_failures: int) -> ConcatReport:
    """Exhaustive over all tuples, grouping prefixes by the automaton states they can reach.

    A group keeps only its size and a few sample prefixes, enough to report
    witnesses, so memory stays proportional to the number of distinct images.
    """
    trans = aut.trans.tolist()
    dead = aut.dead
    ok = extendable_states(aut, t)
    starts = frozenset(reachable_after(aut, t))
    words = [w for n in range(1, max_len + 1) for w in goodset.sets.get(n, [])]
    groups = {starts: (1, [()])}
    failures = []
    n_fail = 0
    checked = 0
    for depth in range(arity):
        nxt: dict = {}
        last = depth == arity - 1
        for states, (size, samples) in groups.items():
            for w in words:
                img = _state_image(trans, states, w, dead)
                if last:
                    checked += size
                    if any(ok[s] for s in img):
                        continue
                    n_fail += size
                    for p in samples:
                        if len(failures) >= max_failures:
                            break
                        combo = p + (w,)
                        cat = tuple(itertools.chain(*combo))
                        reason = ("contains a forbidden word" if not aut.accepts(cat)
                                  else f"not extendable by {t} letters on both sides")
                        failures.append({"words": [list(x) for x in combo],
                                         "concatenation": list(cat), "reason": reason})
                else:
                    cnt, keep = nxt.get(img, (0, []))
                    room = max_failures - len(keep)
                    if room > 0:
                        keep.extend(p + (w,) for p in samples[:room])
                    nxt[img] = (cnt + size, keep)
        groups = nxt
    return ConcatReport(arity, max_len, t, checked, failures, "automaton-state grouping",
                        total_failures=n_fail)


def verify_concat(goodset: GoodWordSet, arity: int, max_len: int, automaton: AvoidanceAutomaton | None,
                  t: int, max_failures: int = 50) -> ConcatReport:
    """Check every pair (arity 2) or triple (arity 3) of good words of length <= max_len.

    Lists carrying a window-sum rule are checked exactly through difference
    constraints on prefix sums instead of enumerating the words.
    """
    if arity not in (2, 3):
        raise ValueError("arity must be 2 or 3")
    rule = getattr(goodset.forbidden, "rule", None) if goodset.forbidden is not None else None
    if rule is not None and hasattr(rule, "concat_failures"):
        fails, checked, total = rule.concat_failures(goodset.fraction, arity, max_len, max_failures)
        return ConcatReport(arity, max_len, t, checked, fails, "window-sum difference constraints",
                            notion="exact: admissible concatenations extend by zero padding",
                            total_failures=total)
    if automaton is None:
        raise ValueError("an automaton is required for lists without a window-sum rule")
    missing = [n for n in range(1, max_len + 1) if n not in goodset.sets]
    if missing:
        fam = good_word_family(goodset.forbidden, goodset.fraction, automaton, max_len)
        goodset = GoodWordSet(goodset.fraction, fam.sets, fam.heavy, goodset.notion, goodset.forbidden)
    return _verify_by_states(goodset, arity, max_len, automaton, t, max_failures)


def weightbd_crosscheck(v, w, c, forbidden: ForbiddenList) -> tuple:
    """(g_c(vw), 4 * sum_n n|F_n| c^(n/3)) for good words v, w; asserts the inequality."""
    v, w = tuple(v), tuple(w)
    heavy = heavy_subwords(forbidden, HEAVY)
    if has_heavy_end(v, heavy) or has_heavy_end(w, heavy):
        raise PreconditionViolated("inputs must be good words (no heavy prefix or suffix)")
    params = WeightParams(c, forbidden)
    g = g_weight(v + w, params)
    bound = eval_series(SeriesSpec(forbidden, p=1, base=Fraction(c), d=3)).scale(4)
    if not (bound.hi == float("inf") or g <= bound.hi):
        raise AssertionError(f"two-sided weight {g} exceeds the bound {bound}")
    return g, bound


@dataclass
class GoodMeasureReport:
    values: dict              # n -> mu(G_n)
    window: int
    window_minima: list       # (start n, max mu over the window)
    epsilon: float            # every window has some n with mu(G_n) >= epsilon

    def to_dict(self):
        return {"values": {str(k): v for k, v in self.values.items()}, "window": self.window,
                "epsilon": self.epsilon}


def measure_of_goodset(measure, goodset: GoodWordSet, n_range, window: int = 4) -> GoodMeasureReport:
    ns = sorted(n for n in n_range if n in goodset.sets)
    values = {n: float(sum(measure(w) for w in goodset.sets[n])) for n in ns}
    wins = []
    for i in range(0, max(len(ns) - window + 1, 1)):
        chunk = ns[i:i + window]
        if chunk:
            wins.append((chunk[0], max(values[n] for n in chunk)))
    eps = min((m for _, m in wins), default=0.0)
    return GoodMeasureReport(values, window, wins, eps)
