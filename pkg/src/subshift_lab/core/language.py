"""Counting, enumerating and tightening the locally admissible language.

``L~_n`` is the set of length-n words avoiding every forbidden word up to the
automaton's horizon.  It contains the true language ``L_n(X)``; reports say
which of the two a number refers to.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from ..errors import EnumerationTooLarge, NoLowerBound
from .automaton import AvoidanceAutomaton

ENUMERATION_LIMIT = 2_000_000


def _sparse_edges(aut: AvoidanceAutomaton) -> list:
    """Per live state, the list of (target, multiplicity) among live targets."""
    out = []
    for s in aut.live_states:
        agg: dict = {}
        for _, t in aut.edges(s):
            agg[t] = agg.get(t, 0) + 1
        out.append(sorted(agg.items()))
    return out


def forward_counts(aut: AvoidanceAutomaton, n: int, start: dict | None = None) -> list:
    """Vectors v_0..v_n with v_i[s] = number of admissible length-i words driving the root to s."""
    edges = _sparse_edges(aut)
    vec = [0] * aut.n_live
    if start is None:
        vec[aut.root] = 1
    else:
        for s, c in start.items():
            vec[s] += c
    out = [vec]
    for _ in range(n):
        nxt = [0] * aut.n_live
        for s, c in enumerate(vec):
            if c:
                for t, k in edges[s]:
                    nxt[t] += c * k
        vec = nxt
        out.append(vec)
    return out


def backward_counts(aut: AvoidanceAutomaton, n: int) -> list:
    """Vectors b_0..b_n with b_k[s] = number of admissible length-k continuations from s."""
    edges = _sparse_edges(aut)
    vec = [1] * aut.n_live
    out = [vec]
    for _ in range(n):
        vec = [sum(vec[t] * k for t, k in edges[s]) for s in range(aut.n_live)]
        out.append(vec)
    return out


def count_language(aut: AvoidanceAutomaton, n: int) -> int:
    if n < 0:
        raise ValueError("n must be non-negative")
    return sum(forward_counts(aut, n)[-1])


def count_table(aut: AvoidanceAutomaton, n_max: int) -> list:
    return [sum(v) for v in forward_counts(aut, n_max)]


def enumerate_language(aut: AvoidanceAutomaton, n: int, limit: int = ENUMERATION_LIMIT) -> list:
    """Every word of L~_n in lexicographic order, as tuples."""
    return [tuple(row) for row in enumerate_array(aut, n, limit).tolist()]


def enumerate_array(aut: AvoidanceAutomaton, n: int, limit: int = ENUMERATION_LIMIT) -> np.ndarray:
    total = count_language(aut, n)
    if total > limit:
        raise EnumerationTooLarge(total, limit, what=f"L~_{n}")
    if total == 0:
        return np.zeros((0, n), dtype=np.int32)
    return kernels.enumerate_words(aut.trans, aut.dead, aut.root, n, total)


def reachable_after(aut: AvoidanceAutomaton, t: int) -> list:
    """Live states reached from the root by some admissible word of length exactly t."""
    cur = {aut.root}
    for _ in range(t):
        cur = {tgt for s in cur for _, tgt in aut.edges(s)}
    return sorted(cur)


def extendable_states(aut: AvoidanceAutomaton, t: int) -> np.ndarray:
    """Boolean mask over all states: True when some admissible length-t path leaves the state."""
    ok = np.zeros(aut.n_states, dtype=bool)
    ok[: aut.n_live] = True
    for _ in range(t):
        nxt = np.zeros_like(ok)
        for s in aut.live_states:
            nxt[s] = any(ok[tgt] for _, tgt in aut.edges(s))
        ok = nxt
    return ok


def _pack(words) -> tuple:
    words = [tuple(w) for w in words]
    width = max((len(w) for w in words), default=0)
    arr = np.zeros((len(words), max(width, 1)), dtype=np.int32)
    lengths = np.zeros(len(words), dtype=np.int32)
    for i, w in enumerate(words):
        arr[i, : len(w)] = w
        lengths[i] = len(w)
    return words, arr, lengths


def extendability_filter(words, aut: AvoidanceAutomaton, t: int) -> list:
    """Keep w iff u.w.v avoids the truncated list for some u, v of length t."""
    if t < 0:
        raise ValueError("t must be non-negative")
    words, arr, lengths = _pack(words)
    if not words:
        return []
    starts = np.asarray(reachable_after(aut, t), dtype=np.int32)
    if starts.size == 0:
        return []
    ends = kernels.batch_run(aut.trans, starts, arr, lengths)
    ok = extendable_states(aut, t)
    keep = ok[ends].any(axis=1)
    return [w for w, k in zip(words, keep) if k]


@dataclass(frozen=True)
class LowerBound:
    """A certified entropy lower bound h(X) >= value (strict when ``strict``)."""

    value: float
    source: str
    strict: bool = False
    exact: object = None       # optional exact/interval representation for certificates


@dataclass
class LanguageTable:
    counts: list                      # counts[n] = |L~_n|, n = 0..n_max
    horizon: int
    exact_for_L: bool = False         # True when L~_n = L_n is guaranteed
    notion: str = "locally admissible (L~)"
    words: dict = field(default_factory=dict)

    @property
    def n_max(self) -> int:
        return len(self.counts) - 1

    def h(self, n: int) -> float:
        c = self.counts[n]
        return math.log(c) / n if c > 0 else -math.inf

    def rows(self) -> list:
        return [(n, c, self.h(n) if n else None, self.exact_for_L) for n, c in enumerate(self.counts)]


def language_table(aut: AvoidanceAutomaton, n_max: int, exact_for_L: bool = False) -> LanguageTable:
    notion = "language L (exact)" if exact_for_L else "locally admissible (L~)"
    return LanguageTable(count_table(aut, n_max), aut.horizon, exact_for_L, notion)


@dataclass
class EntropyEstimates:
    h_upper_seq: dict
    h_lower_cert: LowerBound | None
    empty: bool = False
    upper_is_certified: bool = False

    def lower(self) -> LowerBound:
        if self.h_lower_cert is None:
            raise NoLowerBound("no lower bound available")
        return self.h_lower_cert


def entropy_estimates(table: LanguageTable, lower_sources=(), require_lower: bool = False) -> EntropyEstimates:
    """(1/n) ln|L~_n| for every tabulated n, plus the best supplied lower bound."""
    upper = {n: table.h(n) for n in range(1, table.n_max + 1)}
    empty = any(table.counts[n] == 0 for n in range(1, table.n_max + 1))
    best = max(lower_sources, key=lambda lb: lb.value, default=None)
    if best is None and require_lower:
        raise NoLowerBound("no lower bound available")
    return EntropyEstimates(upper, best, empty, upper_is_certified=table.exact_for_L)
