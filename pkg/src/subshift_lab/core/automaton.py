"""Failure-link (Aho-Corasick) automaton recognizing occurrences of forbidden words.

Every trie node whose failure chain hits a forbidden word is collapsed into
a single absorbing dead state, so live states are exactly the proper
prefixes of forbidden words that can still be continued.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from ..errors import HorizonUnsupported
from .alphabet import Alphabet, Word
from .forbidden import ForbiddenList


@dataclass(frozen=True, eq=False)
class AvoidanceAutomaton:
    alphabet: Alphabet
    trans: np.ndarray          # (n_states, q) int32, dead row absorbing
    dead: int                  # index of the dead state, -1 when nothing is forbidden
    labels: tuple              # prefix word of each live state
    horizon: int
    forbidden: ForbiddenList = field(repr=False)
    root: int = 0

    @property
    def n_states(self) -> int:
        return self.trans.shape[0]

    @property
    def n_live(self) -> int:
        return self.n_states - (1 if self.dead >= 0 else 0)

    @property
    def live_states(self) -> range:
        return range(self.n_live)

    def step(self, state: int, letter: int) -> int:
        return int(self.trans[state, letter])

    def run(self, w, state: int | None = None) -> int:
        s = self.root if state is None else state
        if not len(w):
            return s
        return kernels.run_word(self.trans, s, np.asarray(w, dtype=np.int32))

    def accepts(self, w) -> bool:
        """True iff ``w`` avoids every forbidden word of length <= horizon."""
        return self.run(w) != self.dead

    def edges(self, state: int) -> list:
        """(letter, target) pairs out of a live state that stay live."""
        return [(a, int(t)) for a, t in enumerate(self.trans[state]) if t != self.dead]


def build_automaton(alphabet: Alphabet, forbidden: ForbiddenList, horizon: int | None = None) -> AvoidanceAutomaton:
    m = forbidden.horizon if horizon is None else int(horizon)
    if m > forbidden.horizon and not forbidden.complete:
        raise HorizonUnsupported(f"horizon {m} exceeds the list's horizon {forbidden.horizon}")
    q = alphabet.size
    try:
        patterns = [w for n in range(1, m + 1) for w in sorted(forbidden.words(n))]
    except HorizonUnsupported as exc:
        raise HorizonUnsupported(f"horizon unsupported: {exc}") from exc

    # trie
    children: list[dict] = [{}]
    terminal = [False]
    depth_word: list[Word] = [()]
    for w in patterns:
        node = 0
        for a in w:
            nxt = children[node].get(a)
            if nxt is None:
                nxt = len(children)
                children[node][a] = nxt
                children.append({})
                terminal.append(False)
                depth_word.append(depth_word[node] + (a,))
            node = nxt
        terminal[node] = True

    n = len(children)
    fail = [0] * n
    goto = np.zeros((n, q), dtype=np.int64)
    bad = list(terminal)
    order = deque()
    for a in range(q):
        c = children[0].get(a)
        if c is None:
            goto[0, a] = 0
        else:
            goto[0, a] = c
            fail[c] = 0
            order.append(c)
    while order:
        u = order.popleft()
        bad[u] = bad[u] or bad[fail[u]]
        for a in range(q):
            c = children[u].get(a)
            if c is None:
                goto[u, a] = goto[fail[u], a]
            else:
                goto[u, a] = c
                fail[c] = int(goto[fail[u], a])
                order.append(c)

    live = [u for u in range(n) if not bad[u]]
    has_dead = len(live) < n
    index = {u: i for i, u in enumerate(live)}
    dead = len(live) if has_dead else -1
    trans = np.empty((len(live) + (1 if has_dead else 0), q), dtype=np.int32)
    for u in live:
        for a in range(q):
            t = int(goto[u, a])
            trans[index[u], a] = index[t] if not bad[t] else dead
    if has_dead:
        trans[dead, :] = dead
    labels = tuple(depth_word[u] for u in live)
    return AvoidanceAutomaton(alphabet, np.ascontiguousarray(trans), dead, labels, m, forbidden)
