"""Higher-power and product forbidden lists."""
from __future__ import annotations

import itertools
import math

from ..errors import EnumerationTooLarge, PowerAlphabetTooLarge
from .alphabet import Alphabet
from .automaton import AvoidanceAutomaton
from .forbidden import ForbiddenList
from .language import enumerate_language

POWER_LIMIT = 1 << 16
TUPLE_LIMIT = 1 << 21


def higher_power_forbidden(aut: AvoidanceAutomaton, n: int, j_max: int,
                           limit: int = POWER_LIMIT) -> ForbiddenList:
    """Minimal forbidden block sequences for the n-th higher power shift.

    Letters of the new alphabet are the words of L~_n in lexicographic order;
    the alphabet's labels hold those words.  A tuple (v_1..v_j) is listed when
    its concatenation hits a forbidden word but neither (v_1..v_{j-1}) nor
    (v_2..v_j) does.  The list is complete once j_max blocks cover every
    forbidden word, i.e. j_max >= 1 + ceil((m - 1) / n).
    """
    if j_max < 2:
        raise ValueError("j_max must be at least 2")
    try:
        blocks = enumerate_language(aut, n, limit)
    except EnumerationTooLarge as exc:
        raise PowerAlphabetTooLarge(f"power alphabet L~_{n} too large: {exc.count} words") from exc
    q = len(blocks)
    trans = aut.trans
    dead = aut.dead

    def run(state, block):
        for a in block:
            state = int(trans[state, a])
            if state == dead:
                break
        return state

    clean = {(i,): run(aut.root, b) for i, b in enumerate(blocks)}
    found = []
    for _j in range(2, j_max + 1):
        nxt = {}
        for t, s in clean.items():
            for b in range(q):
                end = run(s, blocks[b])
                tail = t[1:] + (b,)
                if end == dead:
                    if tail in clean:
                        found.append(t + (b,))
                elif tail in clean:
                    nxt[t + (b,)] = end
                if len(nxt) > TUPLE_LIMIT:
                    raise PowerAlphabetTooLarge("clean block sequences exceed the enumeration limit")
        clean = nxt
    needed = 1 + math.ceil(max(aut.horizon - 1, 0) / n)
    alphabet = Alphabet(q, labels=tuple("".join(map(str, b)) for b in blocks))
    out = ForbiddenList(alphabet, words=found, horizon=j_max,
                        complete=aut.forbidden.complete and j_max >= needed,
                        label=f"power{n}")
    out.blocks = tuple(blocks)
    return out


def product_forbidden(forbidden: ForbiddenList) -> ForbiddenList:
    """Forbidden list of X x X over pair letters (a, b) encoded as a*q + b.

    A pair word (v, w) with |v| = |w| is forbidden when v or w is.
    """
    q = forbidden.alphabet.size
    alphabet = Alphabet(q * q, labels=tuple(f"({a},{b})" for a in range(q) for b in range(q)))

    def split(pw):
        return tuple(x // q for x in pw), tuple(x % q for x in pw)

    def predicate(pw):
        v, w = split(pw)
        return forbidden.contains(v) or forbidden.contains(w)

    def counter(n):
        f = forbidden.count(n)
        return 2 * f * q ** n - f * f

    def generator(n):
        bad = forbidden.words(n)
        seen = set()
        for v in bad:
            for w in itertools.product(range(q), repeat=n):
                for x, y in ((v, w), (w, v)):
                    pw = tuple(a * q + b for a, b in zip(x, y))
                    if pw not in seen:
                        seen.add(pw)
                        yield pw

    return ForbiddenList(alphabet, predicate=predicate, counter=counter, generator=generator,
                         horizon=forbidden.horizon, complete=forbidden.complete,
                         label=f"product({forbidden.label})")
