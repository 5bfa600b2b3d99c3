import itertools

import pytest

from subshift_lab import Alphabet, ForbiddenList, build_automaton


def contains_any(w, forbidden_words):
    for v in forbidden_words:
        n = len(v)
        for i in range(len(w) - n + 1):
            if tuple(w[i:i + n]) == tuple(v):
                return True
    return False


def brute_language(q, forbidden_words, n):
    """All words of length n over q letters avoiding every listed word."""
    return [w for w in itertools.product(range(q), repeat=n) if not contains_any(w, forbidden_words)]


def sft(q, words, **kw):
    A = Alphabet(q)
    F = ForbiddenList.explicit(A, [tuple(int(ch) for ch in w) if isinstance(w, str) else tuple(w) for w in words],
                               **kw)
    return F, build_automaton(A, F)


@pytest.fixture
def golden():
    return sft(2, ["11"])


@pytest.fixture
def full2():
    return sft(2, [])


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for num in sorted(results):
            terminalreporter.write_line(results[num])
