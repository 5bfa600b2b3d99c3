import random
from fractions import Fraction

import pytest

from subshift_lab import Alphabet, ForbiddenList, build_automaton
from subshift_lab.core import enumerate_language, word
from subshift_lab.errors import PreconditionViolated
from subshift_lab.goodwords import (
    HEAVY,
    HEAVY_PRIME,
    good_word_family,
    good_words,
    heavy_subwords,
    measure_of_goodset,
    verify_concat,
    weightbd_crosscheck,
)
from subshift_lab.mme import parry_of

from conftest import sft

W = lambda *xs: {word(x) for x in xs}  # noqa: E731


def test_heavy_examples():
    F, _ = sft(2, ["1111"])
    assert heavy_subwords(F, HEAVY).all_words() == W("11", "111", "1111")
    assert heavy_subwords(F, HEAVY_PRIME).all_words() == W("1", "11", "111", "1111")
    E, _ = sft(2, [])
    assert not heavy_subwords(E, HEAVY).all_words()


def test_heavy_counting_bound():
    rng = random.Random(4)
    for _ in range(30):
        words = {tuple(rng.randrange(3) for _ in range(rng.randint(1, 9))) for _ in range(6)}
        F = ForbiddenList.explicit(Alphabet(3), words)
        for frac in (HEAVY, HEAVY_PRIME):
            H = heavy_subwords(F, frac)
            for i in range(1, F.horizon + 1):
                assert H.count(i) <= H.counting_bound(i)


def test_good_word_examples():
    F, aut = sft(2, ["1111"])
    assert set(good_words(3, F, HEAVY, aut).words(3)) == W("000", "001", "010", "100", "101")
    assert set(good_words(3, F, HEAVY_PRIME, aut).words(3)) == W("000", "010")
    E, full = sft(3, [])
    assert good_words(4, E, HEAVY, full).count(4) == 81


def test_good_prime_subset_of_good():
    F, aut = sft(3, ["0011", "21212", "111"])
    G = good_word_family(F, HEAVY, aut, 7)
    Gp = good_word_family(F, HEAVY_PRIME, aut, 7)
    for n in range(1, 8):
        assert set(Gp.words(n)) <= set(G.words(n)) <= set(enumerate_language(aut, n))


def test_concat_examples():
    F, aut = sft(2, ["1111"])
    G = good_word_family(F, HEAVY, aut, 6)
    rep = verify_concat(G, 2, 6, aut, 8)
    assert rep.ok and rep.n_failures == 0 and rep.checked > 0 and rep.R == 0
    E, full = sft(2, [])
    assert verify_concat(good_word_family(E, HEAVY, full, 4), 3, 4, full, 4).ok


def test_concat_reports_violations():
    F, aut = sft(2, ["11"])
    G = good_word_family(F, 1, aut, 4)
    rep = verify_concat(G, 2, 4, aut, 2)
    assert not rep.ok
    pairs = {tuple(tuple(x) for x in f["words"]) for f in rep.failures}
    assert (word("01"), word("10")) in pairs
    assert rep.to_dict()["n_failures"] == rep.n_failures


def test_weightbd_crosscheck():
    F, _ = sft(2, ["1111"])
    g, bound = weightbd_crosscheck(word("000"), word("000"), Fraction(1, 4), F)
    assert g == 0 and bound.lo > 0
    g, bound = weightbd_crosscheck(word("010"), word("010"), Fraction(1, 4), F)
    assert g <= bound.hi
    with pytest.raises(PreconditionViolated):
        weightbd_crosscheck(word("011"), word("0"), Fraction(1, 4), F)


def test_weightbd_random_good_pairs():
    rng = random.Random(8)
    F, aut = sft(2, ["110000", "1011", "0111"])
    G = good_word_family(F, HEAVY, aut, 6)
    pool = [w for n in range(1, 7) for w in G.words(n)]
    for _ in range(50):
        v, w = rng.choice(pool), rng.choice(pool)
        g, bound = weightbd_crosscheck(v, w, Fraction(1, 3), F)
        assert g <= bound.hi


def test_measure_of_goodset():
    F, aut = sft(2, [])
    _, _, _, mu = parry_of(F)
    rep = measure_of_goodset(mu, good_word_family(F, HEAVY, aut, 6), range(1, 7))
    assert all(v == pytest.approx(1.0, abs=1e-12) for v in rep.values.values())
    F, aut = sft(2, ["11"])
    _, _, _, mu = parry_of(F)
    rep = measure_of_goodset(mu, good_word_family(F, HEAVY, aut, 12), range(1, 13))
    assert rep.epsilon > 0
    F, aut = sft(2, ["1111"])
    _, _, _, mu = parry_of(F)
    rep = measure_of_goodset(mu, good_word_family(F, HEAVY_PRIME, aut, 10), range(1, 11))
    assert rep.epsilon > 0
    for n, v in rep.values.items():
        assert v >= mu((0,) * n) > 0
