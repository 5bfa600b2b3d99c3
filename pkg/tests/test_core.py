import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subshift_lab import Alphabet, ForbiddenList, TailModel, build_automaton
from subshift_lab.core import (
    count_language,
    count_table,
    entropy_estimates,
    enumerate_language,
    extendability_filter,
    higher_power_forbidden,
    is_prefix,
    is_subword,
    is_suffix,
    language_table,
    lex_le,
    pliss_set,
    product_forbidden,
    word,
)
from subshift_lab.core.language import LowerBound
from subshift_lab.core.pliss import pliss_set_bruteforce
from subshift_lab.errors import EnumerationTooLarge, HorizonUnsupported, NoLowerBound, SequenceBoundViolated

from conftest import brute_language, contains_any, sft


# -- words ------------------------------------------------------------------------

def test_word_predicates():
    assert word("0110") == (0, 1, 1, 0)
    assert is_prefix(word("01"), word("0110"))
    assert is_suffix(word("10"), word("0110"))
    assert is_subword(word("11"), word("0110"))
    assert not is_subword(word("111"), word("0110"))
    assert lex_le(word("0101"), word("011"))
    assert not lex_le(word("1"), word("011"))


def test_alphabet_rejects_foreign_letters():
    with pytest.raises(ValueError):
        Alphabet(2).check((0, 2))
    with pytest.raises(ValueError):
        Alphabet(0)


# -- automaton ----------------------------------------------------------------------

def test_golden_mean_automaton_states(golden):
    _, aut = golden
    assert aut.n_live == 2
    assert aut.n_states == 3
    assert aut.accepts((0, 1, 0, 1))
    assert not aut.accepts((0, 1, 1))


def test_empty_list_has_single_state():
    _, aut = sft(3, [])
    assert aut.n_states == 1
    assert aut.dead is None or aut.n_live == 1


def test_all_letters_forbidden_leads_to_dead():
    _, aut = sft(2, ["0", "1"])
    for a in (0, 1):
        assert aut.step(aut.root, a) == aut.dead


def test_state_count_bound():
    F, aut = sft(3, ["012", "1101", "22"])
    assert aut.n_states <= 1 + sum(len(w) for w in F.words_upto())


def test_horizon_unsupported_for_profile_list():
    F = ForbiddenList.from_profile(Alphabet(2), [0, 1, 1], 3)
    with pytest.raises(HorizonUnsupported):
        build_automaton(F.alphabet, F)


# -- counting ------------------------------------------------------------------------

@pytest.mark.parametrize("q,words,n,expected", [
    (2, ["11"], 5, 13),
    (3, [], 4, 81),
    (2, ["0", "1"], 3, 0),
])
def test_count_examples(q, words, n, expected):
    _, aut = sft(q, words)
    assert count_language(aut, n) == expected


def test_enumerate_examples(golden):
    _, aut = golden
    assert enumerate_language(aut, 3) == [word(s) for s in ("000", "001", "010", "100", "101")]
    assert enumerate_language(aut, 2) == [word(s) for s in ("00", "01", "10")]
    _, full = sft(2, [])
    assert enumerate_language(full, 1) == [(0,), (1,)]


def test_enumerate_limit_reports_count(golden):
    _, aut = golden
    with pytest.raises(EnumerationTooLarge) as exc:
        enumerate_language(aut, 10, limit=50)
    assert exc.value.count == 144


@settings(max_examples=60, deadline=None)
@given(q=st.integers(1, 3),
       words=st.lists(st.lists(st.integers(0, 2), min_size=1, max_size=4), max_size=4),
       n=st.integers(0, 7))
def test_count_matches_exhaustive(q, words, n):
    words = [tuple(a % q for a in w) for w in words]
    _, aut = sft(q, words)
    assert count_language(aut, n) == len(brute_language(q, words, n))
    assert enumerate_language(aut, n) == brute_language(q, words, n)


def test_submultiplicative_and_horizon_monotone():
    F, aut = sft(3, ["00", "121", "2222"])
    c = count_table(aut, 16)
    assert c[0] == 1
    for m in range(1, 9):
        for n in range(1, 9):
            assert c[m + n] <= c[m] * c[n]
    short = build_automaton(F.alphabet, F.truncate(3))
    c_short = count_table(short, 12)
    assert all(c[n] <= c_short[n] for n in range(13))


# -- extendability --------------------------------------------------------------------

def test_extendability_examples(golden):
    _, aut = golden
    assert extendability_filter([word("01"), word("10"), word("11")], aut, 1) == [word("01"), word("10")]
    _, aut4 = sft(2, ["0000"])
    assert extendability_filter([word("000")], aut4, 4) == [word("000")]
    _, full = sft(2, [])
    ws = [word("0101"), word("11")]
    assert extendability_filter(ws, full, 3) == ws


def test_extendability_shrinks_with_t():
    _, aut = sft(2, ["00", "0110", "111"])
    words = enumerate_language(aut, 4)
    prev = set(words)
    for t in range(0, 6):
        cur = set(extendability_filter(words, aut, t))
        assert cur <= prev
        prev = cur


# -- entropy estimates ------------------------------------------------------------------

def test_entropy_estimates_full_and_golden(golden, full2):
    est = entropy_estimates(language_table(full2[1], 10))
    assert all(v == pytest.approx(math.log(2), abs=1e-15) for v in est.h_upper_seq.values())
    est = entropy_estimates(language_table(golden[1], 16))
    phi = math.log((1 + 5 ** 0.5) / 2)
    assert est.h_upper_seq[16] == pytest.approx(0.49, abs=0.01)
    assert est.h_upper_seq[16] > phi
    seq = [est.h_upper_seq[n] for n in (1, 2, 4, 8, 16)]
    assert seq == sorted(seq, reverse=True)


def test_entropy_estimates_empty_and_missing_lower():
    _, aut = sft(2, ["0", "1"])
    est = entropy_estimates(language_table(aut, 4))
    assert est.empty
    with pytest.raises(NoLowerBound):
        est.lower()
    with pytest.raises(NoLowerBound):
        entropy_estimates(language_table(aut, 4), require_lower=True)


def test_entropy_lower_bound_picks_best(golden):
    lbs = [LowerBound(0.3, "a"), LowerBound(0.45, "b")]
    est = entropy_estimates(language_table(golden[1], 8), lbs)
    assert est.lower().source == "b"


# -- Pliss sets -----------------------------------------------------------------------------

def test_pliss_constant_sequence():
    rep = pliss_set([Fraction(1, 2)] * 30, Fraction(1, 2), Fraction(1, 4))
    assert list(rep.index_set.members) == list(range(1, 31))
    assert rep.density == 1


def test_pliss_alternating():
    a = [1, 0] * 50
    rep = pliss_set(a, 1, Fraction(1, 4))
    assert list(rep.index_set.members) == pliss_set_bruteforce(a, Fraction(1, 4))
    assert rep.density >= Fraction(1, 3)
    assert rep.bound_holds_every_prefix


def test_pliss_golden_ratios(golden):
    c = count_table(golden[1], 40)
    a = [math.log(c[n]) - math.log(c[n - 1]) for n in range(1, 41)]
    rep = pliss_set(a, math.log(2), 0.2)
    assert rep.density > Fraction(1, 2)


def test_pliss_rejects_out_of_range():
    with pytest.raises(SequenceBoundViolated):
        pliss_set([0, 2], 1, 0)


def test_pliss_random_against_bruteforce():
    rng = random.Random(3)
    for _ in range(40):
        a = [Fraction(rng.randint(0, 8), 4) for _ in range(60)]
        beta = Fraction(rng.randint(1, 6), 4)
        rep = pliss_set(a, 2, beta)
        assert list(rep.index_set.members) == pliss_set_bruteforce(a, beta)


# -- higher power and product ----------------------------------------------------------------

def test_power_golden_pairs(golden):
    _, aut = golden
    P = higher_power_forbidden(aut, 2, 2)
    blocks = P.blocks
    got = {tuple("".join(map(str, blocks[i])) for i in t) for t in P.words_upto()}
    assert got == {("01", "10")}


def test_power_empty_and_triples():
    _, aut = sft(2, [])
    assert higher_power_forbidden(aut, 2, 3).is_empty
    _, aut = sft(2, ["101"])
    P = higher_power_forbidden(aut, 1, 3)
    assert {tuple(P.blocks[i] for i in t) for t in P.words_upto()} == {((1,), (0,), (1,))}


def test_power_aligned_counts_match():
    F, aut = sft(2, ["11", "000"])
    for n in (2, 3):
        P = higher_power_forbidden(aut, n, 4)
        paut = build_automaton(P.alphabet, P)
        for j in range(1, 12 // n + 1):
            assert count_language(paut, j) == count_language(aut, j * n)


def test_product_counts():
    F = ForbiddenList.explicit(Alphabet(2), [word("11")])
    P = product_forbidden(F)
    assert P.count(2) == 7
    assert len(P.words(2)) == 7
    assert all(P.contains(pw) for pw in P.words(2))
    assert product_forbidden(ForbiddenList.empty(Alphabet(2))).count(3) == 0
    G = ForbiddenList.explicit(Alphabet(2), [word("101"), word("111")])
    P = product_forbidden(G)
    for n in range(1, 4):
        assert P.count(n) <= 2 * G.count(n) * 2 ** n
        assert P.count(n) == len(P.words(n))


# -- forbidden lists -----------------------------------------------------------------------

def test_tail_model_validated():
    with pytest.raises(ValueError):
        ForbiddenList.from_profile(Alphabet(2), [0, 4, 8], 3, tail=TailModel(1, 1))
    F = ForbiddenList.from_profile(Alphabet(2), [0, 2, 4], 3, tail=TailModel(1, 2))
    assert F.profile == (0, 2, 4)


def test_normalization_is_opt_in():
    F = ForbiddenList.explicit(Alphabet(2), [word("11"), word("011")])
    assert F.count(3) == 1
    N = F.normalized()
    assert N.count(3) == 0 and N.normalized_flag
