import itertools
import math
import random
from fractions import Fraction

import pytest

from subshift_lab import build_automaton
from subshift_lab.core import count_language, enumerate_language, lex_le
from subshift_lab.errors import InsufficientDepth, InvalidH
from subshift_lab.families import (
    AlphaBetaParams,
    BoundedDensityParams,
    WindowSumRule,
    alpha_beta_coding,
    alpha_beta_forbidden,
    bddthm_certify,
    bfact_value,
    betaent_check,
    bounded_density_counts,
    bounded_density_forbidden,
    count_sum_above,
    dense_count_bound,
    forbidden_from_params,
    hardbeta_certificate,
    hardbeta_search,
    nonsupport_example,
    nonsupport_forbidden,
)
from subshift_lab.families.bounded_density import heavy_threshold, zero_padding_check
from subshift_lab.goodwords import HEAVY, HEAVY_PRIME, good_word_family, heavy_subwords, verify_concat


# -- bounded density -------------------------------------------------------------------

def small_params(k, table, signed=False):
    return BoundedDensityParams(k, tuple(table), signed)


def test_count_examples():
    p = small_params(2, [2, 3])
    assert bounded_density_counts(p, 2).F[1] == 1
    p = small_params(2, [2, 3], signed=True)
    assert bounded_density_counts(p, 2).F[1] == 2
    p = small_params(3, [3 * n for n in range(1, 8)])
    assert bounded_density_counts(p, 7).F == [0] * 7


def brute_sum_above(k, n, thr, signed):
    vals = range(-k, k + 1) if signed else range(k + 1)
    return sum(1 for w in itertools.product(vals, repeat=n) if (abs(sum(w)) if signed else sum(w)) > thr)


@pytest.mark.parametrize("signed", [False, True])
def test_dp_matches_exhaustive(signed):
    for k in (1, 2, 3):
        for n in range(1, 9 if not signed else 7):
            for thr in range(0, n * k + 1, max(1, n * k // 4)):
                assert count_sum_above(k, n, thr, signed) == brute_sum_above(k, n, thr, signed)


def test_invalid_h_rejected():
    with pytest.raises(InvalidH):
        small_params(2, [2, 5])            # not subadditive
    with pytest.raises(InvalidH):
        small_params(2, [3, 2])            # decreasing


def test_counts_monotone_in_h():
    lo = small_params(3, [3, 5, 7, 9, 11, 13])
    hi = small_params(3, [3, 6, 8, 10, 12, 14])
    a, b = bounded_density_counts(lo, 6).F, bounded_density_counts(hi, 6).F
    assert all(y <= x for x, y in zip(a, b))


def brute_heavy(params, fraction, max_n):
    """Heavy subwords listed directly from the materialized forbidden words."""
    rule = WindowSumRule(params)
    q = params.alphabet_size
    out = {}
    for n in range(1, max_n + 1):
        for w in itertools.product(range(q), repeat=n):
            if rule.is_forbidden(w):
                for i in range(1, n + 1):
                    if Fraction(i) >= Fraction(n) * fraction:
                        for s in range(n - i + 1):
                            out.setdefault(i, set()).add(w[s:s + i])
    return out


@pytest.mark.parametrize("signed", [False, True])
def test_heavy_counts_exact(signed):
    p = small_params(2, [2, 3, 4, 5, 6, 7], signed)
    for frac in (HEAVY, HEAVY_PRIME):
        counts = bounded_density_counts(p, 6, frac).H
        brute = brute_heavy(p, frac, 6)
        # lengths i whose parents all lie inside the enumerated range
        for i in range(1, 7):
            if math.floor(i / frac) <= 6:
                assert counts[i - 1] == len(brute.get(i, ())), (frac, i)


def test_window_rule_matches_materialized_list():
    p = small_params(2, [2, 3, 4, 5, 6])
    F = bounded_density_forbidden(p, 5)
    for n in range(1, 6):
        assert len(F.words(n)) == F.count(n)
    aut = build_automaton(F.alphabet, F)
    rule = WindowSumRule(p)
    for w in itertools.product(range(3), repeat=6):
        assert rule.admissible(w) == aut.accepts(w)


@pytest.mark.parametrize("signed", [False, True])
def test_window_concat_matches_automaton(signed):
    p = small_params(2, [2, 3, 4, 5, 6, 7], signed)
    F = bounded_density_forbidden(p, 6)
    aut = build_automaton(F.alphabet, F)
    for frac, arity in ((HEAVY, 2), (HEAVY_PRIME, 3)):
        G = good_word_family(F, frac, aut, 3)
        fast = verify_concat(G, arity, 3, aut, 3)
        pool = [w for n in range(1, 4) for w in G.words(n)]
        rule = WindowSumRule(p)
        bad = sum(1 for c in itertools.product(pool, repeat=arity) if not rule.admissible(tuple(itertools.chain(*c))))
        assert fast.n_failures == bad


def test_zero_padding():
    rng = random.Random(1)
    for signed in (False, True):
        p = BoundedDensityParams.standard(4, signed, flat_until=3, m=30)
        q = p.alphabet_size
        words = [tuple(rng.randrange(q) for _ in range(rng.randint(1, 10))) for _ in range(200)]
        assert zero_padding_check(p, words)


def test_bfact_values():
    assert float(bfact_value(25).hi) == pytest.approx(0.4998, abs=1e-4)
    assert bfact_value(25).hi < Fraction(1, 2)
    assert float(bfact_value(24).lo) == pytest.approx(0.5056, abs=1e-3)
    assert bfact_value(24).lo > Fraction(1, 2)
    assert bfact_value(25).width < Fraction(1, 10 ** 12)


def test_dense_count_bound():
    for k in range(1, 7):
        for n in range(1, 11):
            count, bound = dense_count_bound(k, n)
            assert count < bound.lo


def test_bddthm_verdicts():
    assert bddthm_certify(BoundedDensityParams.standard(25)).passed
    cert = bddthm_certify(BoundedDensityParams.standard(24))
    assert not cert.passed
    assert bddthm_certify(BoundedDensityParams.standard(25, signed=True)).passed


def test_heavy_threshold_none_when_flat():
    p = BoundedDensityParams.standard(25)
    assert heavy_threshold(p, 1) is None


# -- alpha-beta ----------------------------------------------------------------------------

def test_coding_examples():
    c = alpha_beta_coding(AlphaBetaParams(Fraction(1, 5), Fraction(8, 5)), 5)
    assert c.a == (0, 0, 1, 0, 0)
    assert c.orbit == [0, Fraction(1, 5), Fraction(13, 25), Fraction(4, 125), Fraction(157, 625)]
    assert alpha_beta_coding(AlphaBetaParams(0, Fraction(7, 3)), 8).a == (0,) * 8
    assert alpha_beta_coding(AlphaBetaParams(0, 2), 8).b == (1,) * 8


def test_coding_is_reproducible_at_higher_precision():
    from subshift_lab.certify import Interval, precision

    with precision(256):
        p = AlphaBetaParams(Interval.point(Fraction(1, 7)), Interval.point(Fraction(13, 6)))
        c = alpha_beta_coding(p, 20)
    e = alpha_beta_coding(AlphaBetaParams(Fraction(1, 7), Fraction(13, 6)), 20)
    assert c.a == e.a and c.b == e.b


def test_forbidden_examples():
    F = alpha_beta_forbidden((0,) * 6, (1, 0) * 3, 1, 6)
    assert set(F.words_upto()) == {(1, 1), (1, 0, 1, 1), (1, 0, 1, 0, 1, 1)}
    assert not alpha_beta_forbidden((0,) * 6, (1,) * 6, 1, 6).words_upto()
    assert not alpha_beta_forbidden((0,) * 6, (2,) * 6, 2, 6).words_upto()
    with pytest.raises(InsufficientDepth):
        alpha_beta_forbidden((0,) * 3, (1,) * 3, 1, 6)


def test_forbidden_counts_and_minimality():
    for a, b in ((Fraction(1, 5), Fraction(8, 5)), (Fraction(2, 7), Fraction(12, 5)), (Fraction(1, 3), Fraction(3))):
        params = AlphaBetaParams(a, b, 16)
        F = forbidden_from_params(params)
        ell = params.ell
        for n in range(1, 17):
            assert F.count(n) <= 2 * ell
        words = F.words_upto()
        for v in words:
            assert not any(v[:j] in set(words) for j in range(1, len(v)))


def test_lexicographic_window_consistency():
    params = AlphaBetaParams(Fraction(1, 5), Fraction(8, 5), 12)
    coding = alpha_beta_coding(params, 12)
    F = forbidden_from_params(params, 12)
    aut = build_automaton(F.alphabet, F)
    for w in enumerate_language(aut, 10):
        for s in range(len(w)):
            tail = w[s:]
            d = len(tail)
            assert lex_le(coding.a[:d], tail) and lex_le(tail, coding.b[:d])


def test_betaent():
    F = alpha_beta_forbidden((0,) * 5 + (1,), (1,) * 5 + (0,), 1, 6)
    aut = build_automaton(F.alphabet, F)
    rep = betaent_check((0,) * 5 + (1,), (1,) * 5 + (0,), 1, aut, n_max=12)
    assert rep.N == 5 and rep.bound == pytest.approx(0.6 * math.log(2))
    assert rep.consistent and rep.witness_ok
    F = alpha_beta_forbidden((0,) * 8, (1,) * 8, 1, 8)
    rep = betaent_check((0,) * 8, (1,) * 8, 1, build_automaton(F.alphabet, F), n_max=8)
    assert rep.consistent
    rep = betaent_check((0, 0, 1), (1, 1, 0), 1, build_automaton(F.alphabet, F), n_max=4)
    assert rep.vacuous and rep.bound == 0


def test_hardbeta():
    cert = hardbeta_search(1)
    N = dict(cert.extra)["least_N"]
    assert cert.passed
    assert not hardbeta_certificate(1, N - 1).passed
    assert not hardbeta_certificate(1, N // 2).passed
    assert not hardbeta_certificate(1, 0).passed
    assert hardbeta_certificate(1, 5, empty=True).passed


# -- non-supported example -------------------------------------------------------------------

def test_nonsupport_list():
    F = nonsupport_forbidden(4, 3)
    assert F.count(4) == 6 and len(F.words_upto()) == 6
    aut = build_automaton(F.alphabet, F)
    assert aut.accepts((0, 0, 0))
    F2 = nonsupport_forbidden(2, 2)
    assert set(F2.words_upto()) == {(0, 0, 1), (1, 0, 0)}


def test_nonsupport_trend():
    rep = nonsupport_example(4, 3, certify=False)
    assert rep.parry_nonincreasing
    assert rep.walters_decreasing
    assert all(v < 1e-12 for _, _, v in rep.parry_trend)
