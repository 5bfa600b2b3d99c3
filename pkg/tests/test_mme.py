import itertools
import math

import numpy as np
import pytest

from subshift_lab.core import count_table, enumerate_language, word
from subshift_lab.core.language import enumerate_array
from subshift_lab.errors import EmptySubshift
from subshift_lab.goodwords import HEAVY, HEAVY_PRIME, good_word_family
from subshift_lab.mme import (
    WaltersMeasure,
    build_transfer,
    gibbs_report,
    lcomb_empirical,
    measure_entropy,
    parry_measure,
    parry_of,
    perron,
    specbd_check,
    truncation_sweep,
    walters_empirical,
)

from conftest import sft

PHI = (1 + 5 ** 0.5) / 2


def test_transfer_golden(golden):
    _, aut = golden
    tr = build_transfer(aut)
    assert tr.matrix.shape == (2, 2)
    assert tr.matrix.sum() == 3
    assert tr.n_components == 1


def test_transfer_full_and_split():
    _, aut = sft(3, [])
    tr = build_transfer(aut)
    assert tr.matrix.tolist() == [[3.0]]
    _, aut = sft(2, ["10", "01"])
    tr = build_transfer(aut)
    assert tr.tie
    pd = perron(tr)
    assert pd.lam == pytest.approx(1.0, abs=1e-12)
    assert pd.h == pytest.approx(0.0, abs=1e-12)


def test_transfer_empty():
    _, aut = sft(2, ["0", "1"])
    with pytest.raises(EmptySubshift):
        build_transfer(aut)


def test_perron_golden_and_full(golden):
    _, aut = golden
    pd = perron(build_transfer(aut))
    assert pd.lam == pytest.approx(PHI, abs=1e-9)
    assert pd.lam_lo <= PHI + 1e-12 and PHI - 1e-12 <= pd.lam_hi
    assert pd.h == pytest.approx(0.4812118, abs=1e-7)
    _, aut = sft(3, [])
    assert perron(build_transfer(aut)).lam == 3.0


def test_parry_full_shift():
    F, _ = sft(2, [])
    _, _, _, mu = parry_of(F)
    for w in itertools.product((0, 1), repeat=4):
        assert mu(w) == pytest.approx(2 ** -4, abs=1e-15)


def test_parry_golden_values(golden):
    F, aut = golden
    _, _, pd, mu = parry_of(F)
    assert mu(word("11")) == 0.0
    # stationary chain: P(0->0) = 1/phi, P(0->1) = 1/phi^2, P(1->0) = 1
    p1 = 1 / (1 + PHI ** 2)
    assert mu(word("1")) == pytest.approx(p1, abs=1e-12)
    assert mu(word("01")) == pytest.approx(p1, abs=1e-12)
    assert mu(word("0")) == pytest.approx(1 - p1, abs=1e-12)
    assert mu(word("1")) == pytest.approx(walters_empirical(aut, 400, word("1")), abs=0.02)


def test_parry_additivity_and_normalization():
    F, aut = sft(3, ["00", "121", "2222"])
    _, _, _, mu = parry_of(F)
    for n in range(1, 9):
        words = enumerate_array(aut, n)
        assert mu.measure_array(words).sum() == pytest.approx(1.0, abs=1e-9)
    for w in enumerate_language(aut, 6):
        assert mu(w) == pytest.approx(sum(mu(w + (a,)) for a in range(3)), abs=1e-9)
        # shift invariance
        assert mu(w) == pytest.approx(sum(mu((a,) + w) for a in range(3)), abs=1e-9)


def test_walters_examples(golden):
    _, full = sft(2, [])
    for v in (word("0"), word("101")):
        assert WaltersMeasure(full, 12).exact(v) == 2 ** -len(v)
    _, aut = golden
    assert walters_empirical(aut, 20, word("1")) == pytest.approx(0.2764, abs=0.01)
    assert walters_empirical(aut, 20, word("11")) == 0.0


def test_walters_dp_matches_enumeration():
    _, aut = sft(3, ["00", "121"])
    for v in (word("1"), word("21"), word("102")):
        assert walters_empirical(aut, 9, v) == pytest.approx(walters_empirical(aut, 9, v, method="enum"),
                                                             abs=1e-14)


def test_gibbs_full_shift():
    F, aut = sft(2, [])
    _, _, pd, mu = parry_of(F)
    G = good_word_family(F, HEAVY_PRIME, aut, 8)
    rep = gibbs_report(mu, G, math.log(2), range(1, 9))
    assert rep.D == pytest.approx(1.0) and rep.D_prime == pytest.approx(1.0)


def test_gibbs_golden(golden):
    F, aut = golden
    _, _, pd, mu = parry_of(F)
    G = good_word_family(F, HEAVY_PRIME, aut, 14)
    rep = gibbs_report(mu, G, pd.h, range(1, 15))
    assert rep.consistent and not rep.flagged
    assert 0 < rep.D <= rep.D_prime
    lines = rep.to_csv().splitlines()
    assert lines[0] == "n,min_ratio_good,max_ratio_all,h_n" and len(lines) == 15


def test_gibbs_flags_uncharged_cylinder():
    from subshift_lab.families import nonsupport_forbidden

    F = nonsupport_forbidden(2, 2)
    aut, _, pd, mu = parry_of(F)
    rep = gibbs_report(mu, None, pd.h, range(1, 8), aut, track=[(0, 0)])
    assert any(w == (0, 0) for w, _ in rep.flagged)


def test_specbd(golden):
    F, aut = golden
    _, _, pd, mu = parry_of(F)
    n = 10
    L = enumerate_language(aut, n)
    G = good_word_family(F, HEAVY, aut, n).words(n)
    res = specbd_check(mu, n, [L, G, [L[3]]], pd.h, len(L))
    assert all(r.holds for r in res)
    assert specbd_check(mu, 2, [[word("11")]], pd.h, 3)[0].holds is None


def test_measure_entropy():
    F, _ = sft(2, [])
    _, _, _, mu = parry_of(F)
    seq = measure_entropy(mu, range(1, 7))
    assert all(r[1] == pytest.approx(math.log(2), abs=1e-12) for r in seq.rows)
    F, _ = sft(2, ["11"])
    _, _, pd, mu = parry_of(F)
    seq = measure_entropy(mu, range(1, 15))
    assert abs(seq.last - math.log(PHI)) < 1e-6
    assert mu.entropy_rate() == pytest.approx(math.log(PHI), abs=1e-9)
    assert not seq.violations
    F, _ = sft(2, ["1"])
    _, _, _, mu = parry_of(F)
    assert measure_entropy(mu, range(1, 5)).last == pytest.approx(0.0, abs=1e-15)


def test_truncation_sweep_nonincreasing():
    F, _ = sft(2, ["11", "1001", "100001", "10000001"])
    rows = truncation_sweep(F, [2, 4, 6, 8])
    assert all(r["nonincreasing"] for r in rows)


def test_lcomb_empirical(golden):
    _, aut = golden
    out = lcomb_empirical(count_table(aut, 30), PHI)
    assert out["threshold"] is not None
    assert all(r < 4 for n, r in out["ratios"] if n >= out["threshold"])
