import json
import math
from fractions import Fraction

import mpmath
import pytest

from subshift_lab import Alphabet, ForbiddenList, TailModel
from subshift_lab.certify import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    THEOREMS,
    CertifyParams,
    Check,
    Interval,
    LogValue,
    Profile,
    SeriesSpec,
    certify_theorem,
    coded_generating_function,
    combine,
    eval_series,
    exp_neg,
    precision,
)
from subshift_lab.core import word
from subshift_lab.errors import SeriesUnbounded


def corollary_list(horizon=40):
    return ForbiddenList.from_profile(Alphabet(768), lambda n: 2 ** n if n >= 14 else 0, horizon,
                                      tail=TailModel(1, 2))


def corollary_exact():
    return 6 - sum(Fraction(n * n, 2 ** n) for n in range(1, 14))


def test_corollary_series_value():
    F = corollary_list()
    val = eval_series(SeriesSpec(F, p=2, base=Fraction(3, 768), d=4))
    exact = corollary_exact()
    assert val.lo <= exact <= val.hi
    assert val.width <= Fraction(1, 10 ** 9)
    assert float(exact) == pytest.approx(0.0277100, abs=1e-7)
    assert val.hi < Fraction(1, 36)


def test_empty_series_is_zero():
    val = eval_series(SeriesSpec(ForbiddenList.empty(Alphabet(3)), p=2, base=Fraction(1, 3), d=3))
    assert val.lo == val.hi == 0


def test_golden_series_with_exponential_base():
    F = ForbiddenList.explicit(Alphabet(2), [word("11")])
    val = eval_series(SeriesSpec(F, p=1, base=exp_neg(Fraction(1, 5)), d=1))
    with mpmath.workprec(300):
        ref = 2 * mpmath.exp(mpmath.mpf(-2) / 5)
        assert mpmath.mpf(val.lo.numerator) / val.lo.denominator <= ref
        assert ref <= mpmath.mpf(val.hi.numerator) / val.hi.denominator
    assert float(val.lo) == pytest.approx(1.3406, abs=1e-4)


def test_finite_rational_series_is_exact():
    F = ForbiddenList.explicit(Alphabet(2), [word("11"), word("101")])
    val = eval_series(SeriesSpec(F, p=1, base=Fraction(1, 2), d=1))
    assert val.lo == val.hi == Fraction(2, 4) + Fraction(3, 8)


def test_series_unbounded_without_tail():
    F = ForbiddenList.from_profile(Alphabet(4), [0, 1, 2], 3)
    with pytest.raises(SeriesUnbounded):
        eval_series(SeriesSpec(F, p=0, base=Fraction(1, 4)))


def test_interval_contains_higher_precision_value():
    F = corollary_list(30)
    spec = SeriesSpec(F, p=2, base=Fraction(3, 768), d=3)
    with precision(64):
        low = eval_series(spec)
    with precision(640):
        high = eval_series(spec)
    assert low.lo <= high.lo and high.hi <= low.hi


def test_verdict_combination():
    assert combine([PASS, PASS]) == PASS
    assert combine([PASS, INCONCLUSIVE]) == INCONCLUSIVE
    assert combine([INCONCLUSIVE, FAIL]) == FAIL
    touching = Check.of("x < y", Interval(Fraction(0), Fraction(2)), Interval(Fraction(1), Fraction(3)))
    assert touching.verdict == INCONCLUSIVE
    assert Check.missing("h", "lower bound").verdict == INCONCLUSIVE


def test_corollary_certificates():
    F = corollary_list()
    for tid in ("mainthm2", "gibbsthm", "entbound", "concat", "concat'", "Gmeascor", "G'meascor"):
        cert = certify_theorem(tid, F)
        assert cert.verdict == PASS, tid
    # profile-only list: heavy words cannot be listed, so these stay open
    assert certify_theorem("millerent", F).verdict == INCONCLUSIVE


def test_empty_list_passes_everything():
    F = ForbiddenList.empty(Alphabet(5))
    for tid in THEOREMS:
        assert certify_theorem(tid, F).verdict == PASS, tid


def test_golden_mean_fails_with_violation():
    F = ForbiddenList.explicit(Alphabet(2), [word("11")])
    cert = certify_theorem("mainthm2", F)
    assert cert.verdict == FAIL
    main = cert.checks[0]
    assert main.verdict == FAIL and main.first_violation is not None
    assert certify_theorem("gibbsthm", F).verdict == FAIL


def test_certificate_json_round_trip():
    cert = certify_theorem("gibbsthm", corollary_list())
    data = json.loads(cert.to_json())
    assert data["theorem"] == "gibbsthm" and data["verdict"] == PASS
    chk = data["checks"][0]
    assert Fraction(chk["lhs"]["hi"]) < Fraction(1, 36)


def test_monotone_in_counts():
    small = ForbiddenList.from_profile(Alphabet(768), lambda n: 2 ** n if n >= 16 else 0, 40,
                                       tail=TailModel(1, 2))
    big = ForbiddenList.from_profile(Alphabet(768), lambda n: 2 ** n if n >= 8 else 0, 40,
                                     tail=TailModel(1, 2))
    order = {FAIL: 0, INCONCLUSIVE: 1, PASS: 2}
    for tid in ("mainthm2", "gibbsthm", "concat", "entbound"):
        assert order[certify_theorem(tid, big).verdict] <= order[certify_theorem(tid, small).verdict]


def test_implications_between_theorems():
    for start in (10, 12, 14, 20):
        F = ForbiddenList.from_profile(Alphabet(768), lambda n, s=start: 2 ** n if n >= s else 0, 40,
                                       tail=TailModel(1, 2))
        if certify_theorem("mainthm2", F).passed:
            assert certify_theorem("entbound", F).passed
        if certify_theorem("gibbsthm", F).checks[0].verdict == PASS:
            assert certify_theorem("mainthm2", F).checks[0].verdict == PASS


def test_lcombbd_parameters():
    F = ForbiddenList.explicit(Alphabet(10), [word("00"), word("111")])
    cert = certify_theorem("Lcombbd", F, CertifyParams(beta=LogValue(Fraction(10, 3))))
    assert [c.verdict for c in cert.checks] == [PASS, FAIL]
    cert = certify_theorem("Lcombbd", F, CertifyParams(beta=Fraction(3)))
    assert [c.verdict for c in cert.checks] == [FAIL, PASS]
    F = ForbiddenList.explicit(Alphabet(100), [word("00"), word("111")])
    assert certify_theorem("Lcombbd", F).passed
    assert certify_theorem("Lcombbd", ForbiddenList.empty(Alphabet(10))).passed


def test_coded_generating_function():
    chk = coded_generating_function({2: 1, 3: 1, 4: 1}, LogValue(2))
    assert chk.lhs.contains(Fraction(15, 16))
    assert chk.verdict == PASS
    chk = coded_generating_function({}, Fraction(1))
    assert float(chk.lhs.lo) == pytest.approx(math.exp(-1), rel=1e-15)
    chk = coded_generating_function([2, 3, 4, 5], Fraction(3, 10))
    assert chk.verdict == FAIL


def test_unknown_theorem():
    with pytest.raises(ValueError):
        certify_theorem("nope", ForbiddenList.empty(Alphabet(2)))


def test_profile_helper():
    prof = Profile(lambda n: 1, 5, complete=True)
    assert prof.count(5) == 1 and prof.count(6) == 0
