"""Certificates for the quantitative hypotheses of the uniqueness, Gibbs and
concatenation results.

Default parameters: beta = ln(|A|/3), c = 3/|A|, alpha = ln(3|A|/5).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..core.language import LowerBound
from .certificate import FAIL, PASS, Certificate, Check
from .intervals import (
    DEFAULT_PREC,
    Interval,
    LogValue,
    RPow,
    as_fraction,
    describe_param,
    exp_neg,
    log_compare,
    param_interval,
    precision,
)
from .series import Profile, SeriesSpec, eval_series, first_crossing

THEOREMS = ("entbound", "millerent", "Lcombbd", "2miller", "concat", "concat'",
            "Gmeasbd", "G'measbd", "Gmeascor", "G'meascor", "mainthm2", "gibbsthm")
ALIASES = {"concat′": "concat'", "G′meascor": "G'meascor", "G′measbd": "G'measbd"}


@dataclass(frozen=True)
class CertifyParams:
    beta: object = None        # LogValue or rational (natural-log units)
    alpha: object = None
    c: Fraction | None = None
    k: int | None = None
    h_lower: LowerBound | None = None
    precision: int = DEFAULT_PREC


def _q(forbidden) -> int:
    return forbidden.alphabet.size


def series_check(name, forbidden, p, base, d, bound: Interval, relation="<", scale=1) -> Check:
    spec = SeriesSpec(forbidden, p=p, base=base, d=d)
    from ..errors import SeriesUnbounded
    try:
        value = eval_series(spec)
    except SeriesUnbounded as exc:
        return Check.missing(name, str(exc))
    if scale != 1:
        value = value.scale(scale)
    crossing = None
    if scale == 1:
        crossing = first_crossing(spec, bound)
    return Check.of(name, value, bound, relation, first_violation=crossing)


def _entropy_floor(forbidden, params: CertifyParams):
    """Best available (interval, strict, source) lower bound on h(X), or None."""
    if params.h_lower is not None:
        lb = params.h_lower
        val = lb.exact if lb.exact is not None else Fraction(lb.value)
        return (val if isinstance(val, LogValue) else param_interval(val)), lb.strict, lb.source
    ent = certify_entbound(forbidden, params)
    if ent.passed:
        q = _q(forbidden)
        return LogValue(Fraction(3 * q, 5)), True, "entbound"
    return None


def _side_condition(name, lhs, floor, what: str) -> Check:
    if floor is None:
        return Check.missing(name, f"certified entropy lower bound ({what})")
    value, strict, source = floor
    rel = "<=" if strict else "<"
    note = f"entropy lower bound from {source}"
    if isinstance(lhs, LogValue) and isinstance(value, LogValue):
        # both sides are logarithms of rationals: decide exactly
        sign = log_compare(lhs, value)
        ok = sign < 0 or (sign == 0 and strict)
        return Check(name, lhs.interval(), value.interval(), rel, PASS if ok else FAIL,
                     note + "; compared exactly")
    return Check.of(name, param_interval(lhs), param_interval(value), rel, note=note)


def certify_entbound(forbidden, params: CertifyParams = CertifyParams()) -> Certificate:
    q = _q(forbidden)
    chk = series_check("sum |F_n| (3/|A|)^n < 1/5", forbidden, 0, Fraction(3, q), 1,
                       Interval.point(Fraction(1, 5)))
    return Certificate("entbound", (chk,), (f"h(X) > ln(3|A|/5) = ln({Fraction(3 * q, 5)})",),
                       (("alphabet_size", str(q)),), precision=params.precision)


def certify_millerent(forbidden, params: CertifyParams) -> Certificate:
    from ..weights import millerent_bound

    c = params.c if params.c is not None else Fraction(3, _q(forbidden))
    k = params.k if params.k is not None else 1
    return millerent_bound(forbidden, c, k, precision_bits=params.precision)


def certify_lcombbd(forbidden, params: CertifyParams) -> Certificate:
    q = _q(forbidden)
    beta = params.beta if params.beta is not None else LogValue(Fraction(q, 3))
    floor = _entropy_floor(forbidden, params)
    checks = []
    if floor is None:
        checks.append(Check.missing("beta < 2h(X) - ln|A|", "certified entropy lower bound"))
    else:
        value, strict, source = floor
        rhs = param_interval(value).scale(2) - LogValue(q).interval()
        checks.append(Check.of("beta < 2h(X) - ln|A|", param_interval(beta), rhs,
                               "<=" if strict else "<", note=f"entropy lower bound from {source}"))
    checks.append(series_check("sum n|F_n| e^(-n beta) < 1/36", forbidden, 1, exp_neg(beta), 1,
                               Interval.point(Fraction(1, 36))))
    return Certificate("Lcombbd", tuple(checks),
                       ("|L_n(X)| < 4 e^(n h(X)) for all sufficiently large n",),
                       (("beta", describe_param(beta)),), precision=params.precision)


def _concat_checks(forbidden, c: Fraction, d: int) -> list:
    q = _q(forbidden)
    c = as_fraction(c)
    checks = [Check.of("c > 1/|A|", Interval.point(Fraction(1, q)), Interval.point(c))]
    checks.append(series_check("sum |F_n| c^n < (|A|c - 1)/2", forbidden, 0, c, 1,
                               Interval.point((q * c - 1) / 2)))
    if d:
        checks.append(series_check(f"sum n|F_n| c^(n/{d}) < 1/4", forbidden, 1, c, d,
                                   Interval.point(Fraction(1, 4))))
    return checks


def certify_2miller(forbidden, params: CertifyParams) -> Certificate:
    c = params.c if params.c is not None else Fraction(3, _q(forbidden))
    return Certificate("2miller", tuple(_concat_checks(forbidden, c, 0)),
                       ("every admissible w with g_c(w) < 1 is in L(X)",),
                       (("c", str(as_fraction(c))),), precision=params.precision)


def certify_concat(forbidden, params: CertifyParams, prime: bool = False) -> Certificate:
    c = params.c if params.c is not None else Fraction(3, _q(forbidden))
    d = 4 if prime else 3
    concl = ("u, v, w in G' implies uvw in L(X)",) if prime else ("v, w in G implies vw in L(X)",)
    return Certificate("concat'" if prime else "concat", tuple(_concat_checks(forbidden, c, d)),
                       concl, (("c", str(as_fraction(c))),), precision=params.precision)


def certify_gmeascor(forbidden, params: CertifyParams, prime: bool = False) -> Certificate:
    q = _q(forbidden)
    alpha = params.alpha if params.alpha is not None else LogValue(Fraction(3 * q, 5))
    d = 4 if prime else 3
    floor = _entropy_floor(forbidden, params)
    checks = [_side_condition("alpha < h(X)", alpha, floor, "alpha < h(X)")]
    bound = Interval.point(1) - exp_neg(alpha).value()
    checks.append(series_check(f"sum n^2|F_n| e^(-(n/{d}) alpha) < 1 - e^(-alpha)", forbidden, 2,
                               exp_neg(alpha), d, bound))
    which = "G'" if prime else "G"
    return Certificate("G'meascor" if prime else "Gmeascor", tuple(checks),
                       (f"mu({which}_n) > eps along a syndetic set for every ergodic MME",),
                       (("alpha", describe_param(alpha)),), precision=params.precision)


def heavy_profile(forbidden, fraction: Fraction):
    """Heavy-subword counts as a Profile: exact when the words exist, else an upper bound."""
    from ..goodwords import heavy_subwords

    if getattr(forbidden, "kind", None) == "profile":
        return heavy_bound_profile(forbidden, fraction)
    hs = heavy_subwords(forbidden, fraction)
    return Profile(hs.count, hs.horizon, hs.complete, None, f"heavy({fraction})")


def heavy_bound_profile(forbidden, fraction: Fraction) -> Profile:
    """|H_i| <= sum_{n=i}^{floor(i/fraction)} (n-i+1)|F_n|, usable when F is profile-only."""
    inv = 1 / Fraction(fraction)

    def count(i):
        top = min(int(i * inv), forbidden.horizon)
        return sum((n - i + 1) * forbidden.count(n) for n in range(i, top + 1))

    return Profile(count, forbidden.horizon, forbidden.complete, None, f"heavy-bound({fraction})")


def certify_gmeasbd(forbidden, params: CertifyParams, prime: bool = False) -> Certificate:
    q = _q(forbidden)
    frac = Fraction(1, 4) if prime else Fraction(1, 3)
    alpha = params.alpha if params.alpha is not None else LogValue(Fraction(3 * q, 5))
    floor = _entropy_floor(forbidden, params)
    checks = [_side_condition("alpha < h(X)", alpha, floor, "alpha < h(X)")]
    prof = heavy_profile(forbidden, frac)
    bound = Interval.point(1) - exp_neg(alpha).value()
    checks.append(series_check("sum |H_n| e^(-n alpha) < 1 - e^(-alpha)", prof, 0, exp_neg(alpha),
                               1, bound))
    return Certificate("G'measbd" if prime else "Gmeasbd", tuple(checks),
                       ("mu(G_n) > eps along a syndetic set for every ergodic MME",),
                       (("alpha", describe_param(alpha)), ("heavy_fraction", str(frac))),
                       precision=params.precision)


def _product_check(forbidden, main_value: Interval) -> list:
    """K-property ingredient on X x X: 2 * (main series) < 1 - 3/|A|^2, plus the
    direct heavy-count form when the list can be materialized."""
    q = _q(forbidden)
    rhs = Interval.point(1 - Fraction(3, q * q))
    checks = [Check.of("product: 2 sum n^2|F_n|(3/|A|)^(n/3) < 1 - 3/|A|^2",
                       main_value.scale(2), rhs)]
    if getattr(forbidden, "kind", "profile") == "explicit":
        prof = heavy_profile(forbidden, Fraction(1, 3))
        checks.append(series_check("product: sum |H2_n| (3/|A|^2)^n <= 2 sum |H_n| (3/|A|)^n "
                                   "< 1 - 3/|A|^2", prof, 0, Fraction(3, q), 1, rhs, scale=2))
    return checks


def certify_mainthm2(forbidden, params: CertifyParams) -> Certificate:
    q = _q(forbidden)
    base = Fraction(3, q)
    main = series_check("sum n^2|F_n|(3/|A|)^(n/3) < 1/36", forbidden, 2, base, 3,
                        Interval.point(Fraction(1, 36)))
    checks = [main]
    if main.lhs is not None:
        checks += _product_check(forbidden, main.lhs)
    defaults = CertifyParams(precision=params.precision, h_lower=params.h_lower)
    subs = (certify_entbound(forbidden, defaults), certify_lcombbd(forbidden, defaults),
            certify_concat(forbidden, defaults), certify_gmeascor(forbidden, defaults))
    return Certificate("mainthm2", tuple(checks),
                       ("X has a unique MME", "the unique MME has the K-property"),
                       (("alphabet_size", str(q)), ("beta", f"ln({Fraction(q, 3)})"),
                        ("c", str(base)), ("alpha", f"ln({Fraction(3 * q, 5)})")),
                       subcertificates=subs, precision=params.precision)


def certify_gibbsthm(forbidden, params: CertifyParams) -> Certificate:
    q = _q(forbidden)
    base = Fraction(3, q)
    main = series_check("sum n^2|F_n|(3/|A|)^(n/4) < 1/36", forbidden, 2, base, 4,
                        Interval.point(Fraction(1, 36)))
    defaults = CertifyParams(precision=params.precision, h_lower=params.h_lower)
    subs = (certify_mainthm2(forbidden, defaults), certify_concat(forbidden, defaults, prime=True),
            certify_gmeascor(forbidden, defaults, prime=True))
    return Certificate("gibbsthm", (main,),
                       ("mu(G'_n) > eps along a syndetic set",
                        "D e^(-|w|h) <= mu([w]) <= D' e^(-|w|h) for all w in G'"),
                       (("alphabet_size", str(q)),), subcertificates=subs,
                       precision=params.precision)


_DISPATCH = {
    "entbound": certify_entbound,
    "millerent": certify_millerent,
    "Lcombbd": certify_lcombbd,
    "2miller": certify_2miller,
    "concat": certify_concat,
    "concat'": lambda f, p: certify_concat(f, p, prime=True),
    "Gmeascor": certify_gmeascor,
    "G'meascor": lambda f, p: certify_gmeascor(f, p, prime=True),
    "Gmeasbd": certify_gmeasbd,
    "G'measbd": lambda f, p: certify_gmeasbd(f, p, prime=True),
    "mainthm2": certify_mainthm2,
    "gibbsthm": certify_gibbsthm,
}


def certify_theorem(theorem_id: str, forbidden, params: CertifyParams | None = None) -> Certificate:
    tid = ALIASES.get(theorem_id, theorem_id)
    if tid not in _DISPATCH:
        raise ValueError(f"unknown theorem id {theorem_id!r}; choose from {', '.join(THEOREMS)}")
    params = params or CertifyParams()
    from ..errors import HorizonUnsupported
    with precision(params.precision):
        try:
            return _DISPATCH[tid](forbidden, params)
        except HorizonUnsupported as exc:
            return Certificate(tid, (Check.missing("materialized forbidden words", str(exc)),), (),
                               precision=params.precision)


def grid_search(theorem_id: str, forbidden, field_name: str, values, base: CertifyParams | None = None):
    """Try each parameter value; return (best value, certificate) by largest worst-case margin."""
    from dataclasses import replace

    base = base or CertifyParams()
    best = None
    for v in values:
        cert = certify_theorem(theorem_id, forbidden, replace(base, **{field_name: v}))
        margins = [c.margin for c in cert.checks if c.margin is not None]
        score = (cert.verdict == PASS, min(margins) if margins else Fraction(-10 ** 9))
        if best is None or score > best[0]:
            best = (score, v, cert)
    return (best[1], best[2]) if best else (None, None)


def coded_generating_function(code_lengths, alpha, precision_bits: int = DEFAULT_PREC) -> Check:
    """e^(-alpha) + sum_n |H_n| e^(-n alpha), compared against 1.

    ``code_lengths`` is a mapping n -> count or an iterable of word lengths.
    """
    if isinstance(code_lengths, dict):
        counts = {int(n): int(c) for n, c in code_lengths.items()}
    else:
        counts = {}
        for n in code_lengths:
            counts[int(n)] = counts.get(int(n), 0) + 1
    with precision(precision_bits):
        x = exp_neg(alpha)
        total = x.value()
        for n, c in sorted(counts.items()):
            if c:
                term = x.pow(n)
                total = total + term.value().scale(c)
        return Check.of("f_C(alpha) < 1", total, Interval.point(1))


__all__ = ["CertifyParams", "certify_theorem", "coded_generating_function", "grid_search",
           "THEOREMS", "series_check", "RPow"]
