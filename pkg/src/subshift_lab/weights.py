"""Miller's one-sided weight f_c and the two-sided weight g_c.

Weights are exact rationals computed over the forbidden words of length at
most the horizon.  Greedy constructions extend a word one letter (or one
letter pair) at a time while the weight stays below 1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .certify.certificate import Certificate, Check
from .certify.intervals import DEFAULT_PREC, Interval, precision
from .certify.series import SeriesSpec, eval_series
from .core.alphabet import Word
from .core.forbidden import ForbiddenList
from .errors import ExtensionStuck, MillerHypothesisFailed, PreconditionViolated, SeriesUnbounded

RIGHT_OVERLAP = "right-overlap"
LITERAL = "literal"


@dataclass(frozen=True, eq=False)
class WeightParams:
    c: Fraction
    forbidden: ForbiddenList
    horizon: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        if not 0 < self.c <= 1:
            raise ValueError("c must lie in (0, 1]")
        m = self.forbidden.horizon if self.horizon is None else self.horizon
        object.__setattr__(self, "horizon", m)
        object.__setattr__(self, "_words", tuple(self.forbidden.words_upto(m)))

    @property
    def words(self) -> tuple:
        return self._words  # type: ignore[attr-defined]

    @property
    def q(self) -> int:
        return self.forbidden.alphabet.size

    def mass(self) -> Fraction:
        """sum over listed words of c**|v|."""
        return sum((self.c ** len(v) for v in self.words), Fraction(0))

    def mass_interval(self) -> Interval:
        """The full series sum_n |F_n| c^n including the tail model beyond the horizon."""
        return eval_series(SeriesSpec(self.forbidden, p=0, base=self.c, d=1, m=self.horizon))


def f_weight(w, params: WeightParams) -> Fraction:
    w = tuple(w)
    c = params.c
    total = Fraction(0)
    for v in params.words:
        for L in range(1, min(len(v), len(w)) + 1):
            # r = v[L:], so w must end with v[:L]
            if w[len(w) - L:] == v[:L]:
                total += c ** (len(v) - L)
    return total


def _suffix_hits(w, params) -> int:
    return sum(1 for v in params.words if len(v) <= len(w) and w[len(w) - len(v):] == v)


def f_recursion_check(w, params: WeightParams) -> tuple:
    """(sum_a f(wa), (1/c)(sum_v c^|v| + f(w) - #{v in F : w ends with v})).

    The correction term vanishes whenever w has no forbidden suffix, which is
    the only case the nonemptiness argument uses.
    """
    w = tuple(w)
    lhs = sum((f_weight(w + (a,), params) for a in range(params.q)), Fraction(0))
    rhs = (params.mass() + f_weight(w, params) - _suffix_hits(w, params)) / params.c
    return lhs, rhs


def g_weight(w, params: WeightParams, reading: str = RIGHT_OVERLAP) -> Fraction:
    """Two-sided weight: left overlaps + right overlaps + 2 * strict containments.

    ``reading`` selects the interpretation of the second sum: right-boundary
    overlap ("wr ends with v", the default) or the literal "wr begins with v".
    The empty word has weight 0.
    """
    w = tuple(w)
    if not w:
        return Fraction(0)
    c = params.c
    q = params.q
    n = len(w)
    total = Fraction(0)
    for v in params.words:
        lv = len(v)
        # l w begins with v, |l| = lam < |v|
        for lam in range(max(0, lv - n), lv):
            if w[: lv - lam] == v[lam:]:
                total += c ** lam
        if reading == RIGHT_OVERLAP:
            for L in range(1, min(lv, n) + 1):
                if w[n - L:] == v[:L]:
                    total += c ** (lv - L)
        elif reading == LITERAL:
            if n >= lv:
                if w[:lv] == v:
                    total += sum(((q * c) ** rho for rho in range(lv)), Fraction(0))
            elif w == v[:n]:
                gap = lv - n
                total += sum((q ** (rho - gap) * c ** rho for rho in range(gap, lv)), Fraction(0))
        else:
            raise ValueError(f"unknown reading {reading!r}")
        # l w r = v with l, r nonempty
        if n <= lv - 2:
            for i in range(1, lv - n):
                if v[i:i + n] == w:
                    total += 2 * c ** (lv - n)
    return total


@dataclass
class ExtensionTrace:
    start: Word
    direction: str
    steps: list = field(default_factory=list)   # (letters tuple, weight Fraction)
    hypothesis_series: Fraction | None = None
    hypothesis_bound: Fraction | None = None
    hypothesis_holds: bool | None = None
    reading: str | None = None

    @property
    def word(self) -> Word:
        if self.direction == "right":
            return tuple(self.start) + tuple(s[0][0] for s in self.steps)
        left = tuple(s[0][0] for s in reversed(self.steps))
        right = tuple(s[0][1] for s in self.steps)
        return left + tuple(self.start) + right

    @property
    def appended(self) -> Word:
        return tuple(s[0][0] for s in self.steps) if self.direction == "right" else ()

    def to_dict(self) -> dict:
        out = {
            "start": list(self.start),
            "direction": self.direction,
            "steps": [
                ({"letter": letters[0]} if self.direction == "right"
                 else {"letters": list(letters)}) | {"weight_num": wt.numerator, "weight_den": wt.denominator}
                for letters, wt in self.steps
            ],
        }
        if self.hypothesis_series is not None:
            out["hypothesis"] = {"series": str(self.hypothesis_series), "bound": str(self.hypothesis_bound),
                                 "holds": self.hypothesis_holds}
        if self.reading:
            out["g_reading"] = self.reading
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _check_hypothesis(series: Interval, bound: Fraction, strict: bool, require: bool):
    holds = series.finite and (series.hi < bound if strict else series.hi <= bound)
    if require and not holds:
        raise MillerHypothesisFailed(series.hi if series.finite else float("inf"), bound)
    return holds


def extend_right_greedy(w, params: WeightParams, steps: int, require_hypothesis: bool = True) -> ExtensionTrace:
    """Append the least letter keeping f_c below 1, ``steps`` times."""
    w = tuple(w)
    try:
        series = params.mass_interval()
    except SeriesUnbounded:
        series = Interval(params.mass(), float("inf"))
    bound = params.q * params.c - 1
    holds = _check_hypothesis(series, bound, strict=False, require=require_hypothesis)
    if f_weight(w, params) >= 1:
        raise PreconditionViolated("starting word already has weight >= 1")
    trace = ExtensionTrace(w, "right", hypothesis_series=series.hi if series.finite else None,
                           hypothesis_bound=bound, hypothesis_holds=holds)
    cur = w
    for step in range(steps):
        for a in range(params.q):
            wt = f_weight(cur + (a,), params)
            if wt < 1:
                cur = cur + (a,)
                trace.steps.append(((a,), wt))
                break
        else:
            raise ExtensionStuck(f"no letter keeps the weight below 1 at step {step + 1}")
    return trace


def extend_two_sided(w, params: WeightParams, steps: int, require_hypothesis: bool = True,
                     reading: str = RIGHT_OVERLAP) -> ExtensionTrace:
    """Grow a_i ... a_1 w b_1 ... b_i choosing the least pair (a, b) with g_c < 1."""
    w = tuple(w)
    try:
        series = params.mass_interval()
    except SeriesUnbounded:
        series = Interval(params.mass(), float("inf"))
    bound = (params.q * params.c - 1) / 2
    holds = _check_hypothesis(series, bound, strict=True, require=require_hypothesis)
    for v in params.words:
        if len(v) <= len(w) and any(w[i:i + len(v)] == v for i in range(len(w) - len(v) + 1)):
            raise PreconditionViolated("starting word contains a forbidden word")
    if w and g_weight(w, params, reading) >= 1:
        raise PreconditionViolated("starting word already has weight >= 1")
    trace = ExtensionTrace(w, "two-sided", hypothesis_series=series.hi if series.finite else None,
                           hypothesis_bound=bound, hypothesis_holds=holds, reading=reading)
    cur = w
    for step in range(steps):
        for a in range(params.q):
            for b in range(params.q):
                wt = g_weight((a,) + cur + (b,), params, reading)
                if wt < 1:
                    break
            else:
                continue
            cur = (a,) + cur + (b,)
            trace.steps.append(((a, b), wt))
            break
        else:
            raise ExtensionStuck(f"no letter pair keeps the weight below 1 at step {step + 1}")
    return trace


def millerent_bound(forbidden: ForbiddenList, c, k: int, crosscheck_steps: int = 20,
                    precision_bits: int = DEFAULT_PREC) -> Certificate:
    """Certificate for h(X) >= ln k from sum_v c^|v| < c(|A| - k + 1) - 1."""
    c = Fraction(c)
    q = forbidden.alphabet.size
    if not 1 <= k < q:
        raise ValueError("need 1 <= k < |A|")
    with precision(precision_bits):
        checks = [Check.of("c > 1/|A|", Interval.point(Fraction(1, q)), Interval.point(c))]
        try:
            series = eval_series(SeriesSpec(forbidden, p=0, base=c, d=1))
            checks.append(Check.of("sum |F_n| c^n < c(|A| - k + 1) - 1", series,
                                   Interval.point(c * (q - k + 1) - 1)))
        except SeriesUnbounded as exc:
            checks.append(Check.missing("sum |F_n| c^n < c(|A| - k + 1) - 1", f"cannot bound series: {exc}"))
    # empirical: along the greedy path, at least k letters keep f below 1
    params = WeightParams(c, forbidden)
    cur: tuple = ()
    counts = []
    for _ in range(crosscheck_steps):
        good = [a for a in range(q) if f_weight(cur + (a,), params) < 1]
        counts.append(len(good))
        if not good:
            break
        cur = cur + (good[0],)
    extra = (("greedy_min_good_letters", min(counts) if counts else 0),
             ("greedy_steps", len(counts)),
             ("crosscheck_at_least_k", bool(counts) and min(counts) >= k))
    return Certificate("millerent", tuple(checks), (f"h(X) >= ln {k}",),
                       (("c", str(c)), ("k", str(k))), precision=precision_bits, extra=extra)


def best_millerent_k(forbidden: ForbiddenList, c_grid) -> tuple:
    """Largest k (with its c) for which the millerent certificate passes; (None, None, None) if none."""
    q = forbidden.alphabet.size
    best = (None, None, None)
    for c in c_grid:
        c = Fraction(c)
        for k in range(q - 1, 0, -1):
            if best[0] is not None and k <= best[0]:
                break
            cert = millerent_bound(forbidden, c, k, crosscheck_steps=0)
            if cert.passed:
                best = (k, c, cert)
                break
    return best
