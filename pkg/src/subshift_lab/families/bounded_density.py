"""Bounded density shifts over {0..k}: a word is forbidden when its letter sum
exceeds h(length). The signed variant uses letters -k..k and bounds |sum|.

Counting is exact by dynamic programming over partial sums. Concatenation of
good words is decided exactly with difference constraints on prefix sums, and
extendability is automatic because zero padding never raises a window sum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import iv

from ..certify.certificate import Certificate, Check
from ..certify.intervals import DEFAULT_PREC, Interval, RInterval, precision
from ..certify.series import Profile, SeriesSpec, eval_series
from ..core.alphabet import Alphabet
from ..core.forbidden import ForbiddenList, TailModel
from ..errors import InvalidH

DP_LIMIT = 5_000_000  # cap on n * (largest partial sum) per table


@dataclass(frozen=True)
class BoundedDensityParams:
    """k, an explicit table h(1..m), and an affine continuation beyond m."""

    k: int
    h_table: tuple
    signed: bool = False
    gradient: Fraction | None = None
    check_range: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "h_table", tuple(int(x) for x in self.h_table))
        if self.k < 1:
            raise ValueError("k must be positive")
        if not self.h_table:
            raise InvalidH("invalid h: empty table")
        if self.gradient is None:
            object.__setattr__(self, "gradient", Fraction(self.h_table[-1], len(self.h_table)))
        else:
            object.__setattr__(self, "gradient", Fraction(self.gradient))
        self.validate()

    @property
    def m(self) -> int:
        return len(self.h_table)

    def h(self, n: int) -> int:
        if n < 1:
            return 0
        m = self.m
        if n <= m:
            return self.h_table[n - 1]
        return self.h_table[-1] + math.ceil(self.gradient * (n - m))

    def validate(self):
        top = self.check_range or 2 * self.m
        hs = [self.h(n) for n in range(1, top + 1)]
        if hs[0] < 0:
            raise InvalidH("invalid h: negative value")
        for n in range(1, top):
            if hs[n] < hs[n - 1]:
                raise InvalidH(f"invalid h: decreases at n={n + 1}")
        for a in range(1, top):
            for b in range(a, top - a + 1):
                if hs[a + b - 1] > hs[a - 1] + hs[b - 1]:
                    raise InvalidH(f"invalid h: not subadditive at {a}+{b}")

    @property
    def alphabet_size(self) -> int:
        return 2 * self.k + 1 if self.signed else self.k + 1

    def value(self, letter: int) -> int:
        return letter - self.k if self.signed else letter

    def letter(self, value: int) -> int:
        return value + self.k if self.signed else value

    @classmethod
    def standard(cls, k: int, signed: bool = False, flat_until: int = 11, m: int = 40):
        """h(n) = nk for n < flat_until and (k-1)n afterwards."""
        table = [n * k if n < flat_until else (k - 1) * n for n in range(1, m + 1)]
        return cls(k, tuple(table), signed, gradient=Fraction(k - 1))


# -- exact counting ----------------------------------------------------------

def _sum_distribution(k: int, n: int, signed: bool) -> list:
    """Coefficients of (1 + x + ... + x^k)^n, or of the signed version shifted by nk."""
    width = 2 * k if signed else k
    if n * width > DP_LIMIT:
        raise ValueError(f"partial-sum table n*k = {n * width} too large; reduce n or k")
    dist = [1]
    for _ in range(n):
        new = [0] * (len(dist) + width)
        run = 0
        # sliding window sum gives each new coefficient in O(1)
        for s in range(len(new)):
            if s < len(dist):
                run += dist[s]
            if s - width - 1 >= 0:
                run -= dist[s - width - 1]
            new[s] = run
        dist = new
    return dist


@lru_cache(maxsize=4096)
def count_sum_above(k: int, n: int, threshold: int, signed: bool = False) -> int:
    """#words of length n with letter sum > threshold (signed: |sum| > threshold)."""
    if n < 1:
        return 0
    dist = _sum_distribution(k, n, signed)
    offset = n * k if signed else 0
    total = 0
    for idx, c in enumerate(dist):
        s = idx - offset
        if (abs(s) if signed else s) > threshold:
            total += c
    return total


def heavy_threshold(params: BoundedDensityParams, i: int, fraction=Fraction(1, 3)):
    """Least surplus a length-i word must exceed to sit inside a forbidden word of length <= i/fraction.

    A word u of length i is a subword of some forbidden word of length n exactly
    when its sum plus (n - i) * k exceeds h(n): padding with k's is the best
    completion. Returns None when no forbidden word of an admissible length exists.
    """
    k = params.k
    top = int(Fraction(i) / Fraction(fraction))
    best = None
    for n in range(i, top + 1):
        t = params.h(n) - (n - i) * k
        if best is None or t < best:
            best = t
    if best is None or best >= i * k:
        return None
    return best


@dataclass
class BoundedDensityCounts:
    F: list      # F[n-1] = |F_n|
    H: list      # H[n-1] = |H_n| for heavy subwords (fraction 1/3 by default)
    fraction: Fraction = Fraction(1, 3)

    def rows(self):
        for n, (f, h) in enumerate(zip(self.F, self.H), start=1):
            yield n, f, h


def bounded_density_counts(params: BoundedDensityParams, n: int,
                           fraction=Fraction(1, 3)) -> BoundedDensityCounts:
    F, H = [], []
    for length in range(1, n + 1):
        F.append(count_sum_above(params.k, length, params.h(length), params.signed))
        th = heavy_threshold(params, length, fraction)
        H.append(0 if th is None else count_sum_above(params.k, length, th, params.signed))
    return BoundedDensityCounts(F, H, Fraction(fraction))


def bounded_density_forbidden(params: BoundedDensityParams, horizon: int | None = None,
                              tail: TailModel | None = None) -> ForbiddenList:
    """Implicit forbidden list carrying the window-sum rule for exact concatenation checks."""
    rule = WindowSumRule(params)
    horizon = params.m if horizon is None else horizon
    return ForbiddenList(
        Alphabet(params.alphabet_size),
        predicate=rule.is_forbidden,
        counter=lambda n: count_sum_above(params.k, n, params.h(n), params.signed),
        horizon=horizon,
        complete=False,
        tail=tail,
        rule=rule,
        label=f"{'signed ' if params.signed else ''}bounded density k={params.k}",
    )


# -- exact concatenation check via difference constraints ----------------------

class WindowSumRule:
    def __init__(self, params: BoundedDensityParams):
        self.params = params

    def window_sum(self, w) -> int:
        return sum(self.params.value(a) for a in w)

    def is_forbidden(self, w) -> bool:
        s = self.window_sum(w)
        return (abs(s) if self.params.signed else s) > self.params.h(len(w))

    def admissible(self, w) -> bool:
        vals = [self.params.value(a) for a in w]
        pre = [0]
        for v in vals:
            pre.append(pre[-1] + v)
        n = len(vals)
        for i in range(n):
            for j in range(i + 1, n + 1):
                s = pre[j] - pre[i]
                if (abs(s) if self.params.signed else s) > self.params.h(j - i):
                    return False
        return True

    def is_good(self, w, fraction) -> bool:
        if not self.admissible(w):
            return False
        n = len(w)
        for i in range(1, n + 1):
            th = heavy_threshold(self.params, i, fraction)
            if th is None:
                continue
            for part in (w[:i], w[n - i:]):
                s = self.window_sum(part)
                if (abs(s) if self.params.signed else s) > th:
                    return False
        return True

    def _system(self, L: int, fraction):
        """Shortest-path closure of the prefix-sum constraints of good words of length L.

        dist[a][b] is the largest possible value of S_b - S_a; None if no good word exists.
        """
        p = self.params
        k = p.k
        big = float("inf")
        d = [[big] * (L + 1) for _ in range(L + 1)]
        for a in range(L + 1):
            d[a][a] = 0

        def tighten(a, b, c):
            if c < d[a][b]:
                d[a][b] = c

        for a in range(L):
            tighten(a, a + 1, k)
            tighten(a + 1, a, k if p.signed else 0)
        for a in range(L):
            for b in range(a + 1, L + 1):
                tighten(a, b, p.h(b - a))
                if p.signed:
                    tighten(b, a, p.h(b - a))
        for i in range(1, L + 1):
            th = heavy_threshold(p, i, fraction)
            if th is None:
                continue
            tighten(0, i, th)
            tighten(L - i, L, th)
            if p.signed:
                tighten(i, 0, th)
                tighten(L, L - i, th)
        for mid in range(L + 1):
            dm = d[mid]
            for a in range(L + 1):
                dam = d[a][mid]
                if dam == big:
                    continue
                da = d[a]
                for b in range(L + 1):
                    v = dam + dm[b]
                    if v < da[b]:
                        da[b] = v
        if any(d[a][a] < 0 for a in range(L + 1)):
            return None
        return d

    def _witness(self, d, source: int):
        """A good word whose prefix sums realize the largest S_b - S_source for all b."""
        L = len(d) - 1
        S = [d[source][b] for b in range(L + 1)]
        vals = [S[b + 1] - S[b] for b in range(L)]
        return tuple(self.params.letter(int(v)) for v in vals)

    def concat_failures(self, fraction, arity: int, max_len: int, max_failures: int = 50):
        """Length tuples whose good words can concatenate into a forbidden window.

        A pair (u, v) fails iff some window across the junction can be heavy:
        the largest suffix sum of u plus the largest prefix sum of v exceeds h.
        For triples a window may additionally span all of the middle word.
        Returns (failures, checked, total) where checked counts length tuples.
        """
        fraction = Fraction(fraction)
        systems = {L: self._system(L, fraction) for L in range(1, max_len + 1)}
        lengths = [L for L, s in systems.items() if s is not None]
        h = self.params.h
        failures, checked, total = [], 0, 0

        def record(kind, parts, window):
            nonlocal total
            total += 1
            if len(failures) < max_failures:
                failures.append({"lengths": [len(x) for x in parts], "words": [list(x) for x in parts],
                                 "window": window, "kind": kind})

        def pair_fail(L1, L2):
            d1, d2 = systems[L1], systems[L2]
            for i in range(1, L1 + 1):
                for j in range(1, L2 + 1):
                    if d1[L1 - i][L1] + d2[0][j] > h(i + j):
                        return i, j
            return None

        if arity == 2:
            for L1 in lengths:
                for L2 in lengths:
                    checked += 1
                    hit = pair_fail(L1, L2)
                    if hit:
                        i, j = hit
                        u = self._witness(systems[L1], L1 - i)
                        v = self._witness(systems[L2], 0)
                        record("pair", (u, v), [L1 - i, L1 + j])
            return failures, checked, total

        if arity != 3:
            raise ValueError("arity must be 2 or 3")
        bad_pairs = {(a, b) for a in lengths for b in lengths if pair_fail(a, b)}
        for L1 in lengths:
            for L2 in lengths:
                for L3 in lengths:
                    checked += 1
                    if (L1, L2) in bad_pairs or (L2, L3) in bad_pairs:
                        first = (L1, L2) in bad_pairs
                        a, b = (L1, L2) if first else (L2, L3)
                        i, j = pair_fail(a, b)
                        u = self._witness(systems[a], a - i)
                        v = self._witness(systems[b], 0)
                        if first:
                            parts = (u, v, self._witness(systems[L3], 0))
                        else:
                            parts = (self._witness(systems[L1], 0), u, v)
                        record("pair", parts, None)
                        continue
                    d1, d2, d3 = systems[L1], systems[L2], systems[L3]
                    mid = d2[0][L2]
                    hit = None
                    for i in range(1, L1 + 1):
                        for j in range(1, L3 + 1):
                            if d1[L1 - i][L1] + mid + d3[0][j] > h(i + L2 + j):
                                hit = (i, j)
                                break
                        if hit:
                            break
                    if hit:
                        i, j = hit
                        parts = (self._witness(d1, L1 - i), self._witness(d2, 0), self._witness(d3, 0))
                        record("triple", parts, [L1 - i, L1 + L2 + j])
        return failures, checked, total


def zero_padding_check(params: BoundedDensityParams, words, pads=range(0, 17)) -> bool:
    """0^t w 0^t stays admissible for every admissible w and every t in pads."""
    rule = WindowSumRule(params)
    zero = params.letter(0)
    for w in words:
        if not rule.admissible(w):
            continue
        for t in pads:
            if not rule.admissible((zero,) * t + tuple(w) + (zero,) * t):
                return False
    return True


# -- certificate -------------------------------------------------------------

def _B():
    return iv.mpf(1) / (9 * iv.e)


def bfact_value(k: int, signed: bool = False) -> Interval:
    """e(1+3kB)(k+1)/(k^2(1-B)^2), or e(1+3kB)(2k+1)/((2k-2)^2(1-B)^2) when signed."""
    B = _B()
    K = iv.mpf(k)
    if signed:
        val = iv.e * (1 + 3 * K * B) * (2 * K + 1) / ((2 * K - 2) ** 2 * (1 - B) ** 2)
    else:
        val = iv.e * (1 + 3 * K * B) * (K + 1) / (K ** 2 * (1 - B) ** 2)
    return Interval.from_iv(val)


def count_growth(k: int, heavy: bool = False) -> Interval:
    """Enclosure of e(1+kB), or e(1+3kB) for heavy-subword counts."""
    return Interval.from_iv(iv.e * (1 + (3 if heavy else 1) * k * _B()))


def dense_count_bound(k: int, n: int) -> tuple:
    """(#words of length n over {0..k} with sum > nk(1-B), enclosure of (e(1+kB))^n)."""
    B = _B()
    thr = Interval.from_iv(n * k * (1 - B))
    lo_floor, hi_floor = math.floor(thr.lo), math.floor(thr.hi)
    if lo_floor != hi_floor:
        raise ArithmeticError("threshold straddles an integer; raise precision")
    count = count_sum_above(k, n, lo_floor)
    bound = Interval.from_iv((iv.e * (1 + k * B)) ** n)
    return count, bound


def entropy_floor(k: int, signed: bool = False) -> Interval:
    """ln(1 + floor(k(1-B))): every word over {0..floor(k(1-B))} is admissible.

    In the signed case the letters -t..t with t = floor(k(1-B)) all survive.
    """
    top = math.floor(Interval.from_iv(k * (1 - _B())).lo)
    return Interval.from_iv(iv.log(iv.mpf(2 * top + 1 if signed else 1 + top)))


def bddthm_certify(params: BoundedDensityParams, horizon: int | None = None,
                   concat_len: int = 8, precision_bits: int = DEFAULT_PREC) -> Certificate:
    """Certify the hypotheses giving a unique, fully supported maximal measure."""
    with precision(precision_bits):
        return _bddthm(params, horizon, concat_len, precision_bits)


def _bddthm(params, horizon, concat_len, precision_bits):
    k, signed = params.k, params.signed
    m = horizon or params.m
    mult = 2 if signed else 1
    B = _B()
    Kv = iv.mpf(k)
    checks = []
    notes = []

    checks.append(Check.of("k > 9e", Interval.from_iv(9 * iv.e), Interval.point(k), "<"))
    flat = all(params.h(n) == n * k for n in range(1, 11))
    checks.append(Check.of("h(n) = nk for n < 11", Interval.point(0 if flat else 1), Interval.point(0), "<=",
                           note="checked on n = 1..10"))
    floor_ok = Interval.point(1)
    for n in range(11, m + 1):
        margin = Interval.from_iv(iv.mpf(params.h(n)) - n * Kv * (1 - B))
        if margin.hi <= 0:
            floor_ok = margin
            break
        floor_ok = margin if margin.lo < floor_ok.lo else floor_ok
    checks.append(Check.of("h(n) > nk(1-B) on materialized range", Interval.point(0), floor_ok, "<",
                           note=f"checked for 11 <= n <= {m}; assumed beyond via the affine rule"))

    ratio = bfact_value(k, signed)
    checks.append(Check.of("signed density factor < 1/2" if signed else "density factor < 1/2",
                           ratio, Interval.point(Fraction(1, 2)), "<"))

    counts = bounded_density_counts(params, m)
    growth = iv.e * (1 + Kv * B)
    worst, worst_ratio = None, -1.0
    for n, f in enumerate(counts.F, start=1):
        bound = Interval.from_iv(mult * growth ** n)
        if not (f < bound.lo):
            worst = (n, f, bound)
            break
        ratio_n = float(Fraction(f) / bound.lo)
        if ratio_n > worst_ratio:
            worst, worst_ratio = (n, f, bound), ratio_n
    n_w, f_w, b_w = worst
    checks.append(Check.of("|F_n| <= (e(1+kB))^n" + (" doubled" if signed else ""), Interval.point(f_w), b_w,
                           "<=", note=f"tightest at n = {n_w} of 1..{m}"))

    heavy_growth = iv.e * (1 + 3 * Kv * B)
    hw = None
    for n, hcount in enumerate(counts.H, start=1):
        bound = Interval.from_iv(mult * heavy_growth ** n)
        if not (hcount <= bound.lo):
            hw = (n, hcount, bound)
            break
    if hw is None:
        hw = (m, counts.H[-1], Interval.from_iv(mult * heavy_growth ** m))
    checks.append(Check.of("|H_n| <= (e(1+3kB))^n" + (" doubled" if signed else ""), Interval.point(hw[1]), hw[2],
                           "<=", note=f"checked on n = 1..{m}"))

    # uniqueness series with the actual counts and a rational tail model
    r_F = Interval.from_iv(growth).hi
    r_H = Interval.from_iv(heavy_growth).hi
    Fprof = Profile(lambda n: counts.F[n - 1], m, False, TailModel(mult, r_F), "F")
    Hprof = Profile(lambda n: counts.H[n - 1], m, False, TailModel(mult, r_H), "H")
    if signed:
        base_beta = (2 * Kv + 1) / ((2 * Kv - 2) ** 2 * (1 - B) ** 2)
        alpha_e = 1 / ((2 * Kv - 2) * (1 - B))
    else:
        base_beta = (Kv + 1) / (Kv ** 2 * (1 - B) ** 2)
        alpha_e = 1 / (Kv * (1 - B))
    ebeta = RInterval(Interval.from_iv(base_beta))
    ealpha = RInterval(Interval.from_iv(alpha_e))
    q = params.alphabet_size

    lcomb = eval_series(SeriesSpec(Fprof, p=1, base=ebeta))
    checks.append(Check.of("sum n|F_n|e^(-n beta) < 1/36", lcomb, Interval.point(Fraction(1, 36)), "<"))
    rho = Interval.from_iv(mult * heavy_growth * base_beta)
    y = rho.to_iv()
    geo = y ** 11 * (11 - 10 * y) / (1 - y) ** 2
    checks.append(Check.of("sum_{n>=11} n * factor^n < 1/36", Interval.from_iv(geo),
                           Interval.point(Fraction(1, 36)), "<"))

    h_floor = entropy_floor(k, signed)
    side = Interval.from_iv(iv.log(base_beta) * -1)
    rhs = Interval.from_iv(2 * h_floor.to_iv() - iv.log(iv.mpf(q)))
    checks.append(Check.of("beta < 2h - ln|A|", side, rhs, "<"))

    gm = eval_series(SeriesSpec(Hprof, p=0, base=ealpha))
    one_minus = Interval.from_iv(1 - alpha_e)
    checks.append(Check.of("sum |H_n|e^(-n alpha) < 1 - e^(-alpha)", gm, one_minus, "<"))
    alpha_side = Interval.from_iv(-iv.log(alpha_e))
    checks.append(Check.of("alpha < h", alpha_side, h_floor, "<"))
    prod_e = RInterval(Interval.from_iv(q * alpha_e ** 2))
    prod = eval_series(SeriesSpec(Hprof, p=0, base=prod_e)).scale(2)
    checks.append(Check.of("product: 2 sum |A|^n|H_n|e^(-2n alpha) < 1 - e^(-2 alpha)", prod,
                           Interval.from_iv(1 - alpha_e ** 2), "<"))

    rule = WindowSumRule(params)
    fails, checked, total = rule.concat_failures(Fraction(1, 3), 3, concat_len)
    checks.append(Check.of("good-word triples concatenate", Interval.point(total), Interval.point(0), "<=",
                           note=f"{checked} length triples up to {concat_len}, exact via prefix-sum constraints"))
    notes.append("extendability follows from zero padding: 0^t w 0^t is admissible whenever w is")

    conclusions = ["unique measure of maximal entropy, fully supported",
                   f"h(X) >= ln(1 + floor(k(1-B))) = {float(h_floor.lo):.6f}"]
    return Certificate(
        "bddthm",
        tuple(checks),
        tuple(conclusions),
        (("k", str(k)), ("signed", str(signed).lower()), ("horizon", str(m)),
         ("h_table", ",".join(map(str, params.h_table))), ("gradient", str(params.gradient)), ("B", "1/(9e)")),
        (),
        precision_bits,
        (("notes", notes), ("heavy_counts", "exact (sum above the inherited surplus threshold)"),
         ("entropy_floor", float(h_floor.lo))),
    )
