"""Alpha-beta shifts: codings of x -> alpha + beta*x (mod 1) on [0, 1).

The symbol of x is floor(alpha + beta*x), so the digit intervals are
J_i = [(i - alpha)/beta, (i + 1 - alpha)/beta). The shift is cut out by the
lexicographic bounds a <= tail <= b, where a codes 0 and b is the left limit
of the coding at 1.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import iv

from ..certify.certificate import Certificate, Check
from ..certify.intervals import DEFAULT_PREC, Interval, LogValue, RInterval, as_fraction, precision
from ..certify.series import Profile, SeriesSpec, eval_series
from ..core.alphabet import Alphabet
from ..core.forbidden import ForbiddenList, TailModel
from ..errors import InsufficientDepth, PrecisionInsufficient


@dataclass(frozen=True)
class AlphaBetaParams:
    alpha: object
    beta: object
    depth: int = 64

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not isinstance(v, Interval):
                object.__setattr__(self, name, as_fraction(v))
        lo_a = self.alpha.lo if isinstance(self.alpha, Interval) else self.alpha
        lo_b = self.beta.lo if isinstance(self.beta, Interval) else self.beta
        if lo_a < 0 or lo_b <= 1:
            raise ValueError("need alpha >= 0 and beta > 1")
        if self.depth < 1:
            raise ValueError("coding depth must be positive")

    @property
    def exact(self) -> bool:
        return not isinstance(self.alpha, Interval) and not isinstance(self.beta, Interval)

    @property
    def ell(self) -> int:
        if self.exact:
            return math.ceil(self.alpha + self.beta) - 1
        s = Interval.from_iv(self.alpha_iv + self.beta_iv)
        lo, hi = math.ceil(s.lo) - 1, math.ceil(s.hi) - 1
        if lo != hi:
            raise PrecisionInsufficient("precision insufficient to determine the alphabet size")
        return lo

    @property
    def alpha_iv(self):
        return self.alpha.to_iv() if isinstance(self.alpha, Interval) else Interval.point(self.alpha).to_iv()

    @property
    def beta_iv(self):
        return self.beta.to_iv() if isinstance(self.beta, Interval) else Interval.point(self.beta).to_iv()


@dataclass
class AlphaBetaCoding:
    a: tuple
    b: tuple
    ell: int
    boundary_hits: list = field(default_factory=list)   # steps where the a-orbit hit an endpoint
    orbit: list = field(default_factory=list)           # a-orbit points (exact mode only)

    def __iter__(self):
        return iter((self.a, self.b))


def _coding_exact(alpha: Fraction, beta: Fraction, N: int, ell: int) -> AlphaBetaCoding:
    a, hits, orbit = [], [], []
    x = Fraction(0)
    for t in range(N):
        orbit.append(x)
        z = alpha + beta * x
        s = math.floor(z)
        if z == s and 0 < s <= ell:
            hits.append(t)
        a.append(s)
        x = z - s
    # left limit at 1: the orbit stays approached from below
    b = []
    y = Fraction(1)
    for _ in range(N):
        z = alpha + beta * y
        if z.denominator == 1:
            s = int(z) - 1
            y = Fraction(1)
        else:
            s = math.floor(z)
            y = z - s
        b.append(s)
    return AlphaBetaCoding(tuple(a), tuple(b), ell, hits, orbit)


def _coding_interval(params: AlphaBetaParams, N: int, ell: int) -> AlphaBetaCoding:
    A, Bt = params.alpha_iv, params.beta_iv
    a, b = [], []
    x = iv.mpf(0)
    for t in range(N):
        z = Interval.from_iv(A + Bt * x)
        s = math.floor(z.lo)
        if math.floor(z.hi) != s:
            raise PrecisionInsufficient(f"precision insufficient at step {t}")
        a.append(s)
        x = A + Bt * x - s
    y = iv.mpf(1)
    for t in range(N):
        z = Interval.from_iv(A + Bt * y)
        s = math.floor(z.lo)
        if math.floor(z.hi) != s or z.lo == s:
            raise PrecisionInsufficient(f"precision insufficient at step {t} of the limit orbit")
        b.append(s)
        y = A + Bt * y - s
    return AlphaBetaCoding(tuple(a), tuple(b), ell)


def alpha_beta_coding(params: AlphaBetaParams, N: int | None = None) -> AlphaBetaCoding:
    """First N symbols of the codings of 0 and of 1 from the left."""
    N = params.depth if N is None else N
    ell = params.ell
    if params.exact:
        return _coding_exact(params.alpha, params.beta, N, ell)
    return _coding_interval(params, N, ell)


def alpha_beta_forbidden(a_prefix, b_prefix, ell: int, max_len: int) -> ForbiddenList:
    """Words p x with p a prefix of a and x below a's next letter, or above b's."""
    a_prefix, b_prefix = tuple(a_prefix), tuple(b_prefix)
    if len(a_prefix) < max_len or len(b_prefix) < max_len:
        raise InsufficientDepth("insufficient coding depth: prefixes shorter than max_len")
    words = set()
    for n in range(1, max_len + 1):
        p = a_prefix[:n - 1]
        for x in range(a_prefix[n - 1]):
            words.add(p + (x,))
        p = b_prefix[:n - 1]
        for x in range(b_prefix[n - 1] + 1, ell + 1):
            words.add(p + (x,))
    return ForbiddenList(Alphabet(ell + 1), words=words, horizon=max_len, complete=False,
                         tail=TailModel(2 * ell, 1), label="alpha-beta")


def forbidden_from_params(params: AlphaBetaParams, max_len: int | None = None) -> ForbiddenList:
    max_len = params.depth if max_len is None else max_len
    coding = alpha_beta_coding(params, max(max_len, 1))
    return alpha_beta_forbidden(coding.a, coding.b, coding.ell, max_len)


def leading_run(a_prefix, b_prefix, ell: int) -> int:
    """Number of leading zeros of a, or of leading ells of b, whichever is smaller."""
    def run(seq, letter):
        n = 0
        for s in seq:
            if s != letter:
                break
            n += 1
        return n
    return min(run(a_prefix, 0), run(b_prefix, ell))


@dataclass
class BetaEntReport:
    N: int
    bound: float
    vacuous: bool
    measured: list            # (n, h_n)
    consistent: bool
    witness_checked: int
    witness_ok: bool

    def to_dict(self):
        return {"N": self.N, "bound": self.bound, "vacuous": self.vacuous, "consistent": self.consistent,
                "witness_checked": self.witness_checked, "witness_ok": self.witness_ok,
                "measured": [{"n": n, "h_n": h} for n, h in self.measured]}


def betaent_check(a_prefix, b_prefix, ell: int, automaton, n_max: int = 14,
                  samples: int = 200, seed: int = 0) -> BetaEntReport:
    """Compare ((N-2)/N) ln(ell+1) with the measured (1/n) ln |L~_n|.

    The bound comes from the words that put 0 at positions Ni and ell at Ni+1 and
    anything elsewhere; a random sample of them is run through the automaton.
    """
    from ..core.language import count_language

    N = leading_run(a_prefix, b_prefix, ell)
    depth = min(len(a_prefix), len(b_prefix))
    if N >= depth:
        N = depth          # no deviation seen within the coding depth
    vacuous = N < 3
    bound = 0.0 if vacuous else (N - 2) / N * math.log(ell + 1)
    measured = []
    for n in range(1, n_max + 1):
        c = count_language(automaton, n)
        measured.append((n, math.log(c) / n if c else float("-inf")))
    consistent = all(bound <= h + 1e-12 for _, h in measured)

    rng = random.Random(seed)
    ok, checked = True, 0
    if not vacuous:
        length = 3 * N
        for _ in range(samples):
            w = [rng.randrange(ell + 1) for _ in range(length)]
            for i in range(0, length, N):
                w[i] = 0
                if i + 1 < length:
                    w[i + 1] = ell
            checked += 1
            if not automaton.accepts(tuple(w)):
                ok = False
                break
    return BetaEntReport(N, bound, vacuous, measured, consistent, checked, ok)


# -- the uniform threshold N over all alpha-beta shifts with a long leading run --

def _hardbeta_checks(ell: int, N: int, empty: bool = False) -> list:
    q = ell + 1
    beta0 = LogValue(q, Fraction(1, 6))
    c = Fraction(2, 3)
    C = 0 if empty else 2 * ell
    prof = Profile(lambda n: C if n > N else 0, max(N, 0), False, TailModel(C, 1), "worst case")
    b = iv.exp(-beta0.interval().to_iv())        # e^{-beta0}
    eb = RInterval(Interval.from_iv(b))
    checks = []

    def series(name, p, base, d, bound, scale=1):
        spec = SeriesSpec(prof, p=p, base=base, d=d)
        val = eval_series(spec)
        if scale != 1:
            val = val.scale(scale)
        checks.append(Check.of(name, val, bound, "<"))

    one_minus_b = Interval.from_iv(1 - b)
    # entropy floor from the witness family, or the full shift when nothing is forbidden
    if empty:
        h = Interval.from_iv(iv.log(iv.mpf(q)))
        hnote = "full shift"
    else:
        h = Interval.from_iv(iv.log(iv.mpf(q)) * (N - 2) / N) if N >= 3 else Interval.point(0)
        hnote = "((N-2)/N) ln(ell+1)"
    two_h = Interval.from_iv(2 * h.to_iv() - iv.log(iv.mpf(q)))
    checks.append(Check.of("beta0 < 2h - ln|A|", beta0.interval(), two_h, "<", note=f"h >= {hnote}"))
    series("sum n|F_n|e^(-n beta0) < 1/36", 1, eb, 1, Interval.point(Fraction(1, 36)))
    checks.append(Check.of("c > 1/|A|", Interval.point(Fraction(1, q)), Interval.point(c), "<"))
    series("sum |F_n|c^n < (|A|c-1)/2", 0, c, 1, Interval.point((q * c - 1) / 2))
    series("sum n|F_n|c^(n/3) < 1/4", 1, c, 3, Interval.point(Fraction(1, 4)))
    series("sum n|F_n|c^(n/4) < 1/4", 1, c, 4, Interval.point(Fraction(1, 4)))
    checks.append(Check.of("beta0 < h", beta0.interval(), h, "<"))
    series("sum n^2|F_n|e^(-n beta0/3) < 1 - e^(-beta0)", 2, eb, 3, one_minus_b)
    series("sum n^2|F_n|e^(-n beta0/4) < 1 - e^(-beta0)", 2, eb, 4, one_minus_b)
    # product system: alphabet q^2, twice the counts, exponent alpha0 = beta0 + ln q
    a0 = Interval.from_iv(b / q)
    series("product: 2 sum n^2|F_n|e^(-n beta0/3) < 1 - e^(-beta0 - ln|A|)", 2, eb, 3,
           Interval.from_iv(1 - a0.to_iv()), scale=2)
    return checks


def hardbeta_certificate(ell: int, N: int, empty: bool = False,
                         precision_bits: int = DEFAULT_PREC, extra=()) -> Certificate:
    """All series for the worst-case profile |F_n| = 2 ell [n > N]."""
    with precision(precision_bits):
        checks = _hardbeta_checks(ell, N, empty)
    return Certificate(
        "hardbeta", tuple(checks),
        (f"unique measure of maximal entropy for every alpha-beta shift over {ell + 1} letters "
         f"whose codings start with {N} repeats",),
        (("ell", str(ell)), ("N", str(N)), ("profile", "empty" if empty else "2*ell*[n > N]"),
         ("beta0", f"(1/6)*ln({ell + 1})"), ("c", "2/3")),
        (), precision_bits, tuple(extra))


def hardbeta_search(ell: int, n_cap: int = 1 << 16, precision_bits: int = DEFAULT_PREC) -> Certificate:
    """Least N passing every check, by doubling then bisection."""
    hi = 1
    while not hardbeta_certificate(ell, hi, precision_bits=precision_bits).passed:
        hi *= 2
        if hi > n_cap:
            raise ValueError(f"no passing N up to {n_cap}")
    lo = hi // 2            # fails (or 0)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if hardbeta_certificate(ell, mid, precision_bits=precision_bits).passed:
            hi = mid
        else:
            lo = mid
    return hardbeta_certificate(
        ell, hi, precision_bits=precision_bits,
        extra=(("least_N", hi), ("fails_at", lo),
               ("note", "artifact of the proof constants beta0 = ln(ell+1)/6 and c = 2/3, not optimal")))
