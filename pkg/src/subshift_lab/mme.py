"""Measures of maximal entropy for SFT truncations.

The transfer graph is the avoidance automaton with its dead state removed.
Its component of largest spectral radius carries the Parry measure, which is
checked against the Walters empirical measures built from occurrence counts in
L~_N.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import kernels
from .core.automaton import AvoidanceAutomaton, build_automaton
from .core.language import (
    ENUMERATION_LIMIT,
    backward_counts,
    count_language,
    enumerate_array,
    forward_counts,
)
from .errors import ConvergenceError, EmptySubshift, ReducibleInput

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10 ** 6


# -- transfer graph ----------------------------------------------------------

@dataclass
class TransferSystem:
    automaton: AvoidanceAutomaton
    matrix: np.ndarray              # (n_live, n_live) edge multiplicities
    labels: np.ndarray              # strongly connected component of each live state
    order: list                     # component ids in topological order of the condensation
    radii: dict                     # component id -> spectral radius estimate
    chosen: int
    tie: bool
    cyclic: dict = field(default_factory=dict)

    @property
    def component(self) -> np.ndarray:
        return np.flatnonzero(self.labels == self.chosen)

    def submatrix(self, comp=None) -> np.ndarray:
        idx = self.component if comp is None else np.flatnonzero(self.labels == comp)
        return self.matrix[np.ix_(idx, idx)]

    @property
    def n_components(self) -> int:
        return len(self.order)

    def summary(self) -> dict:
        return {"live_states": int(self.matrix.shape[0]), "components": self.n_components,
                "chosen_states": [int(i) for i in self.component], "spectral_radius": self.radii[self.chosen],
                "tie": self.tie}


def _topological_components(matrix: np.ndarray, labels: np.ndarray, n_comp: int) -> list:
    succ = {c: set() for c in range(n_comp)}
    indeg = [0] * n_comp
    rows, cols = np.nonzero(matrix)
    for i, j in zip(rows.tolist(), cols.tolist()):
        a, b = int(labels[i]), int(labels[j])
        if a != b and b not in succ[a]:
            succ[a].add(b)
            indeg[b] += 1
    ready = sorted(c for c in range(n_comp) if indeg[c] == 0)
    order = []
    while ready:
        c = ready.pop(0)
        order.append(c)
        for d in sorted(succ[c]):
            indeg[d] -= 1
            if indeg[d] == 0:
                ready.append(d)
        ready.sort()
    return order


def build_transfer(aut: AvoidanceAutomaton, check_n: int = 6) -> TransferSystem:
    n = aut.n_live
    M = np.zeros((n, n), dtype=float)
    for s in range(n):
        for _, t in aut.edges(s):
            M[s, t] += 1
    if n == 0 or not M.any():
        raise EmptySubshift("empty subshift: every word is eventually forbidden")
    n_comp, labels = connected_components(csr_matrix(M), directed=True, connection="strong")
    order = _topological_components(M, labels, n_comp)
    radii, cyclic = {}, {}
    for c in range(n_comp):
        idx = np.flatnonzero(labels == c)
        sub = M[np.ix_(idx, idx)]
        cyclic[c] = bool(sub.any())
        radii[c] = float(max(abs(np.linalg.eigvals(sub)))) if cyclic[c] else 0.0
    if not any(cyclic.values()):
        raise EmptySubshift("empty subshift: the transfer graph has no cycle")
    best = max(radii.values())
    tied = [c for c in order if cyclic[c] and abs(radii[c] - best) <= 1e-9 * max(1.0, best)]
    chosen = tied[0]

    # walks from the root of length n are exactly the words of L~_n
    walks = np.zeros(n)
    walks[aut.root] = 1
    for _ in range(check_n):
        walks = walks @ M
    if round(walks.sum()) != count_language(aut, check_n):
        raise AssertionError("walk count disagrees with the language count")
    return TransferSystem(aut, M, labels, order, radii, chosen, len(tied) > 1, cyclic)


# -- Perron eigendata ---------------------------------------------------------

@dataclass
class PerronData:
    lam: float
    lam_lo: float                   # Collatz-Wielandt bracket
    lam_hi: float
    right: np.ndarray               # on the chosen component, sums to 1
    left: np.ndarray                # scaled so that left . right = 1
    states: np.ndarray              # live-state indices of the component
    residual: float
    iterations: int

    @property
    def h(self) -> float:
        return math.log(self.lam) if self.lam > 0 else float("-inf")

    @property
    def h_error(self) -> float:
        if self.lam_lo <= 0:
            return float("inf")
        return math.log(self.lam_hi) - math.log(self.lam_lo)

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "lambda_lo": self.lam_lo, "lambda_hi": self.lam_hi, "h": self.h,
                "h_error": self.h_error, "residual": self.residual, "iterations": self.iterations}


def _power(B: np.ndarray, A: np.ndarray, tol: float, max_iter: int):
    k = B.shape[0]
    v = np.ones(k) / k
    lam = 0.0
    for it in range(1, max_iter + 1):
        w = B @ v
        v = w / w.sum()
        Av = A @ v
        lam = float(Av.sum() / v.sum())
        res = float(np.max(np.abs(Av - lam * v)) / np.max(np.abs(v)))
        if res <= tol * max(1.0, lam):
            return v, lam, res, it
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps; "
                           "increase iterations or handle periodicity")


def perron(transfer: TransferSystem, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> PerronData:
    """Power iteration on M + I over the chosen component (M + I is aperiodic)."""
    A = transfer.submatrix()
    B = A + np.eye(A.shape[0])
    r, lam, res, it = _power(B, A, tol, max_iter)
    l, _, _, it2 = _power(B.T, A.T, tol, max_iter)
    ratios = (A @ r) / r
    lam_lo, lam_hi = float(ratios.min()), float(ratios.max())
    r = r / r.sum()
    l = l / float(l @ r)
    return PerronData(lam, lam_lo, lam_hi, r, l, transfer.component, res, max(it, it2))


# -- cylinder measures --------------------------------------------------------

class CylinderMeasure:
    """w -> mu([w]); subclasses supply the evaluator."""

    kind = "abstract"

    def __init__(self, automaton: AvoidanceAutomaton, horizon: int, N: int | None = None):
        self.automaton = automaton
        self.horizon = horizon
        self.N = N

    def __call__(self, w) -> float:
        raise NotImplementedError

    def measure_array(self, words: np.ndarray) -> np.ndarray:
        return np.array([self(tuple(row)) for row in words.tolist()], dtype=float)

    def metadata(self) -> dict:
        return {"kind": self.kind, "horizon": self.horizon, "N": self.N}


class ParryMeasure(CylinderMeasure):
    kind = "Parry"

    def __init__(self, perron_data: PerronData, transfer: TransferSystem):
        aut = transfer.automaton
        super().__init__(aut, aut.horizon)
        self.perron = perron_data
        n_states = aut.n_states
        q = aut.alphabet.size
        pi = np.zeros(n_states)
        rfull = np.zeros(n_states)
        idx = perron_data.states
        rfull[idx] = perron_data.right
        pi[idx] = perron_data.left * perron_data.right
        if np.any(perron_data.right <= 0) or np.any(perron_data.left <= 0):
            raise ReducibleInput("choose component first: eigenvectors are not positive")
        self.pi = pi / pi.sum()
        P = np.zeros((n_states, q))
        in_comp = np.zeros(n_states, dtype=bool)
        in_comp[idx] = True
        lam = perron_data.lam
        for s in idx.tolist():
            for a in range(q):
                t = int(aut.trans[s, a])
                if t != aut.dead and in_comp[t]:
                    P[s, a] = rfull[t] / (lam * rfull[s])
        self.P = P
        self.trans = aut.trans

    def __call__(self, w) -> float:
        w = tuple(w)
        if not w:
            return 1.0
        return float(self.measure_array(np.asarray([w], dtype=np.int64))[0])

    def measure_array(self, words: np.ndarray) -> np.ndarray:
        words = np.asarray(words, dtype=np.int64)
        if words.ndim != 2:
            raise ValueError("expected a 2-d word array")
        W, n = words.shape
        starts = np.flatnonzero(self.pi > 0)
        prob = np.tile(self.pi[starts], (W, 1))
        cur = np.tile(starts, (W, 1))
        for j in range(n):
            a = words[:, j][:, None]
            prob = prob * self.P[cur, a]
            cur = self.trans[cur, a]
        return prob.sum(axis=1)

    def entropy_rate(self) -> float:
        """-sum_s pi_s sum_a P(s,a) ln P(s,a), the entropy of the Markov chain."""
        P = self.P
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(P > 0, P * np.log(np.where(P > 0, P, 1)), 0.0)
        return float(-(self.pi[:, None] * terms).sum())


def parry_measure(perron_data: PerronData, transfer: TransferSystem) -> ParryMeasure:
    return ParryMeasure(perron_data, transfer)


def parry_of(forbidden, horizon: int | None = None, tol: float = DEFAULT_TOL):
    """Convenience: automaton, transfer system, Perron data and Parry measure in one go."""
    aut = build_automaton(forbidden.alphabet, forbidden, horizon)
    tr = build_transfer(aut)
    pd = perron(tr, tol)
    return aut, tr, pd, parry_measure(pd, tr)


class WaltersMeasure(CylinderMeasure):
    """nu_N([v]): the average frequency of v over positions of words in L~_N.

    Counted exactly through forward and backward state counts, so L~_N never
    has to be listed. Boundary positions bias the estimate by O(|v|/N).
    """

    kind = "WaltersEmpirical"

    def __init__(self, automaton: AvoidanceAutomaton, N: int):
        super().__init__(automaton, automaton.horizon, N)
        self._fwd = forward_counts(automaton, N)
        self._bwd = backward_counts(automaton, N)
        self.total = sum(self._fwd[-1])
        if self.total == 0:
            raise EmptySubshift(f"L~_{N} is empty")

    def exact(self, v) -> Fraction:
        v = tuple(v)
        N, p = self.N, len(v)
        if p == 0:
            return Fraction(1)
        if p > N:
            return Fraction(0)
        aut = self.automaton
        ends = {}
        for s in aut.live_states:
            e = aut.run(v, s)
            if e != aut.dead:
                ends[s] = e
        occ = 0
        for i in range(N - p + 1):
            f, b = self._fwd[i], self._bwd[N - i - p]
            occ += sum(f[s] * b[e] for s, e in ends.items() if f[s])
        return Fraction(occ, (N - p + 1) * self.total)

    def __call__(self, v) -> float:
        return float(self.exact(v))

    def bias_bound(self, v) -> float:
        return len(tuple(v)) / self.N


def walters_empirical(automaton: AvoidanceAutomaton, N: int, v, method: str = "dp",
                      limit: int = ENUMERATION_LIMIT) -> float:
    """Average frequency of v in the words of L~_N."""
    v = tuple(v)
    if method == "dp":
        return WaltersMeasure(automaton, N)(v)
    words = enumerate_array(automaton, N, limit)
    if len(words) == 0:
        raise EmptySubshift(f"L~_{N} is empty")
    occ = kernels.count_occurrences(words, np.asarray(v, dtype=np.int32))
    return occ / ((N - len(v) + 1) * len(words))


# -- Gibbs ratios ---------------------------------------------------------------

def _slope(xs, ys) -> float:
    if len(xs) < 2:
        return 0.0
    return float(np.polyfit(np.asarray(xs, float), np.asarray(ys, float), 1)[0])


@dataclass
class GibbsReport:
    rows: list                      # (n, min_good, max_good, min_all, max_all, h_n)
    D: float
    D_prime: float
    flagged: list                   # (word, reason)
    good_slope: float
    upper_slope: float
    h: float

    @property
    def consistent(self) -> bool:
        return 0 < self.D <= self.D_prime < math.inf

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf)
        wr.writerow(["n", "min_ratio_good", "max_ratio_all", "h_n"])
        for n, gmin, _, _, amax, hn in self.rows:
            wr.writerow([n, repr(gmin), repr(amax), repr(hn)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"D": self.D, "D_prime": self.D_prime, "h": self.h, "good_slope": self.good_slope,
                "upper_slope": self.upper_slope,
                "flagged": [{"word": list(w), "reason": r} for w, r in self.flagged],
                "rows": [dict(zip(("n", "min_ratio_good", "max_ratio_good", "min_ratio_all", "max_ratio_all",
                                   "h_n"), r)) for r in self.rows]}


def gibbs_report(measure: CylinderMeasure, goodset, h: float, n_range, automaton: AvoidanceAutomaton | None = None,
                 track=(), slope_tol: float = 1e-3, limit: int = ENUMERATION_LIMIT) -> GibbsReport:
    """Extremal values of mu([w]) e^{|w|h} over good words and over all of L~_n."""
    aut = automaton or measure.automaton
    rows = []
    good_mins = []
    flagged = []
    for n in n_range:
        words = enumerate_array(aut, n, limit)
        scale = math.exp(n * h)
        ratios = measure.measure_array(words) * scale if len(words) else np.zeros(0)
        count = len(words)
        hn = math.log(count) / n if count else float("-inf")
        good = goodset.sets.get(n, []) if goodset is not None else []
        if good:
            g = measure.measure_array(np.asarray(good, dtype=np.int64)) * scale
            gmin, gmax = float(g.min()), float(g.max())
            if gmin <= 0:
                w = good[int(np.argmin(g))]
                flagged.append((tuple(w), "good word with zero measure"))
        else:
            gmin = gmax = float("nan")
        positive = ratios[ratios > 0]
        rows.append((n, gmin, gmax, float(positive.min()) if len(positive) else 0.0,
                     float(ratios.max()) if len(ratios) else 0.0, hn))
        if good:
            good_mins.append((n, gmin))
    usable = [(n, math.log(v)) for n, v in good_mins if v > 0]
    good_slope = _slope([n for n, _ in usable], [y for _, y in usable])
    if good_slope < -slope_tol:
        flagged.append(((), f"minimum good-word ratio decays (slope {good_slope:.3g} in log scale)"))
    upper = [(r[0], math.log(r[4])) for r in rows if r[4] > 0]
    upper_slope = _slope([n for n, _ in upper], [y for _, y in upper])
    for w in track:
        w = tuple(w)
        r = measure(w) * math.exp(len(w) * h)
        if r <= 0:
            flagged.append((w, "ratio is 0: the cylinder is not charged"))
        elif r < 1e-12:
            flagged.append((w, f"ratio {r:.3g} is negligible"))
    D = min((v for _, v in good_mins), default=float("nan"))
    D_prime = max((r[4] for r in rows), default=float("nan"))
    return GibbsReport(rows, D, D_prime, flagged, good_slope, upper_slope, h)


# -- counting bound for sets of words ------------------------------------------

@dataclass
class SpecbdResult:
    size: int
    mass: float
    log_size: float
    log_bound: float | None
    holds: bool | None

    @property
    def margin(self):
        return None if self.log_bound is None else self.log_size - self.log_bound

    def to_dict(self):
        return {"size": self.size, "mass": self.mass, "log_size": self.log_size, "log_bound": self.log_bound,
                "margin": self.margin, "holds": self.holds,
                "status": "vacuous (zero mass)" if self.log_bound is None else ("holds" if self.holds else "fails")}


def specbd_check(measure: CylinderMeasure, n: int, subsets, h: float, language_count: int,
                 tol: float = 1e-9) -> list:
    """|S| >= (e^{nh})^{1/mu(S)} |L~_n|^{1 - 1/mu(S)} 2^{-1/mu(S)}, compared in log scale."""
    out = []
    logL = math.log(language_count)
    for S in subsets:
        S = [tuple(w) for w in S]
        mass = float(measure.measure_array(np.asarray(S, dtype=np.int64)).sum()) if S else 0.0
        size = len(S)
        if mass <= 0:
            out.append(SpecbdResult(size, mass, math.log(size) if size else float("-inf"), None, None))
            continue
        mass = min(mass, 1.0)
        inv = 1.0 / mass
        log_bound = n * h * inv + (1 - inv) * logL - inv * math.log(2)
        log_size = math.log(size)
        out.append(SpecbdResult(size, mass, log_size, log_bound, log_size >= log_bound - tol))
    return out


# -- measure entropy -----------------------------------------------------------

@dataclass
class EntropySequence:
    rows: list                       # (n, H_n / n, H_n - H_{n-1})
    violations: list                 # (n, which)

    @property
    def last(self) -> float:
        """Best estimate: the conditional entropy at the largest n."""
        return self.rows[-1][2]

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf)
        wr.writerow(["n", "block_entropy_rate", "conditional_entropy"])
        for r in self.rows:
            wr.writerow([r[0], repr(r[1]), repr(r[2])])
        return buf.getvalue()


def block_entropy(measure: CylinderMeasure, n: int, automaton=None, limit: int = ENUMERATION_LIMIT) -> float:
    aut = automaton or measure.automaton
    if n == 0:
        return 0.0
    p = measure.measure_array(enumerate_array(aut, n, limit))
    p = p[p > 0]
    return float(-(p * np.log(p)).sum())


def measure_entropy(measure: CylinderMeasure, n_range, automaton=None, tol: float = 1e-9,
                    limit: int = ENUMERATION_LIMIT) -> EntropySequence:
    """(1/n) H_n and H_n - H_{n-1}, with H_n = -sum mu([w]) ln mu([w]) over L~_n.

    Both sequences are nonincreasing for an invariant measure; the conditional
    one converges much faster and is the estimate reported by ``last``.
    """
    rows, violations = [], []
    ns = list(n_range)
    prev_H = block_entropy(measure, ns[0] - 1, automaton, limit) if ns[0] > 1 else 0.0
    prev = None
    for n in ns:
        H = block_entropy(measure, n, automaton, limit)
        row = (n, H / n, H - prev_H)
        if prev is not None:
            if row[1] > prev[1] + tol:
                violations.append((n, "block entropy rate increased"))
            if row[2] > prev[2] + tol:
                violations.append((n, "conditional entropy increased"))
        rows.append(row)
        prev, prev_H = row, H
    return EntropySequence(rows, violations)


# -- consistency diagnostics ---------------------------------------------------

def truncation_sweep(forbidden, horizons, tol: float = DEFAULT_TOL) -> list:
    """(m, lambda, h, gap to the previous m) for increasing truncation horizons."""
    out = []
    prev = None
    for m in horizons:
        aut = build_automaton(forbidden.alphabet, forbidden, m)
        pd = perron(build_transfer(aut), tol)
        out.append({"m": m, "lambda": pd.lam, "h": pd.h,
                    "gap": None if prev is None else prev - pd.lam,
                    "nonincreasing": prev is None or pd.lam <= prev + 1e-9})
        prev = pd.lam
    return out


def lcomb_empirical(counts, lam: float, factor: float = 4.0) -> dict:
    """Ratios |L~_n| / lam^n and the first n after which they stay below ``factor``."""
    ratios = [(n, c / lam ** n) for n, c in enumerate(counts) if n >= 1]
    threshold = None
    for i, (n, r) in enumerate(ratios):
        if all(rr < factor for _, rr in ratios[i:]):
            threshold = n
            break
    return {"ratios": ratios, "threshold": threshold, "max_ratio": max((r for _, r in ratios), default=0.0)}


__all__ = [
    "TransferSystem", "build_transfer", "PerronData", "perron", "CylinderMeasure", "ParryMeasure",
    "WaltersMeasure", "parry_measure", "parry_of", "walters_empirical", "GibbsReport", "gibbs_report",
    "SpecbdResult", "specbd_check", "EntropySequence", "block_entropy", "measure_entropy", "truncation_sweep",
    "lcomb_empirical",
]
