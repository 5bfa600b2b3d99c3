"""A mixing SFT whose unique maximal measure misses the cylinder [a^N].

Forbidding a^N b and b a^N for every b != a leaves a^N only inside the fixed
point a^infinity, so the measure of [a^N] vanishes in every truncation.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..certify.theorems import CertifyParams, certify_theorem
from ..core.alphabet import Alphabet
from ..core.forbidden import ForbiddenList


def nonsupport_forbidden(alphabet_size: int, N: int, a: int = 0) -> ForbiddenList:
    if alphabet_size < 2 or N < 2:
        raise ValueError("need an alphabet of at least 2 letters and N >= 2")
    run = (a,) * N
    words = []
    for b in range(alphabet_size):
        if b != a:
            words.append(run + (b,))
            words.append((b,) + run)
    return ForbiddenList(Alphabet(alphabet_size), words=words, complete=True, label=f"nonsupport N={N}")


@dataclass
class NonsupportReport:
    forbidden: ForbiddenList
    N: int
    a: int
    parry_trend: list          # (horizon, lambda, mu([a^N]))
    walters_trend: list        # (N_words, nu([a^N]))
    certificate: object

    @property
    def parry_nonincreasing(self) -> bool:
        vals = [v for _, _, v in self.parry_trend]
        return all(b <= a + 1e-15 for a, b in zip(vals, vals[1:]))

    @property
    def walters_decreasing(self) -> bool:
        vals = [v for _, v in self.walters_trend]
        return all(b < a for a, b in zip(vals, vals[1:]))

    def to_dict(self) -> dict:
        return {"N": self.N, "letter": self.a, "words": [list(w) for w in self.forbidden.words_upto()],
                "parry": [{"horizon": m, "lambda": lam, "mu_run": v} for m, lam, v in self.parry_trend],
                "walters": [{"N": n, "nu_run": v} for n, v in self.walters_trend],
                "gibbsthm": self.certificate.verdict if self.certificate is not None else None}


def nonsupport_example(alphabet_size: int, N: int, a: int = 0, horizons=(4, 6, 8, 10),
                       walters_lengths=(8, 12, 16, 20), certify: bool = True) -> NonsupportReport:
    from ..core.automaton import build_automaton
    from ..mme import WaltersMeasure, build_transfer, parry_measure, perron

    F = nonsupport_forbidden(alphabet_size, N, a)
    run = (a,) * N
    parry = []
    for m in horizons:
        aut = build_automaton(F.alphabet, F, max(m, F.horizon))
        tr = build_transfer(aut)
        pd = perron(tr)
        parry.append((m, pd.lam, parry_measure(pd, tr)(run)))
    aut = build_automaton(F.alphabet, F)
    walters = [(n, WaltersMeasure(aut, n)(run)) for n in walters_lengths]
    cert = certify_theorem("gibbsthm", F, CertifyParams()) if certify else None
    return NonsupportReport(F, N, a, parry, walters, cert)
