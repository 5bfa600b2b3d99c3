from .certificate import FAIL, INCONCLUSIVE, PASS, Certificate, Check, combine, compare
from .intervals import DEFAULT_PREC, Interval, LogValue, RExp, RInterval, RPow, exp_neg, precision
from .series import Profile, SeriesSpec, eval_series, partial_sums
from .theorems import THEOREMS, CertifyParams, certify_theorem, coded_generating_function, grid_search

__all__ = [
    "PASS", "FAIL", "INCONCLUSIVE", "Certificate", "Check", "combine", "compare",
    "DEFAULT_PREC", "Interval", "LogValue", "RExp", "RInterval", "RPow", "exp_neg", "precision",
    "Profile", "SeriesSpec", "eval_series", "partial_sums",
    "THEOREMS", "CertifyParams", "certify_theorem", "coded_generating_function", "grid_search",
]
