"""subshift-lab command line.

    subshift-lab analyze   --spec S.json [--horizon M] [--nrange A..B] [--out DIR] [--no-cache]
    subshift-lab certify   --spec S.json [--theorems LIST] [--precision BITS] [--out DIR]
    subshift-lab construct --spec S.json --c 9/10 [--steps N] [--two-sided] [--strict] [--out DIR]
    subshift-lab family    --spec F.json [--out DIR]

Exit codes: analyze 0 ok / 1 malformed spec / 2 enumeration too large;
certify 0 all pass / 3 some fail / 4 some inconclusive; construct 0 ok / 3 failure.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import (
    EmptySubshift,
    EnumerationTooLarge,
    ExtensionStuck,
    HorizonUnsupported,
    MillerHypothesisFailed,
    PreconditionViolated,
)
from .spec_io import LoadedSpec, MalformedSpec, forbidden_to_spec, load_spec

log = logging.getLogger("subshift_lab")

EXIT_OK = 0
EXIT_MALFORMED = 1
EXIT_TOO_LARGE = 2
EXIT_FAIL = 3
EXIT_INCONCLUSIVE = 4


@dataclass
class RunConfig:
    command: str
    spec: str
    horizon: int | None
    n_range: tuple
    precision: int
    out: Path | None
    cache: bool


def num(x, digits: int = 17) -> str:
    """Decimal string for a report number."""
    if isinstance(x, Fraction):
        return str(x) if x.denominator == 1 else format(float(x), f".{digits}g")
    if isinstance(x, int):
        return str(x)
    if x is None:
        return ""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return format(x, f".{digits}g")


def parse_range(text: str) -> tuple:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from exc
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError("need 1 <= A <= B")
    return lo, hi


def positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def precision_bits(text: str) -> int:
    v = int(text)
    if v < 64:
        raise argparse.ArgumentTypeError("certificate-grade runs need at least 64 bits")
    return v


# -- output helpers --------------------------------------------------------------

def atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for r in rows:
        wr.writerow(r)
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cache_dir() -> Path:
    env = os.environ.get("SUBSHIFT_LAB_CACHE")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "subshift_lab"


def cache_key(spec: LoadedSpec, *parts) -> str:
    h = hashlib.sha256()
    h.update(spec.canonical().encode())
    for p in parts:
        h.update(b"\0" + str(p).encode())
    h.update(b"\0" + __version__.encode())
    return h.hexdigest()


def cached_counts(spec: LoadedSpec, aut, n_max: int, use_cache: bool) -> list:
    from .core.language import count_table

    if not use_cache:
        return count_table(aut, n_max)
    path = cache_dir() / f"counts-{cache_key(spec, aut.horizon, n_max)}.json"
    if path.exists():
        try:
            data = json.loads(path.read_text())
            return [int(c) for c in data["counts"]]
        except (ValueError, KeyError, OSError):
            log.warning("ignoring unreadable cache entry %s", path)
    counts = count_table(aut, n_max)
    try:
        atomic_write(path, json.dumps({"counts": [str(c) for c in counts]}))
    except OSError as exc:
        log.warning("cache not written: %s", exc)
    return counts


# -- analyze ---------------------------------------------------------------------

def cmd_analyze(cfg: RunConfig) -> int:
    from .core.automaton import build_automaton
    from .goodwords import HEAVY, HEAVY_PRIME, good_word_family
    from .mme import build_transfer, gibbs_report, measure_entropy, parry_measure, perron

    spec = load_spec(cfg.spec)
    F = spec.forbidden
    q = spec.alphabet.size
    m = cfg.horizon or spec.horizon
    lo, hi = cfg.n_range
    try:
        aut = build_automaton(spec.alphabet, F, m)
    except HorizonUnsupported as exc:
        print(f"enumeration too large: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    counts = cached_counts(spec, aut, hi, cfg.cache)
    exact = F.complete and F.max_length <= m
    table_rows = [(n, counts[n], num(math.log(counts[n]) / n) if counts[n] else "-inf",
                   "L~" if not exact else "L~(SFT)") for n in range(lo, hi + 1)]

    summary = {"spec_digest": spec.digest(), "alphabet_size": q, "horizon": m, "n_range": [lo, hi],
               "version": __version__, "counts": {str(n): str(counts[n]) for n in range(lo, hi + 1)}}
    summary["h_upper"] = num(math.log(counts[hi]) / hi) if counts[hi] else "-inf"
    if F.is_empty:
        summary["h_exact"] = f"ln({q})"
        summary["h"] = num(math.log(q))

    try:
        tr = build_transfer(aut)
        pd = perron(tr)
        mu = parry_measure(pd, tr)
        summary["perron"] = {k: num(v) for k, v in pd.to_dict().items()}
        summary["perron"]["components"] = tr.n_components
        summary["perron"]["tie"] = tr.tie
        summary.setdefault("h", num(pd.h))
    except EmptySubshift as exc:
        summary["empty"] = str(exc)
        mu = pd = None

    try:
        g = good_word_family(F, HEAVY, aut, hi)
        gp = good_word_family(F, HEAVY_PRIME, aut, hi)
        good_rows = [(n, g.count(n), gp.count(n), counts[n]) for n in range(lo, hi + 1)]
        gibbs_csv = csv_text(["n", "min_ratio_good", "max_ratio_all", "h_n"], [])
        ent_rows = []
        if mu is not None:
            rep = gibbs_report(mu, gp, pd.h, range(lo, hi + 1), aut)
            gibbs_csv = csv_text(["n", "min_ratio_good", "max_ratio_all", "h_n"],
                                 [(r[0], num(r[1]), num(r[4]), num(r[5])) for r in rep.rows])
            summary["gibbs"] = {"D": num(rep.D), "D_prime": num(rep.D_prime),
                                "flagged": [{"word": list(w), "reason": why} for w, why in rep.flagged]}
            ent = measure_entropy(mu, range(lo, hi + 1), aut)
            ent_rows = [(n, num(a), num(b)) for n, a, b in ent.rows]
            summary["measure_entropy"] = num(ent.last)
            summary["measure_entropy_violations"] = [list(v) for v in ent.violations]
    except (EnumerationTooLarge, HorizonUnsupported) as exc:
        print(f"enumeration too large: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE

    out = cfg.out or Path(".")
    atomic_write(out / "language_table.csv", csv_text(["n", "count", "h_n", "exact"], table_rows))
    atomic_write(out / "good_words.csv", csv_text(["n", "good", "good_prime", "language"], good_rows))
    atomic_write(out / "gibbs.csv", gibbs_csv)
    atomic_write(out / "entropy.csv", csv_text(["n", "block_entropy_rate", "conditional_entropy"], ent_rows))
    atomic_write(out / "summary.json", json_text(summary))
    print(f"h = {summary.get('h', summary['h_upper'])}  (wrote reports to {out})")
    return EXIT_OK


# -- certify ---------------------------------------------------------------------

def _param(text):
    if text is None:
        return None
    from .certify.intervals import LogValue

    t = text.strip()
    try:
        if t.startswith("ln(") and t.endswith(")"):
            return LogValue(Fraction(t[3:-1]))
        return Fraction(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedSpec(f"parameter {text!r}: {exc}") from exc


def cmd_certify(cfg: RunConfig, theorems: str, beta=None, alpha=None, c=None, k=None) -> int:
    from .certify import THEOREMS, CertifyParams, certify_theorem
    from .certify.certificate import FAIL, INCONCLUSIVE, combine
    from .certify.theorems import ALIASES

    spec = load_spec(cfg.spec)
    ids = [t.strip() for t in theorems.split(",") if t.strip()]
    if ids == ["all"]:
        ids = list(THEOREMS)
    params = CertifyParams(beta=_param(beta), alpha=_param(alpha), c=_param(c), k=k, precision=cfg.precision)
    F = spec.forbidden
    if cfg.horizon is not None and cfg.horizon < F.horizon:
        F = F.truncate(cfg.horizon)
    verdicts = []
    out = cfg.out or Path(".")
    for tid in ids:
        if tid == "bddthm":
            if spec.family != "bounded_density":
                raise MalformedSpec("theorem 'bddthm' needs a bounded_density family spec")
            from .families.bounded_density import bddthm_certify

            cert = bddthm_certify(spec.family_params, precision_bits=cfg.precision)
        elif tid == "hardbeta":
            if spec.family != "alpha_beta":
                raise MalformedSpec("theorem 'hardbeta' needs an alpha_beta family spec")
            from .families.alpha_beta import hardbeta_search

            cert = hardbeta_search(spec.family_params.ell, precision_bits=cfg.precision)
        else:
            if ALIASES.get(tid, tid) not in THEOREMS:
                raise MalformedSpec(f"field 'theorems': unknown theorem {tid!r}")
            cert = certify_theorem(tid, F, params)
        verdicts.append(cert.verdict)
        name = ALIASES.get(tid, tid).replace("'", "_prime")
        atomic_write(out / f"{name}.json", cert.to_json() + "\n")
        print(f"{tid}: {cert.verdict}")
    overall = combine(verdicts)
    if FAIL in verdicts:
        return EXIT_FAIL
    if overall == INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


# -- construct -------------------------------------------------------------------

def cmd_construct(cfg: RunConfig, c: str, steps: int, start: str, two_sided: bool, strict: bool,
                  reading: str) -> int:
    from .core.automaton import build_automaton
    from .weights import WeightParams, extend_right_greedy, extend_two_sided

    spec = load_spec(cfg.spec)
    q = spec.alphabet.size
    try:
        w = tuple(int(ch) for ch in start) if start else ()
    except ValueError:
        raise MalformedSpec("field 'start': expected a digit string")
    if any(a >= q for a in w):
        raise MalformedSpec("field 'start': letter outside the alphabet")
    try:
        params = WeightParams(Fraction(c), spec.forbidden, cfg.horizon)
        if two_sided:
            trace = extend_two_sided(w, params, steps, require_hypothesis=strict, reading=reading)
        else:
            trace = extend_right_greedy(w, params, steps, require_hypothesis=strict)
    except MillerHypothesisFailed as exc:
        print(f"Miller hypothesis not satisfied: series {num(exc.series)} vs bound {num(exc.bound)}",
              file=sys.stderr)
        return EXIT_FAIL
    except (ExtensionStuck, PreconditionViolated) as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except HorizonUnsupported as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    aut = build_automaton(spec.alphabet, spec.forbidden, params.horizon)
    data = trace.to_dict()
    data["admissible"] = aut.accepts(trace.word)
    data["length"] = len(trace.word)
    out = cfg.out or Path(".")
    atomic_write(out / "trace.json", json_text(data))
    print(f"constructed {len(trace.steps)} steps; word length {len(trace.word)}; admissible {data['admissible']}")
    return EXIT_OK if len(trace.steps) == steps and data["admissible"] else EXIT_FAIL


# -- family ----------------------------------------------------------------------

def cmd_family(cfg: RunConfig) -> int:
    spec = load_spec(cfg.spec)
    if spec.family is None:
        raise MalformedSpec("field 'family': required for the family command")
    F = spec.forbidden
    if spec.family == "bounded_density":
        from .families.bounded_density import count_growth

        p = spec.family_params
        counts = [F.count(n) for n in range(1, F.horizon + 1)]
        r = math.ceil(count_growth(p.k).hi)
        mult = 2 if p.signed else 1
        out_spec = {"alphabet_size": F.alphabet.size, "horizon": F.horizon,
                    "profile": {"counts": counts}, "tail_model": {"C": str(mult), "r": str(r)},
                    "source_family": spec.raw}
    else:
        out_spec = forbidden_to_spec(F, {"source_family": spec.raw})
        if spec.family == "nonsupport":
            out_spec.pop("tail_model", None)
    text = json_text(out_spec)
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        atomic_write(cfg.out / "subshift.json", text)
        print(f"wrote {cfg.out / 'subshift.json'}")
    return EXIT_OK


# -- entry point -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", required=True, help="subshift or family spec (JSON)")
    common.add_argument("--horizon", type=positive_int, default=None, metavar="M",
                        help="truncation horizon for the forbidden list")
    common.add_argument("--nrange", type=parse_range, default=(1, 12), metavar="A..B",
                        help="word lengths to analyze (default 1..12)")
    common.add_argument("--precision", type=precision_bits, default=128, metavar="BITS",
                        help="interval precision in bits (default 128)")
    common.add_argument("--out", type=Path, default=None, metavar="DIR", help="output directory")
    common.add_argument("--no-cache", action="store_true", help="ignore and do not write the count cache")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="subshift-lab", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="language table, good words, Parry measure, Gibbs ratios")
    cp = sub.add_parser("certify", parents=[common], help="certify theorem hypotheses")
    cp.add_argument("--theorems", default="mainthm2,gibbsthm", metavar="LIST",
                    help="comma-separated theorem ids, 'all', or a family theorem (bddthm, hardbeta)")
    cp.add_argument("--beta", default=None, help="e.g. ln(256) or a rational")
    cp.add_argument("--alpha", default=None)
    cp.add_argument("--c", default=None)
    cp.add_argument("--k", type=int, default=None)
    kp = sub.add_parser("construct", parents=[common], help="greedy extension under the weight f_c or g_c")
    kp.add_argument("--c", default="9/10")
    kp.add_argument("--steps", type=positive_int, default=100)
    kp.add_argument("--start", default="", help="starting word as a digit string")
    kp.add_argument("--two-sided", action="store_true")
    kp.add_argument("--strict", action="store_true", help="refuse to run when the series hypothesis fails")
    kp.add_argument("--reading", choices=("right-overlap", "literal"), default="right-overlap")
    sub.add_parser("family", parents=[common], help="emit a generated family as a subshift spec")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    cfg = RunConfig(args.command, args.spec, args.horizon, args.nrange, args.precision, args.out,
                    not args.no_cache)
    try:
        if args.command == "analyze":
            return cmd_analyze(cfg)
        if args.command == "certify":
            return cmd_certify(cfg, args.theorems, args.beta, args.alpha, args.c, args.k)
        if args.command == "construct":
            return cmd_construct(cfg, args.c, args.steps, args.start, args.two_sided, args.strict, args.reading)
        return cmd_family(cfg)
    except MalformedSpec as exc:
        print(f"malformed spec: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
