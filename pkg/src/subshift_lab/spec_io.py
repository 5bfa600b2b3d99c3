"""Reading subshift and family spec files (JSON).

A subshift spec looks like::

    {"alphabet_size": 2, "forbidden": ["11"], "horizon": 8,
     "tail_model": {"C": "2", "r": "1"}}

Words are digit strings (alphabets up to 10 letters) or lists of integers.
Instead of ``forbidden`` a spec may give ``profile`` (counts only) or
``family`` (a generated family, see below).
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .core.alphabet import Alphabet
from .core.forbidden import ForbiddenList, TailModel


class MalformedSpec(ValueError):
    """The spec file cannot be parsed; the message names the offending field."""


@dataclass
class LoadedSpec:
    raw: dict
    alphabet: Alphabet
    forbidden: ForbiddenList
    horizon: int
    family: str | None = None
    family_params: object = None
    extra: dict = field(default_factory=dict)

    def canonical(self) -> str:
        return json.dumps(self.raw, sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()


def _fraction(value, where: str) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedSpec(f"field '{where}': not a rational number: {value!r}") from exc


def _int(value, where: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedSpec(f"field '{where}': expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise MalformedSpec(f"field '{where}': must be >= {minimum}, got {value}")
    return value


def _word(item, q: int, where: str) -> tuple:
    if isinstance(item, str):
        if q > 10:
            raise MalformedSpec(f"field '{where}': digit strings need an alphabet of at most 10 letters")
        if not item or not item.isdigit():
            raise MalformedSpec(f"field '{where}': {item!r} is not a non-empty digit string")
        w = tuple(int(ch) for ch in item)
    elif isinstance(item, list) and item and all(isinstance(x, int) and not isinstance(x, bool) for x in item):
        w = tuple(item)
    else:
        raise MalformedSpec(f"field '{where}': expected a digit string or a list of integers")
    if any(not 0 <= a < q for a in w):
        raise MalformedSpec(f"field '{where}': letter outside the alphabet 0..{q - 1}")
    return w


def _tail(obj, where="tail_model") -> TailModel | None:
    if obj is None:
        return None
    if not isinstance(obj, dict) or set(obj) - {"C", "r"} or not {"C", "r"} <= set(obj):
        raise MalformedSpec(f"field '{where}': expected an object with keys C and r")
    try:
        return TailModel(_fraction(obj["C"], where + ".C"), _fraction(obj["r"], where + ".r"))
    except ValueError as exc:
        if isinstance(exc, MalformedSpec):
            raise
        raise MalformedSpec(f"field '{where}': {exc}") from exc


def _profile(obj, alphabet: Alphabet, horizon: int | None, tail):
    if not isinstance(obj, dict):
        raise MalformedSpec("field 'profile': expected an object")
    if "counts" in obj:
        counts = obj["counts"]
        if not isinstance(counts, list) or not all(isinstance(c, int) and c >= 0 for c in counts):
            raise MalformedSpec("field 'profile.counts': expected a list of non-negative integers")
        m = len(counts) if horizon is None else horizon
        if m > len(counts):
            raise MalformedSpec("field 'profile.counts': shorter than the horizon")
        return ForbiddenList.from_profile(alphabet, counts[:m], m, tail=tail,
                                          complete=tail is None and bool(obj.get("complete", False)))
    if "geometric" in obj:
        g = obj["geometric"]
        if not isinstance(g, dict):
            raise MalformedSpec("field 'profile.geometric': expected an object")
        C = _fraction(g.get("C", 1), "profile.geometric.C")
        r = _fraction(g.get("r"), "profile.geometric.r")
        start = _int(g.get("from", 1), "profile.geometric.from", 1)
        if C.denominator != 1 or r.denominator != 1:
            raise MalformedSpec("field 'profile.geometric': C and r must be integers for word counts")
        m = horizon if horizon is not None else max(start + 16, 24)
        fn = (lambda n, C=int(C), r=int(r), s=start: C * r ** n if n >= s else 0)
        return ForbiddenList.from_profile(alphabet, fn, m, tail=tail or TailModel(C, r))
    raise MalformedSpec("field 'profile': expected 'counts' or 'geometric'")


def parse_family(obj: dict):
    """Build (ForbiddenList, family name, params) from a family object."""
    name = obj.get("family")
    if name == "alpha_beta":
        from .families.alpha_beta import AlphaBetaParams, forbidden_from_params

        for key in ("alpha", "beta"):
            if key not in obj:
                raise MalformedSpec(f"field '{key}': required for alpha_beta")
        depth = _int(obj.get("depth", 24), "depth", 1)
        try:
            params = AlphaBetaParams(_fraction(obj["alpha"], "alpha"), _fraction(obj["beta"], "beta"), depth)
        except ValueError as exc:
            if isinstance(exc, MalformedSpec):
                raise
            raise MalformedSpec(f"field 'alpha'/'beta': {exc}") from exc
        horizon = _int(obj.get("horizon", depth), "horizon", 1)
        if horizon > depth:
            raise MalformedSpec("field 'horizon': exceeds the coding depth")
        return forbidden_from_params(params, horizon), name, params
    if name == "bounded_density":
        from .errors import InvalidH
        from .families.bounded_density import BoundedDensityParams, bounded_density_forbidden

        k = _int(obj.get("k"), "k", 1)
        table = obj.get("h_table")
        signed = obj.get("signed", False)
        if not isinstance(signed, bool):
            raise MalformedSpec("field 'signed': expected true or false")
        try:
            if table is None:
                params = BoundedDensityParams.standard(k, signed)
            else:
                if not isinstance(table, list) or not all(isinstance(x, int) for x in table):
                    raise MalformedSpec("field 'h_table': expected a list of integers")
                grad = obj.get("gradient")
                params = BoundedDensityParams(k, tuple(table), signed,
                                              None if grad is None else _fraction(grad, "gradient"))
        except InvalidH as exc:
            raise MalformedSpec(f"field 'h_table': {exc}") from exc
        horizon = _int(obj.get("horizon", params.m), "horizon", 1)
        return bounded_density_forbidden(params, horizon), name, params
    if name == "nonsupport":
        from .families.nonsupport import nonsupport_forbidden

        q = _int(obj.get("alphabet"), "alphabet", 2)
        N = _int(obj.get("N"), "N", 2)
        a = _int(obj.get("letter", 0), "letter", 0)
        if a >= q:
            raise MalformedSpec("field 'letter': outside the alphabet")
        return nonsupport_forbidden(q, N, a), name, {"alphabet": q, "N": N, "letter": a}
    raise MalformedSpec(f"field 'family': unknown family {name!r}")


def parse_spec(raw) -> LoadedSpec:
    if not isinstance(raw, dict):
        raise MalformedSpec("top level: expected a JSON object")
    fam = raw.get("family")
    if isinstance(fam, str):
        fl, name, params = parse_family(raw)
        return LoadedSpec(raw, fl.alphabet, fl, fl.horizon, name, params)
    if isinstance(fam, dict):
        fl, name, params = parse_family(fam)
        horizon = raw.get("horizon")
        if horizon is not None:
            _int(horizon, "horizon", 1)
        return LoadedSpec(raw, fl.alphabet, fl, fl.horizon, name, params)

    if "alphabet_size" not in raw:
        raise MalformedSpec("field 'alphabet_size': required")
    q = _int(raw["alphabet_size"], "alphabet_size", 1)
    alphabet = Alphabet(q)
    horizon = raw.get("horizon")
    if horizon is not None:
        horizon = _int(horizon, "horizon", 1)
    tail = _tail(raw.get("tail_model"))
    if "profile" in raw:
        fl = _profile(raw["profile"], alphabet, horizon, tail)
        return LoadedSpec(raw, alphabet, fl, fl.horizon)
    if "forbidden" not in raw:
        raise MalformedSpec("field 'forbidden': required (or give 'family' or 'profile')")
    items = raw["forbidden"]
    if not isinstance(items, list):
        raise MalformedSpec("field 'forbidden': expected a list of words")
    words = [_word(it, q, f"forbidden[{i}]") for i, it in enumerate(items)]
    longest = max((len(w) for w in words), default=0)
    if horizon is not None and horizon < longest:
        raise MalformedSpec("field 'horizon': shorter than the longest forbidden word")
    complete = tail is None
    try:
        fl = ForbiddenList.explicit(alphabet, words, horizon=horizon if horizon is not None else longest,
                                    complete=complete, tail=tail)
    except ValueError as exc:
        raise MalformedSpec(f"field 'forbidden': {exc}") from exc
    return LoadedSpec(raw, alphabet, fl, fl.horizon)


def load_spec(path) -> LoadedSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedSpec(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise MalformedSpec(f"cannot read spec: {exc}") from exc
    return parse_spec(raw)


def word_string(w, q: int) -> object:
    return "".join(map(str, w)) if q <= 10 else list(w)


def forbidden_to_spec(forbidden: ForbiddenList, extra: dict | None = None) -> dict:
    q = forbidden.alphabet.size
    out = {"alphabet_size": q, "forbidden": [word_string(w, q) for w in forbidden.words_upto()],
           "horizon": forbidden.horizon}
    if forbidden.tail is not None:
        out["tail_model"] = {"C": str(forbidden.tail.C), "r": str(forbidden.tail.r)}
    if extra:
        out.update(extra)
    return out
