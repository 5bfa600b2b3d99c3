"""Pass/fail records for series hypotheses."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .intervals import DEFAULT_PREC, Interval, digits_for

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


def compare(lhs: Interval, rhs: Interval, relation: str = "<") -> str:
    """Three-way verdict for lhs < rhs (or <=) under interval uncertainty."""
    if relation == "<":
        if lhs.finite and lhs.hi < rhs.lo:
            return PASS
        if rhs.finite and lhs.lo >= rhs.hi:
            return FAIL
    elif relation == "<=":
        if lhs.finite and lhs.hi <= rhs.lo:
            return PASS
        if rhs.finite and lhs.lo > rhs.hi:
            return FAIL
    else:
        raise ValueError(f"unknown relation {relation!r}")
    return INCONCLUSIVE


def combine(verdicts) -> str:
    verdicts = list(verdicts)
    if FAIL in verdicts:
        return FAIL
    if INCONCLUSIVE in verdicts:
        return INCONCLUSIVE
    return PASS


@dataclass(frozen=True)
class Check:
    name: str
    lhs: Interval | None
    rhs: Interval | None
    relation: str = "<"
    verdict: str = INCONCLUSIVE
    note: str = ""
    first_violation: int | None = None

    @classmethod
    def of(cls, name, lhs, rhs, relation="<", note="", first_violation=None) -> "Check":
        v = compare(lhs, rhs, relation)
        if v == INCONCLUSIVE and not note:
            note = "intervals touch: increase precision"
        return cls(name, lhs, rhs, relation, v, note, first_violation)

    @classmethod
    def missing(cls, name, what) -> "Check":
        return cls(name, None, None, "<", INCONCLUSIVE, f"missing ingredient: {what}")

    @property
    def margin(self):
        if self.lhs is None or self.rhs is None or not self.lhs.finite:
            return None
        return self.rhs.lo - self.lhs.hi

    def to_dict(self, digits: int) -> dict:
        out = {"name": self.name, "relation": self.relation, "verdict": self.verdict}
        if self.lhs is not None:
            out["lhs"] = self.lhs.to_json(digits)
        if self.rhs is not None:
            out["rhs"] = self.rhs.to_json(digits)
        m = self.margin
        if m is not None:
            out["margin_lower_bound"] = Interval.point(m).decimal_strings(digits)[0]
        if self.note:
            out["note"] = self.note
        if self.first_violation is not None:
            out["first_violation_n"] = self.first_violation
        return out


@dataclass(frozen=True)
class Certificate:
    theorem: str
    checks: tuple
    conclusions: tuple = ()
    inputs: tuple = ()               # (key, value-string) provenance pairs
    subcertificates: tuple = ()
    precision: int = DEFAULT_PREC
    extra: tuple = field(default=(), compare=False)   # (key, json-able) diagnostics

    @property
    def verdict(self) -> str:
        return combine([c.verdict for c in self.checks] + [s.verdict for s in self.subcertificates])

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def sub(self, theorem: str) -> "Certificate":
        for s in self.subcertificates:
            if s.theorem == theorem:
                return s
        raise KeyError(theorem)

    def to_dict(self) -> dict:
        digits = digits_for(self.precision)
        return {
            "theorem": self.theorem,
            "verdict": self.verdict,
            "precision_bits": self.precision,
            "decimal_digits": digits,
            "inputs": dict(self.inputs),
            "checks": [c.to_dict(digits) for c in self.checks],
            "conclusions": list(self.conclusions) if self.verdict == PASS else [],
            "conclusions_if_pass": list(self.conclusions),
            "diagnostics": dict(self.extra),
            "subcertificates": [s.to_dict() for s in self.subcertificates],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, **kw)


def frac_str(x) -> str:
    return str(Fraction(x))
