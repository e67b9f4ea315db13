"""Machine-readable verdict reports.

Rationals are written as ``"num/den"`` strings and never as floats, so a
report can be re-read without losing exactness.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import hashlib
import json
from typing import Optional, Tuple

from markt import __version__
from markt.rationals import format_rational, parse_rational
from markt.terms import format_test

TOOL = "markt"


def _q(value):
    return None if value is None else format_rational(value)


def _unq(value):
    return None if value is None else parse_rational(value)


def digest(data):
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


@dataclass(frozen=True)
class WitnessRecord:
    test: str
    test_dsl: str
    matched: Optional[str]
    theta: Optional[Tuple[Fraction, ...]]
    prob_left: Fraction
    prob_right: Fraction

    def to_dict(self):
        return {
            "test": self.test,
            "test_dsl": self.test_dsl,
            "matched": self.matched,
            "theta": None if self.theta is None else [_q(t) for t in self.theta],
            "prob_left": _q(self.prob_left),
            "prob_right": _q(self.prob_right),
        }

    @classmethod
    def from_dict(cls, d):
        theta = d.get("theta")
        return cls(d["test"], d["test_dsl"], d.get("matched"),
                   None if theta is None else tuple(_unq(t) for t in theta),
                   _unq(d["prob_left"]), _unq(d["prob_right"]))


@dataclass(frozen=True)
class Report:
    relation: str
    holds: bool
    params: dict = field(default_factory=dict)
    witnesses: Tuple[WitnessRecord, ...] = ()
    minimal_epsilon: Optional[Fraction] = None
    minimal_nu: Optional[Fraction] = None
    inputs: dict = field(default_factory=dict)
    warnings: Tuple[str, ...] = ()
    seconds: float = 0.0
    tool: str = TOOL
    version: str = __version__

    @classmethod
    def from_verdict(cls, verdict, names=None, params=None, inputs=None, seconds=0.0):
        names = names or {}

        def name_of(test):
            return None if test is None else names.get(test, format_test(test))

        witnesses = tuple(
            WitnessRecord(name_of(w.test), format_test(w.test), name_of(w.matched),
                          None if w.theta is None else tuple(w.theta), w.prob_left, w.prob_right)
            for w in verdict.witnesses)
        return cls(verdict.relation, verdict.holds, dict(params or {}), witnesses,
                   verdict.minimal_epsilon, verdict.minimal_nu, dict(inputs or {}),
                   tuple(verdict.warnings), seconds)

    def to_dict(self):
        return {
            "tool": self.tool,
            "version": self.version,
            "inputs": self.inputs,
            "relation": self.relation,
            "params": self.params,
            "holds": self.holds,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "minimal_thresholds": {
                "epsilon": _q(self.minimal_epsilon),
                "nu": _q(self.minimal_nu),
            },
            "warnings": list(self.warnings),
            "timing": {"seconds": self.seconds},
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_dict(cls, d):
        thresholds = d.get("minimal_thresholds", {})
        return cls(
            relation=d["relation"],
            holds=d["holds"],
            params=dict(d.get("params", {})),
            witnesses=tuple(WitnessRecord.from_dict(w) for w in d.get("witnesses", [])),
            minimal_epsilon=_unq(thresholds.get("epsilon")),
            minimal_nu=_unq(thresholds.get("nu")),
            inputs=dict(d.get("inputs", {})),
            warnings=tuple(d.get("warnings", [])),
            seconds=d.get("timing", {}).get("seconds", 0.0),
            tool=d.get("tool", TOOL),
            version=d.get("version", __version__),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_text(self):
        lines = [f"relation: {self.relation}", f"holds: {'yes' if self.holds else 'no'}"]
        for key in sorted(self.params):
            lines.append(f"  {key} = {self.params[key]}")
        if self.minimal_epsilon is not None:
            lines.append(f"minimal epsilon: {format_rational(self.minimal_epsilon)}")
        if self.minimal_nu is not None:
            lines.append(f"minimal nu: {format_rational(self.minimal_nu)}")
        for w in self.witnesses:
            theta = "-" if w.theta is None else "(" + ", ".join(map(format_rational, w.theta)) + ")"
            lines.append(
                f"witness: test {w.test} [{w.test_dsl}] theta={theta} "
                f"prob1={format_rational(w.prob_left)} prob2={format_rational(w.prob_right)}")
        for msg in self.warnings:
            lines.append(f"warning: {msg}")
        return "\n".join(lines)

