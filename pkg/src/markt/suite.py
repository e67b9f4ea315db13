"""Test suites: generation from trace patterns and suite files."""

from dataclasses import dataclass
from itertools import product
import re

from markt.parser import ParseError, parse_test
from markt.terms import TAU, CanonicalTest, TestStep

WILDCARD = "*"
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")


@dataclass(frozen=True)
class TracePattern:
    """A success trace with ``*`` standing for any action of ``alphabet``."""

    items: tuple
    alphabet: frozenset

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        if not self.items:
            raise ValueError("empty trace pattern")
        if not self.alphabet:
            raise ValueError("empty alphabet")
        if TAU in self.alphabet or TAU in self.items:
            raise ValueError("tau cannot occur in a test pattern")
        for item in self.items:
            if item != WILDCARD and not _NAME.match(item):
                raise ValueError(f"bad action name {item!r} in pattern")

    @classmethod
    def parse(cls, text, alphabet):
        items = [p.strip() for p in text.strip().strip('"').split(".")]
        if any(not p for p in items):
            raise ValueError(f"bad trace pattern {text!r}")
        return cls(tuple(items), frozenset(alphabet))

    def __str__(self):
        return ".".join(self.items)


def gen_suite(pattern, fail_sets="maximal"):
    """One canonical test per instantiation of the wildcards.

    With ``fail_sets="maximal"`` every step fails on all other alphabet
    actions; with ``"minimal"`` there are no failure branches.
    """
    if fail_sets not in ("maximal", "minimal"):
        raise ValueError("fail_sets is 'maximal' or 'minimal'")
    alphabet = sorted(pattern.alphabet)
    choices = [alphabet if item == WILDCARD else [item] for item in pattern.items]
    suite = []
    for trace in product(*choices):
        steps = tuple(
            TestStep(a, frozenset(pattern.alphabet - {a}) if fail_sets == "maximal" else frozenset())
            for a in trace)
        suite.append(CanonicalTest(steps))
    return suite


def parse_alphabet(text):
    names = [a.strip() for a in text.split(",") if a.strip()]
    if not names:
        raise ValueError("empty alphabet")
    for a in names:
        if a == TAU or not _NAME.match(a):
            raise ValueError(f"bad alphabet entry {a!r}")
    return frozenset(names)


@dataclass(frozen=True)
class NamedTest:
    name: str
    test: CanonicalTest


def parse_suite(text, alphabet=None, fail_sets="maximal"):
    """Parse a suite file.

    Lines are ``name = <test>`` (a trailing ``;`` is allowed),
    ``alphabet: a,b,...`` or ``pattern: g.a.*``; ``#`` starts a comment.
    A file consisting of a single bare test is accepted too.
    """
    named = []
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip().rstrip(";").strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if sep and key.strip() == "alphabet":
            alphabet = parse_alphabet(rest)
            continue
        if sep and key.strip() == "pattern":
            if not alphabet:
                raise ParseError("pattern needs an alphabet", lineno, 1)
            pattern = TracePattern.parse(rest, alphabet)
            named += [NamedTest(".".join(t.success_trace), t) for t in gen_suite(pattern, fail_sets)]
            continue
        name, sep, body = line.partition("=")
        if not sep:
            name, body = f"T{len(named) + 1}", line
        name = name.strip()
        try:
            test = parse_test(body)
        except ParseError as exc:
            raise ParseError(f"in test {name!r}: {exc}", lineno, 1) from None
        named.append(NamedTest(name, test))
    if not named:
        raise ParseError("suite contains no tests")
    return named


def dedupe(named):
    seen, out = set(), []
    for nt in named:
        if nt.test not in seen:
            seen.add(nt.test)
            out.append(nt)
    return out
