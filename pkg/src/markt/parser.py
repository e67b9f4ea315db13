"""Recursive-descent parser for the process and test DSL.

Processes::

    process ::= summand ("+" process)?
    summand ::= "0" | "<" name "," rate ">" "." summand | IDENT | "(" process ")"
    rate    ::= DECIMAL | INT "/" INT
    def     ::= IDENT "=" process ";"

Tests::

    test    ::= branch ("+" test)?
    branch  ::= "<" name ">" "." (s | f | branch) | "(" test ")"

``+`` is right-associative and binds weaker than prefix.
"""

from dataclasses import dataclass
from fractions import Fraction
import re

from markt.terms import (
    TAU, CanonicalTest, Choice, Const, Nil, Prefix, TermError, TestStep, validate,
)

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<comment>(?:#|//)[^\n]*)"
    r"|(?P<num>\d+(?:\.\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<sym>[<>,.+()=;/:*|\"])"
)


class ParseError(TermError):
    """Syntax or validation error with a source position."""

    def __init__(self, message, line=None, col=None):
        self.line, self.col = line, col
        where = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(message + where)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text):
    tokens, pos, line, line_start = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        for i, ch in enumerate(m.group()):
            if ch == "\n":
                line, line_start = line + 1, pos + i + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def at(self, text):
        return self.tok.kind in ("sym", "ident", "num") and self.tok.text == text

    def expect(self, text):
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        tok = self.tok
        self.i += 1
        return tok

    def ident(self, what="identifier"):
        if self.tok.kind != "ident":
            found = self.tok.text or "end of input"
            raise self.error(f"expected {what}, found {found!r}")
        tok = self.tok
        self.i += 1
        return tok.text

    def end(self):
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")

    # processes

    def process(self):
        left = self.summand()
        if self.at("+"):
            self.i += 1
            return Choice(left, self.process())
        return left

    def summand(self):
        tok = self.tok
        if tok.kind == "num" and tok.text == "0" or self.at("nil"):
            self.i += 1
            return Nil()
        if self.at("("):
            self.i += 1
            inner = self.process()
            self.expect(")")
            return inner
        if self.at("<"):
            self.i += 1
            action = self.ident("action name")
            self.expect(",")
            rate_tok = self.tok
            rate = self.rate()
            self.expect(">")
            self.expect(".")
            if rate <= 0:
                raise self.error(f"rate must be positive, got {rate}", rate_tok)
            return Prefix(action, rate, self.summand())
        if tok.kind == "ident":
            self.i += 1
            return Const(tok.text)
        raise self.error(f"expected a process, found {tok.text or 'end of input'!r}")

    def rate(self):
        tok = self.tok
        if tok.kind != "num":
            raise self.error(f"expected a rate, found {tok.text or 'end of input'!r}")
        self.i += 1
        if self.at("/"):
            self.i += 1
            den = self.tok
            if den.kind != "num" or "." in den.text or "." in tok.text:
                raise self.error("a fractional rate needs integer numerator and denominator", den)
            self.i += 1
            if int(den.text) == 0:
                raise self.error("zero denominator", den)
            return Fraction(int(tok.text), int(den.text))
        return Fraction(tok.text)

    def definitions(self):
        env, order = {}, []
        while self.tok.kind != "eof":
            name_tok = self.tok
            name = self.ident("constant name")
            self.expect("=")
            body = self.process()
            self.expect(";")
            if name in env:
                raise self.error(f"constant {name!r} defined twice", name_tok)
            env[name] = body
            order.append(name)
        return env, order

    # tests

    def test_sum(self):
        branches = self.test_branch()
        if self.at("+"):
            self.i += 1
            branches = branches + self.test_sum()
        return branches

    def test_branch(self):
        if self.at("("):
            self.i += 1
            inner = self.test_sum()
            self.expect(")")
            return inner
        start = self.tok
        self.expect("<")
        action = self.ident("action name")
        self.expect(">")
        self.expect(".")
        if self.at("s") or self.at("f"):
            cont = self.tok.text
            self.i += 1
        else:
            cont = self.test_branch()
        return [(action, cont, start)]


def _canonical_steps(branches, parser):
    success = [b for b in branches if b[1] != "f"]
    if len(success) != 1:
        tok = (success[1] if len(success) > 1 else branches[0])[2]
        raise parser.error(
            f"a canonical test needs exactly one success branch per step, found {len(success)}", tok)
    seen = set()
    for action, _, tok in branches:
        if action == TAU:
            raise parser.error("tau cannot occur in a test", tok)
        if action in seen:
            raise parser.error(f"duplicate action {action!r} within one step", tok)
        seen.add(action)
    action, cont, _ = success[0]
    step = TestStep(action, frozenset(b[0] for b in branches if b[1] == "f"))
    if cont == "s":
        return [step]
    return [step] + _canonical_steps(cont, parser)


def parse_process(text, env=None):
    """Parse one process term and check it is closed and guarded under ``env``."""
    env = dict(env or {})
    p = _Parser(text)
    term = p.process()
    p.end()
    validate(term, env)
    return term


def parse_definitions(text):
    """Parse ``IDENT = process;`` definitions into an environment (a dict)."""
    p = _Parser(text)
    env, _ = p.definitions()
    for body in env.values():
        validate(body, env)
    return env


@dataclass(frozen=True)
class Model:
    """A model file: definitions plus the distinguished ``main`` term."""

    main: object
    env: dict


def parse_model(text, main="main"):
    env = parse_definitions(text)
    if main not in env:
        raise ParseError(f"model has no {main!r} definition")
    return Model(env[main], env)


def parse_test(text):
    """Parse a canonical reactive test, e.g. ``"<a>.s + <b>.f"``."""
    p = _Parser(text)
    branches = p.test_sum()
    p.end()
    return CanonicalTest(tuple(_canonical_steps(branches, p)))
