"""Abstract syntax of process terms and canonical reactive tests."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from markt.rationals import format_rational

TAU = "tau"


class TermError(ValueError):
    """A term or test violates a well-formedness condition."""


def is_visible(action):
    return action != TAU


@dataclass(frozen=True)
class Nil:
    def __str__(self):
        return format_term(self)


@dataclass(frozen=True)
class Prefix:
    action: str
    rate: Fraction
    continuation: "Term"

    def __post_init__(self):
        if not self.action:
            raise TermError("empty action name")
        if not isinstance(self.rate, Fraction):
            object.__setattr__(self, "rate", Fraction(self.rate))
        if self.rate <= 0:
            raise TermError(f"rate of <{self.action},{self.rate}> must be positive")

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True)
class Choice:
    left: "Term"
    right: "Term"

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


Term = Union[Nil, Prefix, Choice, Const]


def format_term(term):
    """Concrete syntax accepted back by :func:`markt.parser.parse_process`."""
    if isinstance(term, Nil):
        return "0"
    if isinstance(term, Const):
        return term.name
    if isinstance(term, Prefix):
        body = format_term(term.continuation)
        if isinstance(term.continuation, Choice):
            body = f"({body})"
        return f"<{term.action},{format_rational(term.rate)}>.{body}"
    if isinstance(term, Choice):
        left = format_term(term.left)
        if isinstance(term.left, Choice):
            left = f"({left})"
        return f"{left} + {format_term(term.right)}"
    raise TypeError(f"not a process term: {term!r}")


def summands(term):
    """Flatten nested choices, left to right."""
    if isinstance(term, Choice):
        return summands(term.left) + summands(term.right)
    return [term]


def choice_of(terms):
    """Right-associated choice over ``terms``; ``Nil`` for an empty list."""
    terms = list(terms)
    if not terms:
        return Nil()
    result = terms[-1]
    for t in reversed(terms[:-1]):
        result = Choice(t, result)
    return result


def constants(term):
    """All constant names occurring in ``term``."""
    if isinstance(term, Const):
        return {term.name}
    if isinstance(term, Prefix):
        return constants(term.continuation)
    if isinstance(term, Choice):
        return constants(term.left) | constants(term.right)
    return set()


def actions(term, env=None):
    """Action names occurring in ``term`` and the definitions it reaches."""
    env = env or {}
    seen, names, todo = set(), set(), [term]
    while todo:
        t = todo.pop()
        if isinstance(t, Prefix):
            names.add(t.action)
            todo.append(t.continuation)
        elif isinstance(t, Choice):
            todo.extend((t.left, t.right))
        elif isinstance(t, Const) and t.name not in seen:
            seen.add(t.name)
            if t.name in env:
                todo.append(env[t.name])
    return names


def _unguarded(term):
    if isinstance(term, Const):
        return {term.name}
    if isinstance(term, Choice):
        return _unguarded(term.left) | _unguarded(term.right)
    return set()


def validate(term, env: Mapping[str, Term]):
    """Check that ``term`` is closed and guarded under ``env``.

    Raises :class:`TermError` on an unbound constant or on a cycle of
    constants that is not broken by an action prefix.
    """
    reachable, todo = set(), [term]
    while todo:
        for name in constants(todo.pop()):
            if name not in env:
                raise TermError(f"unbound constant {name!r}")
            if name not in reachable:
                reachable.add(name)
                todo.append(env[name])

    # depth-first search for a cycle through unguarded occurrences only
    state = {}

    def visit(name, path):
        state[name] = "open"
        for nxt in sorted(_unguarded(env[name])):
            if state.get(nxt) == "open":
                cycle = " -> ".join(path + [name, nxt])
                raise TermError(f"unguarded recursion: {cycle}")
            if nxt not in state:
                visit(nxt, path + [name])
        state[name] = "done"

    for name in sorted(reachable):
        if name not in state:
            visit(name, [])


def unfold(term, env):
    """Replace an outermost constant by its body until a non-constant remains."""
    while isinstance(term, Const):
        term = env[term.name]
    return term


# --- canonical reactive tests -------------------------------------------------

SUCCESS = "s"
FAILURE = "f"


@dataclass(frozen=True)
class TestStep:
    """One level of a canonical test: a success branch plus failure branches."""

    __test__ = False

    success: str
    failures: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "failures", frozenset(self.failures))
        if self.success == TAU or TAU in self.failures:
            raise TermError("tau cannot occur in a test")
        if self.success in self.failures:
            raise TermError(f"action {self.success!r} both succeeds and fails at one step")

    @property
    def offered(self):
        return self.failures | {self.success}


@dataclass(frozen=True)
class CanonicalTest:
    """A canonical reactive test; every branch carries weight 1."""

    __test__ = False

    steps: tuple

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps:
            raise TermError("a test needs at least one step")

    def __len__(self):
        return len(self.steps)

    @property
    def success_trace(self):
        return tuple(step.success for step in self.steps)

    def __str__(self):
        return format_test(self)

    @classmethod
    def from_trace(cls, trace, failures=None):
        """Build a test from a success trace and optional per-step failure sets."""
        failures = failures or [()] * len(trace)
        return cls(tuple(TestStep(a, frozenset(f)) for a, f in zip(trace, failures)))


def format_test(test):
    text = "s"
    for i in reversed(range(len(test.steps))):
        step = test.steps[i]
        fails = "".join(f" + <{b}>.f" for b in sorted(step.failures))
        text = f"<{step.success}>.{text}{fails}"
        if i > 0 and fails:
            text = f"({text})"
    return text
