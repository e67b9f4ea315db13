"""Labeled multitransition systems, their derivation from terms, and CTMCs."""

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Tuple

from markt.terms import Choice, Const, Prefix, TAU, unfold, validate

DEFAULT_CAP = 10_000


class StateCapExceeded(RuntimeError):
    """Exploration reached more states than the configured cap."""


@dataclass(frozen=True)
class Edge:
    """One derivation of a transition ``source --action,rate--> target``.

    ``deriv`` records the proof tree (choice sides, constant unfoldings) so
    that two proofs of the same labelled transition stay distinct edges.
    """

    source: int
    action: str
    rate: Fraction
    deriv: Hashable
    target: int


class Lts:
    """An immutable labelled multitransition system over indexed states."""

    def __init__(self, states, edges, initial=0):
        self.states: Tuple = tuple(states)
        self.edges: Tuple[Edge, ...] = tuple(edges)
        self.initial = initial
        out = [[] for _ in self.states]
        for e in self.edges:
            out[e.source].append(e)
        self.out = tuple(tuple(es) for es in out)
        self._totals = tuple(sum((e.rate for e in es), Fraction(0)) for es in self.out)
        self._index = {s: i for i, s in enumerate(self.states)}

    def __len__(self):
        return len(self.states)

    def index(self, state):
        return self._index[state]

    def rate(self, state, action, targets=None):
        """Summed rate of ``action``-edges from ``state`` into ``targets`` (all if None)."""
        return sum(
            (e.rate for e in self.out[state]
             if e.action == action and (targets is None or e.target in targets)),
            Fraction(0),
        )

    def rate_total(self, state):
        return self._totals[state]

    @property
    def has_tau(self):
        return any(e.action == TAU for e in self.edges)

    @property
    def actions(self):
        return frozenset(e.action for e in self.edges)

    def __repr__(self):
        return f"Lts({len(self.states)} states, {len(self.edges)} edges)"


def rate(lts, state, action, targets=None):
    return lts.rate(state, action, targets)


def rate_total(lts, state):
    return lts.rate_total(state)


def _derivations(term, env, path=""):
    # yields (action, rate, derivation path, target term)
    if isinstance(term, Prefix):
        yield term.action, term.rate, path, term.continuation
    elif isinstance(term, Choice):
        yield from _derivations(term.left, env, path + "L")
        yield from _derivations(term.right, env, path + "R")
    elif isinstance(term, Const):
        yield from _derivations(env[term.name], env, path + "C")


def derive_lts(term, env=None, cap=DEFAULT_CAP):
    """Explore the reachable multitransition system of ``term``.

    States are terms with outermost constants unfolded; each SOS proof of a
    transition becomes its own :class:`Edge`.
    """
    env = dict(env or {})
    validate(term, env)
    root = unfold(term, env)
    states, index, edges = [root], {root: 0}, []
    todo = deque([0])
    while todo:
        src = todo.popleft()
        for action, rate_, deriv, target in _derivations(states[src], env):
            target = unfold(target, env)
            if target not in index:
                if len(states) >= cap:
                    raise StateCapExceeded(f"more than {cap} reachable states")
                index[target] = len(states)
                states.append(target)
                todo.append(index[target])
            edges.append(Edge(src, action, rate_, deriv, index[target]))
    return Lts(states, edges, 0)


@dataclass(frozen=True)
class Ctmc:
    states: tuple
    transitions: dict  # (source, target) -> rate

    def exit_rate(self, state):
        return sum((r for (s, _), r in self.transitions.items() if s == state), Fraction(0))


def to_ctmc(lts):
    """Drop action names and sum the rates between each ordered state pair."""
    transitions = {}
    for e in lts.edges:
        key = (e.source, e.target)
        transitions[key] = transitions.get(key, Fraction(0)) + e.rate
    return Ctmc(lts.states, dict(sorted(transitions.items())))

