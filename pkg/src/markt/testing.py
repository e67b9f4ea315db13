"""Process/test interaction systems and behavioral precision/recall of tests."""

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

from markt.computations import Computation
from markt.lts import DEFAULT_CAP, Edge, Lts, StateCapExceeded
from markt.terms import FAILURE, SUCCESS, TAU

TestPosition = Union[int, str]


class Configuration(NamedTuple):
    """A state of ``P || T``: process state index and test position.

    The test position is a 0-based step index, ``"s"`` or ``"f"``.
    """

    process: int
    test: TestPosition

    @property
    def successful(self):
        return self.test == SUCCESS


def weight(test, position, action):
    """Total weight of the test's ``action`` branches at ``position``.

    Canonical tests give every branch weight 1, so this is 0 or 1.
    """
    if position in (SUCCESS, FAILURE):
        return Fraction(0)
    step = test.steps[position]
    return Fraction(int(action == step.success) + int(action in step.failures))


def _test_moves(test, position, action):
    # (branch label, weight, next position) for each test branch named ``action``
    if position in (SUCCESS, FAILURE):
        return []
    step = test.steps[position]
    moves = []
    if action == step.success:
        nxt = position + 1 if position + 1 < len(test) else SUCCESS
        moves.append(("s", Fraction(1), nxt))
    if action in step.failures:
        moves.append(("f", Fraction(1), FAILURE))
    return moves


def interaction_lts(process, test, cap=DEFAULT_CAP):
    """The interaction system of ``process`` (an :class:`Lts`) and ``test``.

    Invisible moves of the process go ahead without touching the test;
    a visible move synchronises with an equally named test branch at rate
    ``rate * w / weight(T, a)`` and is blocked when there is none.
    """
    root = Configuration(process.initial, 0)
    states, index, edges = [root], {root: 0}, []
    todo = deque([0])
    while todo:
        src = todo.popleft()
        conf = states[src]
        for e in process.out[conf.process]:
            if e.action == TAU:
                moves = [("tau", None, conf.test)]
            else:
                moves = _test_moves(test, conf.test, e.action)
            for label, w, position in moves:
                target = Configuration(e.target, position)
                if target not in index:
                    if len(states) >= cap:
                        raise StateCapExceeded(f"more than {cap} reachable configurations")
                    index[target] = len(states)
                    states.append(target)
                    todo.append(index[target])
                r = e.rate if w is None else e.rate * w / weight(test, conf.test, e.action)
                edges.append(Edge(src, e.action, r, (e.deriv, label), index[target]))
    return Lts(states, edges, 0)


def successful_computations(process, test, max_len=None, cap=DEFAULT_CAP):
    """Successful test-driven computations of length at most ``max_len``.

    Each computation stops at the first successful configuration it reaches,
    which keeps the result pairwise independent. ``max_len`` defaults to
    ``len(test)``.
    """
    max_len = len(test) if max_len is None else max_len
    if max_len < len(test):
        raise ValueError("max_len must be at least the test length")
    system = interaction_lts(process, test, cap)
    found = []

    def walk(c):
        conf = system.states[c.end]
        if conf.test == SUCCESS:
            found.append(c)
            return
        if conf.test == FAILURE or len(c) == max_len:
            return
        for e in system.out[c.end]:
            walk(c.extend(e, system))

    walk(Computation(system.initial))
    return found


# --- precision and recall ----------------------------------------------------

def enabled(test, i, kind):
    """Actions enabled at 1-based step ``i``: ``kind`` is ``"s"`` or ``"f"``."""
    if i < 1 or i > len(test):
        return frozenset()
    step = test.steps[i - 1]
    if kind == "s":
        return frozenset([step.success])
    if kind == "f":
        return step.failures
    raise ValueError(f"kind must be 's' or 'f', got {kind!r}")


def _overlap(t, u, i):
    return len((enabled(t, i, "s") & enabled(u, i, "s")) | (enabled(t, i, "f") & enabled(u, i, "f")))


def _fitness(t, u, base):
    n = len(base)
    total = Fraction(0)
    for i in range(1, n + 1):
        total += Fraction(_overlap(t, u, i), len(enabled(base, i, "f")) + len(enabled(base, i, "s")))
    return total / n


def precision(t, u):
    """How much of ``u``'s behaviour is possible according to ``t``."""
    return _fitness(t, u, u)


def recall(t, u):
    """How much of ``t``'s behaviour is covered by ``u``."""
    return _fitness(t, u, t)


class PrecRec(NamedTuple):
    precision: Fraction
    recall: Fraction


def prec_rec(t, u):
    return PrecRec(precision(t, u), recall(t, u))


@dataclass(frozen=True)
class Bound:
    """A constraint ``value <relation> bound`` with relation one of = <= < >=."""

    relation: str
    bound: Fraction

    def admits(self, value):
        return {
            "=": value == self.bound,
            "<=": value <= self.bound,
            "<": value < self.bound,
            ">=": value >= self.bound,
        }[self.relation]

    def __str__(self):
        return f"{self.relation} {self.bound}"


# (prec12 is 1, rec12 is 1, prec23 is 1, rec23 is 1) -> (prec13, rec13);
# symbols name the input that gives the bound, "1" the constant.
_TRANSITIVITY = {
    (False, False, False, False): (("<=", "1"), ("<=", "1")),
    (False, False, False, True): (("<", "1"), (">=", "w")),
    (False, False, True, False): (("<=", "1"), ("<=", "w")),
    (False, False, True, True): (("=", "z"), ("=", "w")),
    (False, True, False, False): (("<=", "x"), ("<=", "1")),
    (False, True, False, True): (("<", "x"), ("=", "1")),
    (False, True, True, False): (("<=", "1"), ("<=", "1")),
    (False, True, True, True): (("=", "z"), ("=", "1")),
    (True, False, False, False): ((">=", "x"), ("<=", "1")),
    (True, False, False, True): ((">=", "x"), (">=", "w")),
    (True, False, True, False): (("=", "1"), ("<", "w")),
    (True, False, True, True): (("=", "1"), ("=", "w")),
    (True, True, False, False): (("=", "x"), ("=", "y")),
    (True, True, False, True): (("=", "x"), ("=", "1")),
    (True, True, True, False): (("=", "1"), ("=", "y")),
    (True, True, True, True): (("=", "1"), ("=", "1")),
}


def compose_prec_rec(prec12, rec12, prec23, rec23):
    """Bounds on ``(prec(T1,T3), rec(T1,T3))`` from the two known pairs.

    Follows the standard transitivity table for precision and recall,
    selecting the row by which of the four inputs equal 1.
    """
    values = {"z": prec12, "w": rec12, "x": prec23, "y": rec23, "1": Fraction(1)}
    for v in (prec12, rec12, prec23, rec23):
        if not 0 <= v <= 1:
            raise ValueError("precision and recall lie in [0, 1]")
    row = _TRANSITIVITY[tuple(Fraction(v) == 1 for v in (prec12, rec12, prec23, rec23))]
    return tuple(Bound(rel, Fraction(values[sym])) for rel, sym in row)
