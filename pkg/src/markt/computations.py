"""Finite computations of an Lts and the duration filters over them.

Multisets of computations are plain lists. Two computations are the same
element only when their edge sequences agree including derivation indices,
so a transition with two SOS proofs contributes two list entries.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Tuple

from markt.rationals import as_fraction, parse_rational_list


@dataclass(frozen=True)
class Computation:
    start: int
    edges: tuple = ()
    trace: Tuple[str, ...] = field(default=(), compare=False)
    prob: Fraction = field(default=Fraction(1), compare=False)
    time: Tuple[Fraction, ...] = field(default=(), compare=False)

    def __len__(self):
        return len(self.edges)

    @property
    def end(self):
        return self.edges[-1].target if self.edges else self.start

    def extend(self, edge, lts):
        """Append ``edge``; its source must be the current end state."""
        if edge.source != self.end:
            raise ValueError("edge does not continue the computation")
        total = lts.rate_total(edge.source)
        return Computation(
            self.start,
            self.edges + (edge,),
            self.trace + (edge.action,),
            self.prob * edge.rate / total,
            self.time + (1 / total,),
        )

    def is_proper_prefix_of(self, other):
        return (self.start == other.start and len(self) < len(other)
                and other.edges[:len(self)] == self.edges)


def empty(start):
    return Computation(start)


def enumerate_computations(lts, start=None, max_len=0):
    """Every edge path from ``start`` of length at most ``max_len``, shortest first per branch."""
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    start = lts.initial if start is None else start
    result = []

    def walk(c):
        result.append(c)
        if len(c) < max_len:
            for e in lts.out[c.end]:
                walk(c.extend(e, lts))

    walk(Computation(start))
    return result


def trace(c):
    return c.trace


def prob(c):
    return c.prob


def time(c):
    return c.time


class IndependenceError(ValueError):
    """``prob_set`` was given computations where one prefixes another."""


def independent(cs):
    cs = list(cs)
    for i, c in enumerate(cs):
        for d in cs[i + 1:]:
            if c.is_proper_prefix_of(d) or d.is_proper_prefix_of(c):
                return False
    return True


def prob_set(cs, check=True):
    """Summed probability of a finite multiset of independent computations."""
    cs = list(cs)
    if check and not independent(cs):
        raise IndependenceError("computations are not pairwise independent")
    return sum((c.prob for c in cs), Fraction(0))


class EpsilonSpec:
    """A tolerance, either scalar or one entry per step.

    Entries past the end of a vector repeat its last entry.
    """

    def __init__(self, values):
        if isinstance(values, EpsilonSpec):
            values = values.values
        elif isinstance(values, str):
            values = parse_rational_list(values)
        elif not isinstance(values, (list, tuple)):
            values = (values,)
        values = tuple(as_fraction(v) for v in values)
        if not values:
            raise ValueError("empty epsilon vector")
        if any(v < 0 for v in values):
            raise ValueError("epsilon entries must be nonnegative")
        self.values = values

    def __getitem__(self, i):
        return self.values[min(i, len(self.values) - 1)]

    @property
    def is_scalar(self):
        return len(self.values) == 1

    @property
    def is_zero(self):
        return all(v == 0 for v in self.values)

    def __eq__(self, other):
        return isinstance(other, EpsilonSpec) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"EpsilonSpec({', '.join(map(str, self.values))})"


def as_epsilon(eps):
    return eps if isinstance(eps, EpsilonSpec) else EpsilonSpec(eps)


def within(c, theta, eps=None):
    """``|c| <= |theta|`` and ``time(c)[i] <= theta[i] (+ eps[i])`` stepwise."""
    if len(c) > len(theta):
        return False
    if eps is None:
        return all(t <= b for t, b in zip(c.time, theta))
    return all(t <= b + eps[i] for i, (t, b) in enumerate(zip(c.time, theta)))


def filter_le_theta(cs, theta):
    return [c for c in cs if within(c, theta)]


def filter_len(cs, length):
    return [c for c in cs if len(c) == length]


def filter_slow_simple(cs, theta, eps):
    eps = as_epsilon(eps)
    return [c for c in cs if within(c, theta, eps)]


def slower_within(c, ref, eps):
    """``time(ref)[i] <= time(c)[i] <= time(ref)[i] + eps[i]`` for every step of ``c``."""
    return len(c) <= len(ref) and all(
        r <= t <= r + eps[i] for i, (t, r) in enumerate(zip(c.time, ref.time)))


def close_within(c, ref, eps):
    """``|time(c)[i] - time(ref)[i]| <= eps[i]`` for every step of ``c``."""
    return len(c) <= len(ref) and all(
        abs(t - r) <= eps[i] for i, (t, r) in enumerate(zip(c.time, ref.time)))


def _filter_ref(cs, theta, refs, matches):
    refs_in = filter_le_theta(refs, theta)
    return [c for c in cs
            if within(c, theta) or any(matches(c, r) for r in refs_in)]


def filter_slow_ref(cs, theta, eps, refs):
    """Computations within ``theta``, or at most ``eps`` slower than a reference within ``theta``."""
    eps = as_epsilon(eps)
    return _filter_ref(cs, theta, refs, lambda c, r: slower_within(c, r, eps))


def filter_pm_ref(cs, theta, eps, refs):
    """As :func:`filter_slow_ref` but the reference may also be up to ``eps`` slower."""
    eps = as_epsilon(eps)
    return _filter_ref(cs, theta, refs, lambda c, r: close_within(c, r, eps))


Theta = Sequence[Fraction]


def as_theta(theta):
    if isinstance(theta, str):
        theta = parse_rational_list(theta)
    theta = tuple(as_fraction(t) for t in theta)
    if any(t <= 0 for t in theta):
        raise ValueError("theta entries must be positive")
    return theta
