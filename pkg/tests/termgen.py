"""Random process terms, term transformations and a brute-force probability oracle."""

from fractions import Fraction
import random

from markt.computations import enumerate_computations
from markt.lts import derive_lts
from markt.terms import CanonicalTest, Choice, Nil, Prefix, TestStep, choice_of, summands

RATES = (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3))
ALPHABET = ("a", "b", "c", "d")


def random_term(rng, depth=4, alphabet=ALPHABET, rates=RATES, width=3):
    if depth == 0 or rng.random() < 0.15:
        return Nil()
    k = rng.randint(1, width)
    return choice_of(
        Prefix(rng.choice(alphabet), rng.choice(rates), random_term(rng, depth - 1, alphabet, rates, width))
        for _ in range(k))


def split_rates(term, rng):
    """Replace some ``<a,2r>.P`` by ``<a,r>.P + <a,r>.P``; an equivalent term."""
    if isinstance(term, Nil):
        return term
    parts = []
    for s in summands(term):
        cont = split_rates(s.continuation, rng)
        if rng.random() < 0.4:
            half = s.rate / 2
            parts += [Prefix(s.action, half, cont), Prefix(s.action, half, cont)]
        else:
            parts.append(Prefix(s.action, s.rate, cont))
    return choice_of(parts)


def shuffle(term, rng):
    """Reorder choices at every level; an equivalent term."""
    if isinstance(term, Nil):
        return term
    parts = [Prefix(s.action, s.rate, shuffle(s.continuation, rng)) for s in summands(term)]
    rng.shuffle(parts)
    return choice_of(parts)


def perturb(term, rng, alphabet=ALPHABET, rates=RATES):
    """Change one rate or action somewhere; usually not equivalent."""
    if isinstance(term, Nil):
        return Prefix(rng.choice(alphabet), rng.choice(rates), Nil())
    parts = summands(term)
    i = rng.randrange(len(parts))
    s = parts[i]
    roll = rng.random()
    if roll < 0.4:
        parts[i] = Prefix(s.action, rng.choice(rates), s.continuation)
    elif roll < 0.6:
        parts[i] = Prefix(rng.choice(alphabet), s.rate, s.continuation)
    else:
        parts[i] = Prefix(s.action, s.rate, perturb(s.continuation, rng, alphabet, rates))
    return choice_of(parts)


def random_pair(rng):
    p1 = random_term(rng, depth=rng.randint(1, 4), alphabet=ALPHABET[:rng.randint(1, 4)])
    roll = rng.random()
    if roll < 0.35:
        p2 = shuffle(split_rates(p1, rng), rng)
    elif roll < 0.8:
        p2 = perturb(p1, rng)
    else:
        p2 = random_term(rng, depth=rng.randint(1, 4), alphabet=ALPHABET[:rng.randint(1, 4)])
    return p1, p2


def stretch(term, eps):
    """Slow every state down so each mean sojourn time grows by exactly ``eps``."""
    if isinstance(term, Nil):
        return term
    parts = summands(term)
    total = sum(s.rate for s in parts)
    factor = 1 / (1 + eps * total)  # new total = 1 / (1/total + eps)
    return choice_of(Prefix(s.action, s.rate * factor, stretch(s.continuation, eps)) for s in parts)


def traces_of(*terms, max_len=4):
    found = set()
    for t in terms:
        lts = derive_lts(t)
        for c in enumerate_computations(lts, lts.initial, max_len):
            if c.trace:
                found.add(c.trace)
    return sorted(found)


def suite_for(*terms, max_len=4):
    """Tests whose success traces are traces of the terms, maximal and empty failure sets."""
    traces = traces_of(*terms, max_len=max_len)
    alphabet = frozenset(a for tr in traces for a in tr)
    suite = []
    for tr in traces:
        suite.append(CanonicalTest(tuple(TestStep(a, alphabet - {a}) for a in tr)))
        suite.append(CanonicalTest(tuple(TestStep(a) for a in tr)))
    return suite


def brute_prob(lts, test, theta):
    """Probability of succeeding in exactly ``len(theta)`` steps within ``theta``.

    Works on the process Lts directly for tau-free processes: no interaction
    system, no computation lists, no filters.
    """
    theta = tuple(theta)

    def go(state, pos):
        if pos >= len(theta):
            return Fraction(0)
        step = test.steps[pos]
        enabled = [e for e in lts.out[state] if e.action in step.offered]
        if not enabled:
            return Fraction(0)
        total = sum(e.rate for e in enabled)
        if 1 / total > theta[pos]:
            return Fraction(0)
        acc = Fraction(0)
        for e in enabled:
            if e.action != step.success:
                continue
            if pos + 1 == len(test):
                if pos + 1 == len(theta):
                    acc += e.rate / total
            else:
                acc += e.rate / total * go(e.target, pos + 1)
        return acc

    return go(lts.initial, 0)
