"""Exact and approximate Markovian testing checks over a finite test suite.

Every check compares success probabilities of two processes under tests of
the suite, for finitely many duration bounds ``theta``:

* the exact check and the behavioral/unified checks use the canonical
  sets ``Theta(P1, T) | Theta(P2, T')`` (stepwise maxima over subsets of
  successful computations);
* checks quantified over *all* bounds (slow, fast, temporal, probabilistic)
  additionally scan a decision grid: one interior point of every region on
  which the compared computation sets stay constant.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import chain
from typing import Optional, Tuple
import warnings

from markt.computations import (
    EpsilonSpec, as_epsilon, filter_le_theta, filter_len, filter_pm_ref,
    filter_slow_ref, filter_slow_simple, prob_set,
)
from markt.lts import DEFAULT_CAP, Lts, derive_lts
from markt.parser import Model, parse_process
from markt.rationals import as_fraction
from markt.terms import Choice, Const, Nil, Prefix
from markt.testing import precision, recall, successful_computations

TAU_BUDGET = 3


class CompletenessWarning(UserWarning):
    """A verdict may miss distinctions (invisible actions, unequal test lengths)."""


def as_lts(process, cap=DEFAULT_CAP):
    """Accept an :class:`Lts`, a term, a :class:`Model` or DSL source text."""
    if isinstance(process, Lts):
        return process
    if isinstance(process, Model):
        return derive_lts(process.main, process.env, cap)
    if isinstance(process, (Nil, Prefix, Choice, Const)):
        return derive_lts(process, {}, cap)
    if isinstance(process, str):
        return derive_lts(parse_process(process), {}, cap)
    raise TypeError(f"cannot build an Lts from {type(process).__name__}")


# --- canonical theta sets ----------------------------------------------------

def _join(u, v):
    return tuple(max(a, b) for a, b in zip(u, v))


def _max_closure(vectors):
    closed = set()
    for v in vectors:
        closed |= {_join(v, w) for w in closed} | {v}
    return closed


@dataclass(frozen=True)
class ThetaSet:
    """Canonical duration bounds with, for each, the largest subset realising it."""

    thetas: Tuple[tuple, ...]
    provenance: dict = field(compare=False, default_factory=dict)

    def __iter__(self):
        return iter(self.thetas)

    def __len__(self):
        return len(self.thetas)

    def __contains__(self, theta):
        return tuple(theta) in self.thetas


def theta_set(computations):
    """``{theta_X}`` over nonempty subsets X of ``computations``.

    ``theta_X`` is the stepwise maximum of sojourn times over X, and
    ``theta_{X | Y}`` is the join of ``theta_X`` and ``theta_Y``, so the set
    is the join-closure of the individual duration vectors. Computations of
    different lengths are grouped separately.
    """
    by_len = {}
    for c in computations:
        by_len.setdefault(len(c), []).append(c)
    thetas, provenance = [], {}
    for length in sorted(by_len):
        group = by_len[length]
        for theta in sorted(_max_closure(c.time for c in group)):
            thetas.append(theta)
            provenance[theta] = frozenset(
                i for i, c in enumerate(computations)
                if len(c) == length and all(t <= b for t, b in zip(c.time, theta)))
    return ThetaSet(tuple(thetas), provenance)


def theta_canonical(process, test, max_len=None, cap=DEFAULT_CAP):
    """Canonical theta set of ``process`` for ``test``."""
    lts = as_lts(process, cap)
    return theta_set(successful_computations(lts, test, max_len, cap))


def decision_grid(vectors, length):
    """Interior points of every region cut out by ``theta >= v`` for ``v`` in ``vectors``.

    Coordinates equal to 0 mean "no constraint". Each join of a subset of
    ``vectors`` (and the empty join) is lifted halfway towards the next
    breakpoint in every coordinate, which keeps the set of satisfied
    constraints unchanged while moving off the region's boundary.
    """
    vectors = [tuple(v) for v in vectors if len(v) == length]
    cuts = [sorted({v[i] for v in vectors if v[i] > 0}) for i in range(length)]

    def lift(x, i):
        above = [b for b in cuts[i] if b > x]
        if above:
            return (x + above[0]) / 2
        return x if x > 0 else Fraction(1)

    zero = tuple(Fraction(0) for _ in range(length))
    points = _max_closure(vectors) | {zero}
    return sorted({tuple(lift(x, i) for i, x in enumerate(p)) for p in points})


# --- verdicts ----------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    test: object
    matched: Optional[object]
    theta: Optional[tuple]
    prob_left: Fraction
    prob_right: Fraction


@dataclass(frozen=True)
class SimilarityVerdict:
    relation: str
    holds: bool
    witnesses: Tuple[Witness, ...] = ()
    minimal_epsilon: Optional[Fraction] = None
    minimal_nu: Optional[Fraction] = None
    warnings: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.holds and not self.witnesses:
            raise ValueError("a failed verdict needs a witness")

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class SimilarityParams:
    precision: Fraction = Fraction(1)
    recall: Fraction = Fraction(1)
    epsilon: EpsilonSpec = field(default_factory=lambda: EpsilonSpec(0))
    nu: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "precision", as_fraction(self.precision))
        object.__setattr__(self, "recall", as_fraction(self.recall))
        object.__setattr__(self, "epsilon", as_epsilon(self.epsilon))
        object.__setattr__(self, "nu", as_fraction(self.nu))
        if not (0 <= self.precision <= 1 and 0 <= self.recall <= 1):
            raise ValueError("precision and recall floors lie in [0, 1]")
        if self.nu < 0:
            raise ValueError("nu must be nonnegative")


class _Checker:
    """Shared state of one check: both systems and their successful computations."""

    def __init__(self, p1, p2, max_len=None, cap=DEFAULT_CAP):
        self.lts = (as_lts(p1, cap), as_lts(p2, cap))
        self.max_len, self.cap = max_len, cap
        self.notes = []
        self._sc = {}

    def budget(self, test):
        if self.max_len is not None:
            if self.max_len < len(test):
                raise ValueError(f"max_len {self.max_len} is shorter than test {test}")
            return self.max_len
        if any(lts.has_tau for lts in self.lts):
            self.note("invisible actions present: computations explored up to "
                      f"|T| + {TAU_BUDGET} steps, completeness not guaranteed")
            return len(test) + TAU_BUDGET
        return len(test)

    def note(self, message):
        if message not in self.notes:
            self.notes.append(message)
            warnings.warn(message, CompletenessWarning, stacklevel=3)

    def sc(self, side, test, budget=None):
        budget = self.budget(test) if budget is None else budget
        key = (side, test, budget)
        if key not in self._sc:
            self._sc[key] = successful_computations(self.lts[side], test, budget, self.cap)
        return self._sc[key]

    def verdict(self, relation, witnesses, **extra):
        return SimilarityVerdict(relation, not witnesses, tuple(witnesses),
                                 warnings=tuple(self.notes), **extra)


def _lengths(*groups):
    return sorted({len(c) for c in chain(*groups)})


def _scan(c1, c2, thetas, compare):
    """First theta (in order) where ``compare`` fails, as ``(theta, left, right)``."""
    for theta in thetas:
        a = filter_len(c1, len(theta))
        b = filter_len(c2, len(theta))
        left, right, ok = compare(a, b, theta)
        if not ok:
            return theta, left, right
    return None


def _canonical_thetas(c1, c2):
    return sorted(set(theta_set(c1).thetas) | set(theta_set(c2).thetas), key=lambda t: (len(t), t))


def _enriched_thetas(c1, c2, shifted=None):
    """Canonical thetas followed by decision-grid points not already listed."""
    canonical = _canonical_thetas(c1, c2)
    seen, extra = set(canonical), []
    for length in _lengths(c1, c2):
        vectors = [c.time for c in chain(c1, c2) if len(c) == length]
        if shifted is not None:
            vectors += [s for s in shifted if len(s) == length]
        for theta in decision_grid(vectors, length):
            if theta not in seen:
                seen.add(theta)
                extra.append(theta)
    return canonical + extra


def _equal(left, right):
    return left, right, left == right


def _per_test(checker, suite, thetas_for, compare):
    witnesses = []
    for test in suite:
        c1, c2 = checker.sc(0, test), checker.sc(1, test)
        bad = _scan(c1, c2, thetas_for(c1, c2), compare)
        if bad:
            theta, left, right = bad
            witnesses.append(Witness(test, None, theta, left, right))
    return witnesses


def check_mt_equiv(p1, p2, suite, *, max_len=None, cap=DEFAULT_CAP):
    """Markovian testing equivalence restricted to the tests in ``suite``."""
    checker = _Checker(p1, p2, max_len, cap)

    def compare(a, b, theta):
        return _equal(prob_set(filter_le_theta(a, theta)), prob_set(filter_le_theta(b, theta)))

    return checker.verdict("equiv", _per_test(checker, suite, _canonical_thetas, compare))


def _shift_down(cs, eps):
    return [tuple(max(t - eps[i], Fraction(0)) for i, t in enumerate(c.time)) for c in cs]


def check_slow_simple(p1, p2, eps, suite, *, max_len=None, cap=DEFAULT_CAP):
    """P2 slow-similar to P1, first form: P2's durations may exceed theta by ``eps``.

    Not monotone in ``eps``: a larger tolerance can admit P2 computations
    for bounds that already reject every computation of P1.
    """
    eps = as_epsilon(eps)
    checker = _Checker(p1, p2, max_len, cap)

    def compare(a, b, theta):
        return _equal(prob_set(filter_le_theta(a, theta)),
                      prob_set(filter_slow_simple(b, theta, eps)))

    def thetas(c1, c2):
        return _enriched_thetas(c1, c2, _shift_down(c2, eps))

    return checker.verdict("slow-simple", _per_test(checker, suite, thetas, compare))


def check_slow(p1, p2, eps, suite, *, max_len=None, cap=DEFAULT_CAP):
    """P2 slow-similar to P1: P2 computations at most ``eps`` slower than a P1 computation count."""
    eps = as_epsilon(eps)
    checker = _Checker(p1, p2, max_len, cap)

    def compare(a, b, theta):
        return _equal(prob_set(filter_le_theta(a, theta)),
                      prob_set(filter_slow_ref(b, theta, eps, a)))

    return checker.verdict("slow", _per_test(checker, suite, _enriched_thetas, compare))


def check_fast(p1, p2, eps, suite, *, max_len=None, cap=DEFAULT_CAP):
    """P2 fast-similar to P1: P1 computations at most ``eps`` slower than a P2 computation count."""
    eps = as_epsilon(eps)
    checker = _Checker(p1, p2, max_len, cap)

    def compare(a, b, theta):
        return _equal(prob_set(filter_slow_ref(a, theta, eps, b)),
                      prob_set(filter_le_theta(b, theta)))

    return checker.verdict("fast", _per_test(checker, suite, _enriched_thetas, compare))


def check_temporal(p1, p2, eps, suite, two_sided=False, *, max_len=None, cap=DEFAULT_CAP):
    """Temporal similarity; ``two_sided`` lets each step deviate by ``eps`` either way."""
    eps = as_epsilon(eps)
    checker = _Checker(p1, p2, max_len, cap)
    ref = filter_pm_ref if two_sided else filter_slow_ref

    def compare(a, b, theta):
        return _equal(prob_set(ref(a, theta, eps, b)), prob_set(ref(b, theta, eps, a)))

    relation = "temporal-pm" if two_sided else "temporal"
    return checker.verdict(relation, _per_test(checker, suite, _enriched_thetas, compare))


def check_prob(p1, p2, nu, suite, *, max_len=None, cap=DEFAULT_CAP):
    """Success probabilities differ by at most ``nu`` for every test and bound.

    The reported ``minimal_nu`` is the largest difference found, i.e. the
    smallest ``nu`` for which the check holds on this suite.
    """
    nu = as_fraction(nu)
    checker = _Checker(p1, p2, max_len, cap)
    witnesses, worst = [], Fraction(0)
    for test in suite:
        c1, c2 = checker.sc(0, test), checker.sc(1, test)
        first = None
        for theta in _enriched_thetas(c1, c2):
            left = prob_set(filter_le_theta(filter_len(c1, len(theta)), theta))
            right = prob_set(filter_le_theta(filter_len(c2, len(theta)), theta))
            worst = max(worst, abs(left - right))
            if first is None and abs(left - right) > nu:
                first = Witness(test, None, theta, left, right)
        if first:
            witnesses.append(first)
    return checker.verdict("prob", witnesses, minimal_nu=worst)


# --- behavioral and unified checks ---------------------------------------------

def _candidates(test, suite, p, r, same_length, checker):
    ordered = [test] + [u for u in suite if u != test]
    for u in ordered:
        if same_length and len(u) != len(test):
            checker.note("timed comparison skips test pairs of different lengths")
            continue
        if precision(test, u) >= p and recall(test, u) >= r:
            yield u


def _matching(checker, suite, p, r, same_length, attempt):
    """For each T find some T' meeting the floors for which ``attempt`` succeeds."""
    suite = list(suite)
    witnesses = []
    for test in suite:
        first_failure = None
        matched = False
        for u in _candidates(test, suite, p, r, same_length, checker):
            failure = attempt(test, u)
            if failure is None:
                matched = True
                break
            first_failure = first_failure or failure
        if not matched:
            theta, left, right = first_failure or (None, None, None)
            if left is None:
                left = prob_set(checker.sc(0, test))
                right = Fraction(0)
            witnesses.append(Witness(test, None, theta, left, right))
    return witnesses


def check_behavioral(p1, p2, p, r, suite, timed=False, *, max_len=None, cap=DEFAULT_CAP):
    """Each test T has a partner T' with ``prec >= p``, ``rec >= r`` and equal success probability.

    Untimed, whole success probabilities are compared; timed, they are
    compared for every bound in ``Theta(P1, T) | Theta(P2, T')``.
    """
    p, r = as_fraction(p), as_fraction(r)
    checker = _Checker(p1, p2, max_len, cap)

    def attempt(t, u):
        c1, c2 = checker.sc(0, t), checker.sc(1, u)
        if not timed:
            left, right = prob_set(c1), prob_set(c2)
            return None if left == right else (None, left, right)

        def compare(a, b, theta):
            return _equal(prob_set(filter_le_theta(a, theta)), prob_set(filter_le_theta(b, theta)))

        return _scan(c1, c2, _canonical_thetas(c1, c2), compare)

    relation = "behavioral-timed" if timed else "behavioral"
    witnesses = _matching(checker, suite, p, r, timed, attempt)
    return checker.verdict(relation, witnesses)


def check_unified(p1, p2, params, suite, *, max_len=None, cap=DEFAULT_CAP):
    """Precision/recall floors, temporal tolerance and probability tolerance combined."""
    eps, nu = params.epsilon, params.nu
    checker = _Checker(p1, p2, max_len, cap)

    def compare(a, b, theta):
        left = prob_set(filter_pm_ref(a, theta, eps, b))
        right = prob_set(filter_pm_ref(b, theta, eps, a))
        return left, right, abs(left - right) <= nu

    def attempt(t, u):
        c1, c2 = checker.sc(0, t), checker.sc(1, u)
        return _scan(c1, c2, _canonical_thetas(c1, c2), compare)

    witnesses = _matching(checker, suite, params.precision, params.recall, False, attempt)
    return checker.verdict("unified", witnesses)


# --- thresholds ----------------------------------------------------------------

EPSILON_MODES = {
    "slow": check_slow,
    "slow-simple": check_slow_simple,
    "fast": check_fast,
    "temporal": lambda p1, p2, eps, suite, **kw: check_temporal(p1, p2, eps, suite, False, **kw),
    "temporal-pm": lambda p1, p2, eps, suite, **kw: check_temporal(p1, p2, eps, suite, True, **kw),
}


def epsilon_candidates(p1, p2, suite, *, max_len=None, cap=DEFAULT_CAP):
    """``{0}`` plus every stepwise sojourn-time gap between a P1 and a P2 computation."""
    checker = _Checker(p1, p2, max_len, cap)
    found = {Fraction(0)}
    for test in suite:
        c1, c2 = checker.sc(0, test), checker.sc(1, test)
        for a in c1:
            for b in c2:
                if len(a) == len(b):
                    found |= {abs(x - y) for x, y in zip(a.time, b.time)}
    return sorted(found)


def min_epsilon(p1, p2, suite, mode="slow", *, max_len=None, cap=DEFAULT_CAP):
    """Smallest candidate tolerance for which the ``mode`` check holds, or None."""
    return min_epsilon_verdict(p1, p2, suite, mode, max_len=max_len, cap=cap).minimal_epsilon


def min_epsilon_verdict(p1, p2, suite, mode="slow", *, max_len=None, cap=DEFAULT_CAP):
    if mode not in EPSILON_MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {sorted(EPSILON_MODES)}")
    check = EPSILON_MODES[mode]
    lts1, lts2 = as_lts(p1, cap), as_lts(p2, cap)
    suite = list(suite)
    last = None
    for eps in epsilon_candidates(lts1, lts2, suite, max_len=max_len, cap=cap):
        last = check(lts1, lts2, eps, suite, max_len=max_len, cap=cap)
        if last.holds:
            return SimilarityVerdict(f"min-epsilon:{mode}", True, (), eps, warnings=last.warnings)
    return SimilarityVerdict(f"min-epsilon:{mode}", False, last.witnesses, None, warnings=last.warnings)


def compose_epsilon(eps1, eps2):
    """Tolerance guaranteed for P1 vs P3 from P1 vs P2 at ``eps1`` and P2 vs P3 at ``eps2``."""
    a, b = as_epsilon(eps1), as_epsilon(eps2)
    if a.is_scalar and b.is_scalar:
        return a[0] + b[0]
    n = max(len(a.values), len(b.values))
    return EpsilonSpec([a[i] + b[i] for i in range(n)])
