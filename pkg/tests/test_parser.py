from fractions import Fraction

from hypothesis import given, settings, strategies as st
import pytest

from markt.parser import ParseError, parse_definitions, parse_model, parse_process, parse_test
from markt.terms import (
    CanonicalTest, Choice, Const, Nil, Prefix, TermError, TestStep, format_term, format_test,
)
from termgen import random_term
import random


def test_single_prefix():
    assert parse_process("<a,1>.0") == Prefix("a", Fraction(1), Nil())


def test_nested_prefix_chain():
    t = parse_process("<g,2>.<a,2>.0")
    assert t == Prefix("g", Fraction(2), Prefix("a", Fraction(2), Nil()))


def test_duplicate_branches_kept():
    t = parse_process("<a,1>.0 + <a,1>.0")
    assert isinstance(t, Choice)
    assert t.left == t.right == Prefix("a", Fraction(1), Nil())


def test_rates_decimal_and_fraction():
    assert parse_process("<a,1/3>.0").rate == Fraction(1, 3)
    assert parse_process("<a,0.25>.0").rate == Fraction(1, 4)


@pytest.mark.parametrize("text", ["<a,0>.0", "<a,-1>.0", "<a,1>", "<a,1>.0 +", "<,1>.0", "<a 1>.0"])
def test_bad_processes(text):
    with pytest.raises(TermError):
        parse_process(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_process("<a,1>.0 +\n  <b,x>.0")
    assert info.value.line == 2


def test_constants_and_guardedness():
    env = parse_definitions("A = <a,1>.B; B = <b,2>.A;")
    assert set(env) == {"A", "B"}
    model = parse_model("A = <a,1>.A; main = A + <b,1>.0;")
    assert isinstance(model.main, Choice)
    with pytest.raises(TermError):
        parse_model("A = A + <a,1>.0; main = A;")
    with pytest.raises(TermError):
        parse_model("main = Undefined;")
    with pytest.raises(TermError):
        parse_model("A = <a,1>.0;")


def test_one_step_test():
    t = parse_test("<a>.s + <b>.f")
    assert t == CanonicalTest((TestStep("a", frozenset({"b"})),))


def test_two_step_test():
    t = parse_test("<a1>.<a2>.s + <b>.f")
    assert t.steps == (TestStep("a1", frozenset({"b"})), TestStep("a2", frozenset()))


def test_nested_failure_branches():
    t = parse_test("<a>.(<b>.s + <c>.f) + <d>.f")
    assert t.steps == (TestStep("a", frozenset({"d"})), TestStep("b", frozenset({"c"})))


@pytest.mark.parametrize("text", [
    "<tau>.s", "<a>.f", "<a>.s + <b>.s", "<a>.s + <a>.f", "<a>.s + <b>.f + <b>.f", "s",
])
def test_bad_tests(text):
    with pytest.raises(TermError):
        parse_test(text)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_process_round_trip(seed):
    term = random_term(random.Random(seed))
    assert parse_process(format_term(term)) == term


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("abcd"), st.sets(st.sampled_from("abcde"))), min_size=1, max_size=4))
def test_test_round_trip(raw):
    steps = tuple(TestStep(a, frozenset(f - {a})) for a, f in raw)
    test = CanonicalTest(steps)
    assert parse_test(format_test(test)) == test
