import pytest
from hypothesis import given
from hypothesis import strategies as st

from modarith.rewrite import (
    Fuel,
    FuelExhausted,
    PropRule,
    RuleError,
    RuleSet,
    TermRule,
    congruent,
    congruent3,
    normalize_term,
    normalize_term_outermost,
    whnf_prop,
)
from modarith.syntax import (
    BOT,
    TOP,
    And,
    Atom,
    Fn,
    Forall,
    Imp,
    Var,
    eq,
    numeral,
    numeral_value,
    plus,
    subst,
    succ,
    times,
)
from modarith.theories import load_theory, n_unfolding
from strategies import arith_terms, closed_arith_terms

x, y = Var("x"), Var("y")
A, B, C = Atom("A"), Atom("B"), Atom("C")


def evaluate(t):
    """Machine arithmetic on a closed term, independent of the rewrite rules."""
    if t.name == "0":
        return 0
    vals = [evaluate(a) for a in t.args]
    return {
        "S": lambda a: a + 1,
        "Pred": lambda a: max(a - 1, 0),
        "+": lambda a, b: a + b,
        "*": lambda a, b: a * b,
    }[t.name](*vals)


@pytest.fixture(scope="module")
def rules():
    return load_theory("ha-mod").rules


@given(closed_arith_terms)
def test_closed_terms_normalize_to_their_value(t):
    rules = load_theory("ha-mod").rules
    assert numeral_value(normalize_term(t, rules)) == evaluate(t)


@given(arith_terms())
def test_innermost_and_outermost_agree(t):
    rules = load_theory("ha-mod").rules
    assert normalize_term(t, rules) == normalize_term_outermost(t, rules)


@given(a=st.integers(0, 12), b=st.integers(0, 12))
def test_numeral_arithmetic(a, b, rules):
    assert numeral_value(normalize_term(plus(numeral(a), numeral(b)), rules)) == a + b
    assert numeral_value(normalize_term(times(numeral(a), numeral(b)), rules)) == a * b


def test_open_terms_stop_at_variables(rules):
    assert normalize_term(plus(x, numeral(0)), rules) == plus(x, numeral(0))
    assert normalize_term(plus(numeral(2), x), rules) == succ(succ(x))


def test_congruence_examples(rules):
    assert congruent(eq(times(numeral(2), numeral(2)), numeral(4)), eq(numeral(4), numeral(4)), rules)
    assert congruent(Atom("N", (numeral(0),)), n_unfolding(numeral(0)), rules)
    assert not congruent(eq(numeral(0), numeral(0)), eq(numeral(0), numeral(1)), rules)
    assert congruent(Atom("Null", (numeral(0),)), TOP, rules)
    assert congruent(Atom("Null", (numeral(3),)), BOT, rules)


@given(arith_terms(), arith_terms())
def test_congruence_is_reflexive_and_symmetric(s, t):
    rules = load_theory("ha-mod").rules
    a, b = eq(s, t), Atom("N", (plus(s, t),))
    assert congruent(a, a, rules)
    assert congruent(a, b, rules, 64) == congruent(b, a, rules, 64)


@given(arith_terms(), closed_arith_terms)
def test_congruence_is_stable_under_substitution(s, u):
    rules = load_theory("ha-mod").rules
    a = eq(plus(numeral(0), s), s)
    assert congruent(a, eq(s, s), rules)
    assert congruent(subst(a, {x: u}), subst(eq(s, s), {x: u}), rules)


def test_alpha_equivalent_quantifiers_are_congruent(rules):
    p, q = Var("p", "kappa"), Var("q", "kappa")
    from modarith.syntax import mem

    assert congruent(Forall(p, mem(x, p)), Forall(q, mem(x, q)), rules)
    assert congruent(eq(x, y), Forall(q, Imp(mem(x, q), mem(y, q))), rules)


def test_fuel_exhaustion_is_reported():
    rules = RuleSet(prop_rules=[PropRule(A, Imp(A, A), "a"), PropRule(C, Imp(C, C), "c")])
    with pytest.raises(FuelExhausted):
        congruent(A, C, rules, 10)
    assert congruent3(A, C, rules, 10) is None
    assert rules.contains_nonterminating


def test_fuel_is_counted():
    rules = load_theory("ha-mod").rules
    f = Fuel(5)
    whnf_prop(Atom("N", (numeral(1),)), rules, f)
    assert f.used == 1 and f.remaining == 4
    with pytest.raises(FuelExhausted):
        congruent(eq(numeral(0), numeral(0)), n_unfolding(numeral(0)), rules, Fuel(0))


def test_crabbe_rule_unfolds_once_per_fuel():
    rules = RuleSet(prop_rules=[PropRule(A, And(B, Imp(A, BOT)), "crabbe")])
    assert congruent(A, And(B, Imp(A, BOT)), rules, 1)


def test_rule_shape_checks():
    with pytest.raises(RuleError):
        TermRule(plus(x, x), x)
    with pytest.raises(RuleError):
        TermRule(Fn("S", (x,)), y)
    with pytest.raises(RuleError):
        PropRule(Atom("P", (x,)), Atom("P", (y,)))
