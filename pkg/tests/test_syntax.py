import pytest
from hypothesis import given
from hypothesis import strategies as st

from modarith.syntax import (
    IOTA,
    KAPPA,
    And,
    Atom,
    Exists,
    Fn,
    Forall,
    Imp,
    Signature,
    SortError,
    Var,
    alpha_eq,
    check_sorts,
    eq,
    free_vars,
    mem,
    numeral,
    numeral_value,
    plus,
    show,
    show_term,
    sort_of,
    subst,
    substitute,
)
from strategies import pure_props

x, y, z = Var("x"), Var("y"), Var("z")
p = Var("p", KAPPA)


@given(st.integers(0, 200))
def test_numeral_value_inverts_numeral(n):
    assert numeral_value(numeral(n)) == n


def test_numeral_value_rejects_non_numerals():
    assert numeral_value(plus(numeral(1), numeral(1))) is None
    assert numeral_value(Fn("S", (x,))) is None
    with pytest.raises(ValueError):
        numeral(-1)


def test_substitution_avoids_capture():
    a = Forall(y, eq(x, y))
    b = subst(a, {x: y})
    assert isinstance(b, Forall) and b.var != y
    assert free_vars(b) == {y}
    assert alpha_eq(b, Forall(z, eq(y, z)))


def test_substitution_is_simultaneous():
    b = subst(eq(x, y), {x: y, y: x})
    assert b == eq(y, x)


def test_bound_variable_is_not_substituted():
    a = Exists(x, eq(x, y))
    assert subst(a, {x: numeral(3)}) == a


def test_substitute_checks_sorts():
    with pytest.raises(SortError):
        substitute(p, x, eq(x, x))


@given(pure_props())
def test_alpha_eq_is_reflexive_and_respects_renaming(a):
    assert alpha_eq(a, a)
    fresh = {v: v for v in free_vars(a)}
    assert alpha_eq(subst(a, fresh), a)


@given(pure_props(), pure_props())
def test_alpha_eq_is_symmetric(a, b):
    assert alpha_eq(a, b) == alpha_eq(b, a)


def test_alpha_eq_distinguishes_binding_structure():
    r = lambda s, t: Atom("R", (s, t))  # noqa: E731
    assert alpha_eq(Forall(x, Forall(y, r(x, y))), Forall(y, Forall(x, r(y, x))))
    assert not alpha_eq(Forall(x, Forall(y, r(x, y))), Forall(x, Forall(y, r(y, x))))


def test_sorts_are_checked():
    sig = Signature({IOTA, KAPPA}, {"0": ((), IOTA)}, {"in": (IOTA, KAPPA), "=": (IOTA, IOTA)})
    check_sorts(Forall(p, mem(Fn("0"), p)), sig)
    with pytest.raises(SortError):
        check_sorts(mem(p, p), sig)
    with pytest.raises(SortError):
        sort_of(Fn("S", (x,)), sig)
    with pytest.raises(SortError):
        Signature({IOTA}, {"f": ((KAPPA,), IOTA)}, {})


def test_printer_folds_numerals_and_infix():
    assert show_term(plus(numeral(2), Fn("*", (numeral(2), x)))) == "2 + 2 * x"
    assert show_term(Fn("*", (plus(x, y), z))) == "(x + y) * z"
    assert show(Imp(eq(x, x), Imp(And(eq(x, y), eq(y, z)), Atom("A")))) == "x = x => x = y /\\ y = z => A"
    assert show(Imp(Atom("A"), Imp(Atom("B"), Atom("C")))) == "A => B => C"
    assert show(Imp(Imp(Atom("A"), Atom("B")), Atom("C"))) == "(A => B) => C"
