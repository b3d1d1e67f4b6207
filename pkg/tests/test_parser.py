import random

import pytest
from hypothesis import given

from modarith.generators import random_cut_proof
from modarith.parser import (
    ParseError,
    parse_proof,
    parse_prop,
    parse_script,
    parse_t_file,
    parse_term,
    parse_theory_file,
    parse_ttype,
    tokenize,
)
from modarith.proofs import ExIntro, Lam, TApp, TLam, proof_alpha_eq, show_proof
from modarith.syntax import (
    KAPPA,
    Atom,
    Exists,
    Fn,
    Forall,
    Imp,
    Var,
    eq,
    mem,
    numeral,
    plus,
    show,
    show_term,
    times,
)
from modarith.theories import load_theory
from modarith.translations import NAT_TYPE, ArrowT, t_value, t_normalize
from strategies import arith_terms, pure_props, seeds

x, y = Var("x"), Var("y")


@given(pure_props())
def test_prop_round_trip_pure(a):
    th = load_theory("pure")
    assert parse_prop(show(a), th) == a


@given(arith_terms(), arith_terms())
def test_prop_round_trip_arithmetic(s, t):
    th = load_theory("ha-mod")
    a = Forall(x, Exists(y, Imp(eq(s, t), Atom("N", (plus(s, t),)))))
    assert parse_prop(show(a), th) == a
    assert parse_term(show_term(s), th) == s


@given(seeds)
def test_proof_round_trip(seed):
    pi, a = random_cut_proof(random.Random(seed))
    th = load_theory("pure")
    back = parse_proof(show_proof(pi), th)
    assert proof_alpha_eq(back, pi)


def test_numerals_and_precedence(ha_mod):
    assert parse_term("2 * x + 1", ha_mod) == plus(times(numeral(2), x), numeral(1))
    assert parse_prop("2 * x = 4", ha_mod) == eq(times(numeral(2), x), numeral(4))
    assert parse_prop("A => B => C", "pure") == Imp(Atom("A"), Imp(Atom("B"), Atom("C")))


def test_unicode_spellings_agree_with_ascii(ha_mod):
    ascii_ = parse_prop("forall n:iota. N(n) => exists y. ~(y = 0) /\\ true", ha_mod)
    uni = parse_prop("∀n:iota. N(n) ⇒ ∃y. ¬(y = 0) ∧ ⊤", ha_mod)
    assert ascii_ == uni
    assert parse_proof("λa:A. a", "pure") == parse_proof("\\a:A. a", "pure")


def test_sorts_follow_positions(ha_mod):
    a = parse_prop("forall p. x in p", ha_mod)
    assert a == Forall(Var("p", KAPPA), mem(x, Var("p", KAPPA)))
    with pytest.raises(ParseError):
        parse_prop("forall p:kappa. p = 0", ha_mod)


def test_term_lambda_versus_proof_lambda(ha_mod):
    pi = parse_proof("\\x:iota. \\a:(x = x). a", ha_mod)
    assert isinstance(pi, TLam) and isinstance(pi.body, Lam)
    pi = parse_proof("pack(2, h [4], x:iota. 2 * x = 4)", ha_mod)
    assert isinstance(pi, ExIntro) and isinstance(pi.proof, TApp)


def test_class_terms_register_symbols(ha_mod):
    t = parse_term("{z:iota | Null(z)}", ha_mod)
    assert isinstance(t, Fn) and t.name in ha_mod.registry
    assert parse_term("{w | Null(w)}", ha_mod) == t


def test_errors_carry_positions():
    with pytest.raises(ParseError) as e:
        parse_prop("A =>\n  (B /\\ )", "pure")
    assert (e.value.line, e.value.col) == (2, 9)
    with pytest.raises(ParseError):
        tokenize("A $ B")
    with pytest.raises(ParseError):
        parse_term("f(c, d)", "pure")


def test_script_with_axiom_instance():
    script = parse_script(
        """
        theory ha.
        use axiom induction with P := x + 0 = x, x := x.
        use axiom eq-refl as r.
        theorem zero : 0 + 0 = 0 := r [0].
        """
    )
    assert script.theory.name == "ha"
    (td,) = script.theorems
    assert [u.hyp_name for u in td.uses] == ["induction", "r"]
    assert td.uses[0].instance.var == x


def test_script_rejects_unknown_axiom():
    with pytest.raises(ParseError):
        parse_script("theory ha-mod. use axiom refl.")


def test_theory_file():
    th = parse_theory_file(
        """
        theory small.
        sort iota.
        function 0 : iota.
        function S : iota -> iota.
        function + : iota iota -> iota.
        predicate = : iota iota.
        predicate Null : iota.
        rule 0 + y --> y.
        rule S(x) + y --> S(x + y).
        prop-rule Null(0) --> true.
        axiom refl : forall x. x = x.
        """
    )
    assert th.name == "small"
    assert [r.name for r in th.rules.term_rules] == ["rule-1", "rule-2"]
    assert [r.name for r in th.rules.prop_rules] == ["prop-rule-1"]
    assert show(th.axioms["refl"]) == "forall x:iota. x = x"


def test_theory_file_extends_builtin():
    th = parse_theory_file("extends ha-mod. prop-rule Null(Pred(0)) --> true.")
    assert len(th.rules.prop_rules) == 5
    assert th.rules.schemes


def test_t_file_and_types():
    defs = parse_t_file(
        "tdef two : nat := S(S(0)).\n"
        "tdef add : nat -> nat -> nat := \\m:nat. \\n:nat. Rec[nat](n, \\a:nat. \\b:nat. S(b), m).\n"
        "tdef four : nat := add two two.\n"
    )
    assert [d.name for d in defs] == ["two", "add", "four"]
    assert t_value(t_normalize(defs[-1].term)) == 4
    assert parse_ttype("(nat -> nat) -> nat") == ArrowT(ArrowT(NAT_TYPE, NAT_TYPE), NAT_TYPE)
    with pytest.raises(ParseError):
        parse_t_file("tdef bad : nat := \\x:nat. x.")
