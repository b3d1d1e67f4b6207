import pytest

from modarith.comprehension import ComprehensionError, ComprehensionKey, symbol_name
from modarith.rewrite import congruent
from modarith.syntax import (
    BOT,
    KAPPA,
    TOP,
    And,
    Atom,
    Fn,
    Forall,
    Imp,
    Var,
    alpha_eq,
    eq,
    free_vars,
    iff,
    mem,
    numeral,
    plus,
    succ,
    times,
)
from modarith.theories import (
    THEORIES,
    SchemeInstanceRequest,
    UnknownAxiom,
    load_theory,
    n_unfolding,
    nat_unfolding_t,
)

x, y, z, n = Var("x"), Var("y"), Var("z"), Var("n")
p = Var("p", KAPPA)


@pytest.mark.parametrize("name", sorted(THEORIES))
def test_every_theory_validates(name):
    th = load_theory(name)
    th.validate()
    assert th.name == name


def test_unknown_theory_and_axiom():
    with pytest.raises(UnknownAxiom):
        load_theory("zf")
    with pytest.raises(UnknownAxiom):
        load_theory("ha").axiom("choice")
    with pytest.raises(UnknownAxiom):
        load_theory("ha").axiom("induction")


def test_ha_mod_has_no_axioms_and_the_arithmetic_rules():
    th = load_theory("ha-mod")
    assert dict(th.axioms) == {}
    rules = {r.name: (r.lhs, r.rhs) for r in th.rules.term_rules}
    assert rules["plus-zero"] == (plus(Fn("0"), y), y)
    assert rules["plus-succ"] == (plus(succ(x), y), succ(plus(x, y)))
    assert rules["times-zero"] == (times(Fn("0"), y), Fn("0"))
    assert rules["times-succ"] == (times(succ(x), y), plus(times(x, y), y))
    assert rules["pred-zero"] == (Fn("Pred", (Fn("0"),)), Fn("0"))
    assert rules["pred-succ"] == (Fn("Pred", (succ(x),)), x)


def test_induction_instance():
    th = load_theory("ha")
    P = eq(plus(x, Fn("0")), x)
    ax = th.axiom("induction", SchemeInstanceRequest("induction", P, x))
    assert free_vars(ax) == frozenset()
    base, rest = ax.left, ax.right
    assert base == eq(plus(Fn("0"), Fn("0")), Fn("0"))
    assert isinstance(rest.right, Forall)


def test_relativized_induction_weak_and_strong():
    P = eq(x, x)
    strong = load_theory("ha-n").axiom("induction", SchemeInstanceRequest("induction", P, x))
    weak = load_theory("ha-n-weak").axiom("induction", SchemeInstanceRequest("induction", P, x))
    step_s, step_w = strong.right.left, weak.right.left
    assert isinstance(step_s.body.left, Atom) and step_s.body.left.pred == "N"
    assert step_w.body.left == eq(step_w.var, step_w.var)


def test_comprehension_symbols_are_canonical():
    a = ComprehensionKey(x, (y,), eq(x, y))
    b = ComprehensionKey(z, (n,), eq(z, n))
    assert symbol_name(a) == symbol_name(b)
    assert symbol_name(a) != symbol_name(ComprehensionKey(x, (y,), eq(y, x)))
    assert symbol_name(ComprehensionKey(x, (), Atom("N", (x,)))) == "nat"


def test_comprehension_rejects_membership_and_stray_variables():
    th = load_theory("ha-mod")
    with pytest.raises(ComprehensionError):
        th.class_term(x, mem(x, p))
    with pytest.raises(ComprehensionError):
        ComprehensionKey(x, (), eq(x, y))


def test_class_term_unfolds():
    th = load_theory("ha-mod")
    c = th.class_term(x, Atom("Null", (x,)))
    assert congruent(mem(numeral(0), c), TOP, th.rules)
    assert congruent(mem(numeral(2), c), BOT, th.rules)


def test_theory_t_rejects_iota_by_construction():
    th = load_theory("t")
    assert th.signature.sorts == frozenset({KAPPA})
    assert th.default_sort == KAPPA
    assert "iota" not in th.signature.sorts


# Structural goldens: the rules of the rewriting presentation, written out
# by hand, and their axiomatic counterparts.

def hand_written_ha_mod(variant=False):
    step = Imp(mem(y, p), mem(succ(y), p))
    if not variant:
        step = Imp(Atom("N", (y,)), step)
    return {
        "eq": (eq(y, z), Forall(p, Imp(mem(y, p), mem(z, p)))),
        "N-variant" if variant else "N": (
            Atom("N", (n,)),
            Forall(p, Imp(mem(Fn("0"), p), Imp(Forall(y, step), mem(n, p)))),
        ),
        "null-zero": (Atom("Null", (Fn("0"),)), TOP),
        "null-succ": (Atom("Null", (succ(x),)), BOT),
    }


def ha_mod_structure(th):
    props = {r.name: (r.lhs, r.rhs) for r in th.rules.prop_rules}
    terms = {r.name: (r.lhs, r.rhs) for r in th.rules.term_rules}
    return props, terms, [s.name for s in th.rules.schemes]


def test_ha_mod_matches_rule_for_rule():
    props, terms, schemes = ha_mod_structure(load_theory("ha-mod"))
    expected = hand_written_ha_mod()
    assert set(props) == set(expected)
    for k, (l, r) in expected.items():
        assert props[k][0] == l and alpha_eq(props[k][1], r), k
    assert len(terms) == 6 and schemes == ["comprehension"]


def test_variant_changes_exactly_the_n_rule():
    base = load_theory("ha-mod")
    var = load_theory("ha-mod-variant")
    pb, tb, sb = ha_mod_structure(base)
    pv, tv, sv = ha_mod_structure(var)
    assert tb == tv and sb == sv
    same = {k for k in pb if k in pv and pb[k] == pv[k]}
    assert same == {"eq", "null-zero", "null-succ"}
    assert set(pb) - same == {"N"} and set(pv) - same == {"N-variant"}
    assert alpha_eq(pv["N-variant"][1], hand_written_ha_mod(True)["N-variant"][1])


def test_theory_t_has_exactly_two_rules():
    th = load_theory("t")
    assert not th.rules.term_rules and not th.rules.schemes
    rules = {r.name: (r.lhs, r.rhs) for r in th.rules.prop_rules}
    yk, zk = Var("y", KAPPA), Var("z", KAPPA)
    eps = lambda t: Atom("eps", (t,))  # noqa: E731
    nat = Fn("nat")
    pk = Var("p", KAPPA)
    assert rules == {
        "eps-nat": (eps(nat), Forall(pk, Imp(eps(pk), Imp(Imp(eps(nat), Imp(eps(pk), eps(pk))), eps(pk))))),
        "eps-arrow": (eps(Fn("->", (yk, zk))), Imp(eps(yk), eps(zk))),
    }
    assert rules["eps-nat"][1] == nat_unfolding_t()


def test_ha_class_axioms_match_ha_mod_rules_one_to_one():
    cls = load_theory("ha-class")
    mod = load_theory("ha-mod")
    pairing = {
        "eq": "eq-class", "N": "N-class", "null-zero": "null-zero", "null-succ": "null-succ",
        "pred-zero": "pred-zero", "pred-succ": "pred-succ", "plus-zero": "plus-zero",
        "plus-succ": "plus-succ", "times-zero": "times-zero", "times-succ": "times-succ",
        "comprehension": "comprehension",
    }
    names = [r.name for r in mod.rules.prop_rules + mod.rules.term_rules] + [
        s.name for s in mod.rules.schemes
    ]
    assert sorted(names) == sorted(pairing)
    assert sorted(pairing.values()) == sorted(cls.axioms)
    for r in mod.rules.prop_rules:
        ax = cls.axioms[pairing[r.name]]
        want = iff(r.lhs, r.rhs)
        closed = want
        for v in sorted(free_vars(want), key=lambda v: v.name, reverse=True):
            closed = Forall(v, closed)
        # Null(0) <=> true is stated as Null(0), Null(S(x)) <=> false as ~Null(S(x))
        assert congruent(ax, closed, load_theory("pure").rules) or _equivalent_literal(ax, r), r.name
    for r in mod.rules.term_rules:
        ax = cls.axioms[pairing[r.name]]
        body = ax
        while isinstance(body, Forall):
            body = body.body
        assert body == eq(r.lhs, r.rhs), r.name
    assert cls.axioms["comprehension"].name == "comprehension"


def _equivalent_literal(ax, rule):
    body = ax
    while isinstance(body, Forall):
        body = body.body
    if rule.rhs == TOP:
        return body == rule.lhs
    if rule.rhs == BOT:
        return body == Imp(rule.lhs, BOT)
    return False


def test_n_unfolding_helper_matches_hand_written():
    assert alpha_eq(n_unfolding(n), hand_written_ha_mod()["N"][1])
    assert isinstance(iff(TOP, TOP), And)
