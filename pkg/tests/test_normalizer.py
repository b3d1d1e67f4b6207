import random

import pytest
from hypothesis import given

from modarith.generators import add_cuts, random_cut_proof
from modarith.golden import golden_theorems
from modarith.kernel import axiom_context, empty_context
from modarith.normalizer import (
    RULE_TAGS,
    ReductionStep,
    StepBudgetExhausted,
    check_subject_reduction,
    contract,
    is_normal,
    normalize,
    normalize_trace,
    redexes,
    replay,
    step,
    step_lo,
)
from modarith.parser import parse_proof, parse_prop
from modarith.proofs import ExIntro, proof_alpha_eq
from modarith.rewrite import PropRule, RuleSet
from modarith.syntax import BOT, And, Atom, Exists, Fn, Imp, numeral
from modarith.theories import Theory, load_theory
from strategies import seeds

A, B = Atom("A"), Atom("B")


def nf_text(text, theory="pure"):
    th = load_theory(theory)
    return normalize_trace(parse_proof(text, th))


@pytest.mark.parametrize(
    "text, tag, result",
    [
        ("(\\a:A. <a, a>) h", "beta", "<h, h>"),
        ("(\\x:iota. k [f(x)]) [c]", "beta-forall", "k [f(c)]"),
        ("fst(<h, k>)", "fst-pair", "h"),
        ("snd(<h, k>)", "snd-pair", "k"),
        ("case(inl(h, B), a. <a, a>, b. k)", "case-inl", "<h, h>"),
        ("case(inr(h, A), a. k, b. <b, b>)", "case-inr", "<h, h>"),
        ("unpack(pack(c, h, x:iota. P(x)), y:iota a. pack(f(y), a))", "exists-unpack", "pack(f(c), h)"),
    ],
)
def test_each_reduction(text, tag, result):
    th = load_theory("pure")
    tagged, reduct = contract(parse_proof(text, th))
    assert tagged == tag
    assert proof_alpha_eq(reduct, parse_proof(result, th))


def test_substitution_avoids_capture_of_proof_variables():
    nf, _ = nf_text("(\\a:A. \\b:B. a) b")
    th = load_theory("pure")
    assert proof_alpha_eq(nf, parse_proof("\\c:B. b", th))


def test_no_commuting_conversions():
    # fst applied to a case is not a redex
    nf, trace = nf_text("fst(case(h, a. <a, a>, b. <b, b>))")
    assert trace == [] and is_normal(nf)


def test_leftmost_outermost_order():
    th = load_theory("pure")
    pi = parse_proof("(\\a:A. a) ((\\b:A. b) h)", th)
    rs = redexes(pi)
    assert [r.path for r in rs] == [(), (1,)]
    s, _ = step_lo(pi)
    assert s == ReductionStep((), "beta")
    assert str(ReductionStep((1, 0), "beta")) == "beta at root.1.0"
    assert len(step(pi)) == 2


@given(seeds)
def test_trace_replays_to_the_normal_form(seed):
    pi, _ = random_cut_proof(random.Random(seed))
    nf, trace = normalize_trace(pi)
    assert is_normal(nf) and not redexes(nf)
    assert replay(pi, trace) == nf
    assert {s.tag for s in trace} <= set(RULE_TAGS)


@given(seeds)
def test_subject_reduction_on_random_proofs(seed):
    pi, a = random_cut_proof(random.Random(seed))
    ctx = empty_context(load_theory("pure"))
    rep = check_subject_reduction(ctx, pi, a)
    assert rep.ok, rep.report and rep.report.describe()
    assert rep.reducts_checked == rep.steps


@given(seeds)
def test_every_one_step_reduct_checks(seed):
    rng = random.Random(seed)
    pi, a = random_cut_proof(rng, depth=2)
    ctx = empty_context(load_theory("pure"))
    assert check_subject_reduction(ctx, pi, a, every_reduct=True).ok


@given(seeds)
def test_normal_form_does_not_depend_on_strategy(seed):
    rng = random.Random(seed)
    pi, _ = random_cut_proof(rng)
    lo = normalize(pi)
    cur = pi
    for _ in range(10_000):
        succ = step(cur)
        if not succ:
            break
        cur = rng.choice(succ)[1]
    assert proof_alpha_eq(cur, lo)


@pytest.mark.parametrize("item", golden_theorems(), ids=lambda it: it[1].name)
def test_golden_proofs_normalize_with_subject_reduction(item):
    script, td = item
    ctx = axiom_context(script.theory, td.uses)
    rep = check_subject_reduction(ctx, td.proof, td.prop)
    assert rep.ok
    if isinstance(td.prop, Exists):
        assert isinstance(rep.normal_form, ExIntro)


@pytest.mark.parametrize("item", golden_theorems()[::3], ids=lambda it: it[1].name)
def test_golden_proofs_with_extra_cuts(item):
    script, td = item
    witnesses = (Fn("c"),) if script.theory.name == "pure" else (numeral(0),)
    pi = add_cuts(td.proof, td.prop, random.Random(3), rounds=3, witnesses=witnesses)
    ctx = axiom_context(script.theory, td.uses)
    assert check_subject_reduction(ctx, pi, td.prop).ok


def test_crabbe_proof_has_no_normal_form():
    sig = load_theory("pure").signature
    th = Theory("crabbe", sig, RuleSet(prop_rules=[PropRule(A, And(B, Imp(A, BOT)), "crabbe")]))
    omega = "\\a:A. snd(a) a"
    pi = parse_proof(f"\\b:B. ({omega}) <b, {omega}>", th)
    with pytest.raises(StepBudgetExhausted):
        normalize(pi, 200)
    ctx = empty_context(th)
    with pytest.raises(StepBudgetExhausted):
        check_subject_reduction(ctx, pi, parse_prop("~B", th), max_steps=50)


def test_step_budget_must_be_positive():
    with pytest.raises(ValueError):
        normalize_trace(parse_proof("h", load_theory("pure")), 0)
