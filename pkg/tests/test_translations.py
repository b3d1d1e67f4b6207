import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from modarith.kernel import check, empty_context
from modarith.normalizer import normalize, normalize_trace, replay
from modarith.parser import parse_prop, parse_tterm
from modarith.proofs import proof_alpha_eq, subterm
from modarith.syntax import show
from modarith.theories import load_theory
from modarith.translations import (
    NAT_TYPE,
    ArrowT,
    TApply,
    TRec,
    TranslationError,
    TSucc,
    TVar,
    decode_numeral,
    image_paths,
    parigot,
    parigot_numeral,
    random_reducible_t_terms,
    random_t_term,
    relativize,
    simulate_check,
    t_normalize,
    t_numeral,
    t_redexes,
    t_step,
    t_value,
    translation_check,
    type_of,
)
from strategies import seeds

NAT = NAT_TYPE
NN = ArrowT(NAT, NAT)
x, f, n = TVar("x", NAT), TVar("f", ArrowT(NAT, NN)), TVar("n", NAT)


def test_relativization():
    th = load_theory("ha-pred")
    a = parse_prop("forall x. exists y. y = S(x)", th)
    assert show(relativize(a)) == "forall x:iota. N(x) => (exists y:iota. N(y) /\\ y = S(x))"
    assert relativize(parse_prop("0 = 0", th)) == parse_prop("0 = 0", th)
    with pytest.raises(TranslationError):
        relativize(parse_prop("N(0)", "ha-mod"))


@given(st.integers(0, 6))
def test_numerals_translate_to_parigot_numerals(k):
    # the successor clause copies its argument unreduced, so compare normal forms
    assert proof_alpha_eq(normalize(parigot(t_numeral(k))), parigot_numeral(k))
    assert decode_numeral(normalize(parigot(t_numeral(k)))) == k
    assert translation_check(t_numeral(k)).ok


def test_decode_rejects_non_numerals():
    assert decode_numeral(parigot(parse_tterm("\\a:nat. a"))) is None


def test_recursor_zero_case_verbatim():
    t = TRec(x, f, t_numeral(0), NAT)
    nf, trace = normalize_trace(parigot(t))
    assert proof_alpha_eq(nf, parigot(x)) and len(trace) >= 1
    assert simulate_check(t, x)


def test_recursor_successor_case_verbatim():
    t = TRec(x, f, TSucc(n), NAT)
    target = parigot(TApply(TApply(f, n), TRec(x, f, n, NAT)))
    nf, trace = normalize_trace(parigot(t))
    assert proof_alpha_eq(nf, target) and len(trace) >= 1
    (u,) = [v for _, _, v in t_redexes(t)]
    assert simulate_check(t, u)


def test_addition_computes():
    add = parse_tterm("\\m:nat. \\k:nat. Rec[nat](k, \\a:nat. \\b:nat. S(b), m)")
    for a in range(4):
        for b in range(4):
            t = TApply(TApply(add, t_numeral(a)), t_numeral(b))
            assert t_value(t_normalize(t)) == a + b
            assert decode_numeral(normalize(parigot(t))) == a + b


def test_multiplication_through_proofs():
    mul = parse_tterm(
        "\\m:nat. \\k:nat. Rec[nat](0, \\a:nat. \\b:nat. "
        "Rec[nat](k, \\c:nat. \\d:nat. S(d), b), m)"
    )
    for a, b in [(0, 3), (2, 2), (3, 2)]:
        t = TApply(TApply(mul, t_numeral(a)), t_numeral(b))
        assert decode_numeral(normalize(parigot(t))) == a * b


def test_identity_by_recursion_gives_parigot_numerals():
    ident = parse_tterm("\\m:nat. Rec[nat](0, \\a:nat. \\b:nat. S(b), m)")
    for k in range(4):
        pi = normalize(parigot(TApply(ident, t_numeral(k))))
        assert proof_alpha_eq(pi, parigot_numeral(k))
        assert check(empty_context(load_theory("t")), pi, parse_prop("eps(nat)", "t")).ok


@given(seeds)
def test_translation_preserves_types(seed):
    rng = random.Random(seed)
    ty = rng.choice([NAT, NN])
    t = random_t_term(rng, ty, 3)
    assert type_of(t) == ty
    assert translation_check(t).ok


@given(seeds)
def test_reduction_preserves_types_and_is_simulated(seed):
    (t,) = random_reducible_t_terms(1, seed=seed)
    for path, tag, u in t_redexes(t):
        assert type_of(u) == type_of(t)
        res = simulate_check(t, u)
        assert res, (tag, path, res)
        assert res.steps >= 1


def test_simulation_trail_replays():
    t = parse_tterm("(\\a:nat. S(a)) (Rec[nat](0, \\b:nat. \\c:nat. S(c), 1))")
    for _, _, u in t_redexes(t):
        res = simulate_check(t, u)
        assert proof_alpha_eq(replay(parigot(t), res.path), parigot(u))


def test_image_paths_locate_copies():
    t = TSucc(TApply(parse_tterm("\\a:nat. a"), t_numeral(0)))
    pi = parigot(t)
    paths = image_paths(t, (0,))
    assert len(paths) == 2
    for p in paths:
        assert subterm(pi, p) == parigot(t.arg)


def test_simulation_preconditions():
    t = parse_tterm("(\\a:nat. a) 0")
    with pytest.raises(TranslationError):
        simulate_check(t, t_numeral(1))
    with pytest.raises(TranslationError):
        simulate_check(t, t_numeral(0), theory=load_theory("t-variant"))


def test_t_step_is_deterministic_set():
    t = parse_tterm("(\\a:nat. S(a)) ((\\b:nat. b) 0)")
    assert len(t_step(t)) == 2
