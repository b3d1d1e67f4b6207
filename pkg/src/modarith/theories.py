"""Built-in presentations of arithmetic and the theory T.

Axiomatic theories (HA, HA_Pred, HA_N, HA_Class) carry closed axioms and
axiom schemes; the rewrite presentations (HA_->, T) carry rules only.
Schemes are generator functions taking a :class:`SchemeInstanceRequest`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from .comprehension import ComprehensionKey, ComprehensionRegistry
from .rewrite import PropRule, RuleSet, TermRule
from .syntax import (
    ARROW,
    BOT,
    EPS,
    EQ,
    IOTA,
    KAPPA,
    MEM,
    NAT,
    NAT_P,
    NULL,
    PLUS,
    PRED,
    SUCC,
    TIMES,
    TOP,
    ZERO,
    Atom,
    Fn,
    Forall,
    Imp,
    Proposition,
    Signature,
    SortError,
    Var,
    check_sorts,
    eq,
    forall_many,
    free_vars,
    fresh_var,
    iff,
    imps,
    mem,
    neg,
    plus,
    subst,
    succ,
    times,
)

ZERO_T = Fn(ZERO)


class UnknownAxiom(KeyError):
    pass


@dataclass(frozen=True)
class SchemeInstanceRequest:
    scheme: str
    prop: Proposition
    var: Var
    params: tuple = ()


@dataclass(frozen=True)
class AxiomScheme:
    name: str
    generate: Callable
    description: str = ""

    def instance(self, request: SchemeInstanceRequest, theory: "Theory") -> Proposition:
        return self.generate(request, theory)


@dataclass
class Theory:
    name: str
    base_signature: Signature
    rules: RuleSet = field(default_factory=RuleSet)
    axioms: Mapping[str, object] = field(default_factory=dict)
    registry: ComprehensionRegistry | None = None
    default_sort: str = IOTA
    description: str = ""

    @property
    def signature(self) -> Signature:
        if self.registry is not None:
            return self.registry.signature
        return self.base_signature

    def closed_axioms(self) -> dict:
        return {k: v for k, v in self.axioms.items() if not isinstance(v, AxiomScheme)}

    def schemes(self) -> dict:
        return {k: v for k, v in self.axioms.items() if isinstance(v, AxiomScheme)}

    def axiom(self, name: str, request: SchemeInstanceRequest | None = None) -> Proposition:
        ax = self.axioms.get(name)
        if ax is None:
            raise UnknownAxiom(f"theory {self.name} has no axiom {name!r}")
        if isinstance(ax, AxiomScheme):
            if request is None:
                raise UnknownAxiom(f"axiom {name!r} is a scheme and needs an instance request")
            out = ax.instance(request, self)
            check_sorts(out, self.signature)
            return out
        return ax

    def validate(self) -> None:
        """Check every closed axiom and every rule against the signature."""
        sig = self.signature
        for ax in self.closed_axioms().values():
            check_sorts(ax, sig)
        for r in self.rules.term_rules:
            from .syntax import sort_of

            if sort_of(r.lhs, sig) != sort_of(r.rhs, sig):
                raise SortError(f"rule {r} changes sort")
        for r in self.rules.prop_rules:
            check_sorts(r.lhs, sig)
            check_sorts(r.rhs, sig)
        if self.registry is not None:
            for r in self.registry.rules():
                check_sorts(r.lhs, sig)
                check_sorts(r.rhs, sig)

    def class_term(self, var: Var, body: Proposition, params=None) -> Fn:
        """The term f_{var, params, body}(params), registering the symbol."""
        if self.registry is None:
            raise SortError(f"theory {self.name} has no comprehension symbols")
        if params is None:
            params = sorted(free_vars(body) - {var}, key=lambda v: v.name)
        return self.registry.class_term(ComprehensionKey(var, tuple(params), body))


# --------------------------------------------------------------------------
# Common pieces

x, y, z, n = Var("x"), Var("y"), Var("z"), Var("n")
p = Var("p", KAPPA)


def _arith_sig(extra_funcs=None, extra_preds=None, sorts=(IOTA,)) -> Signature:
    funcs = {ZERO: ((), IOTA), SUCC: ((IOTA,), IOTA), PLUS: ((IOTA, IOTA), IOTA), TIMES: ((IOTA, IOTA), IOTA)}
    funcs.update(extra_funcs or {})
    preds = {EQ: (IOTA, IOTA)}
    preds.update(extra_preds or {})
    return Signature(frozenset(sorts), funcs, preds)


def arithmetic_term_rules() -> list[TermRule]:
    """``0 + y --> y``, ``S(x) + y --> S(x + y)``, ``0 * y --> 0``, ``S(x) * y --> x * y + y``."""
    return [
        TermRule(plus(ZERO_T, y), y, "plus-zero"),
        TermRule(plus(succ(x), y), succ(plus(x, y)), "plus-succ"),
        TermRule(times(ZERO_T, y), ZERO_T, "times-zero"),
        TermRule(times(succ(x), y), plus(times(x, y), y), "times-succ"),
    ]


def predecessor_term_rules() -> list[TermRule]:
    return [
        TermRule(Fn(PRED, (ZERO_T,)), ZERO_T, "pred-zero"),
        TermRule(Fn(PRED, (succ(x),)), x, "pred-succ"),
    ]


def recursion_axioms() -> dict:
    return {
        "plus-zero": Forall(y, eq(plus(ZERO_T, y), y)),
        "plus-succ": forall_many([x, y], eq(plus(succ(x), y), succ(plus(x, y)))),
        "times-zero": Forall(y, eq(times(ZERO_T, y), ZERO_T)),
        "times-succ": forall_many([x, y], eq(times(succ(x), y), plus(times(x, y), y))),
    }


def equality_axioms(funcs: Mapping[str, tuple], preds: Mapping[str, tuple]) -> dict:
    """Reflexivity and one substitutivity axiom per function and predicate symbol."""
    out = {"eq-refl": Forall(x, eq(x, x))}
    for name, (args, _res) in funcs.items():
        if not args:
            continue
        xs = [Var(f"x{i + 1}") for i in range(len(args))]
        ys = [Var(f"y{i + 1}") for i in range(len(args))]
        hyps = [eq(a, b) for a, b in zip(xs, ys)]
        concl = eq(Fn(name, tuple(xs)), Fn(name, tuple(ys)))
        out[f"eq-{_slug(name)}"] = forall_many([*xs, *ys], imps(*hyps, concl))
    for name, args in preds.items():
        xs = [Var(f"x{i + 1}") for i in range(len(args))]
        ys = [Var(f"y{i + 1}") for i in range(len(args))]
        hyps = [eq(a, b) for a, b in zip(xs, ys)]
        concl = Imp(Atom(name, tuple(xs)), Atom(name, tuple(ys)))
        out[f"eq-{_slug(name)}"] = forall_many([*xs, *ys], imps(*hyps, concl))
    return out


def _slug(name: str) -> str:
    return {PLUS: "plus", TIMES: "times", EQ: "eq", SUCC: "S"}.get(name, name)


def _close(request: SchemeInstanceRequest, body: Proposition) -> Proposition:
    params = list(request.params) or sorted(
        free_vars(request.prop) - {request.var}, key=lambda v: v.name
    )
    return forall_many(params, body)


def _fresh_for(request: SchemeInstanceRequest, base: Var) -> Var:
    avoid = {v.name for v in free_vars(request.prop)} | {request.var.name}
    avoid |= {v.name for v in request.params}
    return fresh_var(base, avoid)


def _induction(request: SchemeInstanceRequest, theory=None) -> Proposition:
    P, xv = request.prop, request.var
    yv, nv = _fresh_for(request, y), _fresh_for(request, n)
    body = imps(
        subst(P, {xv: ZERO_T}),
        Forall(yv, Imp(subst(P, {xv: yv}), subst(P, {xv: succ(yv)}))),
        Forall(nv, subst(P, {xv: nv})),
    )
    return _close(request, body)


def _induction_n(request: SchemeInstanceRequest, theory=None, weak: bool = False) -> Proposition:
    P, xv = request.prop, request.var
    yv, nv = _fresh_for(request, y), _fresh_for(request, n)
    step = imps(subst(P, {xv: yv}), subst(P, {xv: succ(yv)}))
    if not weak:
        step = Imp(Atom(NAT_P, (yv,)), step)
    body = imps(
        subst(P, {xv: ZERO_T}),
        Forall(yv, step),
        Forall(nv, Imp(Atom(NAT_P, (nv,)), subst(P, {xv: nv}))),
    )
    return _close(request, body)


# --------------------------------------------------------------------------
# HA and friends


def theory_ha() -> Theory:
    sig = _arith_sig()
    axioms: dict = {}
    axioms.update(equality_axioms(sig.functions, sig.predicates))
    axioms["succ-inj"] = forall_many([x, y], Imp(eq(succ(x), succ(y)), eq(x, y)))
    axioms["zero-ne-succ"] = Forall(x, neg(eq(ZERO_T, succ(x))))
    axioms["induction"] = AxiomScheme("induction", _induction, "((0/x)P => forall y ((y/x)P => (S(y)/x)P) => forall n (n/x)P)")
    axioms.update(recursion_axioms())
    return Theory("ha", sig, RuleSet(), axioms, description="Heyting arithmetic")


def theory_ha_pred() -> Theory:
    base = theory_ha()
    sig = base.base_signature.with_function(PRED, (IOTA,), IOTA)
    axioms = dict(base.axioms)
    axioms["pred-zero"] = eq(Fn(PRED, (ZERO_T,)), ZERO_T)
    axioms["pred-succ"] = Forall(x, eq(Fn(PRED, (succ(x),)), x))
    axioms["eq-Pred"] = forall_many([x, y], Imp(eq(x, y), eq(Fn(PRED, (x,)), Fn(PRED, (y,)))))
    return Theory("ha-pred", sig, RuleSet(), axioms, description="HA with a predecessor symbol")


def _ha_n_signature() -> Signature:
    return _arith_sig({PRED: ((IOTA,), IOTA)}, {NULL: (IOTA,), NAT_P: (IOTA,)})


def theory_ha_n(weak_induction: bool = False) -> Theory:
    sig = _ha_n_signature()
    axioms: dict = {}
    axioms.update(equality_axioms(sig.functions, sig.predicates))
    if weak_induction:
        gen = lambda r, t=None: _induction_n(r, t, weak=True)  # noqa: E731
    else:
        gen = _induction_n
    axioms["induction"] = AxiomScheme("induction", gen, "relativized induction")
    axioms["N-zero"] = Atom(NAT_P, (ZERO_T,))
    axioms["N-succ"] = Forall(x, Imp(Atom(NAT_P, (x,)), Atom(NAT_P, (succ(x),))))
    axioms["pred-zero"] = eq(Fn(PRED, (ZERO_T,)), ZERO_T)
    axioms["pred-succ"] = Forall(x, eq(Fn(PRED, (succ(x),)), x))
    axioms["null-zero"] = Atom(NULL, (ZERO_T,))
    axioms["null-succ"] = Forall(x, neg(Atom(NULL, (succ(x),))))
    axioms.update(recursion_axioms())
    name = "ha-n-weak" if weak_induction else "ha-n"
    return Theory(name, sig, RuleSet(), axioms, description="HA relativized to N")


def _class_signature() -> Signature:
    return _arith_sig(
        {PRED: ((IOTA,), IOTA)},
        {NULL: (IOTA,), NAT_P: (IOTA,), MEM: (IOTA, KAPPA)},
        sorts=(IOTA, KAPPA),
    )


def eq_unfolding(a, b) -> Proposition:
    """``forall p (a in p => b in p)``."""
    return Forall(p, Imp(mem(a, p), mem(b, p)))


def n_unfolding(t, variant: bool = False) -> Proposition:
    """Right-hand side of the N rule at ``t`` (full rule, or the variant)."""
    step_body = imps(mem(y, p), mem(succ(y), p))
    if not variant:
        step_body = Imp(Atom(NAT_P, (y,)), step_body)
    return Forall(p, imps(mem(ZERO_T, p), Forall(y, step_body), mem(t, p)))


def _comprehension_axiom(request: SchemeInstanceRequest, theory: Theory) -> Proposition:
    P, xv = request.prop, request.var
    params = tuple(request.params) or tuple(
        sorted(free_vars(P) - {xv}, key=lambda v: v.name)
    )
    cls = theory.registry.class_term(ComprehensionKey(xv, params, P))
    return forall_many([xv, *params], iff(mem(xv, cls), P))


def theory_ha_class(variant_n: bool = False) -> Theory:
    sig = _class_signature()
    registry = ComprehensionRegistry(sig)
    axioms: dict = {
        "eq-class": forall_many([y, z], iff(eq(y, z), eq_unfolding(y, z))),
        "N-class": Forall(n, iff(Atom(NAT_P, (n,)), n_unfolding(n, variant_n))),
        "comprehension": AxiomScheme("comprehension", _comprehension_axiom, "x in f_P(ys) <=> P"),
        "pred-zero": eq(Fn(PRED, (ZERO_T,)), ZERO_T),
        "pred-succ": Forall(x, eq(Fn(PRED, (succ(x),)), x)),
        "null-zero": Atom(NULL, (ZERO_T,)),
        "null-succ": Forall(x, neg(Atom(NULL, (succ(x),)))),
    }
    axioms.update(recursion_axioms())
    name = "ha-class-variant" if variant_n else "ha-class"
    return Theory(name, sig, RuleSet(), axioms, registry, description="HA with classes")


def ha_mod_rules(registry: ComprehensionRegistry, variant_n: bool = False) -> RuleSet:
    prop_rules = [
        PropRule(eq(y, z), eq_unfolding(y, z), "eq"),
        PropRule(Atom(NAT_P, (n,)), n_unfolding(n, variant_n), "N-variant" if variant_n else "N"),
        PropRule(Atom(NULL, (ZERO_T,)), TOP, "null-zero"),
        PropRule(Atom(NULL, (succ(x),)), BOT, "null-succ"),
    ]
    term_rules = predecessor_term_rules() + arithmetic_term_rules()
    return RuleSet(term_rules, prop_rules, [registry])


def theory_ha_mod(variant_n: bool = False) -> Theory:
    """Arithmetic with rewrite rules only: no axioms."""
    sig = _class_signature()
    registry = ComprehensionRegistry(sig)
    name = "ha-mod-variant" if variant_n else "ha-mod"
    return Theory(name, sig, ha_mod_rules(registry, variant_n), {}, registry,
                  description="arithmetic as a theory modulo")


def theory_arith() -> Theory:
    """One-sorted arithmetic with the four +/* rules and the axiom ``forall x (x = x)``."""
    sig = _arith_sig()
    return Theory("arith", sig, RuleSet(arithmetic_term_rules()), {"refl": Forall(x, eq(x, x))},
                  description="equality axiom modulo the rules for + and *")


PURE_PREDICATES = {
    "A": (), "B": (), "C": (), "D": (),
    "P": (IOTA,), "Q": (IOTA,), "R": (IOTA, IOTA),
}
PURE_FUNCTIONS = {"c": ((), IOTA), "d": ((), IOTA), "f": ((IOTA,), IOTA)}


def theory_pure(predicates=None, functions=None, sorts=(IOTA,)) -> Theory:
    """Pure predicate logic; no axioms, no rules.

    Without arguments the vocabulary is propositional letters A-D, unary
    P and Q, binary R, constants c and d and a unary function f.
    """
    if predicates is None:
        predicates = PURE_PREDICATES
    if functions is None:
        functions = PURE_FUNCTIONS
    sig = Signature(frozenset(sorts), functions, predicates)
    return Theory("pure", sig, RuleSet(), {}, description="predicate logic")


# --------------------------------------------------------------------------
# Theory T

pk = Var("p", KAPPA)
yk, zk = Var("y", KAPPA), Var("z", KAPPA)
NAT_T = Fn(NAT)


def eps(t) -> Atom:
    return Atom(EPS, (t,))


def arrow(a, b) -> Fn:
    return Fn(ARROW, (a, b))


def nat_unfolding_t(variant: bool = False) -> Proposition:
    """``forall p (eps(p) => (eps(nat) => eps(p) => eps(p)) => eps(p))``."""
    step = imps(eps(pk), eps(pk))
    if not variant:
        step = Imp(eps(NAT_T), step)
    return Forall(pk, imps(eps(pk), step, eps(pk)))


def theory_t(variant: bool = False) -> Theory:
    sig = Signature(
        frozenset({KAPPA}),
        {NAT: ((), KAPPA), ARROW: ((KAPPA, KAPPA), KAPPA)},
        {EPS: (KAPPA,)},
    )
    rules = RuleSet(
        prop_rules=[
            PropRule(eps(NAT_T), nat_unfolding_t(variant), "eps-nat-variant" if variant else "eps-nat"),
            PropRule(eps(arrow(yk, zk)), Imp(eps(yk), eps(zk)), "eps-arrow"),
        ]
    )
    name = "t-variant" if variant else "t"
    return Theory(name, sig, rules, {}, default_sort=KAPPA, description="the theory T")


THEORIES = {
    "ha": theory_ha,
    "ha-pred": theory_ha_pred,
    "ha-n": theory_ha_n,
    "ha-n-weak": lambda: theory_ha_n(weak_induction=True),
    "ha-class": theory_ha_class,
    "ha-class-variant": lambda: theory_ha_class(variant_n=True),
    "ha-mod": theory_ha_mod,
    "ha-mod-variant": lambda: theory_ha_mod(variant_n=True),
    "t": theory_t,
    "t-variant": lambda: theory_t(variant=True),
    "arith": theory_arith,
    "pure": theory_pure,
}


def load_theory(name: str) -> Theory:
    try:
        return THEORIES[name]()
    except KeyError:
        raise UnknownAxiom(f"unknown theory {name!r}; known: {', '.join(THEORIES)}") from None

