"""Translations: relativization to ``N`` and System T into theory T proofs.

``relativize`` guards every quantifier of a proposition with ``N``.  The
System T part defines simply typed terms with a recursor, their one-step
reduction, and the Parigot translation sending a term of type ``A`` to a
proof of ``eps(A)`` in theory T, together with a search that checks a T
reduction step is matched by at least one proof reduction step.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Optional, Union

from .kernel import CheckReport, check, empty_context
from .normalizer import contract, redexes
from .proofs import (
    App,
    CHILDREN,
    Lam,
    ProofTerm,
    PVar,
    TApp,
    TLam,
    free_proof_vars,
    proof_canonical,
    proof_alpha_eq,
    replace_at,
)
from .syntax import (
    IOTA,
    KAPPA,
    MEM,
    NAT_P,
    NULL,
    And,
    Atom,
    Binary,
    Exists,
    Forall,
    Imp,
    Proposition,
    Term,
    Var,
    fresh_name,
    imps,
)
from .theories import NAT_T, Theory, arrow, eps, theory_t


class TranslationError(ValueError):
    pass


class TTypeError(TranslationError):
    pass


# --------------------------------------------------------------------------
# Relativization


def relativize(a: Proposition) -> Proposition:
    """``|forall x A| = forall x (N(x) => |A|)``, ``|exists x A| = exists x (N(x) /\\ |A|)``."""
    t = type(a)
    if t is Atom:
        if a.pred in (NAT_P, NULL, MEM):
            raise TranslationError(f"predicate {a.pred!r} is outside the language being relativized")
        return a
    if t in Binary:
        return t(relativize(a.left), relativize(a.right))
    if t is Forall or t is Exists:
        if a.var.sort != IOTA:
            raise TranslationError(f"quantified variable {a.var.name} is not of sort iota")
        guard = Atom(NAT_P, (a.var,))
        body = relativize(a.body)
        return Forall(a.var, Imp(guard, body)) if t is Forall else Exists(a.var, And(guard, body))
    return a


# --------------------------------------------------------------------------
# System T


@dataclass(frozen=True)
class NatT:
    def __str__(self):
        return "nat"


@dataclass(frozen=True)
class ArrowT:
    dom: "TType"
    cod: "TType"

    def __str__(self):
        left = str(self.dom)
        if isinstance(self.dom, ArrowT):
            left = f"({left})"
        return f"{left} -> {self.cod}"


TType = Union[NatT, ArrowT]
NAT_TYPE = NatT()


def arrows(*types: TType) -> TType:
    out = types[-1]
    for t in reversed(types[:-1]):
        out = ArrowT(t, out)
    return out


@dataclass(frozen=True)
class TVar:
    name: str
    type: TType


@dataclass(frozen=True)
class TAbs:
    var: str
    type: TType
    body: "TTerm"


@dataclass(frozen=True)
class TApply:
    fn: "TTerm"
    arg: "TTerm"


@dataclass(frozen=True)
class TZero:
    pass


@dataclass(frozen=True)
class TSucc:
    arg: "TTerm"


@dataclass(frozen=True)
class TRec:
    base: "TTerm"
    step: "TTerm"
    num: "TTerm"
    type: TType


TTerm = Union[TVar, TAbs, TApply, TZero, TSucc, TRec]


def t_numeral(n: int) -> TTerm:
    out: TTerm = TZero()
    for _ in range(n):
        out = TSucc(out)
    return out


def show_t(t: TTerm, prec: int = 0) -> str:
    if isinstance(t, TVar):
        return t.name
    if isinstance(t, TZero):
        return "0"
    if isinstance(t, TSucc):
        k, u = 1, t.arg
        while isinstance(u, TSucc):
            k, u = k + 1, u.arg
        if isinstance(u, TZero):
            return str(k)
        return f"S({show_t(t.arg)})"
    if isinstance(t, TRec):
        return f"Rec[{t.type}]({show_t(t.base)}, {show_t(t.step)}, {show_t(t.num)})"
    if isinstance(t, TAbs):
        s = f"\\{t.var}:{_show_ty(t.type)}. {show_t(t.body)}"
        return f"({s})" if prec > 0 else s
    s = f"{show_t(t.fn, 1)} {show_t(t.arg, 2)}"
    return f"({s})" if prec > 1 else s


def _show_ty(a: TType) -> str:
    return f"({a})" if isinstance(a, ArrowT) else str(a)


def t_free_vars(t: TTerm) -> dict:
    """Free variable names with their declared types."""
    if isinstance(t, TVar):
        return {t.name: t.type}
    if isinstance(t, TAbs):
        out = t_free_vars(t.body)
        out.pop(t.var, None)
        return out
    out = {}
    for c in _t_children(t):
        out.update(t_free_vars(c))
    return out


def _t_children(t: TTerm) -> list:
    if isinstance(t, TApply):
        return [t.fn, t.arg]
    if isinstance(t, TSucc):
        return [t.arg]
    if isinstance(t, TRec):
        return [t.base, t.step, t.num]
    if isinstance(t, TAbs):
        return [t.body]
    return []


def type_of(t: TTerm, env: dict | None = None) -> TType:
    """Type of ``t``; free variables use ``env`` first and their own annotation otherwise."""
    env = env or {}
    if isinstance(t, TVar):
        ty = env.get(t.name, t.type)
        if ty != t.type:
            raise TTypeError(f"variable {t.name} used at {t.type} but bound at {ty}")
        return ty
    if isinstance(t, TZero):
        return NAT_TYPE
    if isinstance(t, TSucc):
        if type_of(t.arg, env) != NAT_TYPE:
            raise TTypeError(f"S applied to a non-numeral {show_t(t.arg)}")
        return NAT_TYPE
    if isinstance(t, TAbs):
        return ArrowT(t.type, type_of(t.body, {**env, t.var: t.type}))
    if isinstance(t, TApply):
        f = type_of(t.fn, env)
        if not isinstance(f, ArrowT):
            raise TTypeError(f"{show_t(t.fn)} is applied but has type {f}")
        a = type_of(t.arg, env)
        if a != f.dom:
            raise TTypeError(f"argument {show_t(t.arg)} has type {a}, expected {f.dom}")
        return f.cod
    if isinstance(t, TRec):
        a = t.type
        if type_of(t.base, env) != a:
            raise TTypeError(f"Rec base {show_t(t.base)} does not have type {a}")
        want = arrows(NAT_TYPE, a, a)
        if type_of(t.step, env) != want:
            raise TTypeError(f"Rec step {show_t(t.step)} does not have type {want}")
        if type_of(t.num, env) != NAT_TYPE:
            raise TTypeError(f"Rec argument {show_t(t.num)} does not have type nat")
        return a
    raise TTypeError(f"not a T term: {t!r}")


def ttype_to_term(a: TType) -> Term:
    """``nat`` for NatT and ``A -> B`` (sort kappa) for arrows."""
    if isinstance(a, NatT):
        return NAT_T
    return arrow(ttype_to_term(a.dom), ttype_to_term(a.cod))


def t_subst(t: TTerm, name: str, v: TTerm) -> TTerm:
    if isinstance(t, TVar):
        return v if t.name == name else t
    if isinstance(t, TZero):
        return t
    if isinstance(t, TSucc):
        return TSucc(t_subst(t.arg, name, v))
    if isinstance(t, TApply):
        return TApply(t_subst(t.fn, name, v), t_subst(t.arg, name, v))
    if isinstance(t, TRec):
        return TRec(t_subst(t.base, name, v), t_subst(t.step, name, v), t_subst(t.num, name, v), t.type)
    if t.var == name or name not in t_free_vars(t.body):
        return t
    fv = t_free_vars(v)
    if t.var in fv:
        new = fresh_name(t.var, set(fv) | set(t_free_vars(t.body)) | {name})
        body = t_subst(t.body, t.var, TVar(new, t.type))
        return TAbs(new, t.type, t_subst(body, name, v))
    return TAbs(t.var, t.type, t_subst(t.body, name, v))


def t_contract(t: TTerm):
    """Root reduct of ``t`` with a rule tag, or None."""
    if isinstance(t, TApply) and isinstance(t.fn, TAbs):
        return "beta", t_subst(t.fn.body, t.fn.var, t.arg)
    if isinstance(t, TRec):
        if isinstance(t.num, TZero):
            return "rec-zero", t.base
        if isinstance(t.num, TSucc):
            b = t.num.arg
            return "rec-succ", TApply(TApply(t.step, b), TRec(t.base, t.step, b, t.type))
    return None


def t_step(t: TTerm) -> list:
    """All one-step reducts of ``t``."""
    return [u for _, u in t_step_tagged(t)]


def t_step_tagged(t: TTerm) -> list:
    return [(tag, u) for _, tag, u in t_redexes(t)]


def t_redexes(t: TTerm, path=()) -> list:
    """``(path, tag, reduct)`` for every redex; paths index ``_t_children``."""
    out = []
    c = t_contract(t)
    if c is not None:
        out.append((path, c[0], c[1]))
    for i, ch in enumerate(_t_children(t)):
        for p, tag, u in t_redexes(ch, path + (i,)):
            out.append((p, tag, _t_replace_child(t, i, u)))
    return out


def _t_replace_child(t: TTerm, i: int, u: TTerm) -> TTerm:
    if isinstance(t, TAbs):
        return TAbs(t.var, t.type, u)
    if isinstance(t, TApply):
        return TApply(u, t.arg) if i == 0 else TApply(t.fn, u)
    if isinstance(t, TSucc):
        return TSucc(u)
    parts = [t.base, t.step, t.num]
    parts[i] = u
    return TRec(*parts, t.type)


def t_normalize(t: TTerm, max_steps: int = 100_000) -> TTerm:
    for _ in range(max_steps):
        nxt = t_step(t)
        if not nxt:
            return t
        t = nxt[0]
    raise TranslationError(f"no T normal form within {max_steps} steps")


def t_value(t: TTerm) -> Optional[int]:
    """The integer denoted by a closed numeral, or None."""
    k = 0
    while isinstance(t, TSucc):
        k, t = k + 1, t.arg
    return k if isinstance(t, TZero) else None


# --------------------------------------------------------------------------
# Parigot translation

_P = Var("p", KAPPA)


def _nat_step(p: Var) -> Proposition:
    """``eps(nat) => eps(p) => eps(p)``."""
    return imps(eps(NAT_T), eps(p), eps(p))


def _numeral_binders(avoid: set):
    x = fresh_name("x", avoid)
    f = fresh_name("f", avoid | {x})
    return x, f


def parigot(t: TTerm) -> ProofTerm:
    """Translate a T term of type ``A`` into a theory T proof of ``eps(A)``.

    Free T variables become proof variables of the same name.  The binder
    names ``x`` and ``f`` of numerals are renamed away from the free proof
    variables of the translated predecessor.
    """
    type_of(t)
    return _parigot(t)


def _parigot(t: TTerm) -> ProofTerm:
    if isinstance(t, TVar):
        return PVar(t.name)
    if isinstance(t, TAbs):
        return Lam(t.var, eps(ttype_to_term(t.type)), _parigot(t.body))
    if isinstance(t, TApply):
        return App(_parigot(t.fn), _parigot(t.arg))
    if isinstance(t, TZero):
        x, f = _numeral_binders(set())
        return TLam(_P, Lam(x, eps(_P), Lam(f, _nat_step(_P), PVar(x))))
    if isinstance(t, TSucc):
        n = _parigot(t.arg)
        x, f = _numeral_binders(set(free_proof_vars(n)))
        fx = PVar(f)
        inner = App(App(TApp(n, _P), PVar(x)), fx)
        return TLam(_P, Lam(x, eps(_P), Lam(f, _nat_step(_P), App(App(fx, n), inner))))
    if isinstance(t, TRec):
        n = _parigot(t.num)
        return App(App(TApp(n, ttype_to_term(t.type)), _parigot(t.base)), _parigot(t.step))
    raise TTypeError(f"not a T term: {t!r}")


# Where the translation of each child of a T node sits inside the
# translation of the node (proof paths, as in modarith.proofs).
_CHILD_IMAGES = {
    TAbs: [[(0,)]],
    TApply: [[(0,)], [(1,)]],
    TSucc: [[(0, 0, 0, 0, 1), (0, 0, 0, 1, 0, 0, 0)]],
    TRec: [[(0, 1)], [(1,)], [(0, 0, 0)]],
}


def image_paths(t: TTerm, tpath) -> list:
    """Proof paths in ``parigot(t)`` of the copies of the subterm at ``tpath``."""
    if not tpath:
        return [()]
    here = _CHILD_IMAGES[type(t)][tpath[0]]
    child = _t_children(t)[tpath[0]]
    return [h + rest for h in here for rest in image_paths(child, tpath[1:])]


def parigot_numeral(n: int) -> ProofTerm:
    """The normal Parigot numeral, built directly (an oracle for ``parigot``)."""
    if n < 0:
        raise ValueError("numerals are non-negative")
    body = PVar("x")
    num = TLam(_P, Lam("x", eps(_P), Lam("f", _nat_step(_P), body)))
    for _ in range(n):
        body = App(App(PVar("f"), num), body)
        num = TLam(_P, Lam("x", eps(_P), Lam("f", _nat_step(_P), body)))
    return num


def decode_numeral(pi: ProofTerm) -> Optional[int]:
    """Inverse of ``parigot_numeral`` up to alpha-equivalence, else None."""
    if not (isinstance(pi, TLam) and isinstance(pi.body, Lam) and isinstance(pi.body.body, Lam)):
        return None
    body = pi.body.body.body
    k = 0
    while isinstance(body, App):
        k, body = k + 1, body.arg
    return k if proof_alpha_eq(pi, parigot_numeral(k)) else None


def translation_check(t: TTerm, theory: Theory | None = None, fuel=None) -> CheckReport:
    """Type preservation: ``parigot(t)`` proves ``eps(type(t))`` in theory T."""
    theory = theory or theory_t()
    env = t_free_vars(t)
    ctx = empty_context(theory)
    for name, ty in sorted(env.items()):
        ctx = ctx.extend(name, eps(ttype_to_term(ty)))
    goal = eps(ttype_to_term(type_of(t)))
    return check(ctx, parigot(t), goal, fuel)


# --------------------------------------------------------------------------
# Simulation

DEFAULT_SIMULATION_BUDGET = 500


@dataclass
class SimulationResult:
    status: str  # "simulated", "unreachable" or "inconclusive"
    steps: int = 0
    explored: int = 0
    path: tuple = ()

    def __bool__(self):
        return self.status == "simulated"


def _canon_children(pi):
    t = type(pi)
    if t is Lam:
        return (2,)
    if t is TLam:
        return (2,)
    if t is TApp:
        return (1,)
    return tuple(range(1, 1 + len(CHILDREN[t])))


def _diff_roots(pi, ca, cb, path, out):
    """Positions in ``pi`` below which ``pi`` and the target disagree."""
    if ca == cb:
        return
    idx = _canon_children(pi)
    same_shape = (
        type(ca) is tuple
        and type(cb) is tuple
        and len(ca) == len(cb)
        and ca[0] == cb[0]
        and all(ca[i] == cb[i] for i in range(1, len(ca)) if i not in idx)
    )
    if not same_shape or not idx:
        out.append(path)
        return
    kids = [getattr(pi, f) for f in CHILDREN[type(pi)]]
    for k, i in enumerate(idx):
        _diff_roots(kids[k], ca[i], cb[i], path + (k,), out)


def _under(path, root) -> bool:
    return path[: len(root)] == root


def _diffs(pi, target_canon) -> list:
    roots: list = []
    _diff_roots(pi, proof_canonical(pi), target_canon, (), roots)
    return roots


def _reducts_within(pi, root, roots, mode):
    """Reducts by redexes inside ``root``.

    ``mode`` narrows the choice: ``spine`` keeps redexes on the head spine
    of ``root`` (paths extending it by zeros only), ``prune`` keeps
    redexes that contain or lie inside a disagreement, ``all`` keeps all.
    """
    k = len(root)
    for r in redexes(pi):
        if not _under(r.path, root):
            continue
        if mode == "spine" and any(r.path[k:]):
            continue
        if mode == "prune" and not any(_under(d, r.path) or _under(r.path, d) for d in roots):
            continue
        node = pi
        for i in r.path:
            node = getattr(node, CHILDREN[type(node)][i])
        yield r, replace_at(pi, r.path, contract(node)[1])


def _repair(pi, root, roots, target, budget, mode="prune"):
    """Breadth-first search for reductions inside ``root`` removing every
    disagreement below it; spends ``budget[0]`` per expanded state."""
    seen = {proof_canonical(pi)}
    queue = deque([(pi, (), roots)])
    while queue:
        if budget[0] <= 0:
            return None
        cur, local, cur_roots = queue.popleft()
        budget[0] -= 1
        for step, nxt in _reducts_within(cur, root, cur_roots, mode):
            c = proof_canonical(nxt)
            if c in seen:
                continue
            seen.add(c)
            nroots: list = []
            _diff_roots(nxt, c, target, (), nroots)
            if not any(_under(d, root) for d in nroots):
                return nxt, local + (step,), nroots
            queue.append((nxt, local + (step,), nroots))
    return None


def simulate_check(
    t: TTerm,
    u: TTerm,
    max_steps: int = DEFAULT_SIMULATION_BUDGET,
    theory: Theory | None = None,
) -> SimulationResult:
    """Search for ``parigot(t) ->+ parigot(u)`` with at least one step.

    ``u`` must be a one-step reduct of ``t``.  The translation is
    compositional, so the T redex has one or more copies in
    ``parigot(t)`` (the successor clause duplicates its argument).  Each
    copy is repaired by a breadth-first search over the redexes inside it
    (those on its head spine first, where the beta and recursor steps
    land) until it agrees with ``parigot(u)`` at that position; the copies are
    disjoint, so their reductions commute.  Any remaining disagreement is
    searched for the same way, widening to parent positions when needed.
    States are compared up to alpha-equivalence and at most ``max_steps``
    are expanded in total; running out gives ``inconclusive``.
    """
    if theory is not None and any(r.name == "eps-nat-variant" for r in theory.rules.prop_rules):
        raise TranslationError(
            f"theory {theory.name} uses the iterator form of the nat rule; "
            "simulating the recursor needs the full rule (theory t)"
        )
    candidates = [p for p, _, v in t_redexes(t) if v == u]
    if not candidates:
        raise TranslationError(f"{show_t(u)} is not a one-step reduct of {show_t(t)}")
    src, dst = parigot(t), parigot(u)
    target = proof_canonical(dst)
    best = None
    for tpath in candidates:
        res = _simulate_from(src, target, image_paths(t, tpath), max_steps)
        if res:
            return res
        best = best or res
    return best


def _simulate_from(pi, target, images, max_steps) -> SimulationResult:
    trail: tuple = ()
    budget = [max_steps]
    roots = _diffs(pi, target)
    if not roots:
        return SimulationResult("unreachable", 0, 0)
    queue = list(images)
    while roots:
        if queue:
            root = queue.pop(0)
            if not any(_under(d, root) for d in roots):
                continue
            found = _repair(pi, root, roots, target, budget, "spine")
            if found is None:
                found = _repair(pi, root, roots, target, budget, "all")
        else:
            root = roots[0]
            while True:
                found = _repair(pi, root, roots, target, budget)
                if found is not None or not root:
                    break
                root = root[:-1]
        if found is None:
            status = "inconclusive" if budget[0] <= 0 else "unreachable"
            return SimulationResult(status, len(trail), max_steps - budget[0], trail)
        pi, local, roots = found
        trail += local
    return SimulationResult("simulated", len(trail), max_steps - budget[0], trail)


# --------------------------------------------------------------------------
# Random well-typed T terms

SMALL_TYPES = (NAT_TYPE, ArrowT(NAT_TYPE, NAT_TYPE))


def random_t_term(rng: random.Random, ty: TType = NAT_TYPE, depth: int = 3, env=None) -> TTerm:
    """A random closed (relative to ``env``) well-typed term of type ``ty``."""
    env = dict(env or {})
    vars_ = [TVar(n, a) for n, a in env.items() if a == ty]
    if depth <= 0:
        if vars_ and rng.random() < 0.6:
            return rng.choice(vars_)
        if isinstance(ty, NatT):
            return t_numeral(rng.randint(0, 2))
        name = f"v{len(env)}"
        return TAbs(name, ty.dom, random_t_term(rng, ty.cod, 0, {**env, name: ty.dom}))
    choices = ["app", "rec"] + (["var"] if vars_ else [])
    choices += ["succ", "zero"] if isinstance(ty, NatT) else ["lam", "lam"]
    kind = rng.choice(choices)
    d = depth - 1
    if kind == "var":
        return rng.choice(vars_)
    if kind == "zero":
        return TZero()
    if kind == "succ":
        return TSucc(random_t_term(rng, NAT_TYPE, d, env))
    if kind == "lam":
        name = f"v{len(env)}"
        return TAbs(name, ty.dom, random_t_term(rng, ty.cod, d, {**env, name: ty.dom}))
    if kind == "app":
        arg_ty = rng.choice(SMALL_TYPES[:1] if isinstance(ty, ArrowT) else SMALL_TYPES)
        fn = random_t_term(rng, ArrowT(arg_ty, ty), d, env)
        return TApply(fn, random_t_term(rng, arg_ty, d, env))
    a, b = f"v{len(env)}", f"v{len(env) + 1}"
    step = TAbs(a, NAT_TYPE, TAbs(b, ty, random_t_term(rng, ty, d, {**env, a: NAT_TYPE, b: ty})))
    return TRec(random_t_term(rng, ty, d, env), step, random_t_term(rng, NAT_TYPE, d, env), ty)


def random_reducible_t_terms(count: int, seed: int = 0, depth: int = 3) -> list:
    """``count`` closed well-typed T terms, each with at least one redex."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        ty = rng.choice(SMALL_TYPES)
        t = random_t_term(rng, ty, depth)
        if t_step(t):
            out.append(t)
    return out

