"""Proof terms for natural deduction modulo.

One constructor per inference rule.  Binders are explicit; the optional
proposition annotations (Church style) make type checking syntax
directed.  Paths into a proof are tuples of child indices, with children
numbered in the order given by :data:`CHILDREN`.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .syntax import (
    Exists,
    Proposition,
    Term,
    Var,
    canonical,
    canonical_term,
    free_vars,
    fresh_name,
    show,
    show_term,
    subst,
    subst_term,
    term_vars,
)


class _Node:
    """Shared helpers; subclasses are frozen dataclasses."""

    def __str__(self):
        return show_proof(self)

    def _cached(self, key, fn):
        try:
            return object.__getattribute__(self, key)
        except AttributeError:
            val = fn()
            object.__setattr__(self, key, val)
            return val


@dataclass(frozen=True, eq=True)
class PVar(_Node):
    name: str


@dataclass(frozen=True)
class Lam(_Node):
    var: str
    domain: Optional[Proposition]
    body: "ProofTerm"


@dataclass(frozen=True)
class App(_Node):
    fn: "ProofTerm"
    arg: "ProofTerm"


@dataclass(frozen=True)
class Pair(_Node):
    left: "ProofTerm"
    right: "ProofTerm"


@dataclass(frozen=True)
class Fst(_Node):
    proof: "ProofTerm"


@dataclass(frozen=True)
class Snd(_Node):
    proof: "ProofTerm"


@dataclass(frozen=True)
class InL(_Node):
    proof: "ProofTerm"
    right: Optional[Proposition] = None


@dataclass(frozen=True)
class InR(_Node):
    proof: "ProofTerm"
    left: Optional[Proposition] = None


@dataclass(frozen=True)
class Case(_Node):
    scrut: "ProofTerm"
    lvar: str
    lbody: "ProofTerm"
    rvar: str
    rbody: "ProofTerm"


@dataclass(frozen=True)
class TruthIntro(_Node):
    pass


@dataclass(frozen=True)
class ExFalso(_Node):
    proof: "ProofTerm"
    target: Optional[Proposition] = None


@dataclass(frozen=True)
class TLam(_Node):
    var: Var
    body: "ProofTerm"


@dataclass(frozen=True)
class TApp(_Node):
    proof: "ProofTerm"
    term: Term


@dataclass(frozen=True)
class ExIntro(_Node):
    """``<t, proof>`` with optional witness annotation ``<x, body>``."""

    witness: Term
    proof: "ProofTerm"
    var: Optional[Var] = None
    body: Optional[Proposition] = None


@dataclass(frozen=True)
class ExElim(_Node):
    proof: "ProofTerm"
    tvar: Var
    pvar: str
    body: "ProofTerm"
    result: Optional[Proposition] = None


ProofTerm = Union[
    PVar, Lam, App, Pair, Fst, Snd, InL, InR, Case, TruthIntro, ExFalso, TLam, TApp, ExIntro, ExElim
]

CHILDREN = {
    PVar: (),
    Lam: ("body",),
    App: ("fn", "arg"),
    Pair: ("left", "right"),
    Fst: ("proof",),
    Snd: ("proof",),
    InL: ("proof",),
    InR: ("proof",),
    Case: ("scrut", "lbody", "rbody"),
    TruthIntro: (),
    ExFalso: ("proof",),
    TLam: ("body",),
    TApp: ("proof",),
    ExIntro: ("proof",),
    ExElim: ("proof", "body"),
}

INTRODUCTIONS = (Lam, Pair, InL, InR, TruthIntro, TLam, ExIntro)
ELIMINATIONS = (App, Fst, Snd, Case, ExFalso, TApp, ExElim)


def children(pi: ProofTerm) -> list:
    return [getattr(pi, f) for f in CHILDREN[type(pi)]]


def subterm(pi: ProofTerm, path) -> ProofTerm:
    for i in path:
        pi = getattr(pi, CHILDREN[type(pi)][i])
    return pi


def replace_at(pi: ProofTerm, path, new: ProofTerm) -> ProofTerm:
    """Replace the subterm at ``path`` (no capture checks: paths address positions)."""
    if not path:
        return new
    field_name = CHILDREN[type(pi)][path[0]]
    child = getattr(pi, field_name)
    return dataclasses.replace(pi, **{field_name: replace_at(child, path[1:], new)})


def size(pi: ProofTerm) -> int:
    return 1 + sum(size(c) for c in children(pi))


# --------------------------------------------------------------------------
# Free variables


def _opt_fv(a) -> frozenset:
    return free_vars(a) if a is not None else frozenset()


def free_proof_vars(pi: ProofTerm) -> frozenset:
    return pi._cached("_fpv", lambda: _fpv(pi))


def _fpv(pi):
    t = type(pi)
    if t is PVar:
        return frozenset((pi.name,))
    if t is Lam:
        return free_proof_vars(pi.body) - {pi.var}
    if t is Case:
        return (
            free_proof_vars(pi.scrut)
            | (free_proof_vars(pi.lbody) - {pi.lvar})
            | (free_proof_vars(pi.rbody) - {pi.rvar})
        )
    if t is ExElim:
        return free_proof_vars(pi.proof) | (free_proof_vars(pi.body) - {pi.pvar})
    out = frozenset()
    for c in children(pi):
        out |= free_proof_vars(c)
    return out


def free_term_vars(pi: ProofTerm) -> frozenset:
    """Term variables free in the proof's annotations and term arguments."""
    return pi._cached("_ftv", lambda: _ftv(pi))


def _ftv(pi):
    t = type(pi)
    if t is PVar or t is TruthIntro:
        return frozenset()
    if t is Lam:
        return _opt_fv(pi.domain) | free_term_vars(pi.body)
    if t is InL:
        return _opt_fv(pi.right) | free_term_vars(pi.proof)
    if t is InR:
        return _opt_fv(pi.left) | free_term_vars(pi.proof)
    if t is ExFalso:
        return _opt_fv(pi.target) | free_term_vars(pi.proof)
    if t is TLam:
        return free_term_vars(pi.body) - {pi.var}
    if t is TApp:
        return free_term_vars(pi.proof) | term_vars(pi.term)
    if t is ExIntro:
        out = term_vars(pi.witness) | free_term_vars(pi.proof)
        if pi.body is not None:
            out |= free_vars(pi.body) - {pi.var}
        return out
    if t is ExElim:
        return (
            free_term_vars(pi.proof)
            | (free_term_vars(pi.body) - {pi.tvar})
            | _opt_fv(pi.result)
        )
    out = frozenset()
    for c in children(pi):
        out |= free_term_vars(c)
    return out


def bound_names(pi: ProofTerm) -> set:
    """Every binder name in the proof (proof and term binders)."""
    out = set()
    stack = [pi]
    while stack:
        q = stack.pop()
        t = type(q)
        if t is Lam:
            out.add(q.var)
        elif t is Case:
            out |= {q.lvar, q.rvar}
        elif t is TLam:
            out.add(q.var.name)
        elif t is ExElim:
            out |= {q.tvar.name, q.pvar}
        stack.extend(children(q))
    return out


# --------------------------------------------------------------------------
# Substitution


def subst_proof(
    pi: ProofTerm,
    proofs: Mapping[str, ProofTerm] | None = None,
    terms: Mapping[Var, Term] | None = None,
) -> ProofTerm:
    """Simultaneous capture-avoiding substitution of proofs for proof
    variables and terms for term variables."""
    pm = {k: v for k, v in (proofs or {}).items() if not (isinstance(v, PVar) and v.name == k)}
    tm = {k: v for k, v in (terms or {}).items() if v != k}
    if not pm and not tm:
        return pi
    return _sub(pi, pm, tm)


def _incoming(pm, tm):
    pnames, tnames = set(), set()
    for v in pm.values():
        pnames |= free_proof_vars(v)
        tnames |= {u.name for u in free_term_vars(v)}
    for t in tm.values():
        tnames |= {u.name for u in term_vars(t)}
    return pnames, tnames


def _restrict(pi, pm, tm):
    fp = free_proof_vars(pi)
    ft = free_term_vars(pi)
    pm = {k: v for k, v in pm.items() if k in fp}
    tm = {k: v for k, v in tm.items() if k in ft}
    return pm, tm


def _sp(a, tm):
    return subst(a, tm) if a is not None and tm else a


def _bind_proof(name, body, pm, tm):
    """Enter a proof binder: returns (new name, pm for the body)."""
    pm = {k: v for k, v in pm.items() if k != name}
    pin, _ = _incoming(pm, {})
    if name in pin:
        avoid = pin | free_proof_vars(body) | set(pm)
        new = fresh_name(name, avoid)
        pm[name] = PVar(new)
        return new, pm
    return name, pm


def _bind_term(var, body_ftv, pm, tm):
    tm = {k: v for k, v in tm.items() if k != var}
    _, tin = _incoming(pm, tm)
    if var.name in tin:
        avoid = tin | {u.name for u in body_ftv} | {k.name for k in tm}
        new = Var(fresh_name(var.name, avoid), var.sort)
        tm[var] = new
        return new, tm
    return var, tm


def _sub(pi, pm, tm):
    pm, tm = _restrict(pi, pm, tm)
    if not pm and not tm:
        return pi
    t = type(pi)
    if t is PVar:
        return pm.get(pi.name, pi)
    if t is Lam:
        name, pm2 = _bind_proof(pi.var, pi.body, pm, tm)
        return Lam(name, _sp(pi.domain, tm), _sub(pi.body, pm2, tm))
    if t is App:
        return App(_sub(pi.fn, pm, tm), _sub(pi.arg, pm, tm))
    if t is Pair:
        return Pair(_sub(pi.left, pm, tm), _sub(pi.right, pm, tm))
    if t is Fst or t is Snd:
        return t(_sub(pi.proof, pm, tm))
    if t is InL:
        return InL(_sub(pi.proof, pm, tm), _sp(pi.right, tm))
    if t is InR:
        return InR(_sub(pi.proof, pm, tm), _sp(pi.left, tm))
    if t is Case:
        ln, lpm = _bind_proof(pi.lvar, pi.lbody, pm, tm)
        rn, rpm = _bind_proof(pi.rvar, pi.rbody, pm, tm)
        return Case(_sub(pi.scrut, pm, tm), ln, _sub(pi.lbody, lpm, tm), rn, _sub(pi.rbody, rpm, tm))
    if t is ExFalso:
        return ExFalso(_sub(pi.proof, pm, tm), _sp(pi.target, tm))
    if t is TLam:
        var, tm2 = _bind_term(pi.var, free_term_vars(pi.body), pm, tm)
        return TLam(var, _sub(pi.body, pm, tm2))
    if t is TApp:
        return TApp(_sub(pi.proof, pm, tm), subst_term(pi.term, tm))
    if t is ExIntro:
        var, body = pi.var, pi.body
        if body is not None and tm:
            ann = subst(Exists(var, body), tm)
            var, body = ann.var, ann.body
        return ExIntro(subst_term(pi.witness, tm), _sub(pi.proof, pm, tm), var, body)
    if t is ExElim:
        tvar, tm2 = _bind_term(pi.tvar, free_term_vars(pi.body), pm, tm)
        pname, pm2 = _bind_proof(pi.pvar, pi.body, pm, tm2)
        return ExElim(_sub(pi.proof, pm, tm), tvar, pname, _sub(pi.body, pm2, tm2), _sp(pi.result, tm))
    if t is TruthIntro:
        return pi
    raise TypeError(f"not a proof term: {pi!r}")


# --------------------------------------------------------------------------
# Alpha-equivalence


def proof_canonical(pi: ProofTerm):
    return _canon(pi, {}, 0, {}, 0)


def _canon_prop(a, tenv, tdepth):
    return None if a is None else canonical(a, tenv, tdepth)


def _canon(pi, penv, pdepth, tenv, tdepth):
    t = type(pi)
    if t is PVar:
        if pi.name in penv:
            return ("#", pdepth - penv[pi.name])
        return ("pv", pi.name)
    if t is Lam:
        inner = {**penv, pi.var: pdepth + 1}
        return ("lam", _canon_prop(pi.domain, tenv, tdepth), _canon(pi.body, inner, pdepth + 1, tenv, tdepth))
    if t is Case:
        li = {**penv, pi.lvar: pdepth + 1}
        ri = {**penv, pi.rvar: pdepth + 1}
        return (
            "case",
            _canon(pi.scrut, penv, pdepth, tenv, tdepth),
            _canon(pi.lbody, li, pdepth + 1, tenv, tdepth),
            _canon(pi.rbody, ri, pdepth + 1, tenv, tdepth),
        )
    if t is TLam:
        ti = {**tenv, pi.var: tdepth + 1}
        return ("tlam", pi.var.sort, _canon(pi.body, penv, pdepth, ti, tdepth + 1))
    if t is TApp:
        return ("tapp", _canon(pi.proof, penv, pdepth, tenv, tdepth), canonical_term(pi.term, tenv, tdepth))
    if t is ExIntro:
        ann = None
        if pi.body is not None:
            ann = canonical(Exists(pi.var, pi.body), tenv, tdepth)
        return ("pack", canonical_term(pi.witness, tenv, tdepth), _canon(pi.proof, penv, pdepth, tenv, tdepth), ann)
    if t is ExElim:
        ti = {**tenv, pi.tvar: tdepth + 1}
        pi_env = {**penv, pi.pvar: pdepth + 1}
        return (
            "unpack",
            _canon(pi.proof, penv, pdepth, tenv, tdepth),
            pi.tvar.sort,
            _canon(pi.body, pi_env, pdepth + 1, ti, tdepth + 1),
            _canon_prop(pi.result, tenv, tdepth),
        )
    if t is InL:
        return ("inl", _canon(pi.proof, penv, pdepth, tenv, tdepth), _canon_prop(pi.right, tenv, tdepth))
    if t is InR:
        return ("inr", _canon(pi.proof, penv, pdepth, tenv, tdepth), _canon_prop(pi.left, tenv, tdepth))
    if t is ExFalso:
        return ("absurd", _canon(pi.proof, penv, pdepth, tenv, tdepth), _canon_prop(pi.target, tenv, tdepth))
    if t is TruthIntro:
        return ("I",)
    return (t.__name__, *(_canon(c, penv, pdepth, tenv, tdepth) for c in children(pi)))


def proof_alpha_eq(a: ProofTerm, b: ProofTerm) -> bool:
    return a == b or proof_canonical(a) == proof_canonical(b)


def erase(pi: ProofTerm) -> ProofTerm:
    """Drop every optional annotation (Curry-style skeleton)."""
    t = type(pi)
    if t is Lam:
        return Lam(pi.var, None, erase(pi.body))
    if t is InL:
        return InL(erase(pi.proof))
    if t is InR:
        return InR(erase(pi.proof))
    if t is ExFalso:
        return ExFalso(erase(pi.proof))
    if t is ExIntro:
        return ExIntro(pi.witness, erase(pi.proof))
    if t is ExElim:
        return ExElim(erase(pi.proof), pi.tvar, pi.pvar, erase(pi.body))
    if not CHILDREN[t]:
        return pi
    return dataclasses.replace(pi, **{f: erase(getattr(pi, f)) for f in CHILDREN[t]})


# --------------------------------------------------------------------------
# Printing (re-readable by modarith.parser)


def _ann(a: Proposition) -> str:
    s = show(a)
    return f"({s})" if " " in s else s


def show_proof(pi: ProofTerm, prec: int = 0) -> str:
    t = type(pi)
    if t is PVar:
        return pi.name
    if t is TruthIntro:
        return "I"
    if t is Lam or t is TLam:
        parts = []
        body = pi
        while type(body) in (Lam, TLam):
            if type(body) is Lam:
                parts.append(f"\\{body.var}" + (f":{_ann(body.domain)}" if body.domain is not None else ""))
            else:
                parts.append(f"\\{body.var.name}:{body.var.sort}")
            body = body.body
        s = ". ".join(parts) + ". " + show_proof(body, 0)
        return f"({s})" if prec > 0 else s
    if t is App or t is TApp:
        s = _show_app(pi)
        return f"({s})" if prec > 1 else s
    if t is Pair:
        return f"<{show_proof(pi.left)}, {show_proof(pi.right)}>"
    if t is Fst:
        return f"fst({show_proof(pi.proof)})"
    if t is Snd:
        return f"snd({show_proof(pi.proof)})"
    if t is InL:
        ann = f", {show(pi.right)}" if pi.right is not None else ""
        return f"inl({show_proof(pi.proof)}{ann})"
    if t is InR:
        ann = f", {show(pi.left)}" if pi.left is not None else ""
        return f"inr({show_proof(pi.proof)}{ann})"
    if t is Case:
        return (
            f"case({show_proof(pi.scrut)}, {pi.lvar}. {show_proof(pi.lbody)}, "
            f"{pi.rvar}. {show_proof(pi.rbody)})"
        )
    if t is ExFalso:
        ann = f", {show(pi.target)}" if pi.target is not None else ""
        return f"absurd({show_proof(pi.proof)}{ann})"
    if t is ExIntro:
        ann = ""
        if pi.body is not None:
            ann = f", {pi.var.name}:{pi.var.sort}. {show(pi.body)}"
        return f"pack({show_term(pi.witness)}, {show_proof(pi.proof)}{ann})"
    if t is ExElim:
        ann = f", {show(pi.result)}" if pi.result is not None else ""
        return (
            f"unpack({show_proof(pi.proof)}, {pi.tvar.name}:{pi.tvar.sort} {pi.pvar}. "
            f"{show_proof(pi.body)}{ann})"
        )
    raise TypeError(f"not a proof term: {pi!r}")


def _show_app(pi) -> str:
    args = []
    head = pi
    while type(head) in (App, TApp):
        if type(head) is App:
            args.append(show_proof(head.arg, 2))
        else:
            args.append(f"[{show_term(head.term)}]")
        head = head.fn if type(head) is App else head.proof
    return " ".join([show_proof(head, 2), *reversed(args)])
