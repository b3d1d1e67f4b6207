"""Sorted first-order syntax: signatures, terms, propositions.

Terms and propositions are immutable dataclasses. Variables carry their
sort, so a variable is identified by the pair ``(name, sort)``.  Bound
variables are handled by name with capture-avoiding substitution;
:func:`canonical` gives a nameless (de Bruijn) view used for
alpha-equivalence and hashing of alpha-classes.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

IOTA = "iota"
KAPPA = "kappa"

# reserved symbol names shared by every built-in theory
ZERO = "0"
SUCC = "S"
PLUS = "+"
TIMES = "*"
PRED = "Pred"
EQ = "="
NULL = "Null"
NAT_P = "N"
MEM = "in"
EPS = "eps"
NAT = "nat"
ARROW = "->"


class SortError(Exception):
    """Raised when a term or proposition is not well-sorted."""


# --------------------------------------------------------------------------
# Signatures


@dataclass(frozen=True)
class Signature:
    sorts: frozenset
    functions: Mapping[str, tuple] = field(default_factory=dict)
    predicates: Mapping[str, tuple] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "sorts", frozenset(self.sorts))
        object.__setattr__(
            self, "functions", {k: (tuple(a), r) for k, (a, r) in self.functions.items()}
        )
        object.__setattr__(
            self, "predicates", {k: tuple(a) for k, a in self.predicates.items()}
        )
        both = set(self.functions) & set(self.predicates)
        if both:
            raise SortError(f"names used both as function and predicate: {sorted(both)}")
        for name, (args, res) in self.functions.items():
            for s in (*args, res):
                if s not in self.sorts:
                    raise SortError(f"function {name!r} mentions undeclared sort {s!r}")
        for name, args in self.predicates.items():
            for s in args:
                if s not in self.sorts:
                    raise SortError(f"predicate {name!r} mentions undeclared sort {s!r}")

    def with_function(self, name: str, args, result: str) -> "Signature":
        if self.functions.get(name) == (tuple(args), result):
            return self
        if name in self.functions:
            raise SortError(f"function {name!r} already declared with another rank")
        funcs = dict(self.functions)
        funcs[name] = (tuple(args), result)
        return Signature(self.sorts, funcs, self.predicates)

    def with_predicate(self, name: str, args) -> "Signature":
        preds = dict(self.predicates)
        preds[name] = tuple(args)
        return Signature(self.sorts, self.functions, preds)

    def with_sort(self, name: str) -> "Signature":
        return Signature(self.sorts | {name}, self.functions, self.predicates)


# --------------------------------------------------------------------------
# Terms


@dataclass(frozen=True, slots=True)
class Var:
    name: str
    sort: str = IOTA

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Fn:
    name: str
    args: tuple = ()

    def __str__(self):
        return show_term(self)


Term = Union[Var, Fn]


def numeral(n: int) -> Term:
    """The term S^n(0)."""
    if n < 0:
        raise ValueError("numerals are non-negative")
    t: Term = Fn(ZERO)
    for _ in range(n):
        t = Fn(SUCC, (t,))
    return t


def numeral_value(t: Term):
    """Return n if ``t`` is S^n(0), else None."""
    n = 0
    while isinstance(t, Fn) and t.name == SUCC and len(t.args) == 1:
        t = t.args[0]
        n += 1
    if isinstance(t, Fn) and t.name == ZERO and not t.args:
        return n
    return None


def plus(a: Term, b: Term) -> Fn:
    return Fn(PLUS, (a, b))


def times(a: Term, b: Term) -> Fn:
    return Fn(TIMES, (a, b))


def succ(a: Term) -> Fn:
    return Fn(SUCC, (a,))


def term_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t,))
    if not t.args:
        return frozenset()
    return frozenset().union(*(term_vars(a) for a in t.args))


def term_symbols(t: Term) -> set:
    out = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Fn):
            out.add(u.name)
            stack.extend(u.args)
    return out


def subst_term(t: Term, mapping: Mapping[Var, Term]) -> Term:
    if not mapping:
        return t
    if isinstance(t, Var):
        return mapping.get(t, t)
    if not t.args:
        return t
    return Fn(t.name, tuple(subst_term(a, mapping) for a in t.args))


def sort_of(t: Term, sig: Signature) -> str:
    if isinstance(t, Var):
        if t.sort not in sig.sorts:
            raise SortError(f"variable {t.name} has undeclared sort {t.sort!r}")
        return t.sort
    rank = sig.functions.get(t.name)
    if rank is None:
        raise SortError(f"undeclared function symbol {t.name!r}")
    args, res = rank
    if len(args) != len(t.args):
        raise SortError(f"{t.name!r} expects {len(args)} arguments, got {len(t.args)}")
    for expected, a in zip(args, t.args):
        got = sort_of(a, sig)
        if got != expected:
            raise SortError(
                f"argument {show_term(a)} of {t.name!r} has sort {got}, expected {expected}"
            )
    return res


# --------------------------------------------------------------------------
# Propositions


@dataclass(frozen=True, slots=True)
class Atom:
    pred: str
    args: tuple = ()

    def __str__(self):
        return show(self)


@dataclass(frozen=True, slots=True)
class Top:
    def __str__(self):
        return "true"


@dataclass(frozen=True, slots=True)
class Bot:
    def __str__(self):
        return "false"


@dataclass(frozen=True, slots=True)
class Imp:
    left: "Proposition"
    right: "Proposition"

    def __str__(self):
        return show(self)


@dataclass(frozen=True, slots=True)
class And:
    left: "Proposition"
    right: "Proposition"

    def __str__(self):
        return show(self)


@dataclass(frozen=True, slots=True)
class Or:
    left: "Proposition"
    right: "Proposition"

    def __str__(self):
        return show(self)


@dataclass(frozen=True, slots=True)
class Forall:
    var: Var
    body: "Proposition"

    def __str__(self):
        return show(self)


@dataclass(frozen=True, slots=True)
class Exists:
    var: Var
    body: "Proposition"

    def __str__(self):
        return show(self)


Proposition = Union[Atom, Top, Bot, Imp, And, Or, Forall, Exists]
Binary = (Imp, And, Or)
Quantifier = (Forall, Exists)

TOP = Top()
BOT = Bot()


def neg(a: Proposition) -> Imp:
    return Imp(a, BOT)


def iff(a: Proposition, b: Proposition) -> And:
    return And(Imp(a, b), Imp(b, a))


def eq(a: Term, b: Term) -> Atom:
    return Atom(EQ, (a, b))


def mem(a: Term, b: Term) -> Atom:
    return Atom(MEM, (a, b))


def imps(*props: Proposition) -> Proposition:
    """Right-nested implication ``p1 => p2 => ... => pn``."""
    out = props[-1]
    for p in reversed(props[:-1]):
        out = Imp(p, out)
    return out


def forall_many(vars_: Iterable[Var], body: Proposition) -> Proposition:
    for v in reversed(list(vars_)):
        body = Forall(v, body)
    return body


def free_vars(a: Proposition) -> frozenset:
    if isinstance(a, Atom):
        if not a.args:
            return frozenset()
        return frozenset().union(*(term_vars(t) for t in a.args))
    if isinstance(a, (Top, Bot)):
        return frozenset()
    if isinstance(a, Binary):
        return free_vars(a.left) | free_vars(a.right)
    return free_vars(a.body) - {a.var}


def all_var_names(a: Proposition) -> set:
    """Names of every variable occurring in ``a``, bound or free."""
    out = set()
    stack = [a]
    while stack:
        p = stack.pop()
        if isinstance(p, Atom):
            for t in p.args:
                out.update(v.name for v in term_vars(t))
        elif isinstance(p, Binary):
            stack += [p.left, p.right]
        elif isinstance(p, Quantifier):
            out.add(p.var.name)
            stack.append(p.body)
    return out


def symbols(a: Proposition) -> tuple[set, set]:
    """(function symbols, predicate symbols) occurring in ``a``."""
    funcs, preds = set(), set()
    stack = [a]
    while stack:
        p = stack.pop()
        if isinstance(p, Atom):
            preds.add(p.pred)
            for t in p.args:
                funcs |= term_symbols(t)
        elif isinstance(p, Binary):
            stack += [p.left, p.right]
        elif isinstance(p, Quantifier):
            stack.append(p.body)
    return funcs, preds


_SUFFIX = re.compile(r"^(.*?)(\d*)$")


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    if base not in avoid:
        return base
    stem = _SUFFIX.match(base).group(1) or "v"
    for i in itertools.count(1):
        cand = f"{stem}{i}"
        if cand not in avoid:
            return cand
    raise AssertionError("unreachable")


def fresh_var(v: Var, avoid: Iterable[str]) -> Var:
    return Var(fresh_name(v.name, avoid), v.sort)


def subst(a: Proposition, mapping: Mapping[Var, Term]) -> Proposition:
    """Simultaneous capture-avoiding substitution of terms for variables."""
    mapping = {v: t for v, t in mapping.items() if t != v}
    if not mapping:
        return a
    return _subst(a, mapping)


def _subst(a, mapping):
    if isinstance(a, Atom):
        if not a.args:
            return a
        return Atom(a.pred, tuple(subst_term(t, mapping) for t in a.args))
    if isinstance(a, (Top, Bot)):
        return a
    if isinstance(a, Binary):
        return type(a)(_subst(a.left, mapping), _subst(a.right, mapping))
    v = a.var
    inner = {k: t for k, t in mapping.items() if k != v}
    fv = free_vars(a.body)
    inner = {k: t for k, t in inner.items() if k in fv}
    if not inner:
        return a
    incoming = set()
    for t in inner.values():
        incoming |= {u.name for u in term_vars(t)}
    if v.name in incoming:
        avoid = incoming | {u.name for u in fv} | {k.name for k in inner}
        nv = fresh_var(v, avoid)
        inner[v] = nv
        v = nv
    return type(a)(v, _subst(a.body, inner))


def substitute(t: Term, x: Var, a: Proposition, sig: Signature | None = None) -> Proposition:
    """``(t/x)a``.  With a signature, the sort of ``t`` is checked against ``x``."""
    if sig is not None:
        s = sort_of(t, sig)
        if s != x.sort:
            raise SortError(f"cannot substitute {show_term(t)} : {s} for {x.name} : {x.sort}")
    elif isinstance(t, Var) and t.sort != x.sort:
        raise SortError(f"cannot substitute {t.name} : {t.sort} for {x.name} : {x.sort}")
    return subst(a, {x: t})


def rename_bound(a: Proposition, v: Var, new: Var) -> Proposition:
    return subst(a, {v: new})


# --------------------------------------------------------------------------
# Alpha-equivalence


def canonical_term(t: Term, env: Mapping[Var, int], depth: int):
    if isinstance(t, Var):
        if t in env:
            return ("#", depth - env[t])
        return ("v", t.name, t.sort)
    return (t.name, *(canonical_term(u, env, depth) for u in t.args))


def canonical(a: Proposition, env: Mapping[Var, int] | None = None, depth: int = 0):
    """Nameless representation: equal iff alpha-equivalent."""
    env = env or {}
    if isinstance(a, Atom):
        return ("A", a.pred, *(canonical_term(t, env, depth) for t in a.args))
    if isinstance(a, Top):
        return ("T",)
    if isinstance(a, Bot):
        return ("F",)
    if isinstance(a, Binary):
        return (type(a).__name__, canonical(a.left, env, depth), canonical(a.right, env, depth))
    inner = dict(env)
    inner[a.var] = depth + 1
    return (type(a).__name__, a.var.sort, canonical(a.body, inner, depth + 1))


def alpha_eq(a: Proposition, b: Proposition) -> bool:
    if a == b:
        return True
    return canonical(a) == canonical(b)


# --------------------------------------------------------------------------
# Well-sortedness


def check_sorts(a: Proposition, sig: Signature) -> None:
    if isinstance(a, Atom):
        rank = sig.predicates.get(a.pred)
        if rank is None:
            raise SortError(f"undeclared predicate {a.pred!r}")
        if len(rank) != len(a.args):
            raise SortError(f"{a.pred!r} expects {len(rank)} arguments, got {len(a.args)}")
        for expected, t in zip(rank, a.args):
            got = sort_of(t, sig)
            if got != expected:
                raise SortError(
                    f"argument {show_term(t)} of {a.pred!r} has sort {got}, expected {expected}"
                )
    elif isinstance(a, Binary):
        check_sorts(a.left, sig)
        check_sorts(a.right, sig)
    elif isinstance(a, Quantifier):
        if a.var.sort not in sig.sorts:
            raise SortError(f"bound variable {a.var.name} has undeclared sort {a.var.sort!r}")
        check_sorts(a.body, sig)


def is_well_sorted(a: Proposition, sig: Signature) -> bool:
    try:
        check_sorts(a, sig)
    except SortError:
        return False
    return True


# --------------------------------------------------------------------------
# Printing (ASCII, re-readable by modarith.parser)

_INFIX_FN = {ARROW: (1, "right"), PLUS: (2, "left"), TIMES: (3, "left")}
_INFIX_PRED = {EQ, MEM}


def show_term(t: Term, prec: int = 0) -> str:
    if isinstance(t, Var):
        return t.name
    n = numeral_value(t)
    if n is not None:
        return str(n)
    if t.name in _INFIX_FN and len(t.args) == 2:
        p, assoc = _INFIX_FN[t.name]
        lp, rp = (p, p + 1) if assoc == "left" else (p + 1, p)
        s = f"{show_term(t.args[0], lp)} {t.name} {show_term(t.args[1], rp)}"
        return f"({s})" if p < prec else s
    if not t.args:
        return t.name
    return f"{t.name}({', '.join(show_term(a) for a in t.args)})"


def _binder(v: Var) -> str:
    return f"{v.name}:{v.sort}"


def show(a: Proposition, prec: int = 0) -> str:
    """Print a proposition; precedence: quantifiers < => < \\/ < /\\ < ~."""
    if isinstance(a, Atom):
        if a.pred in _INFIX_PRED and len(a.args) == 2:
            return f"{show_term(a.args[0])} {a.pred} {show_term(a.args[1])}"
        if not a.args:
            return a.pred
        return f"{a.pred}({', '.join(show_term(t) for t in a.args)})"
    if isinstance(a, Top):
        return "true"
    if isinstance(a, Bot):
        return "false"
    if isinstance(a, Imp) and isinstance(a.right, Bot):
        return f"~{show(a.left, 4)}"
    if isinstance(a, Quantifier):
        kw = "forall" if isinstance(a, Forall) else "exists"
        s = f"{kw} {_binder(a.var)}. {show(a.body, 0)}"
        return f"({s})" if prec > 0 else s
    p, sym = {Imp: (1, "=>"), Or: (2, "\\/"), And: (3, "/\\")}[type(a)]
    s = f"{show(a.left, p + 1)} {sym} {show(a.right, p)}"
    return f"({s})" if p < prec else s


def skeleton(a: Proposition):
    """Connective skeleton with atoms erased."""
    if isinstance(a, Atom):
        return "atom"
    if isinstance(a, (Top, Bot)):
        return type(a).__name__
    if isinstance(a, Binary):
        return (type(a).__name__, skeleton(a.left), skeleton(a.right))
    return (type(a).__name__, skeleton(a.body))


def map_terms(a: Proposition, fn) -> Proposition:
    """Apply ``fn`` to every top-level term argument of every atom."""
    if isinstance(a, Atom):
        if not a.args:
            return a
        return Atom(a.pred, tuple(fn(t) for t in a.args))
    if isinstance(a, (Top, Bot)):
        return a
    if isinstance(a, Binary):
        return type(a)(map_terms(a.left, fn), map_terms(a.right, fn))
    return type(a)(a.var, map_terms(a.body, fn))
