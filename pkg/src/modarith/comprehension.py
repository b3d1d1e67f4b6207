"""Comprehension symbols f_{x,y1..yn,P} and their membership rules.

A key ``(x; y1..yn; P)`` names the class ``{x | P}`` with parameters
``y1..yn``.  Keys are identified up to alpha-equivalence and parameter
order: parameters are reordered by first free occurrence in ``P`` and
renamed canonically before the symbol name is derived, so the name does
not depend on which spelling registered it first.
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass

from .syntax import (
    ARROW,
    Atom,
    Binary,
    Fn,
    IOTA,
    KAPPA,
    MEM,
    NAT,
    NAT_P,
    Proposition,
    Quantifier,
    Signature,
    SortError,
    Term,
    Var,
    canonical,
    check_sorts,
    free_vars,
    imps,
    subst,
    symbols,
)


class ComprehensionError(SortError):
    """The body of a comprehension key is outside the allowed language."""


@dataclass(frozen=True)
class ComprehensionKey:
    var: Var
    params: tuple
    body: Proposition

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        if len(set(self.params)) != len(self.params) or self.var in self.params:
            raise ComprehensionError("comprehension variables must be pairwise distinct")
        extra = free_vars(self.body) - {self.var, *self.params}
        if extra:
            names = ", ".join(sorted(v.name for v in extra))
            raise ComprehensionError(f"free variables {names} are not among x, y1..yn")


def _occurrence_order(a: Proposition, wanted: set) -> list:
    seen: list = []
    bound: list = []

    def walk_term(t: Term):
        if isinstance(t, Var):
            if t in wanted and t not in bound and t not in seen:
                seen.append(t)
        else:
            for u in t.args:
                walk_term(u)

    def walk(p):
        if isinstance(p, Atom):
            for t in p.args:
                walk_term(t)
        elif isinstance(p, Binary):
            walk(p.left)
            walk(p.right)
        elif isinstance(p, Quantifier):
            bound.append(p.var)
            walk(p.body)
            bound.pop()

    walk(a)
    return seen


def normalize_key(key: ComprehensionKey) -> tuple[ComprehensionKey, tuple]:
    """Canonical key plus the original parameters in canonical order."""
    used = _occurrence_order(key.body, set(key.params))
    order = tuple(used) + tuple(p for p in key.params if p not in used)
    cx = Var("_x", key.var.sort)
    cparams = tuple(Var(f"_y{i + 1}", p.sort) for i, p in enumerate(order))
    mapping = {key.var: cx, **dict(zip(order, cparams))}
    body = subst(key.body, mapping)
    return ComprehensionKey(cx, cparams, body), order


def key_fingerprint(key: ComprehensionKey) -> str:
    ckey, _ = normalize_key(key)
    sorts = ",".join(p.sort for p in ckey.params)
    return f"{ckey.var.sort}|{sorts}|{canonical(ckey.body)!r}"


def _alias_table() -> dict:
    x = Var("x", IOTA)
    y, z = Var("y", KAPPA), Var("z", KAPPA)
    nat_key = ComprehensionKey(x, (), Atom(NAT_P, (x,)))
    arrow_key = ComprehensionKey(x, (y, z), imps(Atom(MEM, (x, y)), Atom(MEM, (x, z))))
    return {key_fingerprint(nat_key): NAT, key_fingerprint(arrow_key): ARROW}


ALIASES = _alias_table()


def symbol_name(key: ComprehensionKey) -> str:
    fp = key_fingerprint(key)
    if fp in ALIASES:
        return ALIASES[fp]
    return "f_" + hashlib.sha256(fp.encode()).hexdigest()[:10]


def validate_body(key: ComprehensionKey, sig: Signature, allow_membership: bool) -> None:
    funcs, preds = symbols(key.body)
    if not allow_membership and MEM in preds:
        raise ComprehensionError("comprehension body may not mention the membership predicate")
    for f in funcs:
        if f not in sig.functions:
            raise ComprehensionError(f"undeclared function symbol {f!r} in comprehension body")
    for p in preds:
        if p not in sig.predicates:
            raise ComprehensionError(f"undeclared predicate {p!r} in comprehension body")
    if not allow_membership:
        for v in (key.var, *key.params):
            if v.sort != IOTA:
                raise ComprehensionError("comprehension variables must have sort iota")
    check_sorts(key.body, sig)


def comprehension_symbol(
    key: ComprehensionKey, sig: Signature, allow_membership: bool = False
) -> tuple[str, Signature]:
    """Name of the class symbol for ``key`` and the signature extended with it."""
    validate_body(key, sig, allow_membership)
    name = symbol_name(key)
    rank = (tuple(p.sort for p in normalize_key(key)[0].params), KAPPA)
    existing = sig.functions.get(name)
    if existing is not None and existing != rank:
        raise ComprehensionError(f"symbol {name!r} already declared with another rank")
    return name, sig.with_function(name, *rank)


class ComprehensionRegistry:
    """Mutable table of registered class symbols for one theory.

    Registration is serialized by a lock; lookups read a dict that is only
    ever extended.
    """

    name = "comprehension"

    def __init__(self, signature: Signature, allow_membership: bool = False):
        self.signature = signature
        self.allow_membership = allow_membership
        self._keys: dict[str, ComprehensionKey] = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._keys)

    def __contains__(self, name):
        return name in self._keys

    def names(self) -> list:
        return sorted(self._keys)

    def register(self, key: ComprehensionKey) -> str:
        with self._lock:
            name, sig = comprehension_symbol(key, self.signature, self.allow_membership)
            if name not in self._keys:
                self._keys[name] = normalize_key(key)[0]
                self.signature = sig
            return name

    def class_term(self, key: ComprehensionKey) -> Fn:
        """The term f_P(y1..yn) built from the key's own parameters."""
        name = self.register(key)
        _, order = normalize_key(key)
        return Fn(name, order)

    def key_of(self, name: str) -> ComprehensionKey | None:
        return self._keys.get(name)

    def rule_for(self, name: str):
        """The rule ``_x in f(_y1..) --> P`` as a PropRule."""
        from .rewrite import PropRule

        key = self._keys[name]
        return PropRule(Atom(MEM, (key.var, Fn(name, key.params))), key.body, name=f"mem:{name}")

    def rules(self) -> list:
        return [self.rule_for(n) for n in self.names()]

    def unfold(self, atom: Atom):
        """Rewrite ``t in f(u1..un)`` to ``(t/x, u/y)P`` when f is registered."""
        if atom.pred != MEM or len(atom.args) != 2:
            return None
        cls = atom.args[1]
        if not isinstance(cls, Fn):
            return None
        key = self._keys.get(cls.name)
        if key is None or len(cls.args) != len(key.params):
            return None
        return subst(key.body, {key.var: atom.args[0], **dict(zip(key.params, cls.args))})
