"""Term rewriting, head unfolding of atoms, and the congruence test.

Term rules are applied innermost and are expected to terminate.  Rules on
atomic propositions may not terminate (the rule for ``N`` mentions ``N``
on its right-hand side), so they are only ever applied at the head of an
atom, on demand, and each application spends one unit of :class:`Fuel`.
Running out of fuel raises :class:`FuelExhausted`, which callers must keep
distinct from a negative answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .syntax import (
    Atom,
    Binary,
    Bot,
    Fn,
    Proposition,
    Term,
    Top,
    Var,
    all_var_names,
    canonical,
    free_vars,
    fresh_var,
    map_terms,
    show,
    show_term,
    subst,
    subst_term,
    symbols,
    term_vars,
)

DEFAULT_FUEL = 256
DEFAULT_TERM_LIMIT = 100_000


class FuelExhausted(Exception):
    """The unfolding budget ran out before a question could be decided."""


class RuleError(ValueError):
    """A rewrite rule violates its shape constraints."""


@dataclass
class Fuel:
    remaining: int = DEFAULT_FUEL
    used: int = 0

    def __post_init__(self):
        if self.remaining < 0:
            raise ValueError("fuel must be non-negative")

    def consume(self, n: int = 1) -> None:
        if self.remaining < n:
            raise FuelExhausted(f"fuel exhausted after {self.used} unfoldings")
        self.remaining -= n
        self.used += n


def as_fuel(fuel) -> Fuel:
    if isinstance(fuel, Fuel):
        return fuel
    return Fuel(DEFAULT_FUEL if fuel is None else int(fuel))


# --------------------------------------------------------------------------
# Rules


def _is_linear(t: Term, seen: set) -> bool:
    if isinstance(t, Var):
        if t in seen:
            return False
        seen.add(t)
        return True
    return all(_is_linear(a, seen) for a in t.args)


@dataclass(frozen=True)
class TermRule:
    lhs: Fn
    rhs: Term
    name: str = ""

    def __post_init__(self):
        if not isinstance(self.lhs, Fn):
            raise RuleError("left-hand side of a term rule must not be a variable")
        if not _is_linear(self.lhs, set()):
            raise RuleError(f"left-hand side {show_term(self.lhs)} is not linear")
        if not term_vars(self.rhs) <= term_vars(self.lhs):
            raise RuleError(f"rule {self} introduces variables on its right-hand side")

    def __str__(self):
        return f"rule {show_term(self.lhs)} --> {show_term(self.rhs)}."


@dataclass(frozen=True)
class PropRule:
    lhs: Atom
    rhs: Proposition
    name: str = ""

    def __post_init__(self):
        if not isinstance(self.lhs, Atom):
            raise RuleError("left-hand side of a proposition rule must be atomic")
        lv = free_vars(self.lhs)
        if not _is_linear(Fn("", self.lhs.args), set()):
            raise RuleError(f"left-hand side {show(self.lhs)} is not linear")
        if not free_vars(self.rhs) <= lv:
            raise RuleError(f"rule {self} introduces variables on its right-hand side")

    def __str__(self):
        return f"prop-rule {show(self.lhs)} --> {show(self.rhs)}."


def match(pattern: Term, term: Term, sub: dict | None = None) -> dict | None:
    """First-order syntactic matching; returns the extended substitution or None."""
    sub = {} if sub is None else sub
    if isinstance(pattern, Var):
        bound = sub.get(pattern)
        if bound is None:
            if isinstance(term, Var) and term.sort != pattern.sort:
                return None
            sub[pattern] = term
            return sub
        return sub if bound == term else None
    if not isinstance(term, Fn) or term.name != pattern.name or len(term.args) != len(pattern.args):
        return None
    for p, t in zip(pattern.args, term.args):
        if match(p, t, sub) is None:
            return None
    return sub


class RuleSet:
    """Term rules, proposition rules and dynamic rule schemes.

    A scheme is any object with ``name`` and ``unfold(atom)`` returning a
    proposition or None; the comprehension registry is one.
    """

    def __init__(
        self,
        term_rules: Iterable[TermRule] = (),
        prop_rules: Iterable[PropRule] = (),
        schemes: Iterable = (),
        term_limit: int = DEFAULT_TERM_LIMIT,
    ):
        self.term_rules = tuple(term_rules)
        self.prop_rules = tuple(prop_rules)
        self.schemes = tuple(schemes)
        self.term_limit = term_limit
        self._by_head: dict[str, list] = {}
        for r in self.term_rules:
            self._by_head.setdefault(r.lhs.name, []).append(r)
        self._by_pred: dict[str, list] = {}
        for r in self.prop_rules:
            self._by_pred.setdefault(r.lhs.pred, []).append(r)
        self._nf: dict = {}

    def __len__(self):
        return len(self.term_rules) + len(self.prop_rules) + len(self.schemes)

    def __repr__(self):
        return (
            f"RuleSet({len(self.term_rules)} term rules, {len(self.prop_rules)} prop rules, "
            f"{len(self.schemes)} schemes)"
        )

    @property
    def is_empty(self) -> bool:
        return len(self) == 0

    @property
    def contains_nonterminating(self) -> bool:
        """True when some proposition rule mentions its own head predicate on the right."""
        return any(r.lhs.pred in symbols(r.rhs)[1] for r in self.prop_rules)

    def term_rules_for(self, head: str) -> list:
        return self._by_head.get(head, [])

    def prop_rules_for(self, pred: str) -> list:
        return self._by_pred.get(pred, [])

    def extended(self, term_rules=(), prop_rules=(), schemes=()) -> "RuleSet":
        return RuleSet(
            self.term_rules + tuple(term_rules),
            self.prop_rules + tuple(prop_rules),
            self.schemes + tuple(schemes),
            self.term_limit,
        )

    def unfold_atom(self, atom: Atom):
        """One root rewrite of an atom (arguments assumed normal), or None."""
        for r in self._by_pred.get(atom.pred, ()):
            sub = {}
            ok = True
            for p, t in zip(r.lhs.args, atom.args):
                if match(p, t, sub) is None:
                    ok = False
                    break
            if ok and len(r.lhs.args) == len(atom.args):
                return subst(r.rhs, sub)
        for s in self.schemes:
            out = s.unfold(atom)
            if out is not None:
                return out
        return None


EMPTY_RULES = RuleSet()


# --------------------------------------------------------------------------
# Terms


class _Counter:
    __slots__ = ("n", "limit")

    def __init__(self, limit):
        self.n = 0
        self.limit = limit

    def tick(self):
        self.n += 1
        if self.n > self.limit:
            raise FuelExhausted(f"term rewriting exceeded {self.limit} steps")


def _rewrite_root(t: Fn, rules: RuleSet):
    for r in rules.term_rules_for(t.name):
        sub = match(r.lhs, t, {})
        if sub is not None:
            return subst_term(r.rhs, sub)
    return None


def _nf(t: Term, rules: RuleSet, counter: _Counter) -> Term:
    if isinstance(t, Var):
        return t
    cached = rules._nf.get(t)
    if cached is not None:
        return cached
    orig = t
    while True:
        if t.args:
            t = Fn(t.name, tuple(_nf(a, rules, counter) for a in t.args))
        out = _rewrite_root(t, rules)
        if out is None:
            break
        counter.tick()
        if isinstance(out, Var):
            t = out
            break
        t = out
    if len(rules._nf) < 200_000:
        rules._nf[orig] = t
    return t


def normalize_term(t: Term, rules: RuleSet, limit: int | None = None) -> Term:
    """Innermost normal form of ``t`` under the term rules."""
    if not rules.term_rules:
        return t
    return _nf(t, rules, _Counter(limit or rules.term_limit))


def normalize_term_outermost(t: Term, rules: RuleSet, limit: int | None = None) -> Term:
    """Leftmost-outermost normal form (used to cross-check confluence)."""
    counter = _Counter(limit or rules.term_limit)

    def step(u):
        if isinstance(u, Var):
            return None
        out = _rewrite_root(u, rules)
        if out is not None:
            return out
        for i, a in enumerate(u.args):
            r = step(a)
            if r is not None:
                return Fn(u.name, u.args[:i] + (r,) + u.args[i + 1 :])
        return None

    while True:
        nxt = step(t)
        if nxt is None:
            return t
        counter.tick()
        t = nxt


def normalize_prop_terms(a: Proposition, rules: RuleSet) -> Proposition:
    if not rules.term_rules:
        return a
    return map_terms(a, lambda t: normalize_term(t, rules))


# --------------------------------------------------------------------------
# Propositions


def unfold_once(a: Atom, rules: RuleSet):
    """Normalize the atom's arguments and rewrite it once at the root.

    Returns the rewritten proposition (terms normalized) or None when no
    proposition rule applies.  Does not spend fuel.
    """
    a = Atom(a.pred, tuple(normalize_term(t, rules) for t in a.args)) if a.args else a
    out = rules.unfold_atom(a)
    if out is None:
        return None
    return normalize_prop_terms(out, rules)


def whnf_prop(a: Proposition, rules: RuleSet, fuel=None) -> Proposition:
    """Unfold the head atom until a connective shows up or no rule applies."""
    fuel = as_fuel(fuel)
    while isinstance(a, Atom):
        if a.args:
            a = Atom(a.pred, tuple(normalize_term(t, rules) for t in a.args))
        out = rules.unfold_atom(a)
        if out is None:
            return a
        fuel.consume()
        a = normalize_prop_terms(out, rules)
    return a


def congruent(a: Proposition, b: Proposition, rules: RuleSet, fuel=None, memo=None) -> bool:
    """Decide ``a ≡ b`` within the fuel budget.

    Terms are normalized first; the two propositions are then compared
    structurally and an atom is unfolded only where the heads disagree.
    Raises FuelExhausted if an unfolding is needed but no fuel is left.
    """
    fuel = as_fuel(fuel)
    memo = {} if memo is None else memo
    return _conv(normalize_prop_terms(a, rules), normalize_prop_terms(b, rules), rules, fuel, memo)


def _conv(a, b, rules, fuel, memo) -> bool:
    while True:
        if a == b:
            return True
        ta, tb = type(a), type(b)
        if ta is tb and ta is not Atom:
            if ta in (Top, Bot):
                return True
            if ta in Binary:
                return _conv(a.left, b.left, rules, fuel, memo) and _conv(
                    a.right, b.right, rules, fuel, memo
                )
            if a.var.sort != b.var.sort:
                return False
            if a.var == b.var:
                return _conv(a.body, b.body, rules, fuel, memo)
            avoid = all_var_names(a) | all_var_names(b)
            v = fresh_var(a.var, avoid)
            return _conv(subst(a.body, {a.var: v}), subst(b.body, {b.var: v}), rules, fuel, memo)
        # heads disagree, or two different atoms: unfold what can be unfolded
        ua = rules.unfold_atom(a) if ta is Atom else None
        ub = rules.unfold_atom(b) if tb is Atom else None
        if ua is None and ub is None:
            return False
        key = (canonical(a), canonical(b))
        if key in memo:
            return memo[key]
        fuel.consume((ua is not None) + (ub is not None))
        na = normalize_prop_terms(ua, rules) if ua is not None else a
        nb = normalize_prop_terms(ub, rules) if ub is not None else b
        result = _conv(na, nb, rules, fuel, memo)
        memo[key] = result
        memo[(key[1], key[0])] = result
        return result


def congruent3(a, b, rules, fuel=None):
    """Three-valued congruence: True, False or None when fuel ran out."""
    try:
        return congruent(a, b, rules, fuel)
    except FuelExhausted:
        return None


def rule_heads(rules: RuleSet) -> list:
    """(kind, head) pairs for every rule, in declaration order."""
    out = [("term", r.lhs.name) for r in rules.term_rules]
    out += [("prop", r.lhs.pred) for r in rules.prop_rules]
    out += [("scheme", s.name) for s in rules.schemes]
    return out

