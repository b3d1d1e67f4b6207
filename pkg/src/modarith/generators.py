"""Seeded generators of random propositions and well-typed proofs with cuts.

``random_cut_proof`` builds the eta-expanded identity ``\\h:A. eta(A, h)``
for a random ``A`` and wraps typed subproofs in redexes of all seven
kinds, so every generated proof checks against ``A => A`` in pure logic.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .proofs import (
    App,
    Case,
    ExElim,
    ExIntro,
    Fst,
    InL,
    InR,
    Lam,
    Pair,
    PVar,
    ProofTerm,
    Snd,
    TApp,
    TLam,
    TruthIntro,
)
from .syntax import (
    BOT,
    IOTA,
    TOP,
    And,
    Atom,
    Exists,
    Fn,
    Forall,
    Imp,
    Or,
    Proposition,
    Var,
    subst,
)

PROP_LETTERS = ("A", "B", "C", "D")
CONSTANTS = (Fn("c"), Fn("d"))


def random_term(rng: random.Random, bound: list, depth: int = 1):
    if bound and rng.random() < 0.6:
        return rng.choice(bound)
    if depth > 0 and rng.random() < 0.3:
        return Fn("f", (random_term(rng, bound, depth - 1),))
    return rng.choice(CONSTANTS)


def random_prop(rng: random.Random, depth: int = 3, bound=None, counter=None) -> Proposition:
    """A closed proposition over the vocabulary of the pure theory."""
    bound = list(bound or [])
    counter = counter if counter is not None else itertools.count(1)
    if depth <= 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.45:
            return Atom(rng.choice(PROP_LETTERS))
        if r < 0.7:
            return Atom(rng.choice(("P", "Q")), (random_term(rng, bound),))
        if r < 0.85:
            return Atom("R", (random_term(rng, bound), random_term(rng, bound)))
        return rng.choice((TOP, BOT))
    k = rng.choice(("imp", "imp", "and", "or", "forall", "exists"))
    if k in ("forall", "exists"):
        x = Var(f"x{next(counter)}", IOTA)
        body = random_prop(rng, depth - 1, bound + [x], counter)
        return Forall(x, body) if k == "forall" else Exists(x, body)
    left = random_prop(rng, depth - 1, bound, counter)
    right = random_prop(rng, depth - 1, bound, counter)
    return {"imp": Imp, "and": And, "or": Or}[k](left, right)


@dataclass
class _Gen:
    rng: random.Random
    cut_rate: float
    names: itertools.count
    witnesses: tuple = CONSTANTS
    prefix: str = ""

    def fresh(self, base="h"):
        return f"{self.prefix}{base}{next(self.names)}"

    def cut(self, q: ProofTerm, t: Proposition, force: bool = False) -> ProofTerm:
        """Wrap a proof ``q`` of ``t`` in a random redex that still proves ``t``."""
        if not force and self.rng.random() >= self.cut_rate:
            return q
        k = self.rng.randrange(9)
        a = self.fresh()
        if k == 0:
            return App(Lam(a, t, PVar(a)), q)
        if k == 1:
            return App(Lam(a, t, self.eta(t, PVar(a))), q)
        if k == 2:
            return Fst(Pair(q, TruthIntro()))
        if k == 3:
            return Snd(Pair(TruthIntro(), q))
        if k == 4:
            b = self.fresh()
            return Case(InL(TruthIntro(), BOT), a, q, b, q)
        if k == 5:
            b = self.fresh()
            return Case(InR(TruthIntro(), BOT), a, q, b, q)
        if k == 6:
            x = Var(self.fresh("y"), IOTA)
            return TApp(TLam(x, q), self.rng.choice(self.witnesses))
        if k == 7:
            x = Var(self.fresh("y"), IOTA)
            return ExElim(ExIntro(self.witnesses[0], TruthIntro(), x, TOP), x, a, q, t)
        return Fst(App(Lam(a, t, Pair(PVar(a), PVar(a))), q))

    def eta(self, t: Proposition, p: ProofTerm) -> ProofTerm:
        """A proof of ``t`` built from the proof ``p`` of ``t``, with cuts."""
        ty = type(t)
        if ty is Imp:
            b = self.fresh()
            arg = self.eta(t.left, PVar(b))
            out = Lam(b, t.left, self.eta(t.right, App(p, arg)))
        elif ty is And:
            out = Pair(self.eta(t.left, Fst(p)), self.eta(t.right, Snd(p)))
        elif ty is Or:
            b, c = self.fresh(), self.fresh()
            out = Case(
                p,
                b, InL(self.eta(t.left, PVar(b)), t.right),
                c, InR(self.eta(t.right, PVar(c)), t.left),
            )
        elif ty is Forall:
            out = TLam(t.var, self.eta(t.body, TApp(p, t.var)))
        elif ty is Exists:
            h = self.fresh()
            x = Var(self.fresh("w"), t.var.sort)
            inner = subst(t.body, {t.var: x})
            out = ExElim(p, x, h, ExIntro(x, self.eta(inner, PVar(h)), t.var, t.body), t)
        else:
            out = p
        return self.cut(out, t)


def random_cut_proof(rng: random.Random, depth: int = 3, cut_rate: float = 0.35):
    """A random ``(proof, proposition)`` pair; the proof checks in pure logic."""
    a = random_prop(rng, depth)
    g = _Gen(rng, cut_rate, itertools.count(1))
    h = g.fresh()
    goal = Imp(a, a)
    pi = g.cut(Lam(h, a, g.eta(a, PVar(h))), goal)
    return pi, goal


def random_cut_proofs(count: int, seed: int = 0, depth: int = 3, cut_rate: float = 0.35) -> list:
    rng = random.Random(seed)
    return [random_cut_proof(rng, depth, cut_rate) for _ in range(count)]


def add_cuts(
    pi: ProofTerm, a: Proposition, rng: random.Random, rounds: int = 2, witnesses=CONSTANTS
) -> ProofTerm:
    """Wrap a proof of ``a`` in ``rounds`` random redexes at its root.

    ``witnesses`` are closed iota terms of the target theory, used by the
    quantifier cuts.  Binders introduced here are named ``cut_*`` so
    they do not capture free variables of ``pi``.
    """
    g = _Gen(rng, 0.0, itertools.count(1), tuple(witnesses), "cut_")
    for _ in range(rounds):
        pi = g.cut(pi, a, force=True)
    return pi
