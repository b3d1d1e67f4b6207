"""The proof checker.

Bidirectional checking of proof terms against sequents ``Γ ⊢≡ A``:
introductions are checked against the target after unfolding its head
to the expected connective; eliminations infer a proposition which is
then compared with the target using the congruence.  All unfoldings of
one check share a single :class:`~modarith.rewrite.Fuel` budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .proofs import (
    App,
    Case,
    ExElim,
    ExFalso,
    ExIntro,
    Fst,
    InL,
    InR,
    Lam,
    Pair,
    ProofTerm,
    PVar,
    Snd,
    TApp,
    TLam,
    TruthIntro,
    free_term_vars,
    subst_proof,
)
from .rewrite import DEFAULT_FUEL, Fuel, FuelExhausted, as_fuel, congruent, whnf_prop
from .syntax import (
    BOT,
    And,
    Exists,
    Forall,
    Imp,
    Or,
    Proposition,
    SortError,
    Top,
    Var,
    check_sorts,
    free_vars,
    fresh_name,
    show,
    sort_of,
    subst,
)
from .theories import SchemeInstanceRequest, Theory

OK, FAIL, UNDECIDED = "ok", "fail", "undecided"


class CheckError(Exception):
    def __init__(self, message, path=(), expected=None, actual=None):
        super().__init__(message)
        self.message = message
        self.path = tuple(path)
        self.expected = expected
        self.actual = actual


class NotInferable(CheckError):
    pass


@dataclass
class CheckReport:
    verdict: str
    message: str = ""
    path: tuple = ()
    expected: Optional[Proposition] = None
    actual: Optional[Proposition] = None
    fuel_used: int = 0

    @property
    def ok(self) -> bool:
        return self.verdict == OK

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.verdict == OK:
            return f"ok (fuel used: {self.fuel_used})"
        where = "root" if not self.path else "root." + ".".join(map(str, self.path))
        lines = [f"{self.verdict} at {where}: {self.message}"]
        if self.expected is not None:
            lines.append(f"  expected: {show(self.expected)}")
        if self.actual is not None:
            lines.append(f"  actual:   {show(self.actual)}")
        lines.append(f"  fuel used: {self.fuel_used}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Context:
    theory: Theory
    hyps: tuple = ()

    def extend(self, name: str, prop: Proposition) -> "Context":
        return Context(self.theory, self.hyps + ((name, prop),))

    def lookup(self, name: str):
        for n, a in reversed(self.hyps):
            if n == name:
                return a
        return None

    def free_term_vars(self) -> frozenset:
        out = frozenset()
        for _, a in self.hyps:
            out |= free_vars(a)
        return out

    def names(self) -> list:
        return [n for n, _ in self.hyps]


def empty_context(theory: Theory) -> Context:
    return Context(theory, ())


@dataclass
class _Checker:
    theory: Theory
    fuel: Fuel
    memo: dict = field(default_factory=dict)

    @property
    def rules(self):
        return self.theory.rules

    # ---- helpers

    def whnf(self, a):
        return whnf_prop(a, self.rules, self.fuel)

    def conv(self, a, b) -> bool:
        return congruent(a, b, self.rules, self.fuel, self.memo)

    def expect(self, a, cls, path, what):
        w = self.whnf(a)
        if not isinstance(w, cls):
            raise CheckError(f"{what}: proposition is not congruent to a {cls.__name__} form", path, None, a)
        return w

    def well_sorted(self, a, path):
        try:
            check_sorts(a, self.theory.signature)
        except SortError as e:
            raise CheckError(f"ill-sorted annotation: {e}", path, None, a) from None

    def term_sort(self, t, path):
        try:
            return sort_of(t, self.theory.signature)
        except SortError as e:
            raise CheckError(f"ill-sorted term: {e}", path) from None

    def same(self, expected, actual, path, what):
        if not self.conv(expected, actual):
            raise CheckError(f"{what}: propositions are not congruent", path, expected, actual)

    # ---- checking

    def check(self, ctx: Context, pi: ProofTerm, a: Proposition, path=()):
        t = type(pi)
        if t is Lam:
            w = self.expect(a, Imp, path, "=>-intro")
            dom = w.left
            if pi.domain is not None:
                self.well_sorted(pi.domain, path)
                self.same(w.left, pi.domain, path, "=>-intro domain")
                dom = pi.domain
            self.check(ctx.extend(pi.var, dom), pi.body, w.right, path + (0,))
        elif t is Pair:
            w = self.expect(a, And, path, "/\\-intro")
            self.check(ctx, pi.left, w.left, path + (0,))
            self.check(ctx, pi.right, w.right, path + (1,))
        elif t is InL or t is InR:
            w = self.expect(a, Or, path, "\\/-intro")
            ann = pi.right if t is InL else pi.left
            other = w.right if t is InL else w.left
            if ann is not None:
                self.well_sorted(ann, path)
                self.same(other, ann, path, "\\/-intro annotation")
            self.check(ctx, pi.proof, w.left if t is InL else w.right, path + (0,))
        elif t is TruthIntro:
            self.expect(a, Top, path, "true-intro")
        elif t is TLam:
            w = self.expect(a, Forall, path, "forall-intro")
            self.forall_intro(ctx, pi, w, path)
        elif t is ExIntro:
            w = self.expect(a, Exists, path, "exists-intro")
            if w.var.sort != self.term_sort(pi.witness, path):
                raise CheckError("exists-intro: witness has the wrong sort", path, w)
            if pi.body is not None:
                ann = Exists(pi.var, pi.body)
                self.well_sorted(ann, path)
                self.same(w, ann, path, "exists-intro annotation")
                inst = subst(pi.body, {pi.var: pi.witness})
            else:
                inst = subst(w.body, {w.var: pi.witness})
            self.check(ctx, pi.proof, inst, path + (0,))
        elif t is Case:
            d = self.expect(self.infer(ctx, pi.scrut, path + (0,)), Or, path + (0,), "\\/-elim")
            self.check(ctx.extend(pi.lvar, d.left), pi.lbody, a, path + (1,))
            self.check(ctx.extend(pi.rvar, d.right), pi.rbody, a, path + (2,))
        elif t is ExFalso:
            if pi.target is not None:
                self.well_sorted(pi.target, path)
                self.same(a, pi.target, path, "false-elim annotation")
            self.check(ctx, pi.proof, BOT, path + (0,))
        elif t is ExElim:
            self.exists_elim(ctx, pi, a, path)
        else:
            got = self.infer(ctx, pi, path)
            self.same(a, got, path, "conclusion")

    def forall_intro(self, ctx, pi: TLam, w: Forall, path):
        if pi.var.sort != w.var.sort:
            raise CheckError("forall-intro: bound variable has the wrong sort", path, w)
        clash = ctx.free_term_vars() | (free_vars(w) - {w.var})
        x, body = _rename_binder(pi.var, pi.body, clash)
        return self.check(ctx, body, subst(w.body, {w.var: x}), path + (0,))

    def exists_elim(self, ctx, pi: ExElim, b, path):
        d = self.expect(self.infer(ctx, pi.proof, path + (0,)), Exists, path + (0,), "exists-elim")
        if pi.tvar.sort != d.var.sort:
            raise CheckError("exists-elim: bound variable has the wrong sort", path, d)
        clash = ctx.free_term_vars() | free_vars(b)
        x, body = _rename_binder(pi.tvar, pi.body, clash)
        if pi.result is not None:
            self.well_sorted(pi.result, path)
            self.same(b, pi.result, path, "exists-elim annotation")
        hyp = subst(d.body, {d.var: x})
        self.check(ctx.extend(pi.pvar, hyp), body, b, path + (1,))

    # ---- inference

    def infer(self, ctx: Context, pi: ProofTerm, path=()) -> Proposition:
        t = type(pi)
        if t is PVar:
            a = ctx.lookup(pi.name)
            if a is None:
                raise CheckError(f"unbound proof variable {pi.name}", path)
            return a
        if t is App:
            f = self.expect(self.infer(ctx, pi.fn, path + (0,)), Imp, path + (0,), "=>-elim")
            self.check(ctx, pi.arg, f.left, path + (1,))
            return f.right
        if t is TApp:
            f = self.expect(self.infer(ctx, pi.proof, path + (0,)), Forall, path + (0,), "forall-elim")
            if self.term_sort(pi.term, path) != f.var.sort:
                raise CheckError("forall-elim: term has the wrong sort", path, f)
            return subst(f.body, {f.var: pi.term})
        if t is Fst or t is Snd:
            c = self.expect(self.infer(ctx, pi.proof, path + (0,)), And, path + (0,), "/\\-elim")
            return c.left if t is Fst else c.right
        if t is Lam:
            if pi.domain is None:
                raise NotInferable("cannot infer an unannotated =>-intro", path)
            self.well_sorted(pi.domain, path)
            return Imp(pi.domain, self.infer(ctx.extend(pi.var, pi.domain), pi.body, path + (0,)))
        if t is Pair:
            return And(self.infer(ctx, pi.left, path + (0,)), self.infer(ctx, pi.right, path + (1,)))
        if t is InL or t is InR:
            ann = pi.right if t is InL else pi.left
            if ann is None:
                raise NotInferable("cannot infer an unannotated \\/-intro", path)
            self.well_sorted(ann, path)
            got = self.infer(ctx, pi.proof, path + (0,))
            return Or(got, ann) if t is InL else Or(ann, got)
        if t is TruthIntro:
            return Top()
        if t is TLam:
            x, body = _rename_binder(pi.var, pi.body, ctx.free_term_vars())
            return Forall(x, self.infer(ctx, body, path + (0,)))
        if t is ExIntro:
            if pi.body is None:
                raise NotInferable("cannot infer an unannotated exists-intro", path)
            ann = Exists(pi.var, pi.body)
            self.well_sorted(ann, path)
            if self.term_sort(pi.witness, path) != pi.var.sort:
                raise CheckError("exists-intro: witness has the wrong sort", path, ann)
            self.check(ctx, pi.proof, subst(pi.body, {pi.var: pi.witness}), path + (0,))
            return ann
        if t is ExFalso:
            if pi.target is None:
                raise NotInferable("cannot infer an unannotated false-elim", path)
            self.well_sorted(pi.target, path)
            self.check(ctx, pi.proof, BOT, path + (0,))
            return pi.target
        if t is ExElim:
            if pi.result is None:
                raise NotInferable("cannot infer an unannotated exists-elim", path)
            self.exists_elim(ctx, pi, pi.result, path)
            return pi.result
        if t is Case:
            d = self.expect(self.infer(ctx, pi.scrut, path + (0,)), Or, path + (0,), "\\/-elim")
            left = self.infer(ctx.extend(pi.lvar, d.left), pi.lbody, path + (1,))
            self.check(ctx.extend(pi.rvar, d.right), pi.rbody, left, path + (2,))
            return left
        raise CheckError(f"not a proof term: {pi!r}", path)


def _rename_binder(x, body, clash):
    """Rename a bound term variable away from ``clash``.

    Proof terms are taken up to renaming of bound variables, so the
    eigenvariable conditions of forall-intro and exists-elim are met by
    choosing a fresh name; a proof that really depends on the old name
    then fails where the renamed variable no longer matches.
    """
    if x not in clash:
        return x, body
    avoid = {v.name for v in clash} | {v.name for v in free_term_vars(body)}
    new = Var(fresh_name(x.name, avoid), x.sort)
    return new, subst_proof(body, terms={x: new})


def _report_error(e: CheckError, fuel: Fuel) -> CheckReport:
    return CheckReport(FAIL, e.message, e.path, e.expected, e.actual, fuel.used)


def check(ctx: Context, pi: ProofTerm, a: Proposition, fuel=DEFAULT_FUEL) -> CheckReport:
    """Check ``pi`` against ``a`` in ``ctx``; never raises on a bad proof."""
    fuel = as_fuel(fuel)
    try:
        check_sorts(a, ctx.theory.signature)
        for _, h in ctx.hyps:
            check_sorts(h, ctx.theory.signature)
    except SortError as e:
        return CheckReport(FAIL, f"ill-sorted sequent: {e}", (), a, None, fuel.used)
    checker = _Checker(ctx.theory, fuel)
    try:
        checker.check(ctx, pi, a)
    except CheckError as e:
        return _report_error(e, fuel)
    except FuelExhausted as e:
        return CheckReport(UNDECIDED, str(e), (), a, None, fuel.used)
    return CheckReport(OK, "", (), None, None, fuel.used)


def infer(ctx: Context, pi: ProofTerm, fuel=DEFAULT_FUEL) -> Proposition:
    """Infer a proposition for ``pi``; raises CheckError or FuelExhausted."""
    return _Checker(ctx.theory, as_fuel(fuel)).infer(ctx, pi)


@dataclass(frozen=True)
class AxiomUse:
    """Make axiom ``name`` available as proof variable ``label`` (default: ``name``)."""

    name: str
    label: Optional[str] = None
    instance: Optional[SchemeInstanceRequest] = None

    @property
    def hyp_name(self) -> str:
        return self.label or self.name


def axiom_context(theory: Theory, uses: Iterable[AxiomUse]) -> Context:
    ctx = empty_context(theory)
    for u in uses:
        ctx = ctx.extend(u.hyp_name, theory.axiom(u.name, u.instance))
    return ctx


def check_with_axioms(
    theory: Theory, uses: Iterable[AxiomUse], pi: ProofTerm, a: Proposition, fuel=DEFAULT_FUEL
) -> CheckReport:
    """Check ``pi`` against ``a`` with the requested axiom instances as hypotheses.

    Raises UnknownAxiom for a name the theory does not have.
    """
    ctx = axiom_context(theory, uses)
    return check(ctx, pi, a, fuel)

