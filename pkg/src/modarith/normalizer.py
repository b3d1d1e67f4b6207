"""Cut elimination: the seven proof reductions and normalization.

Only the seven contractions below are implemented; eliminations applied
to a ``case`` (commuting conversions) are left alone, so normal forms may
still contain a ``case`` under a non-empty context.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .kernel import CheckReport, Context, check
from .proofs import (
    App,
    Case,
    CHILDREN,
    ExElim,
    ExIntro,
    ExFalso,
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
    children,
    replace_at,
    subst_proof,
)
from .syntax import Proposition

DEFAULT_STEPS = 100_000

BETA = "beta"
BETA_FORALL = "beta-forall"
FST_PAIR = "fst-pair"
SND_PAIR = "snd-pair"
CASE_INL = "case-inl"
CASE_INR = "case-inr"
EXISTS_UNPACK = "exists-unpack"
RULE_TAGS = (BETA, BETA_FORALL, FST_PAIR, SND_PAIR, CASE_INL, CASE_INR, EXISTS_UNPACK)


class StepBudgetExhausted(Exception):
    def __init__(self, steps: int, last: ProofTerm):
        super().__init__(f"no normal form within {steps} reduction steps")
        self.steps = steps
        self.last = last


@dataclass(frozen=True)
class ReductionStep:
    path: tuple
    tag: str

    def __str__(self):
        where = "root" if not self.path else "root." + ".".join(map(str, self.path))
        return f"{self.tag} at {where}"


def is_neutral(pi: ProofTerm) -> bool:
    """Proof variables and eliminations; introductions never are."""
    return isinstance(pi, (PVar, App, Fst, Snd, Case, ExFalso, TApp, ExElim))


def contract(pi: ProofTerm) -> Optional[tuple[str, ProofTerm]]:
    """Contract ``pi`` at the root if it is a redex."""
    t = type(pi)
    if t is App and type(pi.fn) is Lam:
        return BETA, subst_proof(pi.fn.body, {pi.fn.var: pi.arg})
    if t is TApp and type(pi.proof) is TLam:
        return BETA_FORALL, subst_proof(pi.proof.body, terms={pi.proof.var: pi.term})
    if t is Fst and type(pi.proof) is Pair:
        return FST_PAIR, pi.proof.left
    if t is Snd and type(pi.proof) is Pair:
        return SND_PAIR, pi.proof.right
    if t is Case:
        s = pi.scrut
        if type(s) is InL:
            return CASE_INL, subst_proof(pi.lbody, {pi.lvar: s.proof})
        if type(s) is InR:
            return CASE_INR, subst_proof(pi.rbody, {pi.rvar: s.proof})
    if t is ExElim and type(pi.proof) is ExIntro:
        w = pi.proof
        return EXISTS_UNPACK, subst_proof(pi.body, {pi.pvar: w.proof}, {pi.tvar: w.witness})
    return None


def redexes(pi: ProofTerm, path=()) -> list:
    """Paths and tags of all redexes, in leftmost-outermost order."""
    out = []
    c = contract(pi)
    if c is not None:
        out.append(ReductionStep(path, c[0]))
    for i, ch in enumerate(children(pi)):
        out.extend(redexes(ch, path + (i,)))
    return out


def _at(pi, path):
    for i in path:
        pi = getattr(pi, CHILDREN[type(pi)][i])
    return pi


def step(pi: ProofTerm) -> list:
    """Every one-step reduct of ``pi`` with its witnessing step."""
    out = []
    for r in redexes(pi):
        tag, new = contract(_at(pi, r.path))
        out.append((r, replace_at(pi, r.path, new)))
    return out


def is_normal(pi: ProofTerm) -> bool:
    return _first(pi, ()) is None


def _first(pi, path):
    c = contract(pi)
    if c is not None:
        return ReductionStep(path, c[0]), c[1]
    for i, ch in enumerate(children(pi)):
        r = _first(ch, path + (i,))
        if r is not None:
            return r
    return None


def step_lo(pi: ProofTerm):
    """The leftmost-outermost reduct as ``(ReductionStep, proof)``, or None."""
    r = _first(pi, ())
    if r is None:
        return None
    s, new = r
    return s, replace_at(pi, s.path, new)


def normalize_trace(pi: ProofTerm, max_steps: int = DEFAULT_STEPS) -> tuple[ProofTerm, list]:
    if max_steps <= 0:
        raise ValueError("max_steps must be positive")
    trace = []
    while True:
        r = step_lo(pi)
        if r is None:
            return pi, trace
        if len(trace) >= max_steps:
            raise StepBudgetExhausted(max_steps, pi)
        trace.append(r[0])
        pi = r[1]


def normalize(pi: ProofTerm, max_steps: int = DEFAULT_STEPS) -> ProofTerm:
    """Leftmost-outermost normal form; raises StepBudgetExhausted."""
    return normalize_trace(pi, max_steps)[0]


def replay(pi: ProofTerm, trace) -> ProofTerm:
    """Re-run a trace, contracting at each recorded path and checking its tag."""
    for s in trace:
        c = contract(_at(pi, s.path))
        if c is None or c[0] != s.tag:
            raise ValueError(f"trace step {s} does not match a redex")
        pi = replace_at(pi, s.path, c[1])
    return pi


@dataclass
class SubjectReductionReport:
    ok: bool
    steps: int = 0
    reducts_checked: int = 0
    normal_form: Optional[ProofTerm] = None
    violation: Optional[ReductionStep] = None
    reduct: Optional[ProofTerm] = None
    report: Optional[CheckReport] = None
    notes: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def check_subject_reduction(
    ctx: Context,
    pi: ProofTerm,
    a: Proposition,
    fuel=None,
    max_steps: int = DEFAULT_STEPS,
    every_reduct: bool = False,
) -> SubjectReductionReport:
    """Re-check the proof after every leftmost-outermost step.

    ``pi`` must check against ``a`` in ``ctx``; the first reduct that
    does not is reported.  With ``every_reduct`` all one-step reducts of
    each term on the path are checked, not only the one taken.
    """
    from .rewrite import DEFAULT_FUEL

    fuel = DEFAULT_FUEL if fuel is None else fuel
    first = check(ctx, pi, a, fuel)
    if not first.ok:
        return SubjectReductionReport(False, 0, 0, None, None, pi, first, ["input does not check"])
    steps = checked = 0
    while True:
        succ = step(pi) if every_reduct else [r for r in [step_lo(pi)] if r is not None]
        if not succ:
            return SubjectReductionReport(True, steps, checked, pi)
        for s, new in succ:
            checked += 1
            rep = check(ctx, new, a, fuel)
            if not rep.ok:
                return SubjectReductionReport(False, steps, checked, None, s, new, rep)
        if steps >= max_steps:
            raise StepBudgetExhausted(max_steps, pi)
        pi = succ[0][1]
        steps += 1
