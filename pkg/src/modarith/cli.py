"""Command-line entry point: ``modarith <subcommand> ...``.

Exit codes: 0 success or valid, 1 check failed or countermodel found,
2 parse or sort error, 3 fuel or step budget exhausted (undecided).
Defaults can be overridden by ``MODARITH_FUEL``, ``MODARITH_STEPS``,
``MODARITH_MAX_SIZE``, ``MODARITH_MAX_DOMAIN``, ``MODARITH_BUDGET`` and
``MODARITH_THEORY``.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .kernel import FAIL, OK, UNDECIDED, check_with_axioms
from .models import find_countermodel
from .normalizer import DEFAULT_STEPS, StepBudgetExhausted, normalize_trace
from .parser import ParseError, parse_prop, parse_script, parse_t_file, parse_theory_file
from .proofs import show_proof
from .rewrite import DEFAULT_FUEL, congruent3
from .syntax import SortError, check_sorts, show, show_term
from .theories import THEORIES, Theory, UnknownAxiom, load_theory
from .translations import (
    DEFAULT_SIMULATION_BUDGET,
    TranslationError,
    relativize,
    show_t,
    simulate_check,
    t_redexes,
    translation_check,
)

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_UNDECIDED = 0, 1, 2, 3
SUBCOMMANDS = ("check", "normalize", "congruent", "countermodel", "relativize", "t-check", "theory-info")
DEFAULT_MAX_SIZE = 4
DEFAULT_MAX_DOMAIN = 2


class UsageError(Exception):
    pass


@dataclass
class Invocation:
    subcommand: str
    theory: Optional[str] = None
    fuel: int = DEFAULT_FUEL
    steps: int = DEFAULT_STEPS
    inputs: list = field(default_factory=list)
    trace: bool = False
    max_size: int = DEFAULT_MAX_SIZE
    max_domain: int = DEFAULT_MAX_DOMAIN
    budget: int = DEFAULT_SIMULATION_BUDGET
    jobs: int = 1
    theorem: Optional[str] = None

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        for name in ("fuel", "steps", "max_size", "max_domain", "budget", "jobs"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name.replace('_', '-')} must be at least 1")


@dataclass
class Outcome:
    code: int
    text: str


def _verdict_code(verdicts) -> int:
    verdicts = list(verdicts)
    if FAIL in verdicts:
        return EXIT_FAIL
    if UNDECIDED in verdicts:
        return EXIT_UNDECIDED
    return EXIT_OK


def _theory(spec: Optional[str], default: str = "ha-mod") -> Theory:
    spec = spec or default
    if spec.endswith(".thy"):
        path = Path(spec)
        return parse_theory_file(path.read_text(encoding="utf-8"), base_dir=path.parent)
    return load_theory(spec)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _need_inputs(inv: Invocation, n: int):
    if len(inv.inputs) != n:
        raise UsageError(f"{inv.subcommand} takes {n} argument(s), got {len(inv.inputs)}")


# --------------------------------------------------------------------------
# Subcommands


def _check(inv: Invocation) -> Outcome:
    _need_inputs(inv, 1)
    path = Path(inv.inputs[0])
    theory = _theory(inv.theory) if inv.theory else None
    script = parse_script(_read(inv.inputs[0]), theory, base_dir=path.parent)
    theorems = [t for t in script.theorems if inv.theorem in (None, t.name)]
    if inv.theorem and not theorems:
        raise UsageError(f"no theorem named {inv.theorem!r}")

    def one(td):
        return check_with_axioms(script.theory, td.uses, td.proof, td.prop, inv.fuel)

    if inv.jobs > 1:
        with ThreadPoolExecutor(inv.jobs) as pool:
            reports = list(pool.map(one, theorems))
    else:
        reports = [one(td) for td in theorems]
    lines = []
    for td, rep in zip(theorems, reports):
        lines.append(f"{td.name} (line {td.line}): {rep.describe()}")
    code = _verdict_code(r.verdict for r in reports)
    ok = sum(r.verdict == OK for r in reports)
    lines.append(f"{ok}/{len(reports)} theorems checked in theory {script.theory.name}")
    return Outcome(code, "\n".join(lines))


def _normalize(inv: Invocation) -> Outcome:
    _need_inputs(inv, 1)
    path = Path(inv.inputs[0])
    theory = _theory(inv.theory) if inv.theory else None
    script = parse_script(_read(inv.inputs[0]), theory, base_dir=path.parent)
    lines = []
    code = EXIT_OK
    for td in script.theorems:
        if inv.theorem not in (None, td.name):
            continue
        try:
            nf, trace = normalize_trace(td.proof, inv.steps)
        except StepBudgetExhausted as e:
            lines.append(f"{td.name}: undecided: {e}")
            code = EXIT_UNDECIDED
            continue
        lines.append(f"{td.name}: {len(trace)} step(s)")
        if inv.trace:
            lines.extend(f"  {i + 1}. {s}" for i, s in enumerate(trace))
        lines.append(f"  normal form: {show_proof(nf)}")
    return Outcome(code, "\n".join(lines))


def _congruent(inv: Invocation) -> Outcome:
    _need_inputs(inv, 2)
    th = _theory(inv.theory)
    a, b = (parse_prop(s, th) for s in inv.inputs)
    for p in (a, b):
        check_sorts(p, th.signature)
    res = congruent3(a, b, th.rules, inv.fuel)
    if res is None:
        return Outcome(EXIT_UNDECIDED, f"undecided (fuel {inv.fuel} exhausted)")
    return Outcome(EXIT_OK if res else EXIT_FAIL, "congruent" if res else "not congruent")


def _countermodel(inv: Invocation) -> Outcome:
    _need_inputs(inv, 1)
    th = _theory(inv.theory, "pure")
    a = parse_prop(inv.inputs[0], th)
    check_sorts(a, th.signature)
    cm = find_countermodel(a, max_domain=inv.max_domain, max_algebra=inv.max_size, signature=th.signature)
    if cm is None:
        return Outcome(
            EXIT_OK,
            f"no countermodel with at most {inv.max_size} poset points and domains up to {inv.max_domain}",
        )
    return Outcome(EXIT_FAIL, "countermodel found\n" + cm.describe())


def _relativize(inv: Invocation) -> Outcome:
    _need_inputs(inv, 1)
    th = _theory(inv.theory, "ha-pred")
    a = parse_prop(inv.inputs[0], th)
    check_sorts(a, th.signature)
    return Outcome(EXIT_OK, show(relativize(a)))


def _t_check(inv: Invocation) -> Outcome:
    _need_inputs(inv, 1)
    defs = parse_t_file(_read(inv.inputs[0]))
    lines = []
    verdicts = []
    for d in defs:
        rep = translation_check(d.term, fuel=inv.fuel)
        verdicts.append(rep.verdict)
        lines.append(f"{d.name} : {d.type}  typing ok, translation {rep.describe()}")
        for path, tag, u in t_redexes(d.term):
            res = simulate_check(d.term, u, inv.budget)
            where = "root" if not path else "root." + ".".join(map(str, path))
            lines.append(
                f"  {tag} at {where}: {res.status} ({res.steps} proof step(s), {res.explored} explored)"
            )
            if res.status == "unreachable":
                verdicts.append(FAIL)
            elif res.status == "inconclusive":
                verdicts.append(UNDECIDED)
            if inv.trace:
                lines.append(f"    {show_t(d.term)}  ->  {show_t(u)}")
    return Outcome(_verdict_code(verdicts), "\n".join(lines))


def _theory_info(inv: Invocation) -> Outcome:
    th = _theory(inv.inputs[0] if inv.inputs else inv.theory)
    sig = th.signature
    lines = [f"theory {th.name}" + (f": {th.description}" if th.description else "")]
    lines.append("sorts: " + ", ".join(sorted(sig.sorts)))
    for f, (args, res) in sorted(sig.functions.items()):
        lines.append(f"function {f} : {' '.join(args) + ' -> ' if args else ''}{res}")
    for p, args in sorted(sig.predicates.items()):
        lines.append(f"predicate {p}" + (f" : {' '.join(args)}" if args else ""))
    for r in th.rules.term_rules:
        lines.append(f"rule {r.name}: {show_term(r.lhs)} --> {show_term(r.rhs)}")
    for r in th.rules.prop_rules:
        lines.append(f"prop-rule {r.name}: {show(r.lhs)} --> {show(r.rhs)}")
    for s in th.rules.schemes:
        lines.append(f"scheme {s.name}: t in f_P(u) --> P(t, u) for every class symbol f_P")
    for name, ax in th.axioms.items():
        body = show(ax) if not hasattr(ax, "generate") else f"scheme ({ax.description or 'needs an instance'})"
        lines.append(f"axiom {name}: {body}")
    return Outcome(EXIT_OK, "\n".join(lines))


_HANDLERS = {
    "check": _check,
    "normalize": _normalize,
    "congruent": _congruent,
    "countermodel": _countermodel,
    "relativize": _relativize,
    "t-check": _t_check,
    "theory-info": _theory_info,
}


def run(inv: Invocation) -> Outcome:
    """Run one invocation; errors become exit code 2 with a diagnostic."""
    try:
        return _HANDLERS[inv.subcommand](inv)
    except ParseError as e:
        return Outcome(EXIT_PARSE, f"parse error: {e}")
    except (SortError, TranslationError, UnknownAxiom, UsageError, OSError, ValueError) as e:
        msg = e.args[0] if e.args else str(e)
        return Outcome(EXIT_PARSE, f"error: {msg}")


# --------------------------------------------------------------------------
# Argument parsing


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get("MODARITH_" + name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"MODARITH_{name} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modarith", description="Arithmetic as a theory modulo.")
    ap.add_argument("subcommand", choices=SUBCOMMANDS)
    ap.add_argument("inputs", nargs="*", help="files or propositions, depending on the subcommand")
    ap.add_argument(
        "--theory",
        help=f"built-in theory ({', '.join(THEORIES)}) or a .thy file",
    )
    ap.add_argument("--fuel", type=int, help=f"unfolding budget (default {DEFAULT_FUEL})")
    ap.add_argument("--steps", type=int, help=f"reduction step budget (default {DEFAULT_STEPS})")
    ap.add_argument("--max-size", type=int, help=f"countermodel poset size (default {DEFAULT_MAX_SIZE})")
    ap.add_argument("--max-domain", type=int, help=f"countermodel domain size (default {DEFAULT_MAX_DOMAIN})")
    ap.add_argument(
        "--budget", type=int, help=f"simulation search budget (default {DEFAULT_SIMULATION_BUDGET})"
    )
    ap.add_argument("--jobs", type=int, default=1, help="check theorems of one file concurrently")
    ap.add_argument("--theorem", help="only process the theorem with this name")
    ap.add_argument("--trace", action="store_true", help="print reduction traces with rule tags")
    return ap


def invocation_from_args(argv) -> Invocation:
    ns = build_parser().parse_args(argv)

    def pick(value, env, default):
        return value if value is not None else _env_int(env, default)

    return Invocation(
        subcommand=ns.subcommand,
        theory=ns.theory or os.environ.get("MODARITH_THEORY"),
        fuel=pick(ns.fuel, "FUEL", DEFAULT_FUEL),
        steps=pick(ns.steps, "STEPS", DEFAULT_STEPS),
        inputs=list(ns.inputs),
        trace=ns.trace,
        max_size=pick(ns.max_size, "MAX_SIZE", DEFAULT_MAX_SIZE),
        max_domain=pick(ns.max_domain, "MAX_DOMAIN", DEFAULT_MAX_DOMAIN),
        budget=pick(ns.budget, "BUDGET", DEFAULT_SIMULATION_BUDGET),
        jobs=ns.jobs,
        theorem=ns.theorem,
    )


def main(argv=None) -> int:
    try:
        inv = invocation_from_args(sys.argv[1:] if argv is None else argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except SystemExit as e:  # argparse usage errors
        return EXIT_PARSE if e.code else EXIT_OK
    out = run(inv)
    stream = sys.stdout if out.code in (EXIT_OK, EXIT_FAIL, EXIT_UNDECIDED) else sys.stderr
    print(out.text, file=stream)
    return out.code


if __name__ == "__main__":
    sys.exit(main())
