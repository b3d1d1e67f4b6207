"""Arithmetic as a theory modulo: terms, rewriting, proof checking,
cut elimination, Heyting countermodels and the System T translation."""

from .kernel import (
    FAIL,
    OK,
    UNDECIDED,
    AxiomUse,
    CheckReport,
    Context,
    check,
    check_with_axioms,
    empty_context,
    infer,
)
from .models import find_countermodel, generated_algebras, check_laws, evaluate
from .normalizer import check_subject_reduction, normalize, normalize_trace, replay
from .parser import ParseError, parse_proof, parse_prop, parse_script, parse_term, parse_theory_file
from .rewrite import FuelExhausted, congruent, congruent3
from .syntax import show, show_term
from .proofs import show_proof
from .theories import THEORIES, Theory, load_theory
from .translations import parigot, relativize, simulate_check, translation_check

__all__ = [
    "FAIL", "OK", "UNDECIDED", "AxiomUse", "CheckReport", "Context", "check",
    "check_with_axioms", "empty_context", "infer", "find_countermodel",
    "generated_algebras", "check_laws", "evaluate", "check_subject_reduction",
    "normalize", "normalize_trace", "replay", "ParseError", "parse_proof",
    "parse_prop", "parse_script", "parse_term", "parse_theory_file",
    "FuelExhausted", "congruent", "congruent3", "show", "show_term", "show_proof",
    "THEORIES", "Theory", "load_theory", "parigot", "relativize", "simulate_check",
    "translation_check",
]
