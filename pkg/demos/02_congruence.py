"""Computation inside the congruence: equations between closed arithmetic
terms are decided by rewriting, not by proof."""

from modarith.parser import parse_prop
from modarith.rewrite import congruent3
from modarith.theories import load_theory

th = load_theory("ha-mod")
pairs = [
    ("2 * 2 = 4", "4 = 4"),
    ("3 + 4 = 7", "7 = 7"),
    ("0 = 0", "0 = S(0)"),
    ("N(0)", "forall p:kappa. 0 in p => (forall y:iota. N(y) => y in p => S(y) in p) => 0 in p"),
    ("Null(S(0))", "false"),
]
for a, b in pairs:
    print(f"{a:>12}  ~  {b[:40]:<40}  {congruent3(parse_prop(a, th), parse_prop(b, th), th.rules)}")
