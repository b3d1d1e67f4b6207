"""System T terms become proofs in theory T; each T step is matched by at
least one proof reduction, and the translation preserves types."""

from modarith.normalizer import normalize
from modarith.parser import parse_tterm
from modarith.proofs import show_proof
from modarith.translations import (
    decode_numeral,
    parigot,
    show_t,
    simulate_check,
    t_numeral,
    t_redexes,
    translation_check,
)

add = parse_tterm("\\m:nat. \\k:nat. Rec[nat](k, \\a:nat. \\b:nat. S(b), m)")
for a, b in [(1, 2), (2, 3)]:
    t = parse_tterm(f"({show_t(add)}) {a} {b}")
    print(f"{a} + {b} via proof normalization: {decode_numeral(normalize(parigot(t)))}")
t = parse_tterm("(\\a:nat. S(a)) (Rec[nat](0, \\b:nat. \\c:nat. S(c), 1))")
print(f"\nterm: {show_t(t)}")
print(f"type preservation: {translation_check(t).describe()}")
for path, tag, u in t_redexes(t):
    res = simulate_check(t, u)
    print(f"  {tag} at {path}: {res.status} in {res.steps} proof steps")
print(f"\nnumeral 1 translates to: {show_proof(normalize(parigot(t_numeral(1))))}")
