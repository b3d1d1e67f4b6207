"""Classical principles fail in small Heyting algebras; intuitionistic
theorems survive every model tried."""

from modarith.models import find_countermodel, generated_algebras, laws_hold
from modarith.parser import parse_prop
from modarith.theories import load_theory

sig = load_theory("pure").signature
algs = generated_algebras(4)
print(f"{len(algs)} downset algebras over posets with at most 4 points, laws hold: {all(map(laws_hold, algs))}")
for text in ["A \\/ ~A", "~~A => A", "((A => B) => A) => A", "~(forall x. P(x)) => exists x. ~P(x)", "~~(A \\/ ~A)"]:
    cm = find_countermodel(parse_prop(text, "pure"), signature=sig)
    print(f"\n{text}")
    print("  no countermodel found" if cm is None else "  " + cm.describe().replace("\n", "\n  "))
