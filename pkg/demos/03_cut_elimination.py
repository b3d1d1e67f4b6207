"""Normalize a random proof with cuts and print the leftmost-outermost trace."""

import random
import sys
from collections import Counter

from modarith.generators import random_cut_proof
from modarith.kernel import empty_context
from modarith.normalizer import check_subject_reduction, normalize_trace
from modarith.proofs import show_proof
from modarith.syntax import show
from modarith.theories import load_theory

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 7
pi, a = random_cut_proof(random.Random(seed))
print(f"goal: {show(a)}")
print(f"proof: {show_proof(pi)}")
nf, trace = normalize_trace(pi)
for i, s in enumerate(trace, 1):
    print(f"  {i}. {s.tag} at root" + "".join(f".{k}" for k in s.path))
print(f"normal form: {show_proof(nf)}")
print(f"reductions by kind: {dict(Counter(s.tag for s in trace))}")
rep = check_subject_reduction(empty_context(load_theory("pure")), pi, a)
print(f"subject reduction: {'holds' if rep.ok else 'broken'} over {rep.steps} steps")
