"""Four is even: check the corpus proof in the rewriting presentation and the
axiomatic one, then show the fuel it took and the witness it carries."""

from modarith.golden import load_script
from modarith.kernel import check_with_axioms
from modarith.normalizer import normalize
from modarith.proofs import show_proof
from modarith.syntax import show

for name in ("even4.prf", "even4_axiomatic.prf"):
    script = load_script(name)
    for td in script.theorems:
        rep = check_with_axioms(script.theory, td.uses, td.proof, td.prop)
        print(f"[{script.theory.name}] {td.name} : {show(td.prop)}")
        print(f"  proof: {show_proof(td.proof)}")
        print(f"  {rep.describe()}")
        print(f"  normal form: {show_proof(normalize(td.proof))}")
