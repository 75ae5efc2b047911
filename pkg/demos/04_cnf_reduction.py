"""Learning arbitrary CNFs through the envelope learner.

Doubling the variables with forced complements turns any CNF into a purely
negative (hence Horn) clause set; learning the envelope over the doubled
universe and decoding recovers the original CNF.  This is why envelope
learning is at least as hard as CNF learning.
"""

from hornenv import (
    ExactEquivalenceOracle,
    FormulaOracle,
    encode_formula,
    equivalent,
    learn_cnf_via_envelope,
)
from hornenv.formula_io import parse_formula_text, render_formula

TARGET = """\
vars: p q r
-> p q      # p or q
q -> r
"""

parsed = parse_formula_text(TARGET)
phi, universe = parsed.formula, parsed.universe

enc = encode_formula(phi, universe)
print("encoding over the doubled universe:")
print(render_formula(enc.combined, enc.extended.combined))

recovered = learn_cnf_via_envelope(
    FormulaOracle(phi, universe),
    ExactEquivalenceOracle(phi, universe),
    universe,
)
print("CNF recovered by the envelope learner:")
print(render_formula(recovered, universe))
print("equivalent to the hidden target:", equivalent(recovered, phi, universe))
