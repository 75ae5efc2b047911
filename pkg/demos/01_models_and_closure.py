"""Models, clauses, and intersection closure.

A model is a subset of the variables.  Horn formulas are exactly the formulas
whose model sets are closed under intersection, which is why a single
non-Horn clause like `b or c` already breaks closure: two of its models can
intersect to a model that no longer satisfies it.
"""

from hornenv import (
    closure,
    envelope_bruteforce,
    is_intersection_closed,
    models_of,
)
from hornenv.formula_io import parse_formula_text, render_model

TARGET = """\
vars: a b c d
a ->        # a never happens
-> b c      # b or c always holds
"""

parsed = parse_formula_text(TARGET)
phi, universe = parsed.formula, parsed.universe

print("target:")
print(TARGET)

M = models_of(phi, universe)
print(f"models of the target ({len(M)}):")
for x in M:
    print("  ", render_model(x, universe))

print("closed under intersection?", is_intersection_closed(M))

closed = closure(M)
print(f"closure adds {len(closed) - len(M)} models:")
for x in closed:
    if x not in M:
        print("  ", render_model(x, universe), " (intersection of models above)")

env = envelope_bruteforce(phi, universe)
print("\nthe envelope's models are exactly that closure:", env == closed)
print("here the envelope is the Horn formula 'a ->' -- every subset of {b, c, d}:")
for x in env:
    print("  ", render_model(x, universe))
