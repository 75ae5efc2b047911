"""A full rule-extraction experiment with sampled equivalence queries.

The oracle encodes five planted occupation/gender exclusion rules over the
26-variable probing schema.  Equivalence is simulated by sampling one-hot
feature vectors; ten independent iterations run with derived seeds, and the
report counts how often each rule was extracted.
"""

from hornenv import ExperimentConfig, default_schema, run_experiment
from hornenv.logic import Clause, Formula

schema = default_schema()
universe = schema.universe()
index = {name: i for i, name in enumerate(universe.names)}

planted = [
    ("priest", "female"),
    ("nurse", "male"),
    ("mathematician", "female"),
    ("footballer", "female"),
    ("banker", "female"),
]
target = Formula(
    frozenset(Clause(frozenset([index[a], index[b]]), frozenset()) for a, b in planted)
)

print("planted rules:")
for a, b in planted:
    print(f"   {a} & {b} -> F")

config = ExperimentConfig(
    schema=schema,
    target=target,
    eq_budget=100,
    batch_size=640,
    iterations=10,
    seed=0,
)
report = run_experiment(config)
print()
print(report.to_text())
