"""Watch the envelope learner work against an exact oracle.

Positive counterexamples accumulate; each negative example carries the
strongest implication consistent with the positives seen so far; a negative
example that turns out to equal an intersection of positives is provably
non-Horn and gets excluded by its quasi clause instead of an implication.
"""

from hornenv import FormulaOracle, ExactHornEquivalenceOracle, learn_envelope
from hornenv.formula_io import parse_formula_text, render_clause, render_metaclause

TARGET = """\
vars: a b c d
a ->
-> b c
"""

parsed = parse_formula_text(TARGET)
phi, universe = parsed.formula, parsed.universe

membership = FormulaOracle(phi, universe)
equivalence = ExactHornEquivalenceOracle(phi, universe)


def narrate(record):
    if "branch" not in record:
        return
    names = [universe.names[i] for i, b in enumerate(record["counterexample"]) if b]
    shown = "{" + ", ".join(names) + "}"
    print(f"eq {record['eq']:>2}: counterexample {shown:<12} -> {record['branch']}"
          f"   |H|={record['h_size']} |Q|={record['q_size']}")
    for bits in record["promoted"]:
        names = [universe.names[i] for i, b in enumerate(bits) if b]
        print(f"        promoted non-Horn example {{{', '.join(names)}}}")


result = learn_envelope(membership, equivalence, universe, log_sink=narrate)

print(f"\nterminated: {result.termination} after {result.stats.eq_count} equivalence"
      f" and {result.stats.mq_count} membership queries")
print("learned implications:")
for m in result.horn:
    print("  ", render_metaclause(m, universe))
print("quasi clauses excluding the non-Horn examples:")
for c in result.quasi:
    print("  ", render_clause(c, universe))
