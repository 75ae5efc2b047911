"""Why the classic Horn loop is not enough for non-Horn targets.

An adversarial oracle can feed the classic learner the same three
counterexamples forever: a non-Horn negative example followed by two
positives that wipe out every implication it just added.  The envelope
learner handles the same target by proving the example non-Horn and
excluding it, then terminates.
"""

from hornenv import demo_nontermination

print(demo_nontermination(cap=12).transcript)
