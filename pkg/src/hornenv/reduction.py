"""Encoding a CNF over V as a Horn-shaped CNF over V plus dual variables.

Every variable v gets a dual v_neg forced to behave as its negation by setup
clauses (v AND v_neg -> falsum, and v OR v_neg).  Substituting duals for the
positive literals turns every clause into a purely negative Horn clause, so a
Horn-envelope learner over the extended universe can recover the original
CNF: this is the hardness reduction, runnable at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from .logic import Clause, Formula, Hypothesis, Model, VariableUniverse
from .oracles import FunctionOracle, MembershipOracle
from .learner import FormulaEquivalenceQuerier, learn_envelope

DUAL_SUFFIX = "_neg"


@dataclass(frozen=True)
class ExtendedUniverse:
    """Base variables followed by their duals; dual(dual(i)) == i."""

    base: VariableUniverse

    @property
    def combined(self) -> VariableUniverse:
        return VariableUniverse(
            tuple(self.base.names) + tuple(n + DUAL_SUFFIX for n in self.base.names)
        )

    @property
    def size(self) -> int:
        return 2 * self.base.size

    def dual(self, index: int) -> int:
        n = self.base.size
        if not 0 <= index < 2 * n:
            raise ValueError(f"index {index} outside extended universe of size {2 * n}")
        return index + n if index < n else index - n

    def is_dual(self, index: int) -> bool:
        return index >= self.base.size


@dataclass(frozen=True)
class EncodedFormula:
    extended: ExtendedUniverse
    phi_neg: Formula
    chi_setup: Formula

    @property
    def combined(self) -> Formula:
        return Formula(self.phi_neg.clauses | self.chi_setup.clauses)


def encode_formula(phi: Formula, universe: VariableUniverse) -> EncodedFormula:
    """Each clause AND(P) -> OR(Q) becomes AND(P, duals of Q) -> falsum, plus
    the setup clauses pinning every dual to the negation of its base."""
    ext = ExtendedUniverse(universe)
    n = universe.size
    phi_neg = frozenset(
        Clause(c.antecedent | frozenset(q + n for q in c.consequent), frozenset())
        for c in phi.clauses
    )
    chi = set()
    for v in range(n):
        chi.add(Clause(frozenset([v, v + n]), frozenset()))
        chi.add(Clause(frozenset(), frozenset([v, v + n])))
    return EncodedFormula(ext, Formula(phi_neg), Formula(frozenset(chi)))


def encode_model(x: Model) -> Model:
    """x mapped over the extended universe: duals carry the complement bits."""
    n = x.width
    low = ~x.mask & ((1 << n) - 1)
    return Model(x.mask << n | low, 2 * n)


def decode_model(x: Model, extended: ExtendedUniverse) -> Model:
    if x.width != extended.size:
        raise ValueError("model width differs from the extended universe")
    return Model(x.mask >> extended.base.size, extended.base.size)


def is_encoded_model(x: Model, extended: ExtendedUniverse) -> bool:
    """True when exactly one of each base/dual pair is set."""
    n = extended.base.size
    base = x.mask >> n
    return x.mask == (base << n | (~base & ((1 << n) - 1)))


def decode_formula(psi: Formula, extended: ExtendedUniverse) -> Formula:
    """Inverse substitution on implicational clauses: a dual in an antecedent
    moves to the consequent as its base variable, and vice versa."""
    n = extended.base.size
    out = []
    for c in psi.clauses:
        ant = frozenset(i for i in c.antecedent if i < n) | frozenset(
            j - n for j in c.consequent if j >= n
        )
        con = frozenset(i for i in c.consequent if i < n) | frozenset(
            j - n for j in c.antecedent if j >= n
        )
        out.append(Clause(ant, con))
    return Formula(frozenset(out))


def closed_form_envelope(phi: Formula, universe: VariableUniverse) -> Formula:
    """Closed form of the Horn envelope of the encoding: the encoded clauses,
    the exclusion half of the setup, and all single-variable resolvents of an
    encoded clause against the disjunction half of the setup."""
    enc = encode_formula(phi, universe)
    ext = enc.extended
    clauses = set(enc.phi_neg.clauses)
    for v in range(universe.size):
        clauses.add(Clause(frozenset([v, ext.dual(v)]), frozenset()))
    for h in enc.phi_neg.clauses:
        for p in h.antecedent:
            clauses.add(Clause(h.antecedent - {p}, frozenset([ext.dual(p)])))
    return Formula(frozenset(clauses))


class _LiftingEquivalenceOracle:
    """Simulates a Horn equivalence oracle for the encoded target from a
    standard equivalence oracle for the original CNF: hypotheses are decoded
    before asking, counterexamples are lifted to their encoded form."""

    mode = "exact"

    def __init__(self, inner: FormulaEquivalenceQuerier, extended: ExtendedUniverse):
        self._inner = inner
        self._extended = extended
        self.eq_queries = 0
        self.decoded_answer: Formula | None = None
        self.lifted: list[Model] = []

    def query(self, hypothesis: Hypothesis) -> Model | None:
        self.eq_queries += 1
        decoded = decode_formula(Formula(frozenset(hypothesis.clauses())), self._extended)
        answer = self._inner.query_formula(decoded)
        if answer is None:
            self.decoded_answer = decoded
            return None
        lifted = encode_model(answer)
        self.lifted.append(lifted)
        return lifted


def learn_cnf_via_envelope(
    membership_oracle: MembershipOracle,
    equivalence_oracle: FormulaEquivalenceQuerier,
    universe: VariableUniverse,
    eq_budget: int | None = None,
    lifted_log: list[Model] | None = None,
) -> Formula:
    """Learn an arbitrary CNF with the envelope learner over the extended
    universe.  Membership queries for non-encoded models are answered negative
    without consulting the inner oracle; equivalence queries are delegated via
    decode and the counterexamples lifted back."""
    ext = ExtendedUniverse(universe)

    def answer(x: Model) -> bool:
        if not is_encoded_model(x, ext):
            return False
        return membership_oracle.classify(decode_model(x, ext))

    mo_enc = FunctionOracle(answer, ext.combined)
    eo_enc = _LiftingEquivalenceOracle(equivalence_oracle, ext)
    result = learn_envelope(mo_enc, eo_enc, ext.combined, eq_budget=eq_budget)
    if lifted_log is not None:
        lifted_log.extend(eo_enc.lifted)
    if result.termination != "yes-from-oracle" or eo_enc.decoded_answer is None:
        raise RuntimeError("the equivalence budget ran out before the target was identified")
    return eo_enc.decoded_answer
