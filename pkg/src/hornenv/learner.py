"""Query learners for Horn envelopes.

learn_envelope identifies the tightest Horn approximation of an arbitrary
Boolean target from membership and equivalence queries.  Negative examples
get the strongest meta Horn explanation consistent with the positives seen so
far; a negative example whose explanation collapses (it equals the
intersection of the positives strictly containing it) is provably non-Horn
and is excluded with its quasi clause instead.

learn_classic_horn is the classic Horn learning loop, kept for comparison: it
is correct on Horn targets but need not terminate on non-Horn ones, which the
scripted adversarial oracle demonstrates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Protocol, Sequence

from .logic import (
    Clause,
    Formula,
    Hypothesis,
    MetaClause,
    Model,
    VariableUniverse,
    eval_clause,
    eval_metaclause,
    intersect,
    make_horn,
    make_quasi,
)
from .oracles import MembershipOracle

logger = logging.getLogger(__name__)

YES_FROM_ORACLE = "yes-from-oracle"
BUDGET_EXHAUSTED = "budget-exhausted"

LogSink = Callable[[dict], None]


class EquivalenceQuerier(Protocol):
    def query(self, hypothesis: Hypothesis) -> Model | None: ...


class FormulaEquivalenceQuerier(Protocol):
    def query_formula(self, psi: Formula) -> Model | None: ...


class LearnerInvariantError(AssertionError):
    """A loop invariant of the learner state was violated."""


@dataclass
class LearnerStats:
    eq_count: int = 0
    mq_count: int = 0
    neg_counterexamples: int = 0
    pos_counterexamples: int = 0
    replacements: int = 0
    appends: int = 0
    promotions: int = 0
    k_observed: int = 0


@dataclass
class LearnerState:
    """Mutable working state of the envelope learner.

    e_neg is an ordered list scanned front to back; replacement mutates a
    position in place and removal never shifts the survivors' order.
    """

    width: int
    e_pos: list[Model] = field(default_factory=list)
    e_neg: list[Model] = field(default_factory=list)
    e_nonhorn: list[Model] = field(default_factory=list)
    horn: list[MetaClause] = field(default_factory=list)
    quasi: list[Clause] = field(default_factory=list)

    def hypothesis(self) -> Hypothesis:
        return Hypothesis(tuple(self.horn), tuple(self.quasi))


@dataclass
class LearnerResult:
    horn: tuple[MetaClause, ...]
    quasi: tuple[Clause, ...]
    stats: LearnerStats
    termination: str
    state: LearnerState

    def hypothesis(self) -> Hypothesis:
        return Hypothesis(self.horn, self.quasi)


def _positive_supersets(e_pos: Iterable[Model], x: Model) -> list[Model]:
    return [e for e in e_pos if x.mask & e.mask == x.mask and e.mask != x.mask]


def promote_non_horn(state: LearnerState) -> list[Model]:
    """Move every negative example equal to the intersection of its strict
    positive supersets into the non-Horn set, preserving the survivors' order.

    An example without positive supersets stays: its falsum explanation is
    still viable, so nothing proves it non-Horn.
    """
    promoted: list[Model] = []
    survivors: list[Model] = []
    for e in state.e_neg:
        sup = _positive_supersets(state.e_pos, e)
        if sup:
            inter = sup[0].mask
            for s in sup[1:]:
                inter &= s.mask
            if inter == e.mask:
                promoted.append(e)
                continue
        survivors.append(e)
    if promoted:
        state.e_neg[:] = survivors
        state.e_nonhorn.extend(promoted)
    return promoted


def rebuild_hypothesis(state: LearnerState) -> tuple[list[MetaClause], list[Clause]]:
    """Recompute H and Q from scratch; promotion must already have run."""
    horn: list[MetaClause] = []
    for e in state.e_neg:
        m = make_horn(state.e_pos, e)
        if not m.consequent and _positive_supersets(state.e_pos, e):
            raise LearnerInvariantError(
                f"negative example {e.bits()} should have been promoted before the rebuild"
            )
        horn.append(m)
    state.horn = horn
    state.quasi = [make_quasi(e) for e in state.e_nonhorn]
    return state.horn, state.quasi


def _check_state_invariants(state: LearnerState, nested_support: bool = False) -> None:
    masks_neg = [e.mask for e in state.e_neg]
    if len(set(masks_neg)) != len(masks_neg):
        raise LearnerInvariantError("duplicate model in the negative example list")
    masks_nh = [e.mask for e in state.e_nonhorn]
    if len(set(masks_nh)) != len(masks_nh):
        raise LearnerInvariantError("duplicate model in the non-Horn set")
    if set(masks_neg) & set(masks_nh):
        raise LearnerInvariantError("negative list and non-Horn set intersect")
    hyp = state.hypothesis()
    for e in state.e_neg:
        if hyp.evaluate(e):
            raise LearnerInvariantError(f"negative example {e.bits()} satisfies the hypothesis")
    for p in state.e_pos:
        if not all(eval_metaclause(p, m) for m in state.horn):
            raise LearnerInvariantError(f"positive example {p.bits()} falsifies the meta Horn set")
    if not nested_support:
        return
    # Audit for exact-oracle analysis runs: a nested pair e_i strictly below
    # e_j keeps its positive-support intersection inside e_j.  This is not an
    # invariant of the algorithm in general (a replacement can slide an entry
    # below another before the positives above it have been seen, and with
    # arbitrary counterexample order the early support can stick out), so it
    # is opt-in and asserted only where the counterexample order makes it
    # hold; support-less nested pairs are legal transients either way.
    for i, ei in enumerate(state.e_neg):
        for j, ej in enumerate(state.e_neg):
            if i == j or not ei.is_strict_subset_of(ej):
                continue
            sup = _positive_supersets(state.e_pos, ei)
            if not sup:
                continue
            inter = sup[0].mask
            for s in sup[1:]:
                inter &= s.mask
            if inter & ej.mask != inter:
                raise LearnerInvariantError(
                    f"positive-support intersection of {ei.bits()} is not below {ej.bits()}"
                )


def learn_envelope(
    membership_oracle: MembershipOracle,
    equivalence_oracle: EquivalenceQuerier,
    universe: VariableUniverse,
    eq_budget: int | None = None,
    check_invariants: bool = True,
    check_nested_support: bool = False,
    log_sink: LogSink | None = None,
) -> LearnerResult:
    """Main loop of the envelope learner.

    Runs until the equivalence oracle says yes or the query budget is
    exhausted (mandatory with a sampled oracle; exact oracles terminate on
    their own).  With check_invariants the state contract is re-verified
    after every iteration; check_nested_support additionally audits the
    nested-negative support property used by the exact-oracle analysis.
    """
    if membership_oracle.universe.names != universe.names:
        raise ValueError("membership oracle universe differs from the learner's")
    n = universe.size
    state = LearnerState(width=n)
    stats = LearnerStats()
    termination = YES_FROM_ORACLE

    while True:
        if eq_budget is not None and stats.eq_count >= eq_budget:
            termination = BUDGET_EXHAUSTED
            break
        stats.eq_count += 1
        hypothesis = state.hypothesis()
        answer = equivalence_oracle.query(hypothesis)
        if answer is None:
            break
        x = answer
        record: dict = {"eq": stats.eq_count, "counterexample": list(x.bits())}

        if not hypothesis.evaluate(x):
            # hypothesis says negative, so the target says positive
            stats.pos_counterexamples += 1
            if check_invariants and any(p.mask == x.mask for p in state.e_pos):
                raise LearnerInvariantError(f"positive counterexample {x.bits()} returned twice")
            state.e_pos.append(x)
            record["branch"] = "positive"
        else:
            stats.neg_counterexamples += 1
            replaced_at = None
            for i, e in enumerate(state.e_neg):
                xe = intersect(x, e)
                stats.mq_count += 1
                if not membership_oracle.classify(xe) and hypothesis.evaluate(xe):
                    replaced_at = i
                    break
            if replaced_at is not None:
                e = state.e_neg[replaced_at]
                xe = intersect(x, e)
                if not xe.is_strict_subset_of(e):
                    raise LearnerInvariantError(
                        f"replacement at position {replaced_at} did not shrink {e.bits()}"
                    )
                state.e_neg[replaced_at] = xe
                stats.replacements += 1
                record["branch"] = "replace"
                record["replaced_index"] = replaced_at
            else:
                if check_invariants and (
                    any(e.mask == x.mask for e in state.e_neg)
                    or any(e.mask == x.mask for e in state.e_nonhorn)
                ):
                    raise LearnerInvariantError(
                        f"counterexample {x.bits()} is already a stored negative"
                    )
                state.e_neg.append(x)
                stats.appends += 1
                record["branch"] = "append"

        promoted = promote_non_horn(state)
        stats.promotions += len(promoted)
        rebuild_hypothesis(state)

        if check_invariants:
            _check_state_invariants(state, nested_support=check_nested_support)
        if log_sink is not None:
            record["promoted"] = [list(e.bits()) for e in promoted]
            record["h_size"] = len(state.horn)
            record["q_size"] = len(state.quasi)
            record["e_neg"] = [list(e.bits()) for e in state.e_neg]
            log_sink(record)

    stats.k_observed = len(state.e_nonhorn)
    if log_sink is not None:
        log_sink({"eq": stats.eq_count, "termination": termination,
                  "h_size": len(state.horn), "q_size": len(state.quasi)})
    return LearnerResult(tuple(state.horn), tuple(state.quasi), stats, termination, state)


def _classic_rebuild(e_neg: Sequence[Model], width: int) -> list[Clause]:
    out: dict[Clause, None] = {}
    for e in e_neg:
        ant = e.indices()
        for p in range(width):
            if p not in ant:
                out.setdefault(Clause(ant, frozenset([p])), None)
        out.setdefault(Clause(ant, frozenset()), None)
    return list(out)


def learn_classic_horn(
    membership_oracle: MembershipOracle,
    equivalence_oracle: FormulaEquivalenceQuerier,
    universe: VariableUniverse,
    max_iterations: int,
    log_sink: LogSink | None = None,
) -> LearnerResult:
    """The classic Horn learning loop against a standard equivalence oracle.

    The iteration cap is mandatory: on a non-Horn target an adversarial
    oracle can drive this loop forever.
    """
    if max_iterations < 1:
        raise ValueError("max_iterations must be positive")
    if membership_oracle.universe.names != universe.names:
        raise ValueError("membership oracle universe differs from the learner's")
    n = universe.size
    hypothesis: list[Clause] = []
    e_neg: list[Model] = []
    stats = LearnerStats()
    termination = BUDGET_EXHAUSTED

    for _ in range(max_iterations):
        stats.eq_count += 1
        answer = equivalence_oracle.query_formula(Formula(frozenset(hypothesis)))
        if answer is None:
            termination = YES_FROM_ORACLE
            break
        x = answer
        record = {"eq": stats.eq_count, "counterexample": list(x.bits())}
        if not all(eval_clause(x, h) for h in hypothesis):
            stats.pos_counterexamples += 1
            hypothesis = [h for h in hypothesis if eval_clause(x, h)]
            record["branch"] = "positive"
        else:
            stats.neg_counterexamples += 1
            replaced_at = None
            for i, e in enumerate(e_neg):
                xe = intersect(x, e)
                stats.mq_count += 1
                if not membership_oracle.classify(xe) and xe.is_strict_subset_of(e):
                    replaced_at = i
                    break
            if replaced_at is not None:
                e_neg[replaced_at] = intersect(x, e_neg[replaced_at])
                stats.replacements += 1
                record["branch"] = "replace"
                record["replaced_index"] = replaced_at
            else:
                e_neg.append(x)
                stats.appends += 1
                record["branch"] = "append"
            hypothesis = _classic_rebuild(e_neg, n)
        if log_sink is not None:
            record["h_size"] = len(hypothesis)
            log_sink(record)

    state = LearnerState(width=n, e_neg=list(e_neg))
    state.horn = [MetaClause(h.antecedent, h.consequent) for h in hypothesis]
    return LearnerResult(tuple(state.horn), (), stats, termination, state)


class ScriptedEquivalenceOracle:
    """Replays a fixed sequence of counterexamples (or "yes") regardless of
    the hypothesis.  Each reply's validity is checked against the hypothesis
    and logged, never enforced: an adversary is allowed to lie.
    """

    mode = "scripted"

    def __init__(
        self,
        sequence: Iterable[Model | str],
        repeat: bool = False,
        membership_oracle: MembershipOracle | None = None,
    ):
        self._script: list[Model | str] = list(sequence)
        self._repeat = repeat
        self._membership = membership_oracle
        self._pos = 0
        self.eq_queries = 0

    def _next(self) -> Model | str:
        if self._pos >= len(self._script):
            if not self._repeat:
                raise RuntimeError("scripted oracle: sequence exhausted")
            self._pos = 0
        item = self._script[self._pos]
        self._pos += 1
        return item

    def _reply(self, evaluate: Callable[[Model], bool]) -> Model | None:
        self.eq_queries += 1
        item = self._next()
        if isinstance(item, str):
            if item != "yes":
                raise ValueError(f"scripted oracle: unknown reply {item!r}")
            return None
        if self._membership is not None:
            if evaluate(item) == self._membership.classify(item):
                logger.warning(
                    "scripted counterexample %s does not separate hypothesis and target",
                    item.bits(),
                )
        return item

    def query(self, hypothesis: Hypothesis) -> Model | None:
        return self._reply(hypothesis.evaluate)

    def query_formula(self, psi: Formula) -> Model | None:
        return self._reply(psi.evaluate)


def scripted_oracle(
    sequence: Iterable[Model | str],
    repeat: bool = False,
    membership_oracle: MembershipOracle | None = None,
) -> ScriptedEquivalenceOracle:
    return ScriptedEquivalenceOracle(sequence, repeat, membership_oracle)


def assert_bounds(
    result: LearnerResult, env_size: int, k: int, universe: VariableUniverse
) -> bool:
    """Check the proof-level query bounds for an exact-oracle run:
    at most (|V|+1)(env_size+k) counterexamples of either sign, and at most
    (env_size+k) membership queries per negative round.
    """
    limit = (universe.size + 1) * (env_size + k)
    stats = result.stats
    return (
        stats.neg_counterexamples <= limit
        and stats.pos_counterexamples <= limit
        and stats.mq_count <= (env_size + k) * limit
    )
