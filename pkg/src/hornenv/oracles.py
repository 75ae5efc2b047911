"""Membership and equivalence oracles.

Membership oracles map a model to a positive/negative label and keep two
counters: logical queries (everything the caller asked) and answer calls
(evaluations that actually reached the underlying surface; a cache hit is a
logical query but not a call).  Equivalence oracles take a hypothesis and
answer yes or return a counterexample model.

The exact Horn equivalence oracle compares intersection closures, so it can
answer yes while the raw model sets still differ; counterexamples are always
drawn from the raw symmetric difference, which is exactly the set of models
the hypothesis and the membership surface disagree on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bruteforce import BRUTE_FORCE_CAP, _require_within_cap, satisfying_mask_array
from .logic import (
    Formula,
    Hypothesis,
    Model,
    VariableUniverse,
    WidthMismatchError,
    closure_of_masks,
)
from .schema import AttributeSchema

POSITIVE = "positive"
NEGATIVE = "negative"


class OracleInconsistencyError(RuntimeError):
    """The same model received different labels within one session."""


class MembershipOracle:
    """Base answering surface; subclasses implement _answer."""

    def __init__(self, universe: VariableUniverse, cache: bool = False):
        self.universe = universe
        self.logical_queries = 0
        self.calls = 0
        self._cache: dict[int, bool] | None = {} if cache else None
        self._seen: dict[int, bool] = {}

    def classify(self, x: Model) -> bool:
        """True for a positive label.  Deterministic within a session."""
        if x.width != self.universe.size:
            raise WidthMismatchError(
                f"model width {x.width} differs from oracle universe {self.universe.size}"
            )
        self.logical_queries += 1
        if self._cache is not None and x.mask in self._cache:
            return self._cache[x.mask]
        self.calls += 1
        label = self._answer(x)
        if x.mask in self._seen and self._seen[x.mask] != label:
            raise OracleInconsistencyError(
                f"model {x.bits()} was labelled both ways within one session"
            )
        self._seen[x.mask] = label
        if self._cache is not None:
            self._cache[x.mask] = label
        return label

    def membership(self, x: Model) -> str:
        return POSITIVE if self.classify(x) else NEGATIVE

    def _answer(self, x: Model) -> bool:
        raise NotImplementedError

    def close(self) -> None:
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc) -> None:
        self.close()


class FormulaOracle(MembershipOracle):
    """In-process oracle answering by clause evaluation.  Accepts concurrent
    queries (evaluation is pure; the counters are merely informative)."""

    def __init__(self, target: Formula, universe: VariableUniverse, cache: bool = False):
        super().__init__(universe, cache)
        self.target = target
        self._masks = [c.masks(universe.size) for c in target.clauses]

    def _answer(self, x: Model) -> bool:
        for ant, con in self._masks:
            if x.mask & ant == ant and x.mask & con == 0:
                return False
        return True


class FunctionOracle(MembershipOracle):
    """Oracle backed by an arbitrary model -> bool function."""

    def __init__(
        self, fn: Callable[[Model], bool], universe: VariableUniverse, cache: bool = False
    ):
        super().__init__(universe, cache)
        self._fn = fn

    def _answer(self, x: Model) -> bool:
        return bool(self._fn(x))


def membership(oracle: MembershipOracle, x: Model) -> str:
    return oracle.membership(x)


def _counterexample_invariant(x: Model, hypothesis: Hypothesis, target_positive: bool) -> None:
    assert hypothesis.evaluate(x) != target_positive, (
        "counterexample must be classified positive by exactly one side"
    )


class ExactHornEquivalenceOracle:
    """Answers yes iff the intersection closures of the target's and the
    hypothesis's model sets coincide; otherwise returns the lexicographically
    smallest model on which they disagree."""

    mode = "exact"

    def __init__(
        self, target: Formula, universe: VariableUniverse, cap: int = BRUTE_FORCE_CAP
    ):
        _require_within_cap(universe, cap)
        self.universe = universe
        self.target = target
        self.eq_queries = 0
        self._target_masks = satisfying_mask_array(target.clauses, universe.size)
        self._target_closure = closure_of_masks(self._target_masks)

    def query(self, hypothesis: Hypothesis) -> Model | None:
        self.eq_queries += 1
        hyp_masks = satisfying_mask_array(hypothesis.clauses(), self.universe.size)
        if np.array_equal(closure_of_masks(hyp_masks), self._target_closure):
            return None
        diff = np.setxor1d(self._target_masks, hyp_masks)
        assert diff.size, "closures differ but raw model sets agree"
        x = Model(int(diff[0]), self.universe.size)
        _counterexample_invariant(x, hypothesis, bool((self._target_masks == x.mask).any()))
        return x


class ExactEquivalenceOracle:
    """Standard equivalence oracle: yes iff the raw model sets coincide."""

    mode = "exact"

    def __init__(
        self, target: Formula, universe: VariableUniverse, cap: int = BRUTE_FORCE_CAP
    ):
        _require_within_cap(universe, cap)
        self.universe = universe
        self.target = target
        self.eq_queries = 0
        self._target_masks = satisfying_mask_array(target.clauses, universe.size)

    def query_formula(self, psi: Formula) -> Model | None:
        self.eq_queries += 1
        hyp_masks = satisfying_mask_array(psi.clauses, self.universe.size)
        diff = np.setxor1d(self._target_masks, hyp_masks)
        if not diff.size:
            return None
        return Model(int(diff[0]), self.universe.size)

    def query(self, hypothesis: Hypothesis) -> Model | None:
        return self.query_formula(Formula(frozenset(hypothesis.clauses())))


ALL_SUBSETS = "all-subsets"
ONE_HOT_GROUPS = "one-hot-groups"


@dataclass(frozen=True)
class SamplerConfig:
    """Batch sampling configuration for simulated equivalence queries."""

    batch_size: int
    rng_seed: int
    sample_space: str = ALL_SUBSETS
    schema: AttributeSchema | None = None

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")
        if self.sample_space not in (ALL_SUBSETS, ONE_HOT_GROUPS):
            raise ValueError(f"unknown sample space {self.sample_space!r}")
        if self.sample_space == ONE_HOT_GROUPS and self.schema is None:
            raise ValueError("one-hot-groups sampling needs an attribute schema")


class BatchSampler:
    """Seeded model sampler; the sequence of batches is a pure function of the
    seed and configuration."""

    def __init__(self, config: SamplerConfig, universe: VariableUniverse):
        self.config = config
        self.universe = universe
        self._rng = np.random.default_rng(np.uint64(config.rng_seed))
        if config.sample_space == ONE_HOT_GROUPS:
            assert config.schema is not None
            if config.schema.universe().names != universe.names:
                raise ValueError("sampler schema does not match the oracle universe")

    def draw_batch(self) -> list[int]:
        n = self.universe.size
        size = self.config.batch_size
        if self.config.sample_space == ALL_SUBSETS:
            if n > 62:
                raise ValueError("all-subsets sampling supports at most 62 variables")
            return [int(v) for v in self._rng.integers(0, 1 << n, size=size, dtype=np.int64)]
        assert self.config.schema is not None
        masks = np.zeros(size, dtype=np.int64)
        for block in self.config.schema.blocks():
            options = block.size + (1 if block.attribute.allow_unknown else 0)
            picks = self._rng.integers(0, options, size=size)
            for row, pick in enumerate(picks):
                if pick < block.size:  # the extra option is the all-zeros block
                    masks[row] |= 1 << (n - 1 - (block.start + int(pick)))
        return [int(v) for v in masks]


class SampledEquivalenceOracle:
    """Equivalence by random sampling: draws one batch per query and returns
    the first sampled model the hypothesis and the membership oracle disagree
    on; a clean batch means yes.  Sound but not complete.
    """

    mode = "sampled"

    def __init__(
        self,
        membership_oracle: MembershipOracle,
        config: SamplerConfig,
        final_exact_check: ExactHornEquivalenceOracle | None = None,
    ):
        self.membership_oracle = membership_oracle
        self.config = config
        self.sampler = BatchSampler(config, membership_oracle.universe)
        self.final_exact_check = final_exact_check
        self.eq_queries = 0
        self.last_batch: list[int] = []

    def query(self, hypothesis: Hypothesis) -> Model | None:
        self.eq_queries += 1
        width = self.membership_oracle.universe.size
        compiled = hypothesis.compile(width)
        batch = self.sampler.draw_batch()
        self.last_batch = batch
        for mask in batch:
            x = Model(mask, width)
            predicted = compiled.evaluate_mask(mask)
            actual = self.membership_oracle.classify(x)
            if predicted != actual:
                _counterexample_invariant(x, hypothesis, actual)
                return x
        if self.final_exact_check is not None:
            return self.final_exact_check.query(hypothesis)
        return None
