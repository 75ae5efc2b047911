"""Experiment harness: repeated learner runs, rule aggregation, and reports.

An experiment runs a number of independent learner iterations (seeded
seed + i), collects every meta Horn rule each iteration extracted, and counts
how often each rule appeared across iterations.  Rule identity is syntactic
on canonicalized index sets; rules reaching the relevance threshold (default
7 of 10) are the headline of the report.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

from .bruteforce import BRUTE_FORCE_CAP, envelope_mask_array, satisfying_mask_array
from .formula_io import parse_formula_text, render_metaclause
from .learner import (
    LearnerResult,
    ScriptedEquivalenceOracle,
    assert_bounds,
    learn_classic_horn,
    learn_envelope,
)
from .logic import Formula, MetaClause, Model
from .oracles import (
    ONE_HOT_GROUPS,
    ExactHornEquivalenceOracle,
    FormulaOracle,
    MembershipOracle,
    SampledEquivalenceOracle,
    SamplerConfig,
)
from .schema import AttributeSchema, schema_to_universe

EXACT = "exact"
SAMPLED = "sampled"

OracleFactory = Callable[[], MembershipOracle]


@dataclass(frozen=True)
class ExperimentConfig:
    schema: AttributeSchema
    target: Formula | None = None
    oracle_factory: OracleFactory | None = None
    eq_mode: str = SAMPLED
    eq_budget: int | None = 100
    batch_size: int = 640
    iterations: int = 10
    seed: int = 0
    relevance_threshold: int = 7
    parallelism: int = 1
    final_exact_check: bool = False

    def __post_init__(self) -> None:
        if self.eq_mode not in (EXACT, SAMPLED):
            raise ValueError(f"unknown eq_mode {self.eq_mode!r}")
        if self.target is None and self.oracle_factory is None:
            raise ValueError("an experiment needs a target formula or an oracle factory")
        if self.eq_mode == SAMPLED:
            if self.eq_budget is None or self.batch_size < 1:
                raise ValueError("sampled mode needs an equivalence budget and a batch size")
        if self.eq_mode == EXACT:
            if self.target is None:
                raise ValueError("exact mode needs the target formula")
            if len(self.schema.universe()) > BRUTE_FORCE_CAP:
                raise ValueError("exact mode is limited to universes within the brute-force cap")
        if self.iterations < 0:
            raise ValueError("iterations must be non-negative")


@dataclass(frozen=True)
class RuleCount:
    rendered: str
    antecedent: tuple[int, ...]
    consequent: tuple[int, ...]
    count: int


@dataclass(frozen=True)
class RuleReport:
    rules: tuple[RuleCount, ...]
    iterations: int
    relevance_threshold: int
    failures: tuple[str, ...] = ()

    def relevant(self) -> tuple[RuleCount, ...]:
        return tuple(r for r in self.rules if r.count >= self.relevance_threshold)

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "relevance_threshold": self.relevance_threshold,
            "failures": list(self.failures),
            "rules": [
                {
                    "rule": r.rendered,
                    "antecedent": list(r.antecedent),
                    "consequent": list(r.consequent),
                    "count": r.count,
                }
                for r in self.rules
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [f"extracted rules over {self.iterations} iterations "
                 f"(relevance threshold {self.relevance_threshold})"]
        if not self.rules:
            lines.append("  (no rules extracted)")
        for r in self.rules:
            marker = "*" if r.count >= self.relevance_threshold else " "
            lines.append(f" {marker} {r.count:>3}  {r.rendered}")
        for failure in self.failures:
            lines.append(f" ! {failure}")
        return "\n".join(lines) + "\n"


def render_rule(m: MetaClause, schema: AttributeSchema) -> str:
    """Report-style rendering with attribute-value names: 'nurse & male -> F'."""
    universe = schema_to_universe(schema)
    left = " & ".join(universe.names[i] for i in sorted(m.antecedent))
    right = " & ".join(universe.names[i] for i in sorted(m.consequent)) if m.consequent else "F"
    return f"{left} -> {right}" if left else f"-> {right}"


def _canonical(m: MetaClause) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return tuple(sorted(m.antecedent)), tuple(sorted(m.consequent))


def aggregate_rules(
    per_iteration_rules: list[list[MetaClause]],
    schema: AttributeSchema,
    iterations: int,
    relevance_threshold: int,
    failures: tuple[str, ...] = (),
) -> RuleReport:
    """Count syntactically identical rules across iterations; the outcome does
    not depend on the order in which iterations completed."""
    counts: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = {}
    for rules in per_iteration_rules:
        for key in {_canonical(m) for m in rules}:
            counts[key] = counts.get(key, 0) + 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    out = tuple(
        RuleCount(
            rendered=render_rule(MetaClause(frozenset(ant), frozenset(con)), schema),
            antecedent=ant,
            consequent=con,
            count=count,
        )
        for (ant, con), count in ranked
    )
    return RuleReport(out, iterations, relevance_threshold, failures)


def _run_iteration(cfg: ExperimentConfig, index: int) -> LearnerResult:
    universe = schema_to_universe(cfg.schema)
    if cfg.oracle_factory is not None:
        mo = cfg.oracle_factory()
    else:
        assert cfg.target is not None
        mo = FormulaOracle(cfg.target, universe)
    try:
        if cfg.eq_mode == EXACT:
            assert cfg.target is not None
            eo = ExactHornEquivalenceOracle(cfg.target, universe)
            return learn_envelope(mo, eo, universe, eq_budget=cfg.eq_budget)
        final_check = None
        if cfg.final_exact_check and cfg.target is not None:
            final_check = ExactHornEquivalenceOracle(cfg.target, universe)
        sampler = SamplerConfig(
            batch_size=cfg.batch_size,
            rng_seed=cfg.seed + index,
            sample_space=ONE_HOT_GROUPS,
            schema=cfg.schema,
        )
        eo = SampledEquivalenceOracle(mo, sampler, final_exact_check=final_check)
        return learn_envelope(mo, eo, universe, eq_budget=cfg.eq_budget)
    finally:
        mo.close()


def run_experiment(cfg: ExperimentConfig) -> RuleReport:
    """Run the configured iterations and aggregate their extracted rules.
    An iteration that raises is recorded as a failure, not fatal."""
    outcomes: list[list[MetaClause] | None] = [None] * cfg.iterations
    failures: list[str] = []

    def work(i: int) -> list[MetaClause]:
        return list(_run_iteration(cfg, i).horn)

    if cfg.parallelism > 1 and cfg.iterations > 1:
        with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
            futures = {i: pool.submit(work, i) for i in range(cfg.iterations)}
            for i, fut in futures.items():
                try:
                    outcomes[i] = fut.result()
                except Exception as e:
                    failures.append(f"iteration {i}: {e}")
    else:
        for i in range(cfg.iterations):
            try:
                outcomes[i] = work(i)
            except Exception as e:
                failures.append(f"iteration {i}: {e}")

    completed = [rules for rules in outcomes if rules is not None]
    return aggregate_rules(
        completed, cfg.schema, cfg.iterations, cfg.relevance_threshold, tuple(failures)
    )


NONTERMINATION_TARGET = """\
vars: a b c d
a ->
-> b c
"""


@dataclass(frozen=True)
class NonTerminationDemo:
    transcript: str
    classic_resets: int
    classic_terminated: bool
    envelope_terminated: bool
    envelope_equivalent: bool
    envelope_bounds_ok: bool
    envelope_rules: tuple[str, ...]


def demo_nontermination(cap: int = 30) -> NonTerminationDemo:
    """Drive the classic loop with the cycling adversary until the cap, then
    learn the same target's envelope exactly."""
    parsed = parse_formula_text(NONTERMINATION_TARGET)
    target, universe = parsed.formula, parsed.universe
    adversary_models = [
        Model.from_names(names, universe) for names in (["d"], ["b", "d"], ["c", "d"])
    ]

    lines = [f"classic Horn loop vs the cycling adversary (cap {cap})"]
    records: list[dict] = []
    mo = FormulaOracle(target, universe)
    eo = ScriptedEquivalenceOracle(adversary_models, repeat=True, membership_oracle=mo)
    classic = learn_classic_horn(mo, eo, universe, max_iterations=cap, log_sink=records.append)
    resets = 0
    previous = 0
    for record in records:
        lines.append(
            f"  eq {record['eq']:>3}: x={record['counterexample']}"
            f" branch={record['branch']} |H|={record['h_size']}"
        )
        if previous > 0 and record["h_size"] == 0:
            resets += 1
            lines[-1] += "   <- hypothesis reset to empty"
        previous = record["h_size"]
    lines.append(
        f"classic outcome: termination={classic.termination}, hypothesis resets={resets}"
    )

    mo2 = FormulaOracle(target, universe)
    eo2 = ExactHornEquivalenceOracle(target, universe)
    envelope = learn_envelope(mo2, eo2, universe)
    learned = Formula.from_metaclauses(envelope.horn)
    learned_masks = satisfying_mask_array(learned.clauses, universe.size)
    env_masks = envelope_mask_array(target, universe)
    equivalent = bool(
        learned_masks.shape == env_masks.shape and (learned_masks == env_masks).all()
    )
    k = int(env_masks.size - satisfying_mask_array(target.clauses, universe.size).size)
    bounds_ok = assert_bounds(envelope, env_size=len(envelope.horn), k=k, universe=universe)
    rules = tuple(render_metaclause(m, universe) for m in envelope.horn)
    lines.append("envelope learner on the same target with an exact oracle:")
    lines.append(
        f"  termination={envelope.termination} after {envelope.stats.eq_count} equivalence"
        f" queries; H = {list(rules)}; matches the brute-force envelope: {equivalent};"
        f" query bounds hold: {bounds_ok}"
    )
    return NonTerminationDemo(
        transcript="\n".join(lines) + "\n",
        classic_resets=resets,
        classic_terminated=classic.termination == "yes-from-oracle",
        envelope_terminated=envelope.termination == "yes-from-oracle",
        envelope_equivalent=equivalent,
        envelope_bounds_ok=bounds_ok,
        envelope_rules=rules,
    )
