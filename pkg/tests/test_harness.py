"""Experiment orchestration, rule aggregation, and the comparison demo."""

from __future__ import annotations

import json

import pytest

from hornenv.harness import (
    EXACT,
    ExperimentConfig,
    NonTerminationDemo,
    aggregate_rules,
    demo_nontermination,
    render_rule,
    run_experiment,
)
from hornenv.logic import Clause, Formula, MetaClause
from hornenv.schema import Attribute, AttributeSchema, default_schema


def _planted_target() -> tuple[AttributeSchema, Formula, set[str]]:
    schema = default_schema()
    u = schema.universe()
    ix = {n: i for i, n in enumerate(u.names)}
    pairs = [
        ("priest", "female"),
        ("nurse", "male"),
        ("mathematician", "female"),
        ("footballer", "female"),
        ("banker", "female"),
    ]
    target = Formula(
        frozenset(Clause(frozenset([ix[a], ix[b]]), frozenset()) for a, b in pairs)
    )
    rendered = {f"{a} & {b} -> F" for a, b in pairs}
    return schema, target, rendered


def test_render_rule_styles():
    schema = default_schema()
    u = schema.universe()
    ix = {n: i for i, n in enumerate(u.names)}
    nurse_male = MetaClause(frozenset([ix["nurse"], ix["male"]]), frozenset())
    assert render_rule(nurse_male, schema) == "nurse & male -> F"
    singer = MetaClause(frozenset([ix["singer"], ix["male"]]), frozenset([ix["before_1875"]]))
    assert render_rule(singer, schema) == "singer & male -> before_1875"
    assert render_rule(MetaClause(frozenset(), frozenset()), schema) == "-> F"


def test_planted_rules_are_recovered():
    schema, target, expected = _planted_target()
    cfg = ExperimentConfig(schema=schema, target=target, eq_budget=100,
                           batch_size=640, iterations=10, seed=0)
    report = run_experiment(cfg)
    counts = {r.rendered: r.count for r in report.rules}
    for rule in expected:
        assert counts.get(rule, 0) >= 7
    assert {r.rendered for r in report.relevant()} >= expected
    assert not report.failures


def test_exact_mode_is_identical_across_iterations():
    schema = AttributeSchema(
        (
            Attribute("occupation", ("mage", "scribe"), allow_unknown=True),
            Attribute("gender", ("f", "m"), allow_unknown=False, label=True),
        )
    )
    u = schema.universe()
    target = Formula.of(Clause(frozenset([0, 3]), frozenset()))  # mage & m -> falsum
    cfg = ExperimentConfig(schema=schema, target=target, eq_mode=EXACT,
                           eq_budget=None, iterations=5, seed=3)
    report = run_experiment(cfg)
    assert all(r.count == 5 for r in report.rules)
    assert {r.rendered for r in report.rules} == {"mage & m -> F"}


def test_zero_budget_yields_empty_report():
    schema, target, _ = _planted_target()
    cfg = ExperimentConfig(schema=schema, target=target, eq_budget=0,
                           batch_size=16, iterations=3, seed=1)
    report = run_experiment(cfg)
    assert report.rules == ()


def test_reports_are_byte_identical_for_equal_configs():
    schema, target, _ = _planted_target()
    cfg = ExperimentConfig(schema=schema, target=target, eq_budget=30,
                           batch_size=128, iterations=4, seed=17)
    first = run_experiment(cfg).to_json()
    second = run_experiment(cfg).to_json()
    assert first == second
    json.loads(first)  # machine readable


def test_parallel_iterations_match_sequential():
    schema, target, _ = _planted_target()
    base = dict(schema=schema, target=target, eq_budget=40, batch_size=128,
                iterations=4, seed=5)
    sequential = run_experiment(ExperimentConfig(**base))
    parallel = run_experiment(ExperimentConfig(**base, parallelism=4))
    assert sequential.to_json() == parallel.to_json()


def test_aggregation_is_order_invariant():
    schema, _, _ = _planted_target()
    u = schema.universe()
    a = MetaClause(frozenset([17, 24]), frozenset())
    b = MetaClause(frozenset([15, 25]), frozenset())
    runs = [[a, b], [b], [a]]
    fwd = aggregate_rules(runs, schema, 3, 2)
    rev = aggregate_rules(list(reversed(runs)), schema, 3, 2)
    assert fwd.to_json() == rev.to_json()
    counts = {r.rendered: r.count for r in fwd.rules}
    assert counts == {"priest & female -> F": 2, "nurse & male -> F": 2}
    # duplicates inside one iteration count once
    dup = aggregate_rules([[a, a]], schema, 1, 1)
    assert dup.rules[0].count == 1


def test_failed_iterations_are_recorded():
    schema, target, _ = _planted_target()
    u = schema.universe()
    calls = {"n": 0}

    def flaky_factory():
        calls["n"] += 1
        if calls["n"] == 2:
            raise ConnectionError("oracle went away")
        from hornenv.oracles import FormulaOracle

        return FormulaOracle(target, u)

    cfg = ExperimentConfig(schema=schema, oracle_factory=flaky_factory, eq_budget=20,
                           batch_size=64, iterations=3, seed=0)
    report = run_experiment(cfg)
    assert len(report.failures) == 1
    assert "iteration 1" in report.failures[0]


def test_experiment_config_validation():
    schema, target, _ = _planted_target()
    with pytest.raises(ValueError):
        ExperimentConfig(schema=schema, target=target, eq_mode="guess")
    with pytest.raises(ValueError):
        ExperimentConfig(schema=schema, target=target, eq_budget=None)
    with pytest.raises(ValueError):
        ExperimentConfig(schema=schema)  # no oracle at all
    with pytest.raises(ValueError):
        ExperimentConfig(schema=schema, target=target, eq_mode=EXACT)  # 26 vars > cap


def test_demo_nontermination_default_cap():
    demo = demo_nontermination()
    assert isinstance(demo, NonTerminationDemo)
    assert demo.classic_terminated is False
    assert demo.classic_resets >= 9
    assert demo.envelope_terminated is True
    assert demo.envelope_equivalent is True
    assert demo.envelope_bounds_ok is True
    assert demo.envelope_rules == ("a =>",)
    assert "hypothesis reset to empty" in demo.transcript


def test_demo_nontermination_single_cycle():
    demo = demo_nontermination(cap=3)
    assert demo.classic_resets == 1
