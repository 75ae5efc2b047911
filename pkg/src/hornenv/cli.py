"""Command-line front end.

Subcommands: learn (single run), experiment (multi-iteration report), closure
(intersection closure / envelope models of a formula or model list), reduce
(CNF-to-Horn encoding tooling), demo-nontermination.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bruteforce import BRUTE_FORCE_CAP, envelope_mask_array, models_of
from .formula_io import (
    load_formula,
    parse_model_line,
    render_clause,
    render_formula,
    render_metaclause,
    render_model,
)
from .harness import (
    EXACT,
    SAMPLED,
    ExperimentConfig,
    demo_nontermination,
    run_experiment,
)
from .learner import learn_envelope
from .logic import Formula, Model, ModelSet, VariableUniverse, closure
from .oracles import (
    ALL_SUBSETS,
    ONE_HOT_GROUPS,
    ExactEquivalenceOracle,
    ExactHornEquivalenceOracle,
    FormulaOracle,
    SampledEquivalenceOracle,
    SamplerConfig,
)
from .reduction import encode_formula, learn_cnf_via_envelope, closed_form_envelope
from .schema import AttributeSchema, load_schema, schema_to_universe
from .wire import external_oracle_connect


def _add_oracle_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--target", help="clause file defining an in-process membership oracle")
    p.add_argument("--oracle-cmd", help="command serving the wire protocol over stdio")
    p.add_argument("--oracle-tcp", metavar="HOST:PORT", help="wire-protocol oracle over TCP")
    p.add_argument("--schema", help="attribute schema JSON (fixes the variable universe)")
    p.add_argument("--eq-mode", choices=[EXACT, SAMPLED], default=EXACT)
    p.add_argument("--eq-budget", type=int, default=None)
    p.add_argument("--batch", type=int, default=640)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the JSON result here")
    p.add_argument("--final-exact-check", action="store_true",
                   help="after a sampled yes, verify with the exact oracle (small universes)")


def _resolve_universe(args) -> tuple[VariableUniverse, Formula | None, AttributeSchema | None]:
    schema = load_schema(args.schema) if args.schema else None
    target = None
    if args.target:
        parsed = load_formula(args.target)
        target = parsed.formula
        if schema is not None and schema_to_universe(schema).names != parsed.universe.names:
            raise SystemExit("schema variables and target file variables disagree")
        return parsed.universe, target, schema
    if schema is not None:
        return schema_to_universe(schema), None, schema
    raise SystemExit("need --target or --schema to fix the variable universe")


def _make_membership(args, universe: VariableUniverse, target: Formula | None):
    if args.oracle_cmd:
        return external_oracle_connect(args.oracle_cmd, universe)
    if args.oracle_tcp:
        return external_oracle_connect(f"tcp:{args.oracle_tcp}", universe)
    if target is not None:
        return FormulaOracle(target, universe)
    raise SystemExit("need --target, --oracle-cmd, or --oracle-tcp for membership queries")


def _cmd_learn(args) -> int:
    universe, target, schema = _resolve_universe(args)
    mo = _make_membership(args, universe, target)
    eq_budget = args.eq_budget
    if args.eq_mode == EXACT:
        if target is None:
            raise SystemExit("exact equivalence needs --target")
        eo = ExactHornEquivalenceOracle(target, universe)
    else:
        if eq_budget is None:
            eq_budget = 100
        final = None
        if args.final_exact_check:
            if target is None or universe.size > BRUTE_FORCE_CAP:
                raise SystemExit("--final-exact-check needs --target and a small universe")
            final = ExactHornEquivalenceOracle(target, universe)
        space = ONE_HOT_GROUPS if schema is not None else ALL_SUBSETS
        cfg = SamplerConfig(args.batch, args.seed, space, schema)
        eo = SampledEquivalenceOracle(mo, cfg, final_exact_check=final)
    log_records: list[dict] = []
    result = learn_envelope(mo, eo, universe, eq_budget=eq_budget,
                            log_sink=log_records.append)
    mo.close()

    print(f"termination: {result.termination} "
          f"(eq={result.stats.eq_count}, mq={result.stats.mq_count}, "
          f"non-Horn examples={result.stats.k_observed})")
    for m in result.horn:
        print(render_metaclause(m, universe))
    if args.include_quasi:
        for c in result.quasi:
            print(render_clause(c, universe))
    if args.out:
        payload = {
            "termination": result.termination,
            "stats": result.stats.__dict__,
            "horn": [render_metaclause(m, universe) for m in result.horn],
            "quasi": [render_clause(c, universe) for c in result.quasi],
            "log": log_records,
        }
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return 0


def _cmd_experiment(args) -> int:
    universe, target, schema = _resolve_universe(args)
    if schema is None:
        raise SystemExit("experiments need --schema (the sampler works on attribute blocks)")
    factory = None
    if args.oracle_cmd or args.oracle_tcp:
        descriptor = args.oracle_cmd or f"tcp:{args.oracle_tcp}"
        factory = lambda: external_oracle_connect(descriptor, universe)  # noqa: E731
    cfg = ExperimentConfig(
        schema=schema,
        target=target,
        oracle_factory=factory,
        eq_mode=args.eq_mode,
        eq_budget=args.eq_budget if args.eq_budget is not None else 100,
        batch_size=args.batch,
        iterations=args.iterations,
        seed=args.seed,
        relevance_threshold=args.threshold,
        parallelism=args.parallelism,
        final_exact_check=args.final_exact_check,
    )
    report = run_experiment(cfg)
    print(report.to_text(), end="")
    if args.out:
        Path(args.out).write_text(report.to_json(), encoding="utf-8")
    return 0


def _cmd_closure(args) -> int:
    if args.models:
        parsed = load_formula(args.target) if args.target else None
        if parsed is None:
            raise SystemExit("--models needs --target (or a vars: header) for the universe")
        universe = parsed.universe
        with open(args.models, encoding="utf-8") as fh:
            models = [
                parse_model_line(line, universe)
                for line in fh
                if line.strip() and not line.lstrip().startswith("#")
            ]
        closed = closure(ModelSet(models))
    else:
        if not args.target:
            raise SystemExit("need --target or --models")
        parsed = load_formula(args.target)
        universe = parsed.universe
        if args.envelope:
            masks = envelope_mask_array(parsed.formula, universe)
            closed = ModelSet(Model(int(m), universe.size) for m in masks)
        else:
            closed = models_of(parsed.formula, universe)
    for model in closed:
        print(render_model(model, universe))
    return 0


def _cmd_reduce(args) -> int:
    parsed = load_formula(args.target)
    phi, universe = parsed.formula, parsed.universe
    enc = encode_formula(phi, universe)
    ext_universe = enc.extended.combined
    enc_text = render_formula(enc.combined, ext_universe)
    env_text = render_formula(closed_form_envelope(phi, universe), ext_universe)
    if args.out_enc:
        Path(args.out_enc).write_text(enc_text, encoding="utf-8")
    else:
        print("# encoding")
        print(enc_text, end="")
    if args.out_envelope:
        Path(args.out_envelope).write_text(env_text, encoding="utf-8")
    else:
        print("# closed-form envelope of the encoding")
        print(env_text, end="")
    if args.learn:
        mo = FormulaOracle(phi, universe)
        eo = ExactEquivalenceOracle(phi, universe)
        recovered = learn_cnf_via_envelope(mo, eo, universe)
        print("# CNF recovered through the envelope learner")
        print(render_formula(recovered, universe), end="")
    return 0


def _cmd_demo_nontermination(args) -> int:
    demo = demo_nontermination(cap=args.cap)
    print(demo.transcript, end="")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="hornenv",
                                     description="Horn envelope learning toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="one learner run")
    _add_oracle_options(p)
    p.add_argument("--include-quasi", action="store_true",
                   help="also print the quasi clauses of the hypothesis")
    p.set_defaults(fn=_cmd_learn)

    p = sub.add_parser("experiment", help="multi-iteration run with a rule report")
    _add_oracle_options(p)
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--threshold", type=int, default=7)
    p.add_argument("--parallelism", type=int, default=1)
    p.set_defaults(fn=_cmd_experiment)

    p = sub.add_parser("closure", help="closure or envelope models of a formula or model list")
    p.add_argument("--target", help="clause file")
    p.add_argument("--models", help="model list file (one model per line, '-' for empty)")
    p.add_argument("--envelope", action="store_true",
                   help="print the envelope's models (closure of the formula's models)")
    p.set_defaults(fn=_cmd_closure)

    p = sub.add_parser("reduce", help="encode a CNF as a Horn-shaped CNF over dual variables")
    p.add_argument("--target", required=True, help="CNF clause file")
    p.add_argument("--out-enc", help="write the encoding here")
    p.add_argument("--out-envelope", help="write the closed-form envelope here")
    p.add_argument("--learn", action="store_true",
                   help="run the round-trip learning demonstration")
    p.set_defaults(fn=_cmd_reduce)

    p = sub.add_parser("demo-nontermination",
                       help="classic loop vs adversary, then the envelope learner")
    p.add_argument("--cap", type=int, default=30)
    p.set_defaults(fn=_cmd_demo_nontermination)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
