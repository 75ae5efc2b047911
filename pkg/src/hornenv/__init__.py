"""hornenv: exact learning of Horn envelopes with membership and equivalence
queries, plus the CNF-hardness encoding and an experiment harness for probing
black-box classifiers."""

from .logic import (
    Clause,
    Formula,
    Hypothesis,
    MetaClause,
    Model,
    ModelSet,
    VariableUniverse,
    closure,
    eval_clause,
    eval_hypothesis,
    eval_metaclause,
    intersect,
    is_intersection_closed,
    make_horn,
    make_quasi,
)
from .bruteforce import (
    BRUTE_FORCE_CAP,
    BruteForceCapExceeded,
    consequence_closure,
    entails,
    envelope_bruteforce,
    equivalent,
    is_saturated,
    models_of,
)
from .oracles import (
    ExactEquivalenceOracle,
    ExactHornEquivalenceOracle,
    FormulaOracle,
    FunctionOracle,
    MembershipOracle,
    SampledEquivalenceOracle,
    SamplerConfig,
)
from .learner import (
    LearnerResult,
    LearnerState,
    LearnerStats,
    assert_bounds,
    learn_classic_horn,
    learn_envelope,
    promote_non_horn,
    rebuild_hypothesis,
    scripted_oracle,
)
from .reduction import (
    EncodedFormula,
    ExtendedUniverse,
    decode_formula,
    encode_formula,
    encode_model,
    learn_cnf_via_envelope,
    closed_form_envelope,
)
from .schema import AttributeSchema, Attribute, default_schema, load_schema, schema_to_universe
from .harness import ExperimentConfig, RuleReport, demo_nontermination, render_rule, run_experiment
from .wire import external_oracle_connect

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
