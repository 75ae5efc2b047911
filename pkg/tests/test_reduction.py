"""CNF-to-Horn encoding: substitution, model lift, closed-form envelope, and
the round-trip learning wrapper."""

from __future__ import annotations

import numpy as np
import pytest

from hornenv.bruteforce import (
    envelope_mask_array,
    equivalent,
    satisfying_mask_array,
)
from hornenv.logic import Clause, Formula, Model, VariableUniverse
from hornenv.oracles import ExactEquivalenceOracle, FormulaOracle
from hornenv.reduction import (
    ExtendedUniverse,
    decode_formula,
    decode_model,
    encode_formula,
    encode_model,
    is_encoded_model,
    learn_cnf_via_envelope,
    closed_form_envelope,
)

from generators import random_cnf, universe


def _bc() -> tuple[Formula, VariableUniverse]:
    u = VariableUniverse(("b", "c"))
    return Formula.of(Clause(frozenset(), frozenset([0, 1]))), u


def test_extended_universe_is_an_involution():
    ext = ExtendedUniverse(universe(3))
    assert ext.combined.names == ("v0", "v1", "v2", "v0_neg", "v1_neg", "v2_neg")
    for i in range(6):
        assert ext.dual(ext.dual(i)) == i
    assert not ext.is_dual(2) and ext.is_dual(3)


def test_encode_formula_substitutes_duals():
    phi, u = _bc()
    enc = encode_formula(phi, u)
    # b OR c becomes b_neg AND c_neg -> falsum
    assert enc.phi_neg.clauses == {Clause(frozenset([2, 3]), frozenset())}
    assert all(c.is_negative for c in enc.phi_neg.clauses)
    assert len(enc.chi_setup) == 2 * u.size
    assert len(enc.combined) == len(phi) + 2 * u.size


def test_encode_empty_formula_is_setup_only():
    u = universe(3)
    enc = encode_formula(Formula(frozenset()), u)
    assert enc.phi_neg.clauses == frozenset()
    assert len(enc.combined) == 6


def test_encode_model_complements_duals():
    u2 = universe(2)
    assert encode_model(Model.empty(2)) == Model.from_bits([0, 0, 1, 1])
    x = Model.from_names(["b", "d"], VariableUniverse(("a", "b", "c", "d")))
    lifted = encode_model(x)
    assert lifted.bits() == (0, 1, 0, 1, 1, 0, 1, 0)
    assert decode_model(lifted, ExtendedUniverse(universe(4))) == Model(x.mask, 4)


def test_encoded_models_satisfy_setup():
    u = universe(3)
    enc = encode_formula(Formula(frozenset()), u)
    for mask in range(8):
        lifted = encode_model(Model(mask, 3))
        assert enc.chi_setup.evaluate(lifted) is True
        assert is_encoded_model(lifted, enc.extended)


def test_encoding_preserves_satisfaction():
    rng = np.random.default_rng(13)
    for _ in range(100):
        n = int(rng.integers(2, 7))
        u = universe(n)
        phi = random_cnf(rng, n)
        enc = encode_formula(phi, u)
        mask = int(rng.integers(0, 1 << n))
        x = Model(mask, n)
        assert phi.evaluate(x) == enc.phi_neg.evaluate(encode_model(x))


def test_decode_spec_examples():
    phi, u = _bc()
    ext = ExtendedUniverse(u)
    enc = encode_formula(phi, u)
    assert decode_formula(enc.phi_neg, ext) == phi
    # the setup clauses decode to tautologies
    decoded_setup = decode_formula(enc.chi_setup, ext)
    assert equivalent(decoded_setup, Formula(frozenset()), u)
    assert decode_formula(
        Formula.of(Clause(frozenset([2, 3]), frozenset())), ext
    ) == Formula.of(Clause(frozenset(), frozenset([0, 1])))


def test_decode_encode_is_a_retraction():
    rng = np.random.default_rng(5)
    for _ in range(60):
        n = int(rng.integers(2, 7))
        u = universe(n)
        phi = random_cnf(rng, n)
        enc = encode_formula(phi, u)
        decoded = decode_formula(enc.combined, ExtendedUniverse(u))
        assert equivalent(decoded, phi, u)


def test_closed_form_envelope_shape():
    phi, u = _bc()
    got = closed_form_envelope(phi, u)
    expected = {
        Clause(frozenset([2, 3]), frozenset()),      # b_neg c_neg -> falsum
        Clause(frozenset([0, 2]), frozenset()),      # b b_neg -> falsum
        Clause(frozenset([1, 3]), frozenset()),      # c c_neg -> falsum
        Clause(frozenset([3]), frozenset([0])),      # c_neg -> b
        Clause(frozenset([2]), frozenset([1])),      # b_neg -> c
    }
    assert got.clauses == expected


def test_closed_form_envelope_of_empty_formula():
    u = universe(2)
    got = closed_form_envelope(Formula(frozenset()), u)
    assert got.clauses == {
        Clause(frozenset([0, 2]), frozenset()),
        Clause(frozenset([1, 3]), frozenset()),
    }


def test_closed_form_envelope_is_sound():
    # the true envelope always entails the closed form (every clause of the
    # closed form is a valid resolvent)
    rng = np.random.default_rng(23)
    for _ in range(40):
        n = int(rng.integers(2, 6))
        u = universe(n)
        phi = random_cnf(rng, n)
        enc = encode_formula(phi, u)
        ext_u = enc.extended.combined
        closed_form = set(
            satisfying_mask_array(closed_form_envelope(phi, u).clauses, ext_u.size).tolist()
        )
        brute = set(envelope_mask_array(enc.combined, ext_u).tolist())
        assert brute <= closed_form


def test_closed_form_envelope_is_exact_for_single_clauses():
    # with a single encoded clause no cross-clause resolution exists, and the
    # one-variable resolvents capture the whole envelope; checked exhaustively
    from itertools import combinations

    for n in (2, 3, 4):
        u = universe(n)
        for k in range(1, min(n, 3) + 1):
            for chosen in combinations(range(n), k):
                for split in range(k + 1):
                    phi = Formula.of(
                        Clause(frozenset(chosen[:split]), frozenset(chosen[split:]))
                    )
                    enc = encode_formula(phi, u)
                    ext_u = enc.extended.combined
                    closed_form = satisfying_mask_array(
                        closed_form_envelope(phi, u).clauses, ext_u.size
                    )
                    brute = envelope_mask_array(enc.combined, ext_u)
                    assert np.array_equal(closed_form, brute)


def test_closed_form_envelope_misses_cross_clause_resolvents():
    # documented gap: the closed form only resolves one variable out of each
    # original clause, so consequences that need a resolution step between two
    # encoded clauses are lost.  Here v1 & v0_neg -> v3_neg is entailed by the
    # encoding (derivable via resolving the two encoded clauses on v2) but no
    # single-removal resolvent yields it, and the spare model {v1, v0_neg}
    # satisfies the closed form while lying outside the envelope.
    u = universe(4)
    phi = Formula.of(
        Clause(frozenset(), frozenset([1])),
        Clause(frozenset([1, 3]), frozenset([2])),
        Clause(frozenset([2, 3]), frozenset([0])),
    )
    enc = encode_formula(phi, u)
    ext_u = enc.extended.combined
    closed_form = set(satisfying_mask_array(closed_form_envelope(phi, u).clauses, 8).tolist())
    brute = set(envelope_mask_array(enc.combined, ext_u).tolist())
    spare = Model.from_bits([0, 1, 0, 0, 1, 0, 0, 0])
    assert closed_form - brute == {spare.mask}


def test_learn_cnf_via_envelope_disjunction():
    phi, u = _bc()
    mo = FormulaOracle(phi, u)
    eo = ExactEquivalenceOracle(phi, u)
    recovered = learn_cnf_via_envelope(mo, eo, u)
    assert equivalent(recovered, phi, u)


def test_learn_cnf_via_envelope_horn_degenerate():
    u = universe(2)
    phi = Formula.of(Clause(frozenset([0]), frozenset([1])))
    recovered = learn_cnf_via_envelope(
        FormulaOracle(phi, u), ExactEquivalenceOracle(phi, u), u
    )
    assert equivalent(recovered, phi, u)


def test_learn_cnf_via_envelope_random_targets():
    rng = np.random.default_rng(31)
    for _ in range(15):
        n = int(rng.integers(2, 6))
        u = universe(n)
        phi = random_cnf(rng, n)
        lifted: list[Model] = []
        recovered = learn_cnf_via_envelope(
            FormulaOracle(phi, u), ExactEquivalenceOracle(phi, u), u, lifted_log=lifted
        )
        assert equivalent(recovered, phi, u)
        # every lifted negative counterexample falsifies even the envelope of
        # the encoding, i.e. it is a Horn negative example
        enc = encode_formula(phi, u)
        env_masks = set(envelope_mask_array(enc.combined, enc.extended.combined).tolist())
        enc_masks = set(
            satisfying_mask_array(enc.combined.clauses, 2 * n).tolist()
        )
        for x in lifted:
            if x.mask not in enc_masks:  # negative for the encoded target
                assert x.mask not in env_masks


def test_budget_runs_out_before_identification():
    phi, u = _bc()
    with pytest.raises(RuntimeError):
        learn_cnf_via_envelope(
            FormulaOracle(phi, u), ExactEquivalenceOracle(phi, u), u, eq_budget=1
        )
