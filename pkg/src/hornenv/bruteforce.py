"""Enumeration-based reference computations: model sets, entailment,
consequence closure, saturation, and the Horn envelope.

These are verification oracles, not solvers.  Every operation that enumerates
the full model space refuses universes above a hard cap instead of silently
grinding for hours.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .logic import (
    Clause,
    Formula,
    MetaClause,
    Model,
    ModelSet,
    VariableUniverse,
    closure,
    closure_of_masks,
    eval_metaclause,
    indices_to_mask,
    mask_to_indices,
)

BRUTE_FORCE_CAP = 20


class BruteForceCapExceeded(ValueError):
    """The universe is too large for exhaustive enumeration."""


def _require_within_cap(universe: VariableUniverse, cap: int) -> None:
    if universe.size > cap:
        raise BruteForceCapExceeded(
            f"universe of size {universe.size} exceeds the brute-force cap {cap}"
        )


def satisfying_mask_array(clauses: Iterable[Clause], width: int) -> np.ndarray:
    """Sorted masks of all models over `width` variables satisfying every clause."""
    masks = np.arange(1 << width, dtype=np.int64)
    sat = np.ones(masks.shape, dtype=bool)
    for c in clauses:
        ant, con = c.masks(width)
        sat &= ~(((masks & ant) == ant) & ((masks & con) == 0))
    return masks[sat]


def models_of(phi: Formula, universe: VariableUniverse, cap: int = BRUTE_FORCE_CAP) -> ModelSet:
    """All models of phi by exhaustive enumeration of the universe."""
    _require_within_cap(universe, cap)
    n = universe.size
    return ModelSet(Model(int(m), n) for m in satisfying_mask_array(phi.clauses, n))


def entails(
    phi: Formula, psi: Formula, universe: VariableUniverse, cap: int = BRUTE_FORCE_CAP
) -> bool:
    """phi entails psi iff every model of phi is a model of psi."""
    _require_within_cap(universe, cap)
    n = universe.size
    masks = np.arange(1 << n, dtype=np.int64)
    sat_phi = np.ones(masks.shape, dtype=bool)
    for c in phi.clauses:
        ant, con = c.masks(n)
        sat_phi &= ~(((masks & ant) == ant) & ((masks & con) == 0))
    for c in psi.clauses:
        ant, con = c.masks(n)
        falsified = ((masks & ant) == ant) & ((masks & con) == 0)
        if bool((sat_phi & falsified).any()):
            return False
    return True


def equivalent(
    phi: Formula, psi: Formula, universe: VariableUniverse, cap: int = BRUTE_FORCE_CAP
) -> bool:
    return entails(phi, psi, universe, cap) and entails(psi, phi, universe, cap)


def consequence_closure(
    phi: Formula, x: Model, universe: VariableUniverse, cap: int = BRUTE_FORCE_CAP
) -> frozenset[int]:
    """Variables outside x that phi forces whenever all of x holds.

    When no model of phi contains x the entailments hold vacuously and every
    variable outside x is returned.
    """
    _require_within_cap(universe, cap)
    n = universe.size
    if x.width != n:
        raise ValueError("model width differs from universe size")
    sat = satisfying_mask_array(phi.clauses, n)
    sup = sat[(sat & x.mask) == x.mask]
    everything = (1 << n) - 1
    forced = everything if sup.size == 0 else int(np.bitwise_and.reduce(sup))
    return mask_to_indices(forced & ~x.mask, n)


def is_saturated(
    metaclauses: Iterable[MetaClause], universe: VariableUniverse, cap: int = BRUTE_FORCE_CAP
) -> bool:
    """Left- and right-saturation of a meta Horn set.

    Left: each antecedent, read as a model, falsifies its own metaclause and
    satisfies every other one.  Right: a consequent is falsum exactly when the
    antecedent is inconsistent with the set, and otherwise equals the full
    consequence closure of the antecedent.
    """
    _require_within_cap(universe, cap)
    H = list(metaclauses)
    if not H:
        return True
    n = universe.size
    for i, h in enumerate(H):
        ant_model = Model.from_indices(h.antecedent, n)
        if eval_metaclause(ant_model, h):
            return False
        for j, other in enumerate(H):
            if i != j and not eval_metaclause(ant_model, other):
                return False
    as_formula = Formula.from_metaclauses(H)
    sat = satisfying_mask_array(as_formula.clauses, n)
    for h in H:
        ant = indices_to_mask(h.antecedent, n)
        sup = sat[(sat & ant) == ant]
        if sup.size == 0:
            if h.consequent:
                return False
        else:
            forced = int(np.bitwise_and.reduce(sup))
            if h.consequent != mask_to_indices(forced & ~ant, n):
                return False
    return True


def envelope_bruteforce(
    phi: Formula, universe: VariableUniverse, cap: int = BRUTE_FORCE_CAP
) -> ModelSet:
    """Model set of the Horn envelope: the intersection closure of mod(phi)."""
    return closure(models_of(phi, universe, cap))


def envelope_mask_array(
    phi: Formula, universe: VariableUniverse, cap: int = BRUTE_FORCE_CAP
) -> np.ndarray:
    _require_within_cap(universe, cap)
    return closure_of_masks(satisfying_mask_array(phi.clauses, universe.size))
