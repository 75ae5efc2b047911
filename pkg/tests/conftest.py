from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hornenv.logic import Clause, Formula, Model, VariableUniverse


@pytest.fixture
def abcd() -> VariableUniverse:
    return VariableUniverse(("a", "b", "c", "d"))


@pytest.fixture
def appendix_target(abcd) -> Formula:
    """The running non-Horn example: a -> falsum, together with b or c."""
    return Formula.of(
        Clause(frozenset([0]), frozenset()),
        Clause(frozenset(), frozenset([1, 2])),
    )


def model(universe: VariableUniverse, *names: str) -> Model:
    return Model.from_names(names, universe)
