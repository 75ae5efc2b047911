"""Propositional core: variable universes, models as fixed-width bit vectors,
clauses in implicational form, meta Horn clauses, and intersection closure.

A model is a subset of the variable universe, stored as an integer bit mask.
Variable 0 occupies the most significant bit, so ascending mask order is
lexicographic order on the bit string (b0, b1, ..., b_{n-1}).  All types are
immutable values; every operation here is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np


class WidthMismatchError(ValueError):
    """Models or clauses from universes of different sizes were mixed."""


@dataclass(frozen=True)
class VariableUniverse:
    """Ordered collection of distinct variable names; order fixes bit positions."""

    names: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "names", tuple(self.names))
        if not self.names:
            raise ValueError("a universe needs at least one variable")
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be unique")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    @property
    def size(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]  # type: ignore[attr-defined]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index  # type: ignore[attr-defined]

    def __len__(self) -> int:
        return len(self.names)


def indices_to_mask(indices: Iterable[int], width: int) -> int:
    """Bit mask for a set of variable indices (variable 0 is the MSB)."""
    mask = 0
    for i in indices:
        if not 0 <= i < width:
            raise WidthMismatchError(f"variable index {i} outside universe of size {width}")
        mask |= 1 << (width - 1 - i)
    return mask


def mask_to_indices(mask: int, width: int) -> frozenset[int]:
    return frozenset(i for i in range(width) if mask >> (width - 1 - i) & 1)


@dataclass(frozen=True, eq=True)
class Model:
    """A subset of the universe as a fixed-width bit vector."""

    mask: int
    width: int

    def __post_init__(self) -> None:
        if self.mask < 0 or self.mask >> self.width:
            raise ValueError(f"mask {self.mask:#x} does not fit in width {self.width}")

    @classmethod
    def empty(cls, width: int) -> "Model":
        return cls(0, width)

    @classmethod
    def full(cls, width: int) -> "Model":
        return cls((1 << width) - 1, width)

    @classmethod
    def from_indices(cls, indices: Iterable[int], width: int) -> "Model":
        return cls(indices_to_mask(indices, width), width)

    @classmethod
    def from_names(cls, names: Iterable[str], universe: VariableUniverse) -> "Model":
        return cls.from_indices((universe.index(n) for n in names), universe.size)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "Model":
        bits = tuple(bits)
        mask = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"bit values must be 0 or 1, got {b!r}")
            mask = mask << 1 | b
        return cls(mask, len(bits))

    def has(self, index: int) -> bool:
        if not 0 <= index < self.width:
            raise WidthMismatchError(f"variable index {index} outside width {self.width}")
        return bool(self.mask >> (self.width - 1 - index) & 1)

    def bits(self) -> tuple[int, ...]:
        return tuple(self.mask >> (self.width - 1 - i) & 1 for i in range(self.width))

    def indices(self) -> frozenset[int]:
        return mask_to_indices(self.mask, self.width)

    def names(self, universe: VariableUniverse) -> tuple[str, ...]:
        if universe.size != self.width:
            raise WidthMismatchError("universe size differs from model width")
        return tuple(universe.names[i] for i in sorted(self.indices()))

    def size(self) -> int:
        return self.mask.bit_count()

    def is_subset_of(self, other: "Model") -> bool:
        _require_same_width(self, other)
        return self.mask & other.mask == self.mask

    def is_strict_subset_of(self, other: "Model") -> bool:
        return self.is_subset_of(other) and self.mask != other.mask

    def __repr__(self) -> str:
        return f"Model({''.join(map(str, self.bits()))})"


def _require_same_width(x: Model, y: Model) -> None:
    if x.width != y.width:
        raise WidthMismatchError(f"model widths differ: {x.width} vs {y.width}")


def intersect(x: Model, y: Model) -> Model:
    """Bitwise intersection of two models of the same width."""
    _require_same_width(x, y)
    return Model(x.mask & y.mask, x.width)


@dataclass(frozen=True)
class Clause:
    """Implicational clause  AND(antecedent) -> OR(consequent).

    An empty consequent is the empty disjunction, i.e. falsum.
    """

    antecedent: frozenset[int]
    consequent: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "antecedent", frozenset(self.antecedent))
        object.__setattr__(self, "consequent", frozenset(self.consequent))

    @property
    def is_horn(self) -> bool:
        return len(self.consequent) <= 1

    @property
    def is_negative(self) -> bool:
        return not self.consequent

    def masks(self, width: int) -> tuple[int, int]:
        return indices_to_mask(self.antecedent, width), indices_to_mask(self.consequent, width)


@dataclass(frozen=True)
class MetaClause:
    """Meta Horn clause  AND(antecedent) -> AND(consequent).

    An empty consequent denotes falsum.  (The make_horn construction can also
    produce an empty consequent as a transient "this example is provably
    non-Horn" signal; the learner promotes such examples before any hypothesis
    is rebuilt, so falsum is the only meaning a stored metaclause ever has.)
    """

    antecedent: frozenset[int]
    consequent: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "antecedent", frozenset(self.antecedent))
        object.__setattr__(self, "consequent", frozenset(self.consequent))

    @property
    def is_negative(self) -> bool:
        return not self.consequent

    def horn_clauses(self) -> tuple[Clause, ...]:
        """Expansion into plain Horn clauses (one per consequent variable)."""
        if self.is_negative:
            return (Clause(self.antecedent, frozenset()),)
        return tuple(Clause(self.antecedent, frozenset([q])) for q in sorted(self.consequent))

    def masks(self, width: int) -> tuple[int, int]:
        return indices_to_mask(self.antecedent, width), indices_to_mask(self.consequent, width)


def eval_clause(x: Model, c: Clause) -> bool:
    """True unless the antecedent is covered and no consequent variable holds."""
    ant, con = c.masks(x.width)
    return not (x.mask & ant == ant and x.mask & con == 0)


def eval_metaclause(x: Model, m: MetaClause) -> bool:
    """True unless the antecedent is covered and the consequent is not contained.

    Satisfaction is the negation of the falsification condition, so that the
    two partition the model space; a negative metaclause is falsified exactly
    when its antecedent is covered.
    """
    ant, con = m.masks(x.width)
    if x.mask & ant != ant:
        return True
    if con == 0:
        return False
    return x.mask & con == con


def eval_hypothesis(x: Model, horn: Iterable[MetaClause], quasi: Iterable[Clause]) -> bool:
    """Conjunction of a meta Horn set and a set of quasi clauses."""
    return all(eval_metaclause(x, m) for m in horn) and all(eval_clause(x, c) for c in quasi)


@dataclass(frozen=True)
class Hypothesis:
    """Learner hypothesis: a meta Horn set H and a quasi clause set Q."""

    horn: tuple[MetaClause, ...] = ()
    quasi: tuple[Clause, ...] = ()

    def evaluate(self, x: Model) -> bool:
        return eval_hypothesis(x, self.horn, self.quasi)

    def clauses(self) -> tuple[Clause, ...]:
        """Expansion of H union Q into plain clauses."""
        out: list[Clause] = []
        for m in self.horn:
            out.extend(m.horn_clauses())
        out.extend(self.quasi)
        return tuple(out)

    def compile(self, width: int) -> "CompiledHypothesis":
        return CompiledHypothesis(
            tuple(m.masks(width) for m in self.horn),
            tuple(c.masks(width) for c in self.quasi),
        )


@dataclass(frozen=True)
class CompiledHypothesis:
    """Mask form of a hypothesis for inner-loop evaluation."""

    horn_masks: tuple[tuple[int, int], ...]
    quasi_masks: tuple[tuple[int, int], ...]

    def evaluate_mask(self, mask: int) -> bool:
        for ant, con in self.horn_masks:
            if mask & ant == ant and (con == 0 or mask & con != con):
                return False
        for ant, con in self.quasi_masks:
            if mask & ant == ant and mask & con == 0:
                return False
        return True


@dataclass(frozen=True)
class Formula:
    """A CNF: a set of clauses in implicational form."""

    clauses: frozenset[Clause]

    def __post_init__(self) -> None:
        object.__setattr__(self, "clauses", frozenset(self.clauses))

    @classmethod
    def of(cls, *clauses: Clause) -> "Formula":
        return cls(frozenset(clauses))

    @classmethod
    def from_metaclauses(cls, metaclauses: Iterable[MetaClause]) -> "Formula":
        out: list[Clause] = []
        for m in metaclauses:
            out.extend(m.horn_clauses())
        return cls(frozenset(out))

    @property
    def kind(self) -> str:
        return "horn" if all(c.is_horn for c in self.clauses) else "general-cnf"

    @property
    def is_horn(self) -> bool:
        return self.kind == "horn"

    def __len__(self) -> int:
        return len(self.clauses)

    def evaluate(self, x: Model) -> bool:
        return all(eval_clause(x, c) for c in self.clauses)


class ModelSet:
    """Deduplicated collection of same-width models, iterated in lexicographic
    bit order."""

    __slots__ = ("members", "width")

    def __init__(self, models: Iterable[Model] = ()):
        members = frozenset(models)
        widths = {m.width for m in members}
        if len(widths) > 1:
            raise WidthMismatchError(f"mixed model widths: {sorted(widths)}")
        self.members: frozenset[Model] = members
        self.width: int | None = widths.pop() if widths else None

    def __iter__(self) -> Iterator[Model]:
        return iter(sorted(self.members, key=lambda m: m.mask))

    def __contains__(self, x: Model) -> bool:
        return x in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ModelSet) and self.members == other.members

    def __hash__(self) -> int:
        return hash(self.members)

    def __repr__(self) -> str:
        return f"ModelSet({sorted(m.mask for m in self.members)}, width={self.width})"

    def masks(self) -> np.ndarray:
        return np.fromiter((m.mask for m in self), dtype=np.int64, count=len(self.members))


def closure_of_masks(masks: np.ndarray) -> np.ndarray:
    """Closure of a sorted-unique int64 mask array under pairwise AND."""
    acc = np.unique(masks)
    frontier = acc
    while frontier.size:
        # chunk the outer product to bound memory on large inputs
        step = max(1, (1 << 22) // max(acc.size, 1))
        pieces = [
            np.bitwise_and.outer(frontier[i : i + step], acc).ravel()
            for i in range(0, frontier.size, step)
        ]
        products = np.unique(np.concatenate(pieces))
        new = products[~np.isin(products, acc)]
        if not new.size:
            break
        acc = np.union1d(acc, new)
        frontier = new
    return acc


def closure(M: ModelSet) -> ModelSet:
    """Least superset of M closed under pairwise intersection."""
    if not len(M):
        return ModelSet()
    width = M.width
    assert width is not None
    closed = closure_of_masks(M.masks())
    return ModelSet(Model(int(v), width) for v in closed)


def is_intersection_closed(M: ModelSet) -> bool:
    return closure(M) == M


def make_horn(e_pos: Iterable[Model], x: Model) -> MetaClause:
    """Strongest meta Horn clause falsified on x yet consistent with the
    positive examples: AND(x) -> falsum when no positive example strictly
    contains x, else AND(x) -> AND(intersection of those examples, minus x).
    """
    sup_masks = [e.mask for e in e_pos if x.mask & e.mask == x.mask and e.mask != x.mask]
    if not sup_masks:
        return MetaClause(x.indices(), frozenset())
    inter = sup_masks[0]
    for m in sup_masks[1:]:
        inter &= m
    return MetaClause(x.indices(), mask_to_indices(inter & ~x.mask, x.width))


def make_quasi(x: Model) -> Clause:
    """Weakest non-Horn clause falsified on x alone: AND(x) -> OR(complement)."""
    complement = ~x.mask & ((1 << x.width) - 1)
    return Clause(x.indices(), mask_to_indices(complement, x.width))
