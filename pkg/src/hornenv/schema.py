"""Attribute schemas: discrete attributes one-hot encoded into Boolean blocks.

Each (attribute, value) pair becomes one Boolean variable, in declaration
order.  Within a block at most one variable may be set; a block of all zeros
means the attribute value is unknown and is only legal when the attribute
allows it.  A schema may designate one attribute as the label block (for the
bias-probing setup this is the gender block); label blocks never allow the
unknown value, so sampled models always carry exactly one label bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .logic import Model, VariableUniverse


@dataclass(frozen=True)
class Attribute:
    name: str
    values: tuple[str, ...]
    allow_unknown: bool = True
    label: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values:
            raise ValueError(f"attribute {self.name!r} has no values")
        if self.label and self.allow_unknown:
            raise ValueError(f"label attribute {self.name!r} must not allow unknown")


@dataclass(frozen=True)
class Block:
    """Index geometry of one attribute inside the derived universe."""

    attribute: Attribute
    start: int

    @property
    def size(self) -> int:
        return len(self.attribute.values)

    @property
    def stop(self) -> int:
        return self.start + self.size

    def indices(self) -> range:
        return range(self.start, self.stop)


@dataclass(frozen=True)
class AttributeSchema:
    attributes: tuple[Attribute, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "attributes", tuple(self.attributes))
        if not self.attributes:
            raise ValueError("schema needs at least one attribute")
        names = [v for a in self.attributes for v in a.values]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate (attribute, value) names: {dupes}")
        if sum(1 for a in self.attributes if a.label) > 1:
            raise ValueError("at most one label attribute is allowed")

    def blocks(self) -> tuple[Block, ...]:
        out, pos = [], 0
        for a in self.attributes:
            out.append(Block(a, pos))
            pos += len(a.values)
        return tuple(out)

    @property
    def label_block(self) -> Block | None:
        for b in self.blocks():
            if b.attribute.label:
                return b
        return None

    def universe(self) -> VariableUniverse:
        return VariableUniverse(tuple(v for a in self.attributes for v in a.values))

    def validate_model(self, x: Model) -> None:
        """Reject models with two bits in one block or a missing label bit."""
        universe = self.universe()
        if x.width != universe.size:
            raise ValueError(f"model width {x.width} differs from schema size {universe.size}")
        for b in self.blocks():
            count = sum(1 for i in b.indices() if x.has(i))
            if count > 1:
                raise ValueError(f"attribute {b.attribute.name!r} has {count} bits set")
            if count == 0 and not b.attribute.allow_unknown:
                raise ValueError(f"attribute {b.attribute.name!r} requires exactly one bit")

    @classmethod
    def from_dict(cls, data: dict) -> "AttributeSchema":
        attrs = []
        for entry in data["attributes"]:
            attrs.append(
                Attribute(
                    name=entry["name"],
                    values=tuple(entry["values"]),
                    allow_unknown=bool(entry.get("allow_unknown", True)),
                    label=bool(entry.get("label", False)),
                )
            )
        return cls(tuple(attrs))

    def to_dict(self) -> dict:
        return {
            "attributes": [
                {
                    "name": a.name,
                    "values": list(a.values),
                    "allow_unknown": a.allow_unknown,
                    "label": a.label,
                }
                for a in self.attributes
            ]
        }


def schema_to_universe(schema: AttributeSchema) -> VariableUniverse:
    return schema.universe()


def load_schema(path: str) -> AttributeSchema:
    with open(path, encoding="utf-8") as fh:
        return AttributeSchema.from_dict(json.load(fh))


def default_schema() -> AttributeSchema:
    """The 26-variable period/continent/occupation/gender probing schema."""
    text = resources.files("hornenv.data").joinpath("default_schema.json").read_text("utf-8")
    return AttributeSchema.from_dict(json.loads(text))
