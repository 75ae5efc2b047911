"""Plain-text clause format.

One clause per line, written in implicational form:

    a b -> c d      AND(a, b) -> OR(c, d)
    a b ->          AND(a, b) -> falsum
    -> c            the unit clause c
    # comment       ignored, as is everything after '#'
    vars: a b c d   optional header fixing variable order

Variables are otherwise declared by first use, in reading order.  Meta Horn
clauses are written with '=>' in place of '->' and read the consequent as a
conjunction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .logic import Clause, Formula, MetaClause, Model, VariableUniverse

_NAME = re.compile(r"^[^\s#]+$")


class FormulaParseError(ValueError):
    def __init__(self, message: str, line_no: int | None = None):
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(prefix + message)
        self.line_no = line_no


@dataclass(frozen=True)
class ParsedFormula:
    formula: Formula
    metaclauses: tuple[MetaClause, ...]
    universe: VariableUniverse


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _check_name(token: str, line_no: int) -> str:
    if not _NAME.match(token) or "->" in token or "=>" in token:
        raise FormulaParseError(f"bad variable name {token!r}", line_no)
    return token


def parse_formula_text(text: str) -> ParsedFormula:
    """Parse clause text into a formula plus the universe it mentions.

    '=>' lines are returned both expanded into the formula and separately as
    metaclauses.
    """
    order: list[str] = []
    seen: set[str] = set()
    raw: list[tuple[int, list[str], list[str], bool]] = []

    def declare(name: str) -> None:
        if name not in seen:
            seen.add(name)
            order.append(name)

    for line_no, line in enumerate(text.splitlines(), start=1):
        body = _strip_comment(line)
        if not body:
            continue
        if body.startswith("vars:"):
            for token in body[len("vars:") :].split():
                declare(_check_name(token, line_no))
            continue
        meta = "=>" in body
        arrow = "=>" if meta else "->"
        if arrow not in body:
            raise FormulaParseError("missing '->' (or '=>') separator", line_no)
        left, _, right = body.partition(arrow)
        ant = [_check_name(t, line_no) for t in left.split()]
        con = [_check_name(t, line_no) for t in right.split()]
        for name in ant + con:
            declare(name)
        raw.append((line_no, ant, con, meta))

    if not order:
        raise FormulaParseError("no variables declared (empty formula needs a vars: header)")
    universe = VariableUniverse(tuple(order))

    clauses: list[Clause] = []
    metas: list[MetaClause] = []
    for _, ant, con, meta in raw:
        ant_ix = frozenset(universe.index(n) for n in ant)
        con_ix = frozenset(universe.index(n) for n in con)
        if meta:
            m = MetaClause(ant_ix, con_ix)
            metas.append(m)
            clauses.extend(m.horn_clauses())
        else:
            clauses.append(Clause(ant_ix, con_ix))
    return ParsedFormula(Formula(frozenset(clauses)), tuple(metas), universe)


def load_formula(path: str) -> ParsedFormula:
    with open(path, encoding="utf-8") as fh:
        return parse_formula_text(fh.read())


def _side(indices: frozenset[int], universe: VariableUniverse) -> str:
    return " ".join(universe.names[i] for i in sorted(indices))


def render_clause(c: Clause, universe: VariableUniverse) -> str:
    return f"{_side(c.antecedent, universe)} -> {_side(c.consequent, universe)}".strip()


def render_metaclause(m: MetaClause, universe: VariableUniverse) -> str:
    return f"{_side(m.antecedent, universe)} => {_side(m.consequent, universe)}".strip()


def render_formula(phi: Formula, universe: VariableUniverse, header: bool = True) -> str:
    """Deterministic text form: optional vars header, clauses in sorted order."""
    lines = [f"vars: {' '.join(universe.names)}"] if header else []
    keyed = sorted(
        phi.clauses, key=lambda c: (sorted(c.antecedent), sorted(c.consequent), len(c.consequent))
    )
    lines.extend(render_clause(c, universe) for c in keyed)
    return "\n".join(lines) + "\n"


def render_model(x: Model, universe: VariableUniverse) -> str:
    names = x.names(universe)
    return " ".join(names) if names else "-"


def parse_model_line(line: str, universe: VariableUniverse) -> Model:
    body = _strip_comment(line)
    if body == "-":
        return Model.empty(universe.size)
    return Model.from_names(body.split(), universe)
