"""AST for the supported SPARQL subset.

Covers SELECT/ASK with DISTINCT, basic graph patterns, FILTER, OPTIONAL,
GROUP BY + COUNT, ORDER BY, LIMIT and OFFSET.  Everything is a frozen value
type so ASTs can be compared structurally (round-trip tests rely on this).
Blank nodes in query patterns are represented as variables whose names start
with ``.``, which no user-written variable can produce.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ..rdf.terms import Term

STAR = "*"


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    @property
    def is_internal(self) -> bool:
        return self.name.startswith(".")


@dataclass(frozen=True, slots=True)
class Constant:
    term: Term


@dataclass(frozen=True, slots=True)
class Comparison:
    op: str  # = != < <= > >=
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True, slots=True)
class Logical:
    op: str  # && ||
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True, slots=True)
class Not:
    operand: "Expression"


@dataclass(frozen=True, slots=True)
class FunctionCall:
    name: str  # BOUND STR LANG DATATYPE REGEX CONTAINS STRSTARTS
    args: tuple["Expression", ...]


Expression = Union[Var, Constant, Comparison, Logical, Not, FunctionCall]


@dataclass(frozen=True, slots=True)
class TriplePattern:
    s: Union[Term, Var]
    p: Union[Term, Var]
    o: Union[Term, Var]

    def components(self):
        return (self.s, self.p, self.o)


@dataclass(frozen=True, slots=True)
class Filter:
    expression: Expression


@dataclass(frozen=True, slots=True)
class OptionalGroup:
    elements: tuple["GroupElement", ...]


GroupElement = Union[TriplePattern, Filter, OptionalGroup]


@dataclass(frozen=True, slots=True)
class CountAggregate:
    """COUNT(?var) or COUNT(*) projected AS an alias variable."""

    argument: Var | None  # None means *
    alias: Var


@dataclass(frozen=True, slots=True)
class OrderKey:
    expression: Expression
    ascending: bool = True


@dataclass(eq=True)
class Query:
    form: str  # "select" | "ask"
    distinct: bool = False
    projection: Union[str, tuple[Union[Var, CountAggregate], ...]] = STAR
    where: tuple[GroupElement, ...] = ()
    group_by: tuple[Var, ...] | None = None
    order_by: tuple[OrderKey, ...] | None = None
    limit: int | None = None
    offset: int | None = None
    # prologue prefixes are kept for reference but do not affect equality:
    # IRIs inside the AST are already absolute.
    prefixes: dict[str, str] = field(default_factory=dict, compare=False)

    @property
    def has_aggregate(self) -> bool:
        return self.projection is not STAR and not isinstance(self.projection, str) and any(
            isinstance(item, CountAggregate) for item in self.projection
        )


def pattern_variables(elements) -> list[Var]:
    """Variables bound by triple patterns, in first-appearance order,
    descending into OPTIONAL groups."""
    seen: list[Var] = []

    def visit(els) -> None:
        for el in els:
            if isinstance(el, TriplePattern):
                for c in el.components():
                    if isinstance(c, Var) and c not in seen:
                        seen.append(c)
            elif isinstance(el, OptionalGroup):
                visit(el.elements)

    visit(elements)
    return seen


def expression_variables(expr: Expression) -> set[Var]:
    if isinstance(expr, Var):
        return {expr}
    if isinstance(expr, Constant):
        return set()
    if isinstance(expr, Comparison) or isinstance(expr, Logical):
        return expression_variables(expr.left) | expression_variables(expr.right)
    if isinstance(expr, Not):
        return expression_variables(expr.operand)
    if isinstance(expr, FunctionCall):
        out: set[Var] = set()
        for a in expr.args:
            out |= expression_variables(a)
        return out
    raise TypeError(f"not an expression: {expr!r}")
