"""Canonical query text from an AST.

Deterministic output with all IRIs in absolute ``<...>`` form, suitable for
logging and for round-trip testing: ``parse_query(serialize_query(ast))``
is structurally equal to ``ast``.
"""

from __future__ import annotations

from ..rdf.terms import Term
from .ast import (
    STAR,
    Comparison,
    Constant,
    CountAggregate,
    Expression,
    Filter,
    FunctionCall,
    Logical,
    Not,
    OptionalGroup,
    Query,
    TriplePattern,
    Var,
)


def _component(c) -> str:
    if isinstance(c, Var):
        if c.is_internal:
            return "_:" + c.name[1:]
        return "?" + c.name
    if isinstance(c, Term):
        return c.n3()
    raise TypeError(f"not a pattern component: {c!r}")


def serialize_expression(expr: Expression) -> str:
    if isinstance(expr, Var):
        return _component(expr)
    if isinstance(expr, Constant):
        return expr.term.n3()
    if isinstance(expr, Comparison):
        return f"({serialize_expression(expr.left)} {expr.op} {serialize_expression(expr.right)})"
    if isinstance(expr, Logical):
        return f"({serialize_expression(expr.left)} {expr.op} {serialize_expression(expr.right)})"
    if isinstance(expr, Not):
        return f"(! {serialize_expression(expr.operand)})"
    if isinstance(expr, FunctionCall):
        return f"{expr.name}({', '.join(serialize_expression(a) for a in expr.args)})"
    raise TypeError(f"not an expression: {expr!r}")


def _serialize_elements(elements) -> str:
    parts: list[str] = []
    for el in elements:
        if isinstance(el, TriplePattern):
            parts.append(f"{_component(el.s)} {_component(el.p)} {_component(el.o)} .")
        elif isinstance(el, Filter):
            body = serialize_expression(el.expression)
            if not (body.startswith("(") or isinstance(el.expression, FunctionCall)):
                body = f"({body})"
            parts.append(f"FILTER {body}")
        elif isinstance(el, OptionalGroup):
            parts.append(f"OPTIONAL {{ {_serialize_elements(el.elements)} }}" if el.elements else "OPTIONAL { }")
        else:
            raise TypeError(f"not a group element: {el!r}")
    return " ".join(parts)


def serialize_query(query: Query) -> str:
    parts: list[str] = []
    if query.form == "ask":
        parts.append("ASK")
    else:
        parts.append("SELECT")
        if query.distinct:
            parts.append("DISTINCT")
        if query.projection is STAR or isinstance(query.projection, str):
            parts.append("*")
        else:
            for item in query.projection:
                if isinstance(item, Var):
                    parts.append(_component(item))
                elif isinstance(item, CountAggregate):
                    arg = "*" if item.argument is None else _component(item.argument)
                    if item.alias.is_internal:
                        parts.append(f"COUNT({arg})")
                    else:
                        parts.append(f"(COUNT({arg}) AS {_component(item.alias)})")
    body = _serialize_elements(query.where)
    parts.append("WHERE { " + (body + " " if body else "") + "}")
    if query.group_by is not None:
        parts.append("GROUP BY " + " ".join(_component(v) for v in query.group_by))
    if query.order_by is not None:
        keys = []
        for key in query.order_by:
            keys.append(f"{'ASC' if key.ascending else 'DESC'}({serialize_expression(key.expression)})")
        parts.append("ORDER BY " + " ".join(keys))
    if query.limit is not None:
        parts.append(f"LIMIT {query.limit}")
    if query.offset is not None:
        parts.append(f"OFFSET {query.offset}")
    return " ".join(parts)
