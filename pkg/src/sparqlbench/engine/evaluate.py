"""Local SPARQL evaluation over an in-memory Graph.

Semantics of the subset, pinned:

- A group is a sequence of triple patterns, OPTIONALs and FILTERs.  Runs of
  adjacent triple patterns form one BGP solved by backtracking join over
  indexed pattern matching; OPTIONAL is a nested-loop left join at its
  position; FILTERs scope over the whole group and apply at group end.
  Expression errors count as unsatisfied.
- Within a BGP, patterns execute most-bound-first (greedy).  Result rows are
  canonically re-sorted afterwards, so the reorder is observationally
  invisible.
- COUNT yields one row per group (one overall group without GROUP BY, so
  counting zero rows yields the literal 0), counting rows where the argument
  is bound, or all rows for COUNT(*).
- ORDER BY sorts by the pinned total term order (absent < blank < IRI <
  literal, numeric literals by exact value) and sets the table's ordered
  flag; DISTINCT deduplicates; OFFSET/LIMIT apply last.
"""

from __future__ import annotations

import re

from ..rdf.graph import Graph
from ..rdf.terms import (
    RDF_LANGSTRING,
    XSD_BOOLEAN,
    XSD_STRING,
    Term,
    iri,
    literal,
    numeric_value,
    order_key,
    typed_boolean,
    typed_integer,
)
from ..sparql.ast import (
    STAR,
    Comparison,
    Constant,
    CountAggregate,
    Filter,
    FunctionCall,
    Logical,
    Not,
    OptionalGroup,
    Query,
    TriplePattern,
    Var,
    pattern_variables,
)
from .table import SolutionTable, boolean_table

Binding = dict[str, Term]


class EvaluationError(Exception):
    """Internal inconsistency during evaluation; unreachable for valid ASTs."""


class _ExprError(Exception):
    """Expression evaluation error (unbound variable, type mismatch, ...).

    Never escapes: filters treat it as unsatisfied, ORDER BY keys as absent.
    """


# --- basic graph patterns -------------------------------------------------


def _match_one(pattern: TriplePattern, graph: Graph, binding: Binding):
    lookup = []
    for component in pattern.components():
        if isinstance(component, Var):
            lookup.append(binding.get(component.name))
        else:
            lookup.append(component)
    for triple in graph.match(*lookup):
        extended = dict(binding)
        ok = True
        for component, value in zip(pattern.components(), (triple.s, triple.p, triple.o)):
            if isinstance(component, Var):
                existing = extended.get(component.name)
                if existing is None:
                    extended[component.name] = value
                elif existing != value:
                    ok = False
                    break
        if ok:
            yield extended


def _bound_score(pattern: TriplePattern, seen: set[str]) -> int:
    score = 0
    for component in pattern.components():
        if not isinstance(component, Var) or component.name in seen:
            score += 1
    return score


def _eval_bgp(patterns: list[TriplePattern], graph: Graph, solutions: list[Binding]) -> list[Binding]:
    remaining = list(patterns)
    seen: set[str] = set()
    for sol in solutions:
        seen.update(sol.keys())
    while remaining:
        best_index = max(range(len(remaining)), key=lambda i: (_bound_score(remaining[i], seen), -i))
        pattern = remaining.pop(best_index)
        solutions = [ext for sol in solutions for ext in _match_one(pattern, graph, sol)]
        if not solutions:
            return []
        for component in pattern.components():
            if isinstance(component, Var):
                seen.add(component.name)
    return solutions


def _eval_group(elements, graph: Graph, initial: list[Binding]) -> list[Binding]:
    solutions = initial
    filters: list[Filter] = []
    block: list[TriplePattern] = []

    def flush() -> None:
        nonlocal solutions
        if block:
            solutions = _eval_bgp(block, graph, solutions)
            block.clear()

    for el in elements:
        if isinstance(el, TriplePattern):
            block.append(el)
        elif isinstance(el, OptionalGroup):
            flush()
            joined: list[Binding] = []
            for sol in solutions:
                extensions = _eval_group(el.elements, graph, [dict(sol)])
                if extensions:
                    joined.extend(extensions)
                else:
                    joined.append(sol)
            solutions = joined
        elif isinstance(el, Filter):
            filters.append(el)
        else:
            raise EvaluationError(f"unknown group element {el!r}")
    flush()
    for f in filters:
        solutions = [sol for sol in solutions if _truth(f.expression, sol)]
    return solutions


# --- expressions -----------------------------------------------------------


def _truth(expr, binding: Binding) -> bool:
    try:
        return _ebv(_eval_expr(expr, binding))
    except _ExprError:
        return False


def _ebv(term: Term) -> bool:
    if not term.is_literal:
        raise _ExprError("effective boolean value of a non-literal")
    if term.datatype == XSD_BOOLEAN:
        return term.value == "true"
    num = numeric_value(term)
    if num is not None:
        return num != 0
    if term.datatype in (None, XSD_STRING):
        return len(term.value) > 0
    raise _ExprError(f"no effective boolean value for {term.n3()}")


def _stringish(term: Term) -> str:
    if term.is_literal and term.datatype in (None, XSD_STRING, RDF_LANGSTRING):
        return term.value
    raise _ExprError(f"expected a string literal, got {term.n3()}")


def _eval_expr(expr, binding: Binding) -> Term:
    if isinstance(expr, Var):
        value = binding.get(expr.name)
        if value is None:
            raise _ExprError(f"unbound variable ?{expr.name}")
        return value
    if isinstance(expr, Constant):
        return expr.term
    if isinstance(expr, Comparison):
        return typed_boolean(_compare(expr.op, _eval_expr(expr.left, binding), _eval_expr(expr.right, binding)))
    if isinstance(expr, Logical):
        return _eval_logical(expr, binding)
    if isinstance(expr, Not):
        return typed_boolean(not _ebv(_eval_expr(expr.operand, binding)))
    if isinstance(expr, FunctionCall):
        return _eval_function(expr, binding)
    raise EvaluationError(f"unknown expression node {expr!r}")


def _eval_logical(expr: Logical, binding: Binding) -> Term:
    # SPARQL three-valued logic: && is false if either side is false even
    # when the other errors; || is true if either side is true.
    def side(e):
        try:
            return _ebv(_eval_expr(e, binding))
        except _ExprError:
            return None

    left, right = side(expr.left), side(expr.right)
    if expr.op == "&&":
        if left is False or right is False:
            return typed_boolean(False)
        if left is None or right is None:
            raise _ExprError("error operand in &&")
        return typed_boolean(True)
    if left is True or right is True:
        return typed_boolean(True)
    if left is None or right is None:
        raise _ExprError("error operand in ||")
    return typed_boolean(False)


def _values_equal(left: Term, right: Term) -> bool:
    ln, rn = numeric_value(left), numeric_value(right)
    if ln is not None and rn is not None:
        return ln == rn
    return left == right


def _compare(op: str, left: Term, right: Term) -> bool:
    if op == "=":
        return _values_equal(left, right)
    if op == "!=":
        return not _values_equal(left, right)
    ln, rn = numeric_value(left), numeric_value(right)
    if ln is not None and rn is not None:
        lv, rv = ln, rn
    elif left.is_literal and right.is_literal:
        string_types = (None, XSD_STRING)
        if left.datatype in string_types and right.datatype in string_types:
            lv, rv = left.value, right.value
        elif left.datatype == XSD_BOOLEAN and right.datatype == XSD_BOOLEAN:
            lv, rv = left.value == "true", right.value == "true"
        elif left.datatype is not None and left.datatype == right.datatype:
            # same non-numeric datatype (dates etc.): lexical comparison
            lv, rv = left.value, right.value
        else:
            raise _ExprError(f"cannot order {left.n3()} against {right.n3()}")
    else:
        raise _ExprError(f"cannot order {left.n3()} against {right.n3()}")
    if op == "<":
        return lv < rv
    if op == "<=":
        return lv <= rv
    if op == ">":
        return lv > rv
    if op == ">=":
        return lv >= rv
    raise EvaluationError(f"unknown comparison operator {op}")


_REGEX_FLAGS = {"i": re.IGNORECASE, "s": re.DOTALL, "m": re.MULTILINE, "x": re.VERBOSE}


def _eval_function(expr: FunctionCall, binding: Binding) -> Term:
    name = expr.name
    if name == "BOUND":
        var = expr.args[0]
        return typed_boolean(isinstance(var, Var) and var.name in binding)
    args = [_eval_expr(a, binding) for a in expr.args]
    if name == "STR":
        t = args[0]
        if t.is_iri:
            return literal(t.value)
        if t.is_literal:
            return literal(t.value)
        raise _ExprError("STR of a blank node")
    if name == "LANG":
        t = args[0]
        if not t.is_literal:
            raise _ExprError("LANG of a non-literal")
        return literal(t.lang or "")
    if name == "DATATYPE":
        t = args[0]
        if not t.is_literal:
            raise _ExprError("DATATYPE of a non-literal")
        if t.lang is not None:
            return iri(RDF_LANGSTRING)
        return iri(t.datatype or XSD_STRING)
    if name == "REGEX":
        text = _stringish(args[0])
        pattern = _stringish(args[1])
        flags = 0
        if len(args) == 3:
            for ch in _stringish(args[2]):
                if ch not in _REGEX_FLAGS:
                    raise _ExprError(f"unsupported REGEX flag {ch!r}")
                flags |= _REGEX_FLAGS[ch]
        try:
            return typed_boolean(re.search(pattern, text, flags) is not None)
        except re.error as exc:
            raise _ExprError(f"invalid regular expression: {exc}")
    if name == "CONTAINS":
        return typed_boolean(_stringish(args[1]) in _stringish(args[0]))
    if name == "STRSTARTS":
        return typed_boolean(_stringish(args[0]).startswith(_stringish(args[1])))
    raise EvaluationError(f"unknown function {name}")


# --- pipeline ---------------------------------------------------------------


def _canonical_solution_key(variables: list[str]):
    def key(sol: Binding):
        return tuple("" if sol.get(v) is None else sol[v].n3() for v in variables)

    return key


def _aggregate(query: Query, solutions: list[Binding]) -> list[Binding]:
    group_vars = [v.name for v in (query.group_by or ())]
    groups: dict[tuple, list[Binding]] = {}
    if group_vars:
        for sol in solutions:
            key = tuple("" if sol.get(v) is None else sol[v].n3() for v in group_vars)
            groups.setdefault(key, []).append(sol)
    else:
        groups[()] = list(solutions)
    aggregated: list[Binding] = []
    for key in sorted(groups):
        members = groups[key]
        out: Binding = {}
        for v in group_vars:
            for sol in members:
                if v in sol:
                    out[v] = sol[v]
                    break
        for item in query.projection if query.projection is not STAR and not isinstance(query.projection, str) else ():
            if isinstance(item, CountAggregate):
                if item.argument is None:
                    count = len(members)
                else:
                    count = sum(1 for sol in members if item.argument.name in sol)
                out[item.alias.name] = typed_integer(count)
        aggregated.append(out)
    return aggregated


def _header_for(query: Query, solutions: list[Binding]) -> list[str]:
    if query.projection is STAR or isinstance(query.projection, str):
        return [v.name for v in pattern_variables(query.where) if not v.is_internal]
    names = []
    for item in query.projection:
        names.append(item.name if isinstance(item, Var) else item.alias.name)
    return names


def evaluate_local(query: Query, graph: Graph) -> SolutionTable:
    solutions = _eval_group(query.where, graph, [{}])
    if query.form == "ask":
        return boolean_table(bool(solutions))

    if query.has_aggregate or query.group_by is not None:
        solutions = _aggregate(query, solutions)

    all_vars = sorted({name for sol in solutions for name in sol})
    solutions.sort(key=_canonical_solution_key(all_vars))

    if query.order_by is not None:
        def order_keys(sol: Binding):
            keys = []
            for ok in query.order_by:
                try:
                    value = _eval_expr(ok.expression, sol)
                except _ExprError:
                    value = None
                k = order_key(value)
                keys.append(k if ok.ascending else _Reversed(k))
            return tuple(keys)

        solutions.sort(key=order_keys)

    header = _header_for(query, solutions)
    rows = [tuple(sol.get(name) for name in header) for sol in solutions]

    if query.distinct:
        seen: set[tuple] = set()
        unique = []
        for row in rows:
            key = tuple("" if c is None else c.n3() for c in row)
            if key not in seen:
                seen.add(key)
                unique.append(row)
        rows = unique

    if query.offset is not None:
        rows = rows[query.offset :]
    if query.limit is not None:
        rows = rows[: query.limit]

    return SolutionTable(kind="bindings", header=header, rows=rows, ordered=query.order_by is not None)


class _Reversed:
    """Inverts comparison for descending ORDER BY keys."""

    __slots__ = ("key",)

    def __init__(self, key):
        self.key = key

    def __lt__(self, other: "_Reversed") -> bool:
        return other.key < self.key

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _Reversed) and self.key == other.key
