"""SPARQL 1.1 Query Results JSON Format reader."""

from __future__ import annotations

import json

from ..rdf.terms import Term, blank, iri, literal
from .table import SolutionTable, boolean_table


class MalformedResults(Exception):
    """Results document violates the JSON results format.

    ``path`` points at the first offending element, e.g.
    ``results.bindings[3].x.type``.
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.reason = message


def _require(condition: bool, path: str, message: str) -> None:
    if not condition:
        raise MalformedResults(path, message)


def _binding_term(obj, path: str) -> Term:
    _require(isinstance(obj, dict), path, "binding must be an object")
    kind = obj.get("type")
    _require(isinstance(kind, str), path + ".type", "missing or non-string type")
    value = obj.get("value")
    _require(isinstance(value, str), path + ".value", "missing or non-string value")
    if kind == "uri":
        return iri(value)
    if kind == "bnode":
        return blank(value)
    if kind in ("literal", "typed-literal"):
        lang = obj.get("xml:lang")
        datatype = obj.get("datatype")
        _require(lang is None or isinstance(lang, str), path + ".xml:lang", "language tag must be a string")
        _require(datatype is None or isinstance(datatype, str), path + ".datatype", "datatype must be a string")
        if lang is not None:
            return literal(value, lang=lang)
        return literal(value, datatype=datatype)
    raise MalformedResults(path + ".type", f"unknown binding type {kind!r}")


def parse_results_json(doc: bytes | str) -> SolutionTable:
    try:
        parsed = json.loads(doc)
    except json.JSONDecodeError as exc:
        raise MalformedResults("$", f"not valid JSON: {exc}") from exc
    _require(isinstance(parsed, dict), "$", "document must be a JSON object")

    if "boolean" in parsed:
        _require(isinstance(parsed["boolean"], bool), "boolean", "must be true or false")
        return boolean_table(parsed["boolean"])

    head = parsed.get("head")
    _require(isinstance(head, dict), "head", "missing head object")
    variables = head.get("vars")
    _require(isinstance(variables, list), "head.vars", "missing vars list")
    for i, v in enumerate(variables):
        _require(isinstance(v, str), f"head.vars[{i}]", "variable name must be a string")

    results = parsed.get("results")
    _require(isinstance(results, dict), "results", "missing results object")
    bindings = results.get("bindings")
    _require(isinstance(bindings, list), "results.bindings", "missing bindings list")

    rows: list[tuple[Term | None, ...]] = []
    for i, binding in enumerate(bindings):
        path = f"results.bindings[{i}]"
        _require(isinstance(binding, dict), path, "binding row must be an object")
        row = []
        for name in variables:
            cell = binding.get(name)
            row.append(None if cell is None else _binding_term(cell, f"{path}.{name}"))
        rows.append(tuple(row))
    return SolutionTable(kind="bindings", header=list(variables), rows=rows)
