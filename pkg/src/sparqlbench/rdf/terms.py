"""RDF term and triple data model.

Terms are immutable values with exact equality: same variant, same
components, lexical forms compared code-point-wise.  Language-tagged
literals implicitly carry the rdf:langString datatype.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

XSD = "http://www.w3.org/2001/XMLSchema#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"

XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_FLOAT = XSD + "float"
XSD_DOUBLE = XSD + "double"
XSD_BOOLEAN = XSD + "boolean"
RDF_LANGSTRING = RDF + "langString"
RDF_TYPE = RDF + "type"

NUMERIC_DATATYPES = frozenset({XSD_INTEGER, XSD_DECIMAL, XSD_FLOAT, XSD_DOUBLE})

_ABSOLUTE_IRI_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")


def is_absolute_iri(iri: str) -> bool:
    return bool(_ABSOLUTE_IRI_RE.match(iri))


@dataclass(frozen=True, slots=True)
class Term:
    """One RDF term: an IRI, a blank node, or a literal.

    ``value`` holds the IRI string, the blank node label, or the literal's
    lexical form depending on ``kind``.
    """

    kind: str  # "iri" | "blank" | "literal"
    value: str
    datatype: str | None = None
    lang: str | None = None

    @property
    def is_iri(self) -> bool:
        return self.kind == "iri"

    @property
    def is_blank(self) -> bool:
        return self.kind == "blank"

    @property
    def is_literal(self) -> bool:
        return self.kind == "literal"

    def n3(self) -> str:
        """Canonical single-line serialization (N-Triples style)."""
        if self.kind == "iri":
            return f"<{self.value}>"
        if self.kind == "blank":
            return f"_:{self.value}"
        body = f'"{escape_string(self.value)}"'
        if self.lang is not None:
            return f"{body}@{self.lang}"
        if self.datatype is not None:
            return f"{body}^^<{self.datatype}>"
        return body

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Term({self.n3()})"


def iri(value: str) -> Term:
    return Term("iri", value)


def blank(label: str) -> Term:
    return Term("blank", label)


def literal(lexical: str, datatype: str | None = None, lang: str | None = None) -> Term:
    if datatype is not None and lang is not None:
        raise ValueError("literal cannot carry both a datatype and a language tag")
    if lang is not None:
        # Language-tagged literals are implicitly rdf:langString.
        return Term("literal", lexical, RDF_LANGSTRING, lang)
    return Term("literal", lexical, datatype, None)


def typed_boolean(value: bool) -> Term:
    return literal("true" if value else "false", XSD_BOOLEAN)


def typed_integer(value: int) -> Term:
    return literal(str(value), XSD_INTEGER)


def escape_string(s: str) -> str:
    out = []
    for ch in s:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        else:
            out.append(ch)
    return "".join(out)


def numeric_value(term: Term) -> Fraction | None:
    """Exact numeric value of a literal, or None if it is not numeric.

    Only xsd:integer/decimal/float/double literals with a finite lexical
    form count as numeric; NaN and infinities fall back to lexical order.
    """
    if not term.is_literal or term.datatype not in NUMERIC_DATATYPES:
        return None
    lex = term.value.strip()
    try:
        if term.datatype in (XSD_FLOAT, XSD_DOUBLE):
            f = float(lex)
            if f != f or f in (float("inf"), float("-inf")):
                return None
            return Fraction(f)
        return Fraction(lex)
    except (ValueError, ZeroDivisionError):
        return None


_ZERO = Fraction(0)


def order_key(term: Term | None):
    """Sort key realizing the pinned total term order.

    absent < blank < IRI (code point) < literal.  Numeric literals sort as
    one block by exact value ahead of all other literals; non-numeric
    literals sort by (datatype IRI, lexical form, language tag).
    """
    if term is None:
        return (0, "", 0, _ZERO, "", "")
    if term.kind == "blank":
        return (1, term.value, 0, _ZERO, "", "")
    if term.kind == "iri":
        return (2, term.value, 0, _ZERO, "", "")
    num = numeric_value(term)
    if num is not None:
        return (3, "", 0, num, term.datatype or "", term.value)
    return (3, "", 1, _ZERO, term.datatype or "", term.value + "\x00" + (term.lang or ""))


@dataclass(frozen=True, slots=True)
class Triple:
    s: Term
    p: Term
    o: Term

    def __post_init__(self) -> None:
        if self.s.is_literal:
            raise ValueError(f"triple subject cannot be a literal: {self.s.n3()}")
        if not self.p.is_iri:
            raise ValueError(f"triple predicate must be an IRI: {self.p.n3()}")

    def n3(self) -> str:
        return f"{self.s.n3()} {self.p.n3()} {self.o.n3()} ."

    def sort_key(self):
        return (self.s.n3(), self.p.n3(), self.o.n3())
