"""Query-parsing error taxonomy.

The three-way split matters downstream: benchmark outcomes distinguish text
that is not SPARQL at all (ParseError), recognized SPARQL outside the
supported subset (UnsupportedFeature), and prefixed names nobody declared
(UnknownPrefix).  Every input string yields exactly one of {AST, ParseError,
UnsupportedFeature, UnknownPrefix}.
"""

from __future__ import annotations


class SparqlError(Exception):
    """Base for all query-text errors."""


class ParseError(SparqlError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.reason = message
        self.line = line
        self.column = column


class ProjectionUnbound(ParseError):
    """A projected variable does not occur anywhere in the WHERE clause.

    Standard SPARQL tolerates this; the harness rejects it by default
    (``strict_projection``) so queries that project a variable they never
    bind are classified deterministically at parse time.
    """

    def __init__(self, variable: str, line: int = 0, column: int = 0):
        super().__init__(f"projected variable ?{variable} is not bound in the WHERE clause", line, column)
        self.variable = variable


class UnsupportedFeature(SparqlError):
    def __init__(self, construct: str):
        super().__init__(f"unsupported SPARQL construct: {construct}")
        self.construct = construct


class UnknownPrefix(SparqlError):
    def __init__(self, prefix: str):
        super().__init__(f"unknown prefix: {prefix!r}")
        self.prefix = prefix
