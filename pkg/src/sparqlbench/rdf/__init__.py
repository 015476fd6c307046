from .graph import Graph
from .terms import Term, Triple, blank, iri, literal
from .turtle import (
    InvalidIriError,
    TurtleParseError,
    UndefinedPrefixError,
    load_graph,
    parse_turtle,
    serialize_graph,
)

__all__ = [
    "Graph",
    "Term",
    "Triple",
    "blank",
    "iri",
    "literal",
    "parse_turtle",
    "serialize_graph",
    "load_graph",
    "TurtleParseError",
    "UndefinedPrefixError",
    "InvalidIriError",
]
