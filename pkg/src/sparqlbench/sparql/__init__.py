from .ast import (
    STAR,
    Comparison,
    Constant,
    CountAggregate,
    Filter,
    FunctionCall,
    Logical,
    Not,
    OptionalGroup,
    OrderKey,
    Query,
    TriplePattern,
    Var,
)
from .errors import ParseError, ProjectionUnbound, SparqlError, UnknownPrefix, UnsupportedFeature
from .parser import parse_query
from .serializer import serialize_query

__all__ = [
    "parse_query",
    "serialize_query",
    "Query",
    "Var",
    "TriplePattern",
    "Filter",
    "OptionalGroup",
    "CountAggregate",
    "OrderKey",
    "Constant",
    "Comparison",
    "Logical",
    "Not",
    "FunctionCall",
    "STAR",
    "SparqlError",
    "ParseError",
    "ProjectionUnbound",
    "UnsupportedFeature",
    "UnknownPrefix",
]
