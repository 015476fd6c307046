from .evaluate import EvaluationError, evaluate_local
from .remote import (
    Backend,
    BackendError,
    HttpStatusError,
    LocalBackend,
    RemoteBackend,
    RequestTimeout,
    TransportError,
    execute_remote,
)
from .results_json import MalformedResults, parse_results_json
from .table import SolutionTable, boolean_table

__all__ = [
    "evaluate_local",
    "EvaluationError",
    "SolutionTable",
    "boolean_table",
    "parse_results_json",
    "MalformedResults",
    "Backend",
    "LocalBackend",
    "RemoteBackend",
    "execute_remote",
    "BackendError",
    "TransportError",
    "RequestTimeout",
    "HttpStatusError",
]
