"""Execution-accuracy benchmark harness for natural-language-to-SPARQL
translators.

Generated queries run against a target knowledge graph (in-memory or via a
SPARQL HTTP endpoint) and their result sets are compared with the gold
query's results; correctness is judged by execution, never by query text.
"""

from .dataset import Dataset, DatasetRecord, load_dataset, shuffle_train
from .engine import LocalBackend, RemoteBackend, SolutionTable, evaluate_local, execute_remote, parse_results_json
from .evaluator import (
    CheckpointEval,
    EvalOutcome,
    GoldStore,
    OutcomeKind,
    RunRecord,
    assemble_query,
    classify,
    compare_solutions,
    evaluate_checkpoint,
)
from .rdf import Graph, Term, Triple, load_graph, parse_turtle
from .seeding import derive_seed
from .sparql import parse_query, serialize_query
from .stats import aggregate, best_of_run, emit_reports

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "Term",
    "Triple",
    "parse_turtle",
    "load_graph",
    "parse_query",
    "serialize_query",
    "evaluate_local",
    "execute_remote",
    "parse_results_json",
    "SolutionTable",
    "LocalBackend",
    "RemoteBackend",
    "Dataset",
    "DatasetRecord",
    "load_dataset",
    "shuffle_train",
    "derive_seed",
    "EvalOutcome",
    "OutcomeKind",
    "CheckpointEval",
    "RunRecord",
    "GoldStore",
    "assemble_query",
    "compare_solutions",
    "classify",
    "evaluate_checkpoint",
    "best_of_run",
    "aggregate",
    "emit_reports",
]
