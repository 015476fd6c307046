"""The core judgment procedure: assemble, parse, execute, compare, classify.

A generated query earns exactly one outcome:

- Correct: executed and its result set matches the gold result set
- ParseError: text is not valid SPARQL (includes unknown prefixes and
  unbound projections under strict mode)
- UnsupportedFeature: recognized SPARQL beyond the engine's subset
- TranslatorError: the translator itself failed (timeout, crash, protocol)
- ExecError: the backend failed (transport, HTTP status, malformed results)
- EmptyMismatch: executed, returned zero rows where gold has rows
- CountZeroOnEmpty: executed, projects only a COUNT, and that count is zero
  while gold is non-empty
- WrongBindings: executed, returned different values

Infrastructure failures (TranslatorError, ExecError) are deliberately kept
apart from model failures so they can never masquerade as one.

Result comparison is name-agnostic and bag-based: rows are multisets of
value tuples unless the gold query carries ORDER BY (sequences) or DISTINCT
(sets).
"""

from __future__ import annotations

import json
import re
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

from .dataset import Dataset, DatasetRecord, EvalItem
from .engine.evaluate import EvaluationError, evaluate_local
from .engine.remote import BackendError, LocalBackend, execute_remote
from .engine.results_json import MalformedResults
from .engine.table import SolutionTable
from .rdf.terms import XSD_INTEGER
from .sparql.ast import CountAggregate, Query, STAR
from .sparql.errors import ParseError, SparqlError, UnknownPrefix, UnsupportedFeature
from .sparql.parser import parse_query
from .translators import TranslationRequest, Translator, TranslatorError


class OutcomeKind(str, Enum):
    CORRECT = "Correct"
    PARSE_ERROR = "ParseError"
    UNSUPPORTED = "UnsupportedFeature"
    TRANSLATOR_ERROR = "TranslatorError"
    EXEC_ERROR = "ExecError"
    EMPTY_MISMATCH = "EmptyMismatch"
    COUNT_ZERO_ON_EMPTY = "CountZeroOnEmpty"
    WRONG_BINDINGS = "WrongBindings"


@dataclass(frozen=True)
class EvalOutcome:
    kind: OutcomeKind
    detail: str = ""


@dataclass
class CheckpointEval:
    run_id: str
    translator: str
    dataset: str
    epoch: int
    outcomes: dict[str, EvalOutcome]
    correct_count: int = -1

    def __post_init__(self) -> None:
        actual = sum(1 for o in self.outcomes.values() if o.kind is OutcomeKind.CORRECT)
        if self.correct_count == -1:
            self.correct_count = actual
        elif self.correct_count != actual:
            raise ValueError(f"correct_count {self.correct_count} does not match outcomes ({actual})")


@dataclass
class RunRecord:
    run_id: str
    seed: int
    checkpoints: list[CheckpointEval] = field(default_factory=list)

    @property
    def best(self) -> int:
        if not self.checkpoints:
            raise ValueError("run has no checkpoints")
        return max(c.correct_count for c in self.checkpoints)


class GoldExecutionError(Exception):
    """A gold query failed to execute; the run cannot be judged."""


# --- query assembly -----------------------------------------------------------

_PREFIX_DECL_RE = re.compile(r"(?i)\bPREFIX\s+([A-Za-z0-9_.\-]*):")


def assemble_query(generated: str, dataset: Dataset) -> str:
    """Make generated text executable.

    Ambient-prefixes datasets omit PREFIX declarations from their queries by
    convention, so the dataset preamble is prepended (skipping any prefix
    the text already declares).  Self-contained datasets pass through
    unchanged.
    """
    if dataset.query_mode == "self-contained":
        return generated
    declared = set(_PREFIX_DECL_RE.findall(generated))
    lines = [
        f"PREFIX {prefix}: <{expansion}>"
        for prefix, expansion in dataset.prefix_preamble.items()
        if prefix not in declared
    ]
    if not lines:
        return generated
    return "\n".join(lines) + "\n" + generated


# --- comparison ----------------------------------------------------------------


def compare_solutions(gold: SolutionTable, generated: SolutionTable, *, set_semantics: bool = False) -> tuple[bool, str]:
    """Name-agnostic result-set comparison.

    Boolean tables compare by truth value.  Bindings tables compare as
    multisets of value rows (sets under ``set_semantics``), or as sequences
    when the gold table is ordered.  Header arity must match; header names
    are irrelevant.
    """
    if gold.kind != generated.kind:
        return False, f"result kind {gold.kind} vs {generated.kind}"
    if gold.kind == "boolean":
        if gold.boolean == generated.boolean:
            return True, ""
        return False, f"boolean {str(gold.boolean).lower()} vs {str(generated.boolean).lower()}"
    if len(gold.header) != len(generated.header):
        return False, f"column count {len(gold.header)} vs {len(generated.header)}"
    gold_rows = gold.value_rows()
    generated_rows = generated.value_rows()
    if gold.ordered:
        if set_semantics:
            gold_rows = list(dict.fromkeys(gold_rows))
            generated_rows = list(dict.fromkeys(generated_rows))
        if gold_rows == generated_rows:
            return True, ""
        if len(gold_rows) != len(generated_rows):
            return False, f"row count {len(gold_rows)} vs {len(generated_rows)}"
        first = next(i for i, (a, b) in enumerate(zip(gold_rows, generated_rows)) if a != b)
        return False, f"ordered rows differ first at index {first}"
    if set_semantics:
        if set(gold_rows) == set(generated_rows):
            return True, ""
    elif Counter(gold_rows) == Counter(generated_rows):
        return True, ""
    if len(gold_rows) != len(generated_rows):
        return False, f"row count {len(gold_rows)} vs {len(generated_rows)}"
    return False, "rows differ"


# --- execution ------------------------------------------------------------------


def _execute(ast: Query | None, text: str, backend) -> SolutionTable:
    if isinstance(backend, LocalBackend):
        if ast is None:
            raise EvaluationError("local execution needs a parsed query")
        return evaluate_local(ast, backend.graph)
    return execute_remote(text, backend)


_COUNT_TEXT_RE = re.compile(r"(?i)\bCOUNT\s*\(")


def _projects_only_count(ast: Query | None, text: str) -> bool:
    if ast is not None:
        return (
            ast.form == "select"
            and ast.projection is not STAR
            and not isinstance(ast.projection, str)
            and len(ast.projection) == 1
            and isinstance(ast.projection[0], CountAggregate)
        )
    # remote-executed text the local parser rejected: fall back to a
    # textual check, recorded as such in the outcome detail
    return bool(_COUNT_TEXT_RE.search(text))


def _is_zero_count_row(table: SolutionTable) -> bool:
    if table.kind != "bindings" or len(table.rows) != 1 or len(table.header) != 1:
        return False
    cell = table.rows[0][0]
    return cell is not None and cell.is_literal and cell.datatype == XSD_INTEGER and cell.value.strip() == "0"


@dataclass
class GoldEntry:
    table: SolutionTable
    distinct: bool


class GoldStore:
    """Reference result tables, executed once per dataset and backend.

    Remote backends re-execute gold at most once per run; the cache bounds
    endpoint load.  Records whose gold the local engine cannot run (the
    ``unsupported`` annotation) are tracked separately and excluded from
    local evaluation.
    """

    def __init__(self, dataset: Dataset, backend):
        self.dataset = dataset
        self.backend = backend
        self.entries: dict[str, GoldEntry] = {}
        self.skipped: list[str] = []
        self._build()

    def _build(self) -> None:
        local = isinstance(self.backend, LocalBackend)
        for record in self.dataset.records:
            if record.unsupported and local:
                self.skipped.append(record.id)
                continue
            assembled = assemble_query(record.gold_query, self.dataset)
            ast = None
            distinct = False
            ordered = False
            try:
                ast = parse_query(assembled)
                distinct = ast.distinct
                ordered = ast.order_by is not None
            except SparqlError as exc:
                if local:
                    raise GoldExecutionError(f"gold query of {record.id} does not parse: {exc}") from exc
                distinct = bool(re.search(r"(?i)\bSELECT\s+DISTINCT\b", assembled))
                ordered = bool(re.search(r"(?i)\bORDER\s+BY\b", assembled))
            try:
                table = _execute(ast, assembled, self.backend)
            except (BackendError, MalformedResults, EvaluationError) as exc:
                raise GoldExecutionError(f"gold query of {record.id} failed to execute: {exc}") from exc
            if ordered and not table.ordered:
                # the results JSON format cannot carry orderedness; restore
                # it from the gold text so comparison stays sequence-based
                table.ordered = True
            self.entries[record.id] = GoldEntry(table, distinct)

    def entry(self, record_id: str) -> GoldEntry:
        return self.entries[record_id]


# --- classification ----------------------------------------------------------------


def classify(
    record: DatasetRecord,
    generated_text: str,
    dataset: Dataset,
    backend,
    gold: GoldStore | None = None,
    *,
    strict_projection: bool = True,
) -> EvalOutcome:
    """Classify one generated query against one record's gold results."""
    gold = gold or GoldStore(dataset, backend)
    gold_entry = gold.entry(record.id)

    assembled = assemble_query(generated_text, dataset)
    ast: Query | None = None
    parse_failure: EvalOutcome | None = None
    try:
        ast = parse_query(assembled, strict_projection=strict_projection)
    except UnsupportedFeature as exc:
        parse_failure = EvalOutcome(OutcomeKind.UNSUPPORTED, exc.construct)
    except UnknownPrefix as exc:
        parse_failure = EvalOutcome(OutcomeKind.PARSE_ERROR, str(exc))
    except ParseError as exc:
        parse_failure = EvalOutcome(OutcomeKind.PARSE_ERROR, exc.reason)

    if parse_failure is not None:
        if isinstance(backend, LocalBackend):
            return parse_failure
        if parse_failure.kind is OutcomeKind.PARSE_ERROR:
            return parse_failure
        # Recognized-but-unsupported SPARQL still executes remotely: the
        # endpoint, not the local subset, is authoritative there.

    try:
        table = _execute(ast, assembled, backend)
    except (BackendError, MalformedResults) as exc:
        return EvalOutcome(OutcomeKind.EXEC_ERROR, f"{type(exc).__name__}: {exc}")
    except EvaluationError as exc:
        return EvalOutcome(OutcomeKind.EXEC_ERROR, f"internal: {exc}")

    equal, detail = compare_solutions(gold_entry.table, table, set_semantics=gold_entry.distinct)
    if equal:
        return EvalOutcome(OutcomeKind.CORRECT)
    gold_table = gold_entry.table
    gold_nonempty = gold_table.kind == "bindings" and gold_table.row_count >= 1
    if gold_nonempty and _is_zero_count_row(table) and _projects_only_count(ast, assembled):
        return EvalOutcome(OutcomeKind.COUNT_ZERO_ON_EMPTY, "COUNT returned 0; gold result set is non-empty")
    if gold_nonempty and table.kind == "bindings" and table.row_count == 0:
        return EvalOutcome(OutcomeKind.EMPTY_MISMATCH, f"row count {gold_table.row_count} vs 0")
    return EvalOutcome(OutcomeKind.WRONG_BINDINGS, detail)


def evaluate_checkpoint(
    translator: Translator,
    dataset: Dataset,
    backend,
    run_id: str,
    epoch: int,
    *,
    gold: GoldStore | None = None,
    log_writer=None,
    jobs: int = 1,
    strict_projection: bool = True,
) -> CheckpointEval:
    """Translate and classify every test-split question at one checkpoint.

    Translation is strictly serial per handle; classification may run in
    parallel and is merged by question id, so outcome order never depends on
    completion order.  Outcomes are persisted through ``log_writer`` before
    returning.
    """
    gold = gold or GoldStore(dataset, backend)
    items = [item for item in dataset.eval_items() if item.record.id not in gold.skipped]
    if not items:
        raise ValueError(f"dataset {dataset.name} has no evaluable test questions")

    responses: dict[str, tuple[EvalItem, str | None, str | None]] = {}
    for item in items:
        request = TranslationRequest(id=item.item_id, question=item.question, dataset=dataset.name, epoch=epoch)
        try:
            response = translator.translate(request)
        except TranslatorError as exc:
            responses[item.item_id] = (item, None, f"{type(exc).__name__}: {exc}")
            continue
        if response.error is not None or response.query is None:
            responses[item.item_id] = (item, None, response.error or "translator returned no query")
        else:
            responses[item.item_id] = (item, response.query, None)

    def judge(item_id: str) -> tuple[str, EvalOutcome, str]:
        item, query, failure = responses[item_id]
        if failure is not None:
            return item_id, EvalOutcome(OutcomeKind.TRANSLATOR_ERROR, failure), ""
        outcome = classify(item.record, query, dataset, backend, gold, strict_projection=strict_projection)
        return item_id, outcome, query

    ordered_ids = [item.item_id for item in items]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            judged = list(pool.map(judge, ordered_ids))
    else:
        judged = [judge(item_id) for item_id in ordered_ids]

    outcomes: dict[str, EvalOutcome] = {}
    for item_id, outcome, query in sorted(judged, key=lambda j: j[0]):
        outcomes[item_id] = outcome
        if log_writer is not None:
            log_writer.write_outcome(run_id=run_id, epoch=epoch, question_id=item_id, outcome=outcome, generated_query=query)
    return CheckpointEval(run_id=run_id, translator=translator.name, dataset=dataset.name, epoch=epoch, outcomes=outcomes)


class RunLogWriter:
    """Appends one NDJSON object per outcome to a run log file."""

    def __init__(self, path):
        self.path = path
        self._handle = open(path, "w", encoding="utf-8", newline="\n")

    def write_outcome(self, *, run_id: str, epoch: int, question_id: str, outcome: EvalOutcome, generated_query: str) -> None:
        obj = {
            "run": run_id,
            "epoch": epoch,
            "question_id": question_id,
            "outcome": outcome.kind.value,
            "detail": outcome.detail,
            "generated_query": generated_query,
        }
        self._handle.write(json.dumps(obj, ensure_ascii=False) + "\n")

    def close(self) -> None:
        self._handle.close()

    def __enter__(self) -> "RunLogWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
