"""Candidate-tuple generation via a chat-completion service.

The pipeline: prompt a chat model with the graph's Turtle serialization to
propose (question, query, expected-result) tuples, keep only candidates
whose query actually executes to the expected values, then ask for one
paraphrase per surviving question.  Every step can run against a recorded
transcript instead of the network, which makes the whole pipeline
deterministic and testable; with a replay transcript configured, no network
traffic happens at all.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from pathlib import Path

from .dataset import AMBIENT, SELF_CONTAINED
from .engine.evaluate import evaluate_local
from .engine.table import SolutionTable
from .rdf.graph import Graph
from .rdf.turtle import serialize_graph
from .seeding import shuffled
from .sparql.errors import SparqlError
from .sparql.parser import parse_query

DEFAULT_GENERATE_PROMPT = """You are given an RDF knowledge graph in Turtle syntax.

{graph}

Write {n} tuples as a JSON array.  Each tuple is an object with keys
"question" (a natural-language question a person could ask about this
graph), "query" (a SPARQL SELECT or ASK query answering it), and
"expected" (the values the query returns, comma-separated).
Reply with the JSON array only.
"""

DEFAULT_PARAPHRASE_PROMPT = """Paraphrase the following question.  Keep its meaning
exactly; change the wording.  Reply with the paraphrased question only.

{question}
"""


class ChatTransportError(Exception):
    pass


class PromptBudgetExceeded(Exception):
    pass


class DatagenAborted(Exception):
    """Transport failure mid-pipeline; carries the records finished so far."""

    def __init__(self, message: str, partial: list):
        super().__init__(message)
        self.partial = partial


@dataclass
class ChatClientConfig:
    endpoint: str = "https://api.openai.com/v1/chat/completions"
    model: str = "gpt-4"
    api_key_env: str = "OPENAI_API_KEY"
    temperature: float = 0.0
    max_retries: int = 2
    replay_path: str | None = None


class ChatClient:
    """Minimal chat-completions client with sequence-based replay.

    Replay transcripts are NDJSON files of {"request": ..., "response":
    {"content": "..."}} pairs; entries are consumed in order and requests
    are recorded but not matched, so the same transcript replays
    byte-identically every time.
    """

    def __init__(self, config: ChatClientConfig, session=None):
        self.config = config
        self._session = session
        self._replay: list[dict] | None = None
        self._cursor = 0
        if config.replay_path is not None:
            entries = []
            with open(config.replay_path, encoding="utf-8") as handle:
                for line in handle:
                    line = line.strip()
                    if line:
                        entries.append(json.loads(line))
            self._replay = entries

    @property
    def replaying(self) -> bool:
        return self._replay is not None

    def complete(self, messages: list[dict]) -> str:
        if self._replay is not None:
            if self._cursor >= len(self._replay):
                raise ChatTransportError("replay transcript exhausted")
            entry = self._replay[self._cursor]
            self._cursor += 1
            return entry["response"]["content"]
        import requests

        session = self._session or requests
        headers = {}
        key = os.environ.get(self.config.api_key_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        try:
            response = session.post(
                self.config.endpoint,
                json={"model": self.config.model, "messages": messages, "temperature": self.config.temperature},
                headers=headers,
                timeout=120,
            )
        except requests.exceptions.RequestException as exc:
            raise ChatTransportError(f"chat endpoint unreachable: {exc}") from exc
        if response.status_code != 200:
            raise ChatTransportError(f"chat endpoint returned HTTP {response.status_code}: {response.text[:200]}")
        try:
            return response.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError) as exc:
            raise ChatTransportError(f"malformed chat response: {exc}") from exc


@dataclass
class GenerationCandidate:
    question: str
    query: str
    expected: str
    verified: bool = False
    rejection_reason: str | None = None


_JSON_ARRAY_RE = re.compile(r"\[.*\]", re.DOTALL)


def _parse_candidate_reply(reply: str) -> list[GenerationCandidate]:
    match = _JSON_ARRAY_RE.search(reply)
    if not match:
        raise ValueError("reply contains no JSON array")
    parsed = json.loads(match.group(0))
    if not isinstance(parsed, list):
        raise ValueError("reply is not a JSON array")
    out = []
    for item in parsed:
        if not isinstance(item, dict) or not all(k in item for k in ("question", "query", "expected")):
            raise ValueError("tuple lacks question/query/expected")
        out.append(GenerationCandidate(str(item["question"]), str(item["query"]), str(item["expected"])))
    return out


def generate_candidates(
    graph: Graph,
    n: int,
    chat: ChatClient,
    *,
    triple_cap: int = 500,
    prompt_template: str = DEFAULT_GENERATE_PROMPT,
) -> list[GenerationCandidate]:
    """Prompt for up to n candidate tuples.

    Malformed replies are retried up to the configured retry count, then
    skipped.  An oversized graph (more triples than the prompt budget
    allows) is an error; an empty graph is not, the candidates just fail
    verification later.
    """
    if len(graph) > triple_cap:
        raise PromptBudgetExceeded(f"graph has {len(graph)} triples, prompt budget allows {triple_cap}")
    prompt = prompt_template.format(graph=serialize_graph(graph), n=n)
    messages = [{"role": "user", "content": prompt}]
    attempts = chat.config.max_retries + 1
    for _ in range(attempts):
        reply = chat.complete(messages)
        try:
            return _parse_candidate_reply(reply)[:n]
        except (ValueError, json.JSONDecodeError):
            continue
    return []


def _normalize_expected(sketch: str) -> list[str]:
    sketch = sketch.strip()
    if sketch.startswith("["):
        try:
            parsed = json.loads(sketch)
            if isinstance(parsed, list):
                return sorted(str(v).strip() for v in parsed)
        except json.JSONDecodeError:
            pass
    parts = re.split(r"[,;\n]+", sketch)
    return sorted(p.strip() for p in parts if p.strip())


def _normalize_table(table: SolutionTable) -> list[str]:
    if table.kind == "boolean":
        return ["true" if table.boolean else "false"]
    values = []
    for row in table.rows:
        for cell in row:
            if cell is None:
                continue
            values.append(cell.value.strip())
    return sorted(values)


def verify_candidate(candidate: GenerationCandidate, graph: Graph, prefixes: dict[str, str] | None = None) -> GenerationCandidate:
    """Execute the candidate's query and check the expected sketch.

    Verification is value-based: the executed table's lexical forms and the
    sketch (split on commas/semicolons/newlines, whitespace-trimmed) must
    match as multisets.  All failures are rejections, never exceptions.
    """
    try:
        ast = parse_query(candidate.query, prefixes or {})
    except SparqlError as exc:
        return GenerationCandidate(candidate.question, candidate.query, candidate.expected, False, f"ParseError: {exc}")
    table = evaluate_local(ast, graph)
    got = _normalize_table(table)
    want = _normalize_expected(candidate.expected)
    if got == want:
        return GenerationCandidate(candidate.question, candidate.query, candidate.expected, True, None)
    if not got and want:
        reason = "EmptyResult: query returned nothing"
    else:
        reason = f"ValueMismatch: query returned {got!r}, expected {want!r}"
    return GenerationCandidate(candidate.question, candidate.query, candidate.expected, False, reason)


@dataclass
class ParaphrasedRecord:
    question: str
    query: str
    paraphrase: str
    degenerate: bool = False  # paraphrase equals the original after retry


def paraphrase_all(
    records: list[GenerationCandidate],
    chat: ChatClient,
    *,
    prompt_template: str = DEFAULT_PARAPHRASE_PROMPT,
) -> list[ParaphrasedRecord]:
    """One paraphrase per verified record.

    A paraphrase identical to the original (case-folded) is retried once,
    then accepted with a warning flag.  Transport failures abort with the
    finished records attached so partial progress can be persisted.
    """
    out: list[ParaphrasedRecord] = []
    for record in records:
        try:
            paraphrase = chat.complete([{"role": "user", "content": prompt_template.format(question=record.question)}]).strip()
            degenerate = paraphrase.casefold() == record.question.strip().casefold()
            if degenerate:
                paraphrase = chat.complete([{"role": "user", "content": prompt_template.format(question=record.question)}]).strip()
                degenerate = paraphrase.casefold() == record.question.strip().casefold()
        except ChatTransportError as exc:
            raise DatagenAborted(str(exc), out) from exc
        out.append(ParaphrasedRecord(record.question, record.query, paraphrase, degenerate))
    return out


def run_datagen(
    graph: Graph,
    chat: ChatClient,
    out_path,
    *,
    n: int,
    dataset_name: str,
    query_mode: str = AMBIENT,
    prefix_preamble: dict[str, str] | None = None,
    backend_spec: dict | None = None,
    test_count: int = 0,
    split_seed: int = 20240101,
    triple_cap: int = 500,
    generate_template: str = DEFAULT_GENERATE_PROMPT,
    paraphrase_template: str = DEFAULT_PARAPHRASE_PROMPT,
) -> dict:
    """End-to-end generation pipeline; writes a dataset manifest.

    Replaying the same transcript twice yields byte-identical manifests.
    Partial progress is written before a transport abort is re-raised.
    """
    prefix_preamble = dict(prefix_preamble if prefix_preamble is not None else graph.prefixes)
    if query_mode == SELF_CONTAINED:
        prefix_preamble = {}
    backend_spec = backend_spec or {"kind": "local", "graph": "graph.ttl"}

    candidates = generate_candidates(graph, n, chat, triple_cap=triple_cap, prompt_template=generate_template)
    verified = []
    rejected = []
    for candidate in candidates:
        checked = verify_candidate(candidate, graph, prefix_preamble)
        (verified if checked.verified else rejected).append(checked)

    def build_manifest(paraphrased: list[ParaphrasedRecord]) -> dict:
        ids = [f"g{i + 1:03d}" for i in range(len(paraphrased))]
        test_ids = set()
        if test_count:
            test_ids = set(shuffled(ids, split_seed)[:test_count])
        records = []
        for rid, record in zip(ids, paraphrased):
            records.append(
                {
                    "id": rid,
                    "question": record.question,
                    "paraphrase": record.paraphrase,
                    "query": record.query,
                    "split": "test" if rid in test_ids else "train",
                }
            )
        return {
            "name": dataset_name,
            "query_mode": query_mode,
            "prefix_preamble": prefix_preamble,
            "backend": backend_spec,
            "counts": {
                "train": sum(1 for r in records if r["split"] == "train"),
                "test": sum(1 for r in records if r["split"] == "test"),
            },
            "records": records,
            "rejected": [
                {"question": r.question, "query": r.query, "reason": r.rejection_reason} for r in rejected
            ],
        }

    def write(manifest: dict) -> None:
        Path(out_path).write_text(json.dumps(manifest, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")

    try:
        paraphrased = paraphrase_all(verified, chat, prompt_template=paraphrase_template)
    except DatagenAborted as exc:
        write(build_manifest(exc.partial))
        raise
    manifest = build_manifest(paraphrased)
    write(manifest)
    return manifest
