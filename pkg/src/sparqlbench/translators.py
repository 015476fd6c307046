"""Uniform interface to candidate translators.

A translator maps a question to query text.  Four transports:

- builtin baselines (gold oracle, null echo, token-overlap retrieval)
- transcript replay of a recorded session
- subprocess speaking newline-delimited JSON on stdin/stdout
- HTTP POST /translate with the same JSON bodies

The wire protocol is one JSON object per line.  Request fields: id,
question, dataset, epoch (optional).  Response: {id, query} on success or
{id, error} on failure.  Ids must echo; exactly one response is consumed
per request, strictly serially per handle.
"""

from __future__ import annotations

import json
import logging
import queue
import re
import subprocess
import threading
from dataclasses import dataclass

import requests

from .dataset import Dataset, DatasetRecord

log = logging.getLogger("sparqlbench.translator")


@dataclass(frozen=True)
class TranslationRequest:
    id: str
    question: str
    dataset: str
    epoch: int | None = None

    def to_wire(self) -> dict:
        wire = {"id": self.id, "question": self.question, "dataset": self.dataset}
        if self.epoch is not None:
            wire["epoch"] = self.epoch
        return wire


@dataclass(frozen=True)
class TranslationResponse:
    id: str
    query: str | None = None
    error: str | None = None


class TranslatorError(Exception):
    """Translator-side failure; surfaces as a TranslatorError outcome."""


class TranslatorTimeout(TranslatorError):
    pass


class ProcessExited(TranslatorError):
    pass


class ProtocolViolation(TranslatorError):
    pass


class Translator:
    """Base translator handle.  Subclasses implement _translate."""

    def __init__(self, name: str):
        if not name:
            raise ValueError("translator name must be non-empty")
        self.name = name

    def translate(self, request: TranslationRequest) -> TranslationResponse:
        response = self._translate(request)
        if response.id != request.id:
            raise ProtocolViolation(f"response id {response.id!r} does not match request id {request.id!r}")
        if response.query is not None:
            # verbatim except for surrounding whitespace
            return TranslationResponse(response.id, response.query.strip())
        return response

    def _translate(self, request: TranslationRequest) -> TranslationResponse:
        raise NotImplementedError

    def close(self) -> None:
        pass

    def __enter__(self) -> "Translator":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


# --- builtins ----------------------------------------------------------------


class GoldOracleTranslator(Translator):
    """Returns each record's own gold query; the perfect-translator bound."""

    def __init__(self, dataset: Dataset, name: str = "gold-oracle"):
        super().__init__(name)
        self._by_id = dataset.by_id

    def _translate(self, request: TranslationRequest) -> TranslationResponse:
        record = self._by_id.get(request.id.split("::")[0])
        if record is None:
            return TranslationResponse(request.id, error=f"unknown question id {request.id!r}")
        return TranslationResponse(request.id, query=record.gold_query)


class NullTranslator(Translator):
    """Echoes the question back; a floor that can never parse."""

    def __init__(self, name: str = "null"):
        super().__init__(name)

    def _translate(self, request: TranslationRequest) -> TranslationResponse:
        return TranslationResponse(request.id, query=request.question)


_TOKEN_RE = re.compile(r"[^0-9a-z]+")


def _tokens(text: str) -> frozenset[str]:
    return frozenset(t for t in _TOKEN_RE.split(text.lower()) if t)


def retrieval_baseline(train: list[DatasetRecord], question: str) -> str:
    """Gold query of the training question with maximal Jaccard token
    overlap; ties break toward the smallest record id."""
    if not train:
        raise ValueError("retrieval baseline needs a non-empty train split")
    question_tokens = _tokens(question)
    best: DatasetRecord | None = None
    best_score = -1.0
    for record in sorted(train, key=lambda r: r.id):
        candidate_tokens = _tokens(record.question)
        union = question_tokens | candidate_tokens
        score = len(question_tokens & candidate_tokens) / len(union) if union else 1.0
        if score > best_score:
            best = record
            best_score = score
    assert best is not None
    return best.gold_query


class RetrievalTranslator(Translator):
    def __init__(self, dataset: Dataset, name: str = "retrieval"):
        super().__init__(name)
        self._train = dataset.train_records()

    def _translate(self, request: TranslationRequest) -> TranslationResponse:
        if not self._train:
            return TranslationResponse(request.id, error="empty train split")
        return TranslationResponse(request.id, query=retrieval_baseline(self._train, request.question))


class TranscriptTranslator(Translator):
    """Replays a recorded session: NDJSON lines {id, query} or {id, error}."""

    def __init__(self, path, name: str = "transcript"):
        super().__init__(name)
        self._responses: dict[str, TranslationResponse] = {}
        with open(path, encoding="utf-8") as handle:
            for line_number, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ProtocolViolation(f"{path}:{line_number}: not JSON: {exc}") from exc
                if "id" not in obj:
                    raise ProtocolViolation(f"{path}:{line_number}: transcript entry without id")
                self._responses[obj["id"]] = TranslationResponse(
                    obj["id"], query=obj.get("query"), error=obj.get("error")
                )

    def _translate(self, request: TranslationRequest) -> TranslationResponse:
        response = self._responses.get(request.id)
        if response is None:
            return TranslationResponse(request.id, error=f"transcript has no entry for {request.id!r}")
        return response


# --- subprocess transport ------------------------------------------------------


class SubprocessTranslator(Translator):
    """Spawns a child process and speaks the NDJSON protocol over its
    stdin/stdout.  stderr is passed through to the harness log.  One request
    is in flight at a time."""

    def __init__(self, name: str, command: list[str], env: dict[str, str] | None = None, timeout_s: float = 60.0):
        super().__init__(name)
        if not command:
            raise ValueError("subprocess translator needs a non-empty command")
        self.command = command
        self.extra_env = env or {}
        self.timeout_s = timeout_s
        self._proc: subprocess.Popen | None = None
        self._lines: queue.Queue = queue.Queue()
        self._lock = threading.Lock()

    def _ensure_started(self) -> None:
        if self._proc is not None:
            return
        import os

        env = dict(os.environ)
        env.update(self.extra_env)
        try:
            self._proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                env=env,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise ProcessExited(f"cannot spawn {self.command[0]!r}: {exc}") from exc
        threading.Thread(target=self._pump_stdout, daemon=True).start()
        threading.Thread(target=self._pump_stderr, daemon=True).start()

    def _pump_stdout(self) -> None:
        proc = self._proc
        assert proc is not None and proc.stdout is not None
        for line in proc.stdout:
            self._lines.put(line)
        self._lines.put(None)  # EOF marker

    def _pump_stderr(self) -> None:
        proc = self._proc
        assert proc is not None and proc.stderr is not None
        for line in proc.stderr:
            log.info("[%s] %s", self.name, line.rstrip())

    def _translate(self, request: TranslationRequest) -> TranslationResponse:
        with self._lock:
            self._ensure_started()
            proc = self._proc
            assert proc is not None and proc.stdin is not None
            try:
                proc.stdin.write(json.dumps(request.to_wire()) + "\n")
                proc.stdin.flush()
            except (BrokenPipeError, OSError) as exc:
                raise ProcessExited(f"translator process is gone: {exc}") from exc
            try:
                line = self._lines.get(timeout=self.timeout_s)
            except queue.Empty:
                raise TranslatorTimeout(f"no response within {self.timeout_s}s")
            if line is None:
                raise ProcessExited(f"translator exited (status {proc.poll()})")
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ProtocolViolation(f"non-JSON response line: {line!r}") from exc
            if not isinstance(obj, dict) or "id" not in obj:
                raise ProtocolViolation(f"response without id: {line!r}")
            return TranslationResponse(obj["id"], query=obj.get("query"), error=obj.get("error"))

    def close(self) -> None:
        if self._proc is None:
            return
        if self._proc.stdin is not None:
            try:
                self._proc.stdin.close()
            except OSError:
                pass
        try:
            self._proc.wait(timeout=5)
        except subprocess.TimeoutExpired:
            self._proc.kill()
            self._proc.wait()
        self._proc = None


# --- HTTP transport --------------------------------------------------------------


class HttpTranslator(Translator):
    """POSTs the request body to <url>/translate."""

    def __init__(self, name: str, url: str, timeout_s: float = 60.0, session=None):
        super().__init__(name)
        self.url = url.rstrip("/") + "/translate"
        self.timeout_s = timeout_s
        self._session = session or requests

    def _translate(self, request: TranslationRequest) -> TranslationResponse:
        try:
            response = self._session.post(self.url, json=request.to_wire(), timeout=self.timeout_s)
        except requests.exceptions.Timeout as exc:
            raise TranslatorTimeout(f"no response within {self.timeout_s}s") from exc
        except requests.exceptions.RequestException as exc:
            raise TranslatorError(f"transport failure: {exc}") from exc
        if response.status_code != 200:
            raise TranslatorError(f"translator endpoint returned HTTP {response.status_code}")
        try:
            obj = response.json()
        except ValueError as exc:
            raise ProtocolViolation(f"non-JSON response body: {response.text[:200]!r}") from exc
        if not isinstance(obj, dict) or "id" not in obj:
            raise ProtocolViolation(f"response without id: {obj!r}")
        return TranslationResponse(obj["id"], query=obj.get("query"), error=obj.get("error"))


# --- construction from specs --------------------------------------------------------


def build_translator(spec: dict, dataset: Dataset) -> Translator:
    """Build a translator from a config entry.

    {"kind": "builtin", "builtin": "gold"|"null"|"retrieval", "name"?}
    {"kind": "transcript", "path": "...", "name"?}
    {"kind": "subprocess", "command": [...], "env"?, "timeout"?, "name"}
    {"kind": "http", "url": "...", "timeout"?, "name"}
    """
    kind = spec.get("kind")
    name = spec.get("name")
    if kind == "builtin":
        which = spec.get("builtin")
        if which == "gold":
            return GoldOracleTranslator(dataset, name or "gold-oracle")
        if which == "null":
            return NullTranslator(name or "null")
        if which == "retrieval":
            return RetrievalTranslator(dataset, name or "retrieval")
        raise ValueError(f"unknown builtin translator {which!r}")
    if kind == "transcript":
        return TranscriptTranslator(spec["path"], name or "transcript")
    if kind == "subprocess":
        return SubprocessTranslator(name or spec["command"][0], spec["command"], spec.get("env"), spec.get("timeout", 60.0))
    if kind == "http":
        return HttpTranslator(name or spec["url"], spec["url"], spec.get("timeout", 60.0))
    raise ValueError(f"unknown translator kind {kind!r}")


def parse_translator_flag(flag: str) -> dict:
    """Shorthand for --translator: 'gold', 'null', 'retrieval',
    'transcript:PATH', 'subprocess:NAME:CMD ARGS...', 'http:NAME:URL'."""
    if flag in ("gold", "gold-oracle"):
        return {"kind": "builtin", "builtin": "gold"}
    if flag == "null":
        return {"kind": "builtin", "builtin": "null"}
    if flag == "retrieval":
        return {"kind": "builtin", "builtin": "retrieval"}
    if flag.startswith("transcript:"):
        return {"kind": "transcript", "path": flag.split(":", 1)[1]}
    if flag.startswith("subprocess:"):
        _, name, command = flag.split(":", 2)
        return {"kind": "subprocess", "name": name, "command": command.split()}
    if flag.startswith("http:"):
        _, name, url = flag.split(":", 2)
        return {"kind": "http", "name": name, "url": url}
    raise ValueError(f"cannot parse translator spec {flag!r}")
