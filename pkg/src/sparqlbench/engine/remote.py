"""Remote SPARQL endpoint access and backend descriptors.

Queries go out as form-encoded POST bodies per the SPARQL Protocol, with an
Accept header for the JSON results format.  Transport failures retry with
exponential backoff starting at one second; HTTP status errors do not retry.
All failures raised here are classified as ExecError by the evaluator, never
as wrong answers.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field

import requests

from ..rdf.graph import Graph
from .results_json import MalformedResults, parse_results_json
from .table import SolutionTable


class BackendError(Exception):
    """Base for execution-backend failures."""


class TransportError(BackendError):
    pass


class RequestTimeout(TransportError):
    pass


class HttpStatusError(BackendError):
    def __init__(self, status: int, body_excerpt: str = ""):
        super().__init__(f"endpoint returned HTTP {status}" + (f": {body_excerpt}" if body_excerpt else ""))
        self.status = status


@dataclass
class LocalBackend:
    graph: Graph
    description: str = "local"

    @property
    def kind(self) -> str:
        return "local"


@dataclass
class RemoteBackend:
    endpoint: str
    timeout_s: float = 30.0
    retries: int = 2
    headers: dict[str, str] = field(default_factory=dict)
    max_connections: int = 4
    _semaphore: threading.Semaphore = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not (self.endpoint.startswith("http://") or self.endpoint.startswith("https://")):
            raise ValueError(f"remote endpoint must be an absolute http(s) URL: {self.endpoint!r}")
        if self._semaphore is None:
            self._semaphore = threading.Semaphore(self.max_connections)

    @property
    def kind(self) -> str:
        return "remote"

    @property
    def description(self) -> str:
        return f"remote:{self.endpoint}"


Backend = LocalBackend | RemoteBackend


def execute_remote(query_text: str, backend: RemoteBackend, *, session=None, sleep=time.sleep) -> SolutionTable:
    """Execute query text against a remote endpoint, returning a table.

    Raises TransportError/RequestTimeout after exhausting retries,
    HttpStatusError for non-2xx responses, MalformedResults for unusable
    response bodies.
    """
    post = (session or requests).post
    headers = {"Accept": "application/sparql-results+json"}
    headers.update(backend.headers)
    attempts = backend.retries + 1
    delay = 1.0
    last_exc: Exception | None = None
    for attempt in range(attempts):
        if attempt > 0:
            sleep(delay)
            delay *= 2
        with backend._semaphore:
            try:
                response = post(
                    backend.endpoint,
                    data={"query": query_text},
                    headers=headers,
                    timeout=backend.timeout_s,
                )
            except requests.exceptions.Timeout as exc:
                last_exc = RequestTimeout(f"request timed out after {backend.timeout_s}s")
                last_exc.__cause__ = exc
                continue
            except requests.exceptions.RequestException as exc:
                last_exc = TransportError(f"transport failure: {exc}")
                last_exc.__cause__ = exc
                continue
        if not (200 <= response.status_code < 300):
            raise HttpStatusError(response.status_code, response.text[:200])
        return parse_results_json(response.content)
    assert last_exc is not None
    raise last_exc


__all__ = [
    "Backend",
    "LocalBackend",
    "RemoteBackend",
    "execute_remote",
    "BackendError",
    "TransportError",
    "RequestTimeout",
    "HttpStatusError",
    "MalformedResults",
]
