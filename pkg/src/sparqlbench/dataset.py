"""Benchmark dataset manifests: loading, validation, splits, shuffling.

A dataset is one JSON manifest:

    {
      "name": "...",
      "query_mode": "ambient-prefixes" | "self-contained",
      "prefix_preamble": {"foaf": "http://..."},
      "backend": {"kind": "local", "graph": "graph.ttl"}
                 | {"kind": "remote", "endpoint": "https://..."},
      "counts": {"train": 53, "test": 16},
      "expand_paraphrases": false,
      "records": [
        {"id", "question", "paraphrase"?, "query", "split", "unsupported"?}
      ]
    }

Graph paths are relative to the manifest.  Self-contained mode requires an
empty preamble (queries carry their own PREFIX declarations); ambient mode
requires a non-empty one.  Gold queries must parse unless the record is
annotated ``unsupported: true``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .seeding import shuffled
from .sparql.errors import SparqlError
from .sparql.parser import parse_query

AMBIENT = "ambient-prefixes"
SELF_CONTAINED = "self-contained"


class DatasetError(Exception):
    pass


@dataclass
class DatasetRecord:
    id: str
    question: str
    gold_query: str
    split: str  # "train" | "test"
    paraphrase: str | None = None
    unsupported: bool = False


@dataclass
class EvalItem:
    """One evaluation unit: a question posed to the translator."""

    item_id: str
    question: str
    record: DatasetRecord


@dataclass
class Dataset:
    name: str
    records: list[DatasetRecord]
    prefix_preamble: dict[str, str]
    query_mode: str
    backend_spec: dict
    manifest_path: Path | None = None
    expand_paraphrases: bool = False
    manifest_sha256: str = ""
    by_id: dict[str, DatasetRecord] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self.by_id:
            self.by_id = {r.id: r for r in self.records}

    def split_records(self, split: str) -> list[DatasetRecord]:
        return [r for r in self.records if r.split == split]

    def train_records(self) -> list[DatasetRecord]:
        return sorted(self.split_records("train"), key=lambda r: r.id)

    def test_records(self) -> list[DatasetRecord]:
        return sorted(self.split_records("test"), key=lambda r: r.id)

    def eval_items(self) -> list[EvalItem]:
        """Test-split items in deterministic order.  With paraphrase
        expansion on, each paraphrase becomes its own item (id suffix ::p);
        by default each record contributes its original question only."""
        items: list[EvalItem] = []
        for record in self.test_records():
            items.append(EvalItem(record.id, record.question, record))
            if self.expand_paraphrases and record.paraphrase:
                items.append(EvalItem(record.id + "::p", record.paraphrase, record))
        return items

    def graph_source(self) -> Path | None:
        if self.backend_spec.get("kind") != "local":
            return None
        raw = Path(self.backend_spec["graph"])
        if raw.is_absolute() or self.manifest_path is None:
            return raw
        return self.manifest_path.parent / raw


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DatasetError(message)


def load_dataset(path, *, expand_paraphrases: bool | None = None, strict_projection: bool = True) -> Dataset:
    path = Path(path)
    try:
        raw_bytes = path.read_bytes()
        manifest = json.loads(raw_bytes)
    except OSError as exc:
        raise DatasetError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DatasetError(f"manifest {path} is not valid JSON: {exc}") from exc

    for key in ("name", "query_mode", "prefix_preamble", "backend", "counts", "records"):
        _require(key in manifest, f"manifest is missing required key {key!r}")

    query_mode = manifest["query_mode"]
    _require(query_mode in (AMBIENT, SELF_CONTAINED), f"unknown query_mode {query_mode!r}")
    preamble = manifest["prefix_preamble"]
    _require(isinstance(preamble, dict), "prefix_preamble must be an object")
    if query_mode == SELF_CONTAINED:
        _require(not preamble, "self-contained datasets must have an empty prefix_preamble")
    else:
        _require(bool(preamble), "ambient-prefixes datasets need a non-empty prefix_preamble")

    backend = manifest["backend"]
    _require(isinstance(backend, dict) and backend.get("kind") in ("local", "remote"), "backend must declare kind local or remote")
    if backend["kind"] == "local":
        _require(isinstance(backend.get("graph"), str), "local backend needs a graph path")
    else:
        _require(isinstance(backend.get("endpoint"), str), "remote backend needs an endpoint URL")

    records: list[DatasetRecord] = []
    seen_ids: set[str] = set()
    for i, rec in enumerate(manifest["records"]):
        where = f"records[{i}]"
        for key in ("id", "question", "query", "split"):
            _require(key in rec, f"{where} is missing {key!r}")
        rid = rec["id"]
        _require(isinstance(rid, str) and rid, f"{where}: id must be a non-empty string")
        _require(rid not in seen_ids, f"duplicate record id {rid!r}")
        seen_ids.add(rid)
        _require(isinstance(rec["question"], str) and rec["question"].strip(), f"record {rid}: question must be non-empty")
        _require(rec["split"] in ("train", "test"), f"record {rid}: split must be train or test")
        record = DatasetRecord(
            id=rid,
            question=rec["question"],
            gold_query=rec["query"],
            split=rec["split"],
            paraphrase=rec.get("paraphrase"),
            unsupported=bool(rec.get("unsupported", False)),
        )
        if not record.unsupported:
            try:
                parse_query(record.gold_query, preamble, strict_projection=strict_projection)
            except SparqlError as exc:
                raise DatasetError(f"record {rid}: gold query does not parse and is not marked unsupported: {exc}") from exc
        records.append(record)

    counts = manifest["counts"]
    for split in ("train", "test"):
        declared = counts.get(split)
        actual = sum(1 for r in records if r.split == split)
        _require(
            declared == actual,
            f"manifest declares {declared} {split} records but contains {actual}",
        )

    return Dataset(
        name=manifest["name"],
        records=records,
        prefix_preamble=dict(preamble),
        query_mode=query_mode,
        backend_spec=dict(backend),
        manifest_path=path,
        expand_paraphrases=manifest.get("expand_paraphrases", False) if expand_paraphrases is None else expand_paraphrases,
        manifest_sha256=hashlib.sha256(raw_bytes).hexdigest(),
    )


def shuffle_train(dataset: Dataset, seed: int) -> list[DatasetRecord]:
    """Deterministic permutation of the train split.

    Records are ordered by id first so the permutation depends only on the
    dataset contents and the seed, never on manifest file order.
    """
    return shuffled(dataset.train_records(), seed)
