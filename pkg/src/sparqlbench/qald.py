"""One-way import of QALD-native JSON into the manifest format.

QALD files carry multilingual questions; only the English string is taken.
Queries the engine's subset cannot parse are kept but annotated
``unsupported: true`` so loading still succeeds and the count is reported.
"""

from __future__ import annotations

import json
from pathlib import Path

from .sparql.errors import SparqlError
from .sparql.parser import parse_query


def import_qald(input_path, out_path, *, dataset_name: str | None = None, backend_spec: dict | None = None, language: str = "en") -> dict:
    raw = json.loads(Path(input_path).read_text(encoding="utf-8"))
    questions = raw.get("questions")
    if not isinstance(questions, list):
        raise ValueError("QALD file has no 'questions' list")

    records = []
    skipped_language = 0
    unsupported = 0
    for entry in questions:
        qid = str(entry.get("id", len(records) + 1))
        text = None
        for candidate in entry.get("question", []):
            if candidate.get("language") == language:
                text = candidate.get("string")
                break
        if not text:
            skipped_language += 1
            continue
        sparql = (entry.get("query") or {}).get("sparql")
        if not sparql:
            continue
        record = {
            "id": f"q{qid}",
            "question": text,
            "query": sparql,
            "split": "test",
        }
        try:
            parse_query(sparql)
        except SparqlError:
            record["unsupported"] = True
            unsupported += 1
        records.append(record)

    manifest = {
        "name": dataset_name or Path(input_path).stem,
        "query_mode": "self-contained",
        "prefix_preamble": {},
        "backend": backend_spec or {"kind": "remote", "endpoint": "https://query.wikidata.org/sparql"},
        "counts": {"train": 0, "test": len(records)},
        "records": records,
    }
    Path(out_path).write_text(json.dumps(manifest, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return {
        "records": len(records),
        "unsupported": unsupported,
        "skipped_no_language_match": skipped_language,
    }
