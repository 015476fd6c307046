#!/usr/bin/env python3
"""A complete benchmark run, twice over.

First: built-in baseline translators over the organizational fixture,
producing run logs, shuffle orders, curves.csv/bestof.csv/summary.md.
Second: replaying the bundled recorded transcript over the wikidata-style
fixture, which reproduces the recorded failure anatomy exactly (290
unparsable-or-unsupported, 51 empty, 50 zero-count, 3 wrong bindings).
"""

import json
import tempfile
from collections import Counter
from pathlib import Path

from sparqlbench.cli import main

ROOT = Path(__file__).resolve().parent.parent
DATASETS = ROOT / "datasets"

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "org-run"
    main(
        [
            "run",
            "--dataset", str(DATASETS / "organizational" / "manifest.json"),
            "--translator", "gold",
            "--translator", "retrieval",
            "--translator", "null",
            "--runs", "R01,R02,R03",
            "--epochs", "5,10,15,20",
            "--out", str(out),
        ]
    )
    print()
    print((out / "reports" / "summary.md").read_text())

    qald_out = Path(tmp) / "qald-run"
    main(
        [
            "run",
            "--dataset", str(DATASETS / "qald10" / "manifest.json"),
            "--translator", f"transcript:{DATASETS / 'qald10' / 'm2m100_transcript.ndjson'}",
            "--runs", "R01",
            "--epochs", "5",
            "--out", str(qald_out),
        ]
    )
    log = qald_out / "logs" / "transcript" / "R01.ndjson"
    tally = Counter(json.loads(line)["outcome"] for line in log.read_text().splitlines())
    print("\nrecorded-transcript outcome distribution over 394 questions:")
    for outcome, count in sorted(tally.items(), key=lambda kv: -kv[1]):
        print(f"  {outcome:<20} {count}")
