#!/usr/bin/env python3
"""How a generated query earns its outcome.

Correctness is judged by execution: the generated query runs against the
same graph as the gold query and the result sets are compared (as bags,
ignoring variable names).  Everything that can go wrong lands in exactly
one bucket, and infrastructure failures can never masquerade as model
failures.
"""

from pathlib import Path

from sparqlbench import GoldStore, LocalBackend, classify, load_dataset, load_graph

FIXTURE = Path(__file__).resolve().parent.parent / "datasets" / "organizational"

dataset = load_dataset(FIXTURE / "manifest.json")
backend = LocalBackend(load_graph(dataset.graph_source()))
gold = GoldStore(dataset, backend)

record = next(r for r in dataset.records if r.question == "What is the surname of Bob Tanner?")
print("question:  ", record.question)
print("gold query:", record.gold_query)
print()

attempts = [
    ("the gold query itself", record.gold_query),
    ("different variable name, same results", "SELECT ?s WHERE { :bob foaf:surname ?s . }"),
    ("natural language, not SPARQL", "The surname of Bob Tanner is Tanner."),
    ("valid SPARQL beyond the subset", "SELECT ?s WHERE { { :bob foaf:surname ?s } UNION { :bob foaf:name ?s } }"),
    ("wrong entity, empty result", "SELECT ?s WHERE { :charles foaf:surname ?s . }"),
    ("a COUNT that returns 0", "SELECT (COUNT(?s) AS ?c) WHERE { :charles foaf:surname ?s . }"),
    ("wrong property, wrong values", "SELECT ?n WHERE { :bob foaf:firstName ?n . }"),
    ("unbound projection (strict mode flags it)", "SELECT ?surname WHERE { :charles foaf:firstName 'BobTanner' }"),
]
for label, generated in attempts:
    outcome = classify(record, generated, dataset, backend, gold)
    detail = f"  [{outcome.detail}]" if outcome.detail else ""
    print(f"{outcome.kind.value:<18} {label}{detail}")
