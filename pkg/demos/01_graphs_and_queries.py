#!/usr/bin/env python3
"""Loading a knowledge graph and running queries against it.

The harness ships an in-memory triple store with a Turtle reader and a
SPARQL-subset engine.  This walks through the organizational fixture: a
small graph of departments and employees where entity names map cleanly to
IRIs ("Bob Tanner" lives at :bob).
"""

from pathlib import Path

from sparqlbench import evaluate_local, load_graph, parse_query

FIXTURE = Path(__file__).resolve().parent.parent / "datasets" / "organizational"

graph = load_graph(FIXTURE / "graph.ttl")
print(f"loaded {len(graph)} triples, prefixes: {sorted(graph.prefixes)}")

prefixes = {
    "": "http://example.org/org/",
    "foaf": "http://xmlns.com/foaf/0.1/",
    "org": "http://www.w3.org/ns/org#",
}

# the classic lookup: one bound subject, one bound predicate
query = parse_query("SELECT ?surname WHERE { :bob foaf:surname ?surname . }", prefixes)
table = evaluate_local(query, graph)
print("surname of :bob ->", [cell.value for row in table.rows for cell in row])

# joins, aggregation, boolean queries
for text in [
    "SELECT ?surname WHERE { ?p org:memberOf :research . ?p foaf:surname ?surname . }",
    "SELECT ?d (COUNT(?p) AS ?headcount) WHERE { ?p org:memberOf ?d . } GROUP BY ?d",
    "ASK { :anne org:headOf :research . }",
    "SELECT (COUNT(*) AS ?c) WHERE { :nobody :nothing ?x . }",  # counting zero matches yields 0
]:
    table = evaluate_local(parse_query(text, prefixes), graph)
    if table.kind == "boolean":
        print(f"{text}\n  -> {table.boolean}")
    else:
        rows = [tuple(cell.value if cell else None for cell in row) for row in table.rows]
        print(f"{text}\n  -> {rows}")
