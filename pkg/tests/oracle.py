"""Independent brute-force oracle for local query evaluation.

Enumerates every assignment of the query's variables over the graph's terms
and keeps those under which all triple patterns are triples of the graph.
No indexes, no join ordering, no code shared with the engine's evaluation
path: satisfaction is raw tuple membership.

Scope matches what the random-instance generator produces: basic graph
patterns with an explicit projection, optional DISTINCT.
"""

from __future__ import annotations

import itertools
from collections import Counter

from sparqlbench.rdf.graph import Graph
from sparqlbench.sparql.ast import Query, TriplePattern, Var


def _resolve(component, binding):
    if isinstance(component, Var):
        return binding[component.name]
    return component


def enumerate_solutions(query: Query, graph: Graph) -> Counter:
    """Multiset of projected value rows (canonical strings)."""
    patterns = [el for el in query.where if isinstance(el, TriplePattern)]
    assert len(patterns) == len(query.where), "oracle handles plain BGPs only"

    names: list[str] = []
    for pattern in patterns:
        for component in pattern.components():
            if isinstance(component, Var) and component.name not in names:
                names.append(component.name)

    graph_tuples = {(t.s, t.p, t.o) for t in graph.triples()}
    universe = sorted(graph.terms(), key=lambda t: t.n3())

    projection = [item.name for item in query.projection]

    rows: Counter = Counter()
    seen: set[tuple] = set()
    for assignment in itertools.product(universe, repeat=len(names)):
        binding = dict(zip(names, assignment))
        if all(
            (_resolve(p.s, binding), _resolve(p.p, binding), _resolve(p.o, binding)) in graph_tuples
            for p in patterns
        ):
            row = tuple(binding[name].n3() for name in projection)
            if query.distinct:
                if row in seen:
                    continue
                seen.add(row)
            rows[row] += 1
    return rows
