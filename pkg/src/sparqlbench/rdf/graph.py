"""In-memory indexed triple store.

A Graph is a set of triples with three lookup indexes keyed by subject,
predicate, and object.  Graphs are built once at load time and treated as
immutable afterwards, so concurrent readers are safe.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .terms import Term, Triple


class Graph:
    def __init__(self, prefixes: dict[str, str] | None = None):
        self.prefixes: dict[str, str] = dict(prefixes or {})
        self._triples: set[Triple] = set()
        self._by_s: dict[Term, set[Triple]] = {}
        self._by_p: dict[Term, set[Triple]] = {}
        self._by_o: dict[Term, set[Triple]] = {}

    def add(self, triple: Triple) -> None:
        if triple in self._triples:
            return
        self._triples.add(triple)
        self._by_s.setdefault(triple.s, set()).add(triple)
        self._by_p.setdefault(triple.p, set()).add(triple)
        self._by_o.setdefault(triple.o, set()).add(triple)

    def update(self, triples: Iterable[Triple]) -> None:
        for t in triples:
            self.add(t)

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.triples())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    def triples(self) -> list[Triple]:
        """All triples in canonical (deterministic) order."""
        return sorted(self._triples, key=Triple.sort_key)

    def terms(self) -> set[Term]:
        out: set[Term] = set()
        for t in self._triples:
            out.add(t.s)
            out.add(t.p)
            out.add(t.o)
        return out

    def match(self, s: Term | None = None, p: Term | None = None, o: Term | None = None) -> list[Triple]:
        """Triples matching all non-None components, canonically ordered.

        Starts from the smallest applicable index and filters the rest, which
        is equivalent to a brute-force scan over all triples.
        """
        candidates: set[Triple] | None = None
        for term, index in ((s, self._by_s), (p, self._by_p), (o, self._by_o)):
            if term is None:
                continue
            bucket = index.get(term)
            if not bucket:
                return []
            if candidates is None or len(bucket) < len(candidates):
                candidates = bucket
        if candidates is None:
            return self.triples()
        result = [
            t
            for t in candidates
            if (s is None or t.s == s) and (p is None or t.p == p) and (o is None or t.o == o)
        ]
        result.sort(key=Triple.sort_key)
        return result
