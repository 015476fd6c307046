"""Term, triple, Turtle ingestion, and indexed matching."""

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from sparqlbench.rdf.graph import Graph
from sparqlbench.rdf.terms import XSD_DECIMAL, XSD_INTEGER, Triple, blank, iri, literal
from sparqlbench.rdf.turtle import (
    InvalidIriError,
    TurtleParseError,
    UndefinedPrefixError,
    load_graph,
    parse_turtle,
    serialize_graph,
)

FOAF = "http://xmlns.com/foaf/0.1/"
EX = "http://ex.org/"


def test_literal_cannot_have_datatype_and_lang():
    with pytest.raises(ValueError):
        literal("x", datatype=EX + "dt", lang="en")


def test_language_tagged_literal_is_langstring():
    lit = literal("hello", lang="en")
    assert lit.datatype == "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString"
    assert lit != literal("hello")


def test_term_equality_is_exact():
    assert literal("10", XSD_INTEGER) != literal("10")
    assert literal("10", XSD_INTEGER) != literal("10", XSD_DECIMAL)
    assert iri(EX + "a") != blank(EX + "a")


def test_triple_rejects_literal_subject_and_non_iri_predicate():
    with pytest.raises(ValueError):
        Triple(literal("x"), iri(EX + "p"), iri(EX + "o"))
    with pytest.raises(ValueError):
        Triple(iri(EX + "s"), blank("b"), iri(EX + "o"))


def test_parse_empty_document():
    g = parse_turtle("")
    assert len(g) == 0
    assert g.prefixes == {}


def test_parse_single_statement_document():
    doc = '@prefix foaf: <http://xmlns.com/foaf/0.1/> . @prefix : <http://ex.org/> . :bob foaf:surname "Tanner" .'
    g = parse_turtle(doc)
    assert len(g) == 1
    assert g.prefixes == {"foaf": FOAF, "": EX}
    t = g.triples()[0]
    assert t.s == iri(EX + "bob")
    assert t.p == iri(FOAF + "surname")
    assert t.o == literal("Tanner")


def test_organizational_fixture_subjects(org_graph):
    subjects = {t.s for t in org_graph.triples()}
    assert iri("http://example.org/org/anne") in subjects
    assert iri("http://example.org/org/bob") in subjects


def test_duplicate_insert_leaves_size_unchanged():
    g = Graph()
    t = Triple(iri(EX + "s"), iri(EX + "p"), literal("x"))
    g.add(t)
    g.add(t)
    assert len(g) == 1


def test_numeric_shorthand_normalized():
    g = parse_turtle("@prefix : <http://ex.org/> . :s :p 42 ; :q 3.5 ; :r 1e3 ; :b true .")
    objects = {t.p.value.split("/")[-1]: t.o for t in g.triples()}
    assert objects["p"] == literal("42", XSD_INTEGER)
    assert objects["q"] == literal("3.5", XSD_DECIMAL)
    assert objects["r"].datatype.endswith("double")
    assert objects["b"].value == "true"


def test_predicate_object_lists_and_a_keyword():
    g = parse_turtle('@prefix : <http://ex.org/> . :s a :T ; :p "x", "y" .')
    assert len(g) == 3
    assert g.match(o=literal("x")) and g.match(o=literal("y"))


def test_blank_node_labels_and_anon():
    g = parse_turtle('@prefix : <http://ex.org/> . _:a :p :o . [] :q "v" .')
    assert len(g) == 2
    subjects = {t.s for t in g.triples()}
    assert blank("a") in subjects


def test_collections_rejected_with_clear_error():
    with pytest.raises(TurtleParseError, match="collection"):
        parse_turtle("@prefix : <http://ex.org/> . :s :p (1 2 3) .")


def test_undefined_prefix_error():
    with pytest.raises(UndefinedPrefixError):
        parse_turtle(":s :p :o .")


def test_relative_iri_without_base_rejected():
    with pytest.raises(InvalidIriError):
        parse_turtle("<s> <http://ex.org/p> <http://ex.org/o> .")


def test_base_resolution():
    g = parse_turtle("@base <http://ex.org/dir/> . <s> <p> <o> .")
    t = g.triples()[0]
    assert t.s == iri("http://ex.org/dir/s")


def test_syntax_error_carries_line_and_column():
    with pytest.raises(TurtleParseError) as excinfo:
        parse_turtle("@prefix : <http://ex.org/> .\n:s :p ;;; .")
    assert excinfo.value.line == 2
    assert excinfo.value.column > 0


def test_string_escapes_round_trip():
    g = parse_turtle('@prefix : <http://ex.org/> . :s :p "line\\nbreak \\"quoted\\" tab\\t\\\\" .')
    lit = g.triples()[0].o
    assert lit.value == 'line\nbreak "quoted" tab\t\\'
    again = parse_turtle(serialize_graph(g))
    assert again == g


def test_long_strings_and_language_tags():
    g = parse_turtle('@prefix : <http://ex.org/> . :s :p """multi\nline""" ; :q "bonjour"@fr .')
    values = {t.o.value for t in g.triples()}
    assert "multi\nline" in values
    langs = {t.o.lang for t in g.triples()}
    assert "fr" in langs


def test_load_order_independence():
    statements = [
        ':anne :knows :bob .',
        ':bob :surname "Tanner" .',
        ':anne :surname "Miller" .',
        "_:x :p :anne .",
    ]
    prefix = "@prefix : <http://ex.org/> .\n"
    base = parse_turtle(prefix + "\n".join(statements))
    for perm in itertools.permutations(statements):
        assert parse_turtle(prefix + "\n".join(perm)) == base


def test_serialize_parse_round_trip_fixtures(org_graph, coypu_backend, qald_backend):
    for graph in (org_graph, coypu_backend.graph, qald_backend.graph):
        assert parse_turtle(serialize_graph(graph)) == graph


def test_directory_merge_scopes_blank_labels(tmp_path):
    (tmp_path / "a.ttl").write_text("@prefix : <http://ex.org/> . _:n :p :o1 .", encoding="utf-8")
    (tmp_path / "b.ttl").write_text("@prefix : <http://ex.org/> . _:n :p :o2 .", encoding="utf-8")
    merged = load_graph(tmp_path)
    assert len(merged) == 2
    subjects = {t.s.value for t in merged.triples()}
    assert subjects == {"d0_n", "d1_n"}
    assert merged.prefixes == {"": EX}


def test_match_pattern_examples(org_graph):
    g = parse_turtle('@prefix foaf: <http://xmlns.com/foaf/0.1/> . @prefix : <http://ex.org/> . :bob foaf:surname "Tanner" .')
    assert len(g.match()) == 1
    got = g.match(s=iri(EX + "bob"), p=iri(FOAF + "surname"))
    assert [t.o for t in got] == [literal("Tanner")]
    # wrong-entity lookup: nothing in the organizational fixture mentions
    # :charles, so the subject index comes back empty
    assert org_graph.match(s=iri("http://example.org/org/charles")) == []
    assert all(t.s != iri("http://example.org/org/charles") for t in org_graph.triples())


_term_st = st.one_of(
    st.sampled_from([iri(EX + n) for n in "abcd"]),
    st.sampled_from([blank(n) for n in "xy"]),
    st.sampled_from([literal(v) for v in ("1", "2")]),
)
_subject_st = st.sampled_from([iri(EX + n) for n in "abcd"] + [blank("x"), blank("y")])
_predicate_st = st.sampled_from([iri(EX + p) for p in ("p", "q")])


@st.composite
def _graphs(draw):
    g = Graph()
    for _ in range(draw(st.integers(0, 12))):
        g.add(Triple(draw(_subject_st), draw(_predicate_st), draw(_term_st)))
    return g


@settings(max_examples=150, deadline=None)
@given(_graphs(), st.booleans(), st.booleans(), st.booleans(), st.data())
def test_match_equals_brute_force_filter(graph, bind_s, bind_p, bind_o, data):
    s = data.draw(_subject_st) if bind_s else None
    p = data.draw(_predicate_st) if bind_p else None
    o = data.draw(_term_st) if bind_o else None
    expected = sorted(
        (
            t
            for t in graph.triples()
            if (s is None or t.s == s) and (p is None or t.p == p) and (o is None or t.o == o)
        ),
        key=Triple.sort_key,
    )
    assert graph.match(s, p, o) == expected


_nasty_literals = st.one_of(
    st.text(max_size=12).map(literal),
    st.text(max_size=6).map(lambda s: literal(s, lang="en")),
    st.text(max_size=6).map(lambda s: literal(s, datatype=EX + "dt")),
    st.sampled_from([literal('say "hi"\n\t\\'), literal("42", XSD_INTEGER)]),
)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(_subject_st, _predicate_st, st.one_of(_term_st, _nasty_literals)), max_size=10))
def test_serialize_parse_round_trip_random_graphs(triples):
    g = Graph(prefixes={"ex": EX})
    for s, p, o in triples:
        g.add(Triple(s, p, o))
    assert parse_turtle(serialize_graph(g)) == g


def test_document_ending_inside_statement_is_clean_error():
    # a comment can swallow the rest of the line mid-statement; EOF in
    # object position must be a parse error, never a crash
    with pytest.raises(TurtleParseError, match="expected object"):
        parse_turtle('@prefix : <http://ex.org/> . :s :p "x"@enS; :q#4.u , _&b . [] :r tr}e .')
    with pytest.raises(TurtleParseError):
        parse_turtle("@prefix : <http://ex.org/> . :s :p ")


def test_mutation_fuzz_raises_only_turtle_errors():
    rng = random.Random(20240611)
    base = '@prefix : <http://ex.org/> . :s :p "x"@en ; :q 4.5 , _:b . [] :r true .'
    for _ in range(15000):
        chars = list(base)
        for _ in range(rng.randrange(1, 8)):
            chars[rng.randrange(len(chars))] = chr(rng.randrange(32, 127))
        doc = "".join(chars)
        try:
            parse_turtle(doc)
        except TurtleParseError:
            pass
    for cut in range(len(base)):
        try:
            parse_turtle(base[:cut])
        except TurtleParseError:
            pass


def test_every_triple_reachable_through_each_index():
    rng = random.Random(7)
    g = Graph()
    for _ in range(40):
        g.add(
            Triple(
                iri(EX + f"s{rng.randint(0, 5)}"),
                iri(EX + f"p{rng.randint(0, 2)}"),
                literal(str(rng.randint(0, 5))),
            )
        )
    for t in g.triples():
        assert t in g.match(s=t.s)
        assert t in g.match(p=t.p)
        assert t in g.match(o=t.o)
