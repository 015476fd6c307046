"""Query parsing: subset coverage, error partition, round trips."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from sparqlbench.rdf.terms import XSD_BOOLEAN, XSD_DECIMAL, XSD_INTEGER, iri, literal
from sparqlbench.sparql.ast import (
    STAR,
    Comparison,
    Constant,
    CountAggregate,
    Filter,
    FunctionCall,
    Logical,
    Not,
    OptionalGroup,
    OrderKey,
    Query,
    TriplePattern,
    Var,
)
from sparqlbench.sparql.errors import (
    ParseError,
    ProjectionUnbound,
    SparqlError,
    UnknownPrefix,
    UnsupportedFeature,
)
from sparqlbench.sparql.parser import parse_query
from sparqlbench.sparql.serializer import serialize_query

from conftest import ORG_PREFIXES

EX = "http://example.org/org/"
FOAF = "http://xmlns.com/foaf/0.1/"


def test_table_style_select(org_dataset):
    q = parse_query("SELECT ?surname WHERE { :bob foaf:surname ?surname . }", ORG_PREFIXES)
    assert q.form == "select"
    assert q.projection == (Var("surname"),)
    assert q.where == (TriplePattern(iri(EX + "bob"), iri(FOAF + "surname"), Var("surname")),)


def test_unbound_projection_is_parse_error_subtype():
    ambient = {"ns2": "https://schema.coypu.org/global#"}
    text = "SELECT ?latitude WHERE { <https://data.coypu.org/port/AUDKB> ns2:hasLatitude ?longitude }"
    with pytest.raises(ProjectionUnbound) as excinfo:
        parse_query(text, ambient)
    assert isinstance(excinfo.value, ParseError)
    assert excinfo.value.variable == "latitude"
    # the strict-projection toggle downgrades it to a plain warning-free parse
    q = parse_query(text, ambient, strict_projection=False)
    assert q.projection == (Var("latitude"),)


def test_natural_language_is_parse_error():
    with pytest.raises(ParseError):
        parse_query("What is the surname of Bob Tanner?", ORG_PREFIXES)


def test_missing_trailing_dot_tolerated():
    q = parse_query("SELECT ?s WHERE { :bob foaf:surname ?s }", ORG_PREFIXES)
    assert len(q.where) == 1


def test_keywords_case_insensitive_vars_case_sensitive():
    q = parse_query("select Distinct ?X wHeRe { ?X foaf:knows ?y . } limit 3", ORG_PREFIXES)
    assert q.distinct and q.limit == 3
    assert q.projection == (Var("X"),)


def test_dollar_sigil():
    q = parse_query("SELECT $x WHERE { $x foaf:knows $y . }", ORG_PREFIXES)
    assert q.projection == (Var("x"),)


def test_keyword_spelled_prefix_is_a_prefixed_name():
    # 'select:' must lex as a prefixed name, not the SELECT keyword
    ambient = dict(ORG_PREFIXES, select="http://kw.example/")
    q = parse_query("SELECT ?x WHERE { ?x select:foo ?y . }", ambient)
    assert q.where[0].p == iri("http://kw.example/foo")


def test_sparql_style_prefix_in_turtle():
    from sparqlbench.rdf.turtle import parse_turtle

    g = parse_turtle('PREFIX ex: <http://ex.org/>\nex:s ex:p "v" .')
    assert len(g) == 1
    assert g.prefixes == {"ex": "http://ex.org/"}


def test_prologue_shadows_ambient():
    text = 'PREFIX foaf: <http://other.example/> SELECT ?s WHERE { ?s foaf:p ?o . }'
    q = parse_query(text, ORG_PREFIXES)
    pattern = q.where[0]
    assert pattern.p == iri("http://other.example/p")


def test_unknown_prefix():
    with pytest.raises(UnknownPrefix):
        parse_query("SELECT ?x WHERE { ?x nosuch:p ?y . }", ORG_PREFIXES)


def test_ask_and_empty_group():
    q = parse_query("ASK WHERE { }", {})
    assert q.form == "ask" and q.where == ()
    q = parse_query("ASK { :bob foaf:surname ?s . }", ORG_PREFIXES)
    assert q.form == "ask"


def test_group_by_count():
    q = parse_query(
        "SELECT ?d (COUNT(?p) AS ?c) WHERE { ?p org:memberOf ?d . } GROUP BY ?d",
        ORG_PREFIXES,
    )
    assert q.group_by == (Var("d"),)
    agg = q.projection[1]
    assert isinstance(agg, CountAggregate) and agg.argument == Var("p") and agg.alias == Var("c")


def test_bare_count_shorthand_accepted():
    q = parse_query("SELECT COUNT(?p) WHERE { ?p a foaf:Person . }", ORG_PREFIXES)
    assert isinstance(q.projection[0], CountAggregate)


def test_bare_variable_alongside_aggregate_needs_group_by():
    with pytest.raises(ParseError):
        parse_query("SELECT ?d (COUNT(?p) AS ?c) WHERE { ?p org:memberOf ?d . }", ORG_PREFIXES)


def test_filters_and_optional():
    q = parse_query(
        'SELECT ?x WHERE { ?x foaf:name ?n . FILTER (CONTAINS(?n, "a")) OPTIONAL { ?x foaf:mbox ?m . } }',
        ORG_PREFIXES,
    )
    kinds = [type(el).__name__ for el in q.where]
    assert kinds == ["TriplePattern", "Filter", "OptionalGroup"]


@pytest.mark.parametrize(
    "text,construct",
    [
        ("SELECT ?x WHERE { { ?x a foaf:Person } UNION { ?x a foaf:Agent } }", "nested group"),
        ("SELECT ?x WHERE { ?x a foaf:Person MINUS { ?x foaf:mbox ?m } }", "MINUS"),
        ("CONSTRUCT { ?s ?p ?o } WHERE { ?s ?p ?o }", "CONSTRUCT"),
        ("DESCRIBE ?x WHERE { ?x a foaf:Person }", "DESCRIBE"),
        ("SELECT ?x WHERE { ?x foaf:knows/foaf:name ?y }", "property path"),
        ("SELECT ?x WHERE { ?x (foaf:knows|foaf:made) ?y }", "RDF collection"),
        ("SELECT ?x WHERE { SELECT ?x WHERE { ?x a foaf:Person } }", "subquery"),
        ("SELECT ?x WHERE { VALUES ?x { :bob } ?x a foaf:Person }", "VALUES"),
        ('SELECT ?x WHERE { BIND("a" AS ?x) }', "BIND"),
        ("SELECT (SUM(?y) AS ?s) WHERE { ?x :p ?y }", "aggregate SUM"),
        ("SELECT (COUNT(DISTINCT ?x) AS ?c) WHERE { ?x a foaf:Person }", "COUNT DISTINCT"),
        ("SELECT ?x WHERE { ?x a foaf:Person } HAVING (?x > 1)", "HAVING"),
        ("SELECT ?x FROM <http://ex.org/g> WHERE { ?x a foaf:Person }", "FROM"),
        ("SELECT ?x WHERE { ?x a foaf:Person . FILTER (STRLEN(?x) > 1) }", "STRLEN"),
        ("SELECT ?x WHERE { GRAPH <http://ex.org/g> { ?x a foaf:Person } }", "GRAPH"),
        ("SELECT ?x WHERE { SERVICE <http://ex.org/sparql> { ?x a foaf:Person } }", "SERVICE"),
    ],
)
def test_recognized_but_unsupported(text, construct):
    with pytest.raises(UnsupportedFeature):
        parse_query(text, ORG_PREFIXES)


def test_error_partition_on_random_bytes():
    rng = random.Random(20240501)
    outcomes = {"ast": 0, "parse": 0, "unsupported": 0, "prefix": 0}
    for _ in range(20000):
        raw = bytes(rng.randrange(256) for _ in range(rng.randrange(0, 60)))
        text = raw.decode("latin-1")
        try:
            parse_query(text, ORG_PREFIXES)
            outcomes["ast"] += 1
        except ProjectionUnbound:
            outcomes["parse"] += 1
        except UnsupportedFeature:
            outcomes["unsupported"] += 1
        except UnknownPrefix:
            outcomes["prefix"] += 1
        except ParseError:
            outcomes["parse"] += 1
    assert outcomes["parse"] > 0
    assert sum(outcomes.values()) == 20000


def test_mutation_fuzz_raises_only_sparql_errors():
    # mutations of a valid query reach much deeper parser states than
    # random bytes; every failure must stay inside the error taxonomy
    rng = random.Random(20240612)
    base = (
        "PREFIX ex: <http://ex.org/> SELECT DISTINCT ?x (COUNT(?y) AS ?c) "
        'WHERE { ?x ex:p ?y . OPTIONAL { ?y ex:q "lit"@en . } '
        'FILTER (REGEX(STR(?x), "^a", "i") && ?y > 4.5) } '
        "GROUP BY ?x ORDER BY DESC(?c) LIMIT 10 OFFSET 2"
    )
    for _ in range(15000):
        chars = list(base)
        for _ in range(rng.randrange(1, 8)):
            chars[rng.randrange(len(chars))] = chr(rng.randrange(32, 127))
        try:
            parse_query("".join(chars))
        except SparqlError:
            pass
    for cut in range(len(base)):
        try:
            parse_query(base[:cut])
        except SparqlError:
            pass


def test_deep_nesting_is_parse_error_not_crash():
    with pytest.raises(SparqlError):
        parse_query("SELECT ?x WHERE { " + "OPTIONAL { " * 500 + "}" * 501, {})
    with pytest.raises(SparqlError):
        parse_query("SELECT ?x WHERE { ?x ?p ?o . FILTER " + "(" * 500 + "?x" + ")" * 500 + " }", {})


# --- round trips -------------------------------------------------------------

_names = st.sampled_from(["x", "y", "z", "name", "Count_1"])
_vars = st.builds(Var, _names)
_iris = st.sampled_from([iri(EX + n) for n in ("anne", "bob", "knows", "p1")])
_literals = st.one_of(
    st.text(max_size=8).map(literal),
    st.sampled_from([literal("5", XSD_INTEGER), literal("2.5", XSD_DECIMAL), literal("true", XSD_BOOLEAN), literal("chat", lang="fr")]),
)
_terms = st.one_of(_iris, _literals)


@st.composite
def _patterns(draw):
    s = draw(st.one_of(_vars, _iris))
    p = draw(st.one_of(_vars, _iris))
    o = draw(st.one_of(_vars, _terms))
    return TriplePattern(s, p, o)


@st.composite
def _expressions(draw, depth=0):
    if depth >= 2:
        return draw(st.one_of(_vars, st.builds(Constant, _terms)))
    branch = draw(st.integers(0, 5))
    if branch == 0:
        return draw(_vars)
    if branch == 1:
        return Constant(draw(_terms))
    if branch == 2:
        return Comparison(
            draw(st.sampled_from(["=", "!=", "<", "<=", ">", ">="])),
            draw(_expressions(depth + 1)),
            draw(_expressions(depth + 1)),
        )
    if branch == 3:
        return Logical(draw(st.sampled_from(["&&", "||"])), draw(_expressions(depth + 1)), draw(_expressions(depth + 1)))
    if branch == 4:
        return Not(draw(_expressions(depth + 1)))
    name = draw(st.sampled_from(["BOUND", "STR", "LANG", "DATATYPE", "REGEX", "CONTAINS", "STRSTARTS"]))
    if name == "BOUND":
        return FunctionCall(name, (draw(_vars),))
    if name in ("STR", "LANG", "DATATYPE"):
        return FunctionCall(name, (draw(_expressions(depth + 1)),))
    return FunctionCall(name, (draw(_expressions(depth + 1)), draw(_expressions(depth + 1))))


@st.composite
def _elements(draw, depth=0):
    branch = draw(st.integers(0, 3 if depth == 0 else 1))
    if branch <= 1:
        return draw(_patterns())
    if branch == 2:
        return Filter(draw(_expressions()))
    return OptionalGroup(tuple(draw(st.lists(_elements(depth + 1), min_size=1, max_size=2))))


@st.composite
def _queries(draw):
    where = tuple(draw(st.lists(_elements(), min_size=0, max_size=4)))
    form = draw(st.sampled_from(["select", "ask"]))
    query = Query(form=form, where=where)
    if form == "ask":
        return query
    bound = []
    from sparqlbench.sparql.ast import pattern_variables

    bound = pattern_variables(where)
    query.distinct = draw(st.booleans())
    if bound and draw(st.booleans()):
        if draw(st.booleans()):
            group = draw(st.lists(st.sampled_from(bound), min_size=1, max_size=2, unique=True))
            query.group_by = tuple(group)
            projection = list(group)
            if draw(st.booleans()):
                projection.append(CountAggregate(draw(st.sampled_from(bound + [None])), Var("agg")))
            query.projection = tuple(projection)
        else:
            query.projection = tuple(draw(st.lists(st.sampled_from(bound), min_size=1, max_size=3, unique=True)))
    elif bound:
        query.projection = (CountAggregate(None, Var("total")),)
    else:
        query.projection = STAR
    if draw(st.booleans()):
        query.order_by = tuple(
            OrderKey(draw(_expressions()), draw(st.booleans())) for _ in range(draw(st.integers(1, 2)))
        )
    if draw(st.booleans()):
        query.limit = draw(st.integers(0, 50))
    if draw(st.booleans()):
        query.offset = draw(st.integers(0, 50))
    return query


@settings(max_examples=300, deadline=None)
@given(_queries())
def test_round_trip_fuzzed_asts(query):
    text = serialize_query(query)
    reparsed = parse_query(text, strict_projection=False)
    assert reparsed == query, text


def test_round_trip_count_star_ast():
    query = Query(
        form="select",
        projection=(CountAggregate(None, Var("c")),),
        where=(TriplePattern(Var("s"), iri(EX + "p"), Var("o")),),
    )
    text = serialize_query(query)
    assert parse_query(text) == query


def test_round_trip_ask_with_empty_where():
    query = Query(form="ask", where=())
    text = serialize_query(query)
    assert text == "ASK WHERE { }"
    assert parse_query(text) == query


def test_round_trip_gold_queries(org_dataset, coypu_dataset, qald_dataset):
    for dataset in (org_dataset, coypu_dataset, qald_dataset):
        for record in dataset.records:
            ast = parse_query(record.gold_query, dataset.prefix_preamble)
            assert parse_query(serialize_query(ast)) == ast, record.id
