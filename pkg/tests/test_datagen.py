"""Generation pipeline against recorded transcripts; no network ever."""

import json

import pytest

from sparqlbench.datagen import (
    ChatClient,
    ChatClientConfig,
    DatagenAborted,
    GenerationCandidate,
    PromptBudgetExceeded,
    generate_candidates,
    paraphrase_all,
    run_datagen,
    verify_candidate,
)
from sparqlbench.rdf.turtle import parse_turtle

from conftest import ORG_PREFIXES


def replay_client(tmp_path, contents: list[str]) -> ChatClient:
    path = tmp_path / "transcript.ndjson"
    lines = [json.dumps({"request": {"seq": i}, "response": {"content": c}}) for i, c in enumerate(contents)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return ChatClient(ChatClientConfig(replay_path=str(path)))


THREE_TUPLES = json.dumps(
    [
        {
            "question": "What is the surname of Bob Tanner?",
            "query": "SELECT ?surname WHERE { :bob foaf:surname ?surname . }",
            "expected": "Tanner",
        },
        {
            "question": "Is Bob Tanner a member of the Sales department?",
            "query": "ASK { :bob org:memberOf :sales . }",
            "expected": "true",
        },
        {
            "question": "How many people are members of the Research department?",
            "query": "SELECT (COUNT(?p) AS ?count) WHERE { ?p org:memberOf :research . }",
            "expected": "3",
        },
    ]
)


def test_replay_with_three_tuples(org_graph, tmp_path):
    chat = replay_client(tmp_path, [THREE_TUPLES])
    candidates = generate_candidates(org_graph, 3, chat)
    assert len(candidates) == 3
    assert candidates[0].question == "What is the surname of Bob Tanner?"


def test_malformed_then_valid_retry(org_graph, tmp_path):
    chat = replay_client(tmp_path, ["sorry, no json here {", THREE_TUPLES])
    candidates = generate_candidates(org_graph, 3, chat)
    assert len(candidates) == 3


def test_all_retries_malformed_yields_nothing(org_graph, tmp_path):
    chat = replay_client(tmp_path, ["bad"] * 3)
    assert generate_candidates(org_graph, 3, chat) == []


def test_empty_graph_is_not_a_budget_error(tmp_path):
    chat = replay_client(tmp_path, [THREE_TUPLES])
    empty = parse_turtle("")
    candidates = generate_candidates(empty, 3, chat)
    assert len(candidates) == 3
    checked = verify_candidate(candidates[0], empty, ORG_PREFIXES)
    assert not checked.verified


def test_prompt_budget_cap(org_graph, tmp_path):
    chat = replay_client(tmp_path, [THREE_TUPLES])
    with pytest.raises(PromptBudgetExceeded):
        generate_candidates(org_graph, 3, chat, triple_cap=5)


def test_verify_accepts_matching_values(org_graph):
    candidate = GenerationCandidate(
        "What is the surname of Bob Tanner?",
        "SELECT ?surname WHERE { :bob foaf:surname ?surname . }",
        "Tanner",
    )
    checked = verify_candidate(candidate, org_graph, ORG_PREFIXES)
    assert checked.verified and checked.rejection_reason is None


def test_verify_rejects_parse_failures(org_graph):
    candidate = GenerationCandidate("q", "this is not sparql", "x")
    checked = verify_candidate(candidate, org_graph, ORG_PREFIXES)
    assert not checked.verified
    assert checked.rejection_reason.startswith("ParseError")


def test_verify_rejects_value_mismatch(org_graph):
    candidate = GenerationCandidate(
        "How many people are members of the Research department?",
        "SELECT (COUNT(?p) AS ?count) WHERE { ?p org:memberOf :research . }",
        "41",
    )
    checked = verify_candidate(candidate, org_graph, ORG_PREFIXES)
    assert not checked.verified
    assert checked.rejection_reason.startswith("ValueMismatch")


def test_verify_boolean_and_multi_value(org_graph):
    ask = GenerationCandidate("Is Bob in Sales?", "ASK { :bob org:memberOf :sales . }", "true")
    assert verify_candidate(ask, org_graph, ORG_PREFIXES).verified
    multi = GenerationCandidate(
        "Who belongs to Research?",
        "SELECT ?s WHERE { ?p org:memberOf :research . ?p foaf:surname ?s . }",
        "Miller, Fisher, Becker",
    )
    assert verify_candidate(multi, org_graph, ORG_PREFIXES).verified


def test_paraphrase_happy_path(tmp_path):
    records = [GenerationCandidate("What is the surname of Bob Tanner?", "Q", "Tanner", True)]
    chat = replay_client(tmp_path, ["Which surname does Bob Tanner have?"])
    out = paraphrase_all(records, chat)
    assert out[0].paraphrase == "Which surname does Bob Tanner have?"
    assert not out[0].degenerate


def test_paraphrase_identical_retried_once(tmp_path):
    records = [GenerationCandidate("Same question?", "Q", "x", True)]
    chat = replay_client(tmp_path, ["same question?", "A different phrasing?"])
    out = paraphrase_all(records, chat)
    assert out[0].paraphrase == "A different phrasing?"
    records = [GenerationCandidate("Same question?", "Q", "x", True)]
    chat = replay_client(tmp_path, ["same question?", "SAME QUESTION?"])
    out = paraphrase_all(records, chat)
    assert out[0].degenerate  # accepted with a warning flag after one retry


def test_paraphrase_empty_input(tmp_path):
    chat = replay_client(tmp_path, [])
    assert paraphrase_all([], chat) == []


def test_no_network_during_replay(org_graph, tmp_path, monkeypatch):
    import requests

    def explode(*args, **kwargs):
        raise AssertionError("network call during replay")

    monkeypatch.setattr(requests, "post", explode)
    monkeypatch.setattr(requests.sessions.Session, "request", explode)
    chat = replay_client(tmp_path, [THREE_TUPLES, "p1?", "p2?", "p3?"])
    manifest = run_datagen(
        org_graph, chat, tmp_path / "m.json", n=3, dataset_name="gen", prefix_preamble=ORG_PREFIXES
    )
    assert len(manifest["records"]) == 3


def test_replay_is_byte_deterministic(org_graph, tmp_path):
    for name in ("a.json", "b.json"):
        chat = replay_client(tmp_path, [THREE_TUPLES, "p1?", "p2?", "p3?"])
        run_datagen(org_graph, chat, tmp_path / name, n=3, dataset_name="gen", prefix_preamble=ORG_PREFIXES)
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_generated_manifest_loads_and_passes_gold_self_test(org_graph, org_backend, tmp_path, datasets_dir):
    chat = replay_client(tmp_path, [THREE_TUPLES, "p1?", "p2?", "p3?"])
    out = tmp_path / "generated.json"
    run_datagen(
        org_graph,
        chat,
        out,
        n=3,
        dataset_name="gen",
        prefix_preamble=ORG_PREFIXES,
        backend_spec={"kind": "local", "graph": str(datasets_dir / "organizational" / "graph.ttl")},
        test_count=1,
    )
    from sparqlbench.dataset import load_dataset
    from sparqlbench.evaluator import GoldStore, OutcomeKind, classify

    ds = load_dataset(out)
    assert len(ds.records) == 3
    gold = GoldStore(ds, org_backend)
    for record in ds.records:
        assert classify(record, record.gold_query, ds, org_backend, gold).kind is OutcomeKind.CORRECT


def test_transport_abort_persists_partial(org_graph, tmp_path):
    # transcript ends after the first paraphrase: the second one aborts
    chat = replay_client(tmp_path, [THREE_TUPLES, "p1?"])
    out = tmp_path / "partial.json"
    with pytest.raises(DatagenAborted):
        run_datagen(org_graph, chat, out, n=3, dataset_name="gen", prefix_preamble=ORG_PREFIXES)
    manifest = json.loads(out.read_text())
    assert len(manifest["records"]) == 1
