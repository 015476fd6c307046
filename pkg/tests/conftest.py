import pytest

from pathlib import Path

from sparqlbench.dataset import load_dataset
from sparqlbench.engine.remote import LocalBackend
from sparqlbench.evaluator import GoldStore
from sparqlbench.rdf.turtle import load_graph

REPO = Path(__file__).resolve().parent.parent
DATASETS = REPO / "datasets"

ORG_PREFIXES = {
    "": "http://example.org/org/",
    "foaf": "http://xmlns.com/foaf/0.1/",
    "org": "http://www.w3.org/ns/org#",
}


@pytest.fixture(scope="session")
def datasets_dir() -> Path:
    return DATASETS


@pytest.fixture(scope="session")
def org_dataset():
    return load_dataset(DATASETS / "organizational" / "manifest.json")


@pytest.fixture(scope="session")
def org_graph(org_dataset):
    return load_graph(org_dataset.graph_source())


@pytest.fixture(scope="session")
def org_backend(org_graph):
    return LocalBackend(org_graph)


@pytest.fixture(scope="session")
def org_gold(org_dataset, org_backend):
    return GoldStore(org_dataset, org_backend)


@pytest.fixture(scope="session")
def coypu_dataset():
    return load_dataset(DATASETS / "coypu" / "manifest.json")


@pytest.fixture(scope="session")
def coypu_backend(coypu_dataset):
    return LocalBackend(load_graph(coypu_dataset.graph_source()))


@pytest.fixture(scope="session")
def coypu_gold(coypu_dataset, coypu_backend):
    return GoldStore(coypu_dataset, coypu_backend)


@pytest.fixture(scope="session")
def qald_dataset():
    return load_dataset(DATASETS / "qald10" / "manifest.json")


@pytest.fixture(scope="session")
def qald_backend(qald_dataset):
    return LocalBackend(load_graph(qald_dataset.graph_source()))


@pytest.fixture(scope="session")
def qald_gold(qald_dataset, qald_backend):
    return GoldStore(qald_dataset, qald_backend)
