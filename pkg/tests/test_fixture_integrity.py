"""The committed fixtures are exactly what the generator produces."""

import importlib.util
from pathlib import Path

from conftest import DATASETS

REPO = Path(__file__).resolve().parent.parent


def _load_generator():
    spec = importlib.util.spec_from_file_location("make_fixtures", REPO / "scripts" / "make_fixtures.py")
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def test_regenerated_fixtures_match_committed_bytes(tmp_path):
    generator = _load_generator()
    generator.set_output_dir(tmp_path)
    generator.build_organizational()
    generator.build_coypu()
    generator.build_qald()
    generator.verify()

    fresh = {p.relative_to(tmp_path): p.read_bytes() for p in sorted(tmp_path.rglob("*")) if p.is_file()}
    committed = {p.relative_to(DATASETS): p.read_bytes() for p in sorted(DATASETS.rglob("*")) if p.is_file()}
    assert set(fresh) == set(committed)
    for name in fresh:
        assert fresh[name] == committed[name], f"{name} drifted from the generator output"
