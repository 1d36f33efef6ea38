import importlib.util
from pathlib import Path

import pytest

DEMOS = Path(__file__).resolve().parents[1] / "demos"


def load_demos():
    spec = importlib.util.spec_from_file_location("reproduce_figures", DEMOS / "reproduce_figures.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


@pytest.fixture(scope="module")
def regenerated(tmp_path_factory):
    mod = load_demos()
    out = tmp_path_factory.mktemp("demos")
    return mod, out, mod.run_all(out)


def test_every_sweep_runs_quickly(regenerated):
    _, _, report = regenerated
    assert report
    for name, (code, secs) in report.items():
        assert code == 0, name
        assert secs < 300, name


def test_curve_families(regenerated):
    mod, out, _ = regenerated
    failed = [f"{label}: {detail}" for label, ok, detail in mod.check_families(out) if not ok]
    assert not failed


def test_checksums(regenerated):
    mod, out, _ = regenerated
    assert mod.digests(out) == mod.read_checksums()
