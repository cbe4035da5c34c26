import filecmp
import json
from importlib import resources

import pytest
from click.testing import CliRunner

from bicorn import __version__, suite
from bicorn.cli import main

DATA = resources.files("bicorn") / "data"


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, env=None):
        return runner.invoke(main, list(args), env=env, catch_exceptions=False)

    return invoke


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_disjoint_transcript(run, tmp_path):
    path = write(tmp_path, "empty.json", {"vertices": [], "a_cycle": [], "b_cycle": [], "rotations": {}, "genus": 2})
    res = run("surgery", "--input", path)
    assert res.exit_code == 0
    assert "steps 0" in res.output
    assert f"# bicorn {__version__} seed=2024 input=" in res.output


def test_sample_transcript(run):
    res = run("surgery", "--input", str(DATA / "pairs" / "genus2_sample.json"))
    assert res.exit_code == 0
    assert "steps 2" in res.output and "intersections 8 2 0" in res.output
    assert "bicorns 2" in res.output


def test_bigon_instance_rejected(run, tmp_path):
    raw = {
        "vertices": [0, 1],
        "a_cycle": [0, 1],
        "b_cycle": [0, 1],
        "rotations": {"0": ["a+", "b+", "a-", "b-"], "1": ["a+", "b-", "a-", "b+"]},
    }
    res = run("surgery", "--input", write(tmp_path, "bad.json", raw))
    assert res.exit_code == 2
    assert "BigonPresent" in res.output and "bad.json:1" in res.output


def test_missing_input(run, tmp_path):
    res = run("track", "--input", str(tmp_path / "nope.json"))
    assert res.exit_code == 2


def test_track_report(run, tmp_path):
    out = tmp_path / "out"
    res = run("track", "--input", str(DATA / "tracks" / "theta.json"), "--out", str(out))
    assert res.exit_code == 0
    text = (out / "track.txt").read_text()
    assert "recurrent=true" in text and "split 0 left carried=true" in text
    assert (out / "track.dot").read_text().startswith("// bicorn")


def test_coarse_tree_and_coned_path(run, tmp_path):
    out = tmp_path / "tree"
    assert run("coarse", "--input", str(DATA / "graphs" / "tree0.json"), "--out", str(out)).exit_code == 0
    rows = (out / "delta.csv").read_text().splitlines()
    assert rows[2].startswith("base,exhaustive,0,")
    out = tmp_path / "path"
    assert run("coarse", "--input", str(DATA / "graphs" / "path5.json"), "--out", str(out)).exit_code == 0
    assert "v0,v4,4,1" in (out / "distances.csv").read_text().splitlines()


def test_outputs_are_deterministic(run, tmp_path):
    args = ["coarse", "--input", str(DATA / "graphs" / "petersen.json"), "--sample", "50"]
    one = run(*args, "--out", str(tmp_path / "a"))
    two = run(*args, "--out", str(tmp_path / "b"))
    assert one.exit_code == two.exit_code == 0
    cmp = filecmp.dircmp(tmp_path / "a", tmp_path / "b")
    assert not cmp.diff_files and not cmp.left_only and not cmp.right_only


def test_env_override(run):
    res = run("models", "--kind", "tree", "--bound", "2", env={"BICORN_SEED": "7"})
    assert res.exit_code == 0
    res = run("models", "--kind", "drift", "--bound", "4", "--sample", "20", env={"BICORN_SEED": "7"})
    assert "seed=7" in res.output.splitlines()[1]


def test_json_outputs_are_stamped_and_loadable(run, tmp_path):
    assert run("models", "--kind", "tree", "--bound", "2", "--out", str(tmp_path)).exit_code == 0
    doc = json.loads((tmp_path / "tree2.json").read_text())
    assert doc["meta"]["version"] == __version__ and doc["meta"]["seed"] == 2024
    res = run("coarse", "--input", str(tmp_path / "tree2.json"), "--automorphism", str(tmp_path / "tree2_b.json"))
    assert res.exit_code == 0
    assert "# tail_slope=" in res.output


def test_model_suite_regenerates_frozen_files(run, tmp_path):
    res = run("coarse", "--model-suite", "--out", str(tmp_path))
    assert res.exit_code == 0
    for name in ("regression.json", "drift_free_tree.csv"):
        assert (tmp_path / name).read_bytes() == (DATA / name).read_bytes()
    assert (tmp_path / "MANIFEST").read_text().startswith(f"# bicorn {__version__} seed=2024")


def test_suite_filter_twice(run, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    res = run("suite", "--filter", "coarse", "--no-determinism", "--out", str(a))
    assert res.exit_code == 0
    assert [line[:8] for line in res.output.splitlines()] == ["PASS [5]", "PASS [6]", "PASS [7]", "PASS [8]"]
    run("suite", "--filter", "coarse", "--no-determinism", "--out", str(b))
    cmp = filecmp.dircmp(a, b)
    assert sorted(cmp.same_files) == sorted(p.name for p in a.iterdir())
    summary = json.loads((a / "summary.json").read_text())
    assert summary["passed"] and [c["number"] for c in summary["criteria"]] == [5, 6, 7, 8]


def test_corrupted_fixture_is_named(run, monkeypatch):
    real = suite.data_text

    def corrupt(kind, name):
        text = real(kind, name)
        return text.replace("1,1,1", "1,1,2") if name == "drift_free_tree.csv" else text

    monkeypatch.setattr(suite, "data_text", corrupt)
    res = run("suite", "--filter", "9", "--no-determinism")
    assert res.exit_code == 1
    assert "FAIL [9] drift estimation" in res.output
    assert "first failing criterion: [9] drift estimation" in res.output


def test_unknown_filter(run):
    assert run("suite", "--filter", "nothing").exit_code == 2
