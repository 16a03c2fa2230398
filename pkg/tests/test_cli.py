"""
Tests for the command line and the run configuration
"""

import io
import json
import os

import pytest
from pydantic import ValidationError

from app import EXIT_FAILED, EXIT_OK, EXIT_USAGE, run
from config import ConfigError, RunConfig, load_config
from planarmap.mapfile import read_map
from planarmap.validate import validate
from skeleton.forest import loads_forest
from skeleton.utree import loads_geodesic_tree


@pytest.fixture
def hull_file(tmp_path, capsys):
    path = str(tmp_path / "hull.map")
    assert run(["sample-hull", "--h", "0.2", "--radius", "3", "--seed", "1", "--validate", "--out", path]) == EXIT_OK
    capsys.readouterr()
    return path


# ============================================================================
# Commands
# ============================================================================


def test_tables(capsys):
    assert run(["tables", "--h", "0.125", "--pmax", "20"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("# ")
    kinds = {line.split()[0] for line in lines[1:]}
    assert kinds == {"disk_w", "cone_c", "theta", "pi", "mu"}
    disk = [line.split() for line in lines if line.startswith("disk_w ")]
    assert disk[0][1] == "1"


def test_tables_csv(tmp_path, capsys):
    out = str(tmp_path / "csv")
    assert run(["tables", "--m", "0.5", "--pmax", "10", "--n", "2", "--csv-dir", out]) == EXIT_OK
    assert "countTnp 1 " in capsys.readouterr().out
    assert sorted(os.listdir(out)) == ["cone_c.csv", "countTnp.csv", "disk_w.csv", "mu.csv", "pi.csv", "theta.csv"]


def test_usage_errors(capsys):
    assert run(["sample-hull", "--radius", "3"]) == EXIT_USAGE
    assert run(["sample-hull", "--h", "0.2"]) == EXIT_USAGE
    assert run(["tables", "--h", "0.2", "--lambda", "0.01"]) == EXIT_USAGE
    assert run(["tables", "--h", "0.5"]) == EXIT_USAGE
    assert run(["no-such-command"]) == EXIT_USAGE
    assert run(["sample-disk", "--h", "0.2", "--p", "0"]) == EXIT_USAGE
    assert run(["sample-disk", "--h", "0.2", "--samples", "2"]) == EXIT_USAGE
    assert capsys.readouterr().out == ""


def test_stage_failures_exit_one(monkeypatch, capsys):
    assert run(["sample-disk", "--h", "0.125", "--p", "50", "--size-cap", "10", "--seed", "1"]) == EXIT_FAILED
    assert run(["sample-tree", "--h", "0.2", "--radius", "2", "--variant", "tau1",
                "--rejection-budget", "0", "--seed", "1"]) == EXIT_FAILED
    monkeypatch.setattr("app.run_hull_pipeline", lambda *args, **kwargs: {"error": "decode: open hole"})
    assert run(["sample-hull", "--h", "0.2", "--radius", "3", "--seed", "1"]) == EXIT_FAILED
    assert "sample-hull failed: decode: open hole" in capsys.readouterr().err


def test_radius_below_minimum_is_a_usage_error(capsys):
    assert run(["sample-hull", "--h", "0.2", "--radius", "0"]) == EXIT_USAGE
    assert run(["sample-strip", "--h", "0.2", "--radius", "0"]) == EXIT_USAGE


def test_help_exits_cleanly(capsys):
    assert run(["--help"]) == EXIT_OK


def test_encode_decode_round_trip(hull_file, tmp_path, capsys):
    forest_path = str(tmp_path / "hull.forest")
    fills = str(tmp_path / "fills")
    again_path = str(tmp_path / "again.map")
    assert run(["encode", hull_file, "--fills", fills, "--out", forest_path]) == EXIT_OK
    assert run(["decode", forest_path, fills, "--rooted", "--out", again_path]) == EXIT_OK
    assert read_map(again_path).same_as(read_map(hull_file))
    with open(forest_path) as f:
        assert loads_forest(f.read()).height == 3


def test_encode_from_stdin(hull_file, tmp_path, monkeypatch, capsys):
    with open(hull_file) as f:
        monkeypatch.setattr("sys.stdin", io.StringIO(f.read()))
    assert run(["encode", "-", "--fills", str(tmp_path / "fills")]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.rstrip().splitlines()[-1] == "mode cylinder"


def test_geodesic_tree_and_slices(hull_file, tmp_path, capsys):
    slices = str(tmp_path / "slices")
    assert run(["geodesic-tree", hull_file, "--slices", slices]) == EXIT_OK
    tree = loads_geodesic_tree(capsys.readouterr().out)
    assert tree.height == 3
    files = sorted(os.listdir(slices))
    assert len(files) == len(tree.leaves())
    assert all(validate(read_map(os.path.join(slices, name))).passed for name in files)


def test_samplers_write_numbered_files(tmp_path, capsys):
    out = str(tmp_path / "strip.map")
    assert run(["sample-strip", "--h", "0.125", "--radius", "3", "--variant", "S1",
                "--samples", "2", "--seed", "4", "--out", out]) == EXIT_OK
    assert sorted(os.listdir(tmp_path)) == ["strip_0.map", "strip_1.map"]
    assert run(["sample-tree", "--h", "0.2", "--radius", "2", "--variant", "tau1", "--seed", "4"]) == EXIT_OK
    assert loads_forest(capsys.readouterr().out).bottom_size == 1
    assert run(["sample-halfplane", "--h", "0.2", "--steps", "15", "--seed", "4"]) == EXIT_OK


def test_verify_emits_json(capsys):
    code = run(["verify", "yule", "--n", "16", "--samples", "400", "--seed", "7", "--seeds", "2", "--required", "1"])
    assert code in (0, 1)
    report = json.loads(capsys.readouterr().out)
    assert report["name"] == "yule"
    assert report["pass"] == (code == 0)
    assert len(report["replicates"]) == 2


# ============================================================================
# Configuration
# ============================================================================


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("HYPERMAP_SEED", "42")
    monkeypatch.setenv("HYPERMAP_JOBS", "3")
    cfg = load_config("sample-hull", {"h": 0.2})
    assert cfg.seed == 42
    assert cfg.jobs == 3
    assert load_config("sample-hull", {"h": 0.2, "seed": 1}).seed == 1


def test_config_file_precedence(tmp_path, monkeypatch):
    monkeypatch.delenv("HYPERMAP_SEED", raising=False)
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"h": 0.2, "seed": 3, "radius": 4}))
    cfg = load_config("sample-hull", {"lam": 0.01, "radius": None}, str(path))
    assert cfg.lam == 0.01 and cfg.h is None
    assert cfg.seed == 3
    assert cfg.radius == 4
    assert cfg.params.lam == pytest.approx(0.01)
    assert load_config("sample-hull", {}, str(path)).params.h == 0.2


def test_config_file_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "blue"}))
    with pytest.raises(ConfigError):
        load_config("tables", {}, str(bad))
    bad.write_text("[1, 2]")
    with pytest.raises(ConfigError):
        load_config("tables", {}, str(bad))
    with pytest.raises(ConfigError):
        load_config("tables", {}, str(tmp_path / "missing.json"))


def test_run_config_validation():
    with pytest.raises(ValidationError):
        RunConfig(command="verify", seeds=3, required=5)
    with pytest.raises(ValidationError):
        RunConfig(command="verify", threshold=1.5)
    with pytest.raises(ValidationError):
        RunConfig(command="tables", h=0.2, m=0.5)
    cfg = RunConfig(command="tables", m=0.5)
    assert cfg.params.m == pytest.approx(0.5)
    assert json.loads(cfg.audit())["command"] == "tables"
