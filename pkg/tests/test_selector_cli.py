"""
tests.test_selector_cli

Tests de bout en bout des commandes de selector.py

"""

import json

import pandas as pd
import pytest

import selector
from libs.dataset import Dataset, save_csv
from libs.utils import make_rng, write_json


def run(*argv) -> int:
    return selector.main([str(a) for a in argv])


@pytest.fixture
def friedman_csv(tmp_path):
    path = tmp_path / "friedman.csv"
    assert run("generate", "--friedman", "-n", 100, "--seed", 7, "--output", path, "--quiet") == 0
    return path


# ----------
# generate
# ----------

def test_generate_writes_csv_and_meta(friedman_csv):
    df = pd.read_csv(friedman_csv)
    assert df.shape == (100, 11)
    assert list(df.columns)[-1] == "y"
    meta = json.loads(friedman_csv.with_suffix(".json").read_text(encoding="utf-8"))
    assert meta["seed"] == 7
    assert meta["generator"]["n"] == 100


def test_generate_is_byte_identical(tmp_path, friedman_csv):
    other = tmp_path / "again.csv"
    assert run("generate", "--friedman", "-n", 100, "--seed", 7, "--output", other, "--quiet") == 0
    assert other.read_bytes() == friedman_csv.read_bytes()


def test_generate_default_output_dir(tmp_path):
    assert run("generate", "--friedman", "-n", 20, "--seed", 3, "--output-dir", tmp_path, "--quiet") == 0
    assert (tmp_path / "friedman_n20_seed3.csv").exists()


def test_generate_rejects_small_n(tmp_path, capsys):
    assert run("generate", "--friedman", "-n", 5, "--output-dir", tmp_path) == selector.EXIT_USAGE
    assert "[ERREUR]" in capsys.readouterr().err


def test_unknown_flag_is_a_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        run("select", "--no-such-flag")
    assert excinfo.value.code == selector.EXIT_USAGE


# -------
# tune
# -------

def test_tune_writes_grid(tmp_path, friedman_csv):
    out = tmp_path / "out"
    code = run("tune", "--input", friedman_csv, "--k-min", 2, "--k-max", 5, "-K", 10, "--output-dir", out, "--quiet")
    assert code == 0
    document = json.loads((out / "tune.json").read_text(encoding="utf-8"))
    assert len(document["t_grid"]) == 10
    assert len(document["t_grid"][0]) == 4
    assert 2 <= document["k_star"] <= 5
    assert document["config"]["folds"] == 10
    grid = pd.read_csv(out / "tune_grid.csv")
    assert len(grid) == 40


def test_tune_rejects_inverted_k_range(tmp_path, friedman_csv):
    code = run("tune", "--input", friedman_csv, "--k-min", 8, "--k-max", 3, "--output-dir", tmp_path)
    assert code == selector.EXIT_USAGE


# ---------
# select
# ---------

@pytest.fixture
def linear_csv(tmp_path):
    rng = make_rng(1)
    x = rng.uniform(size=(200, 3))
    y = x.sum(axis=1) + 0.01 * rng.standard_normal(200)
    return save_csv(Dataset(x, y, ("V0", "V1", "V2")), tmp_path / "linear.csv")


def test_select_max_features(tmp_path, linear_csv):
    code = run("select", "--input", linear_csv, "--k", 6, "-P", 20, "--max-features", 2,
               "--output-dir", tmp_path, "--quiet")
    assert code == 0
    document = json.loads((tmp_path / "trace.json").read_text(encoding="utf-8"))
    assert len(document["selected"]) == 2
    assert document["stop_reason"] == "max_features_reached"
    assert document["peak_truncated"] is False
    assert document["config"]["k"] == 6
    series = pd.read_csv(tmp_path / "trace.csv")
    assert list(series.columns[:4]) == ["iteration", "feature", "mi", "threshold"]
    assert len(series) == 2


def test_select_missing_input(tmp_path, capsys):
    code = run("select", "--input", tmp_path / "absent.csv", "--k", 5, "--output-dir", tmp_path)
    assert code == selector.EXIT_DATA
    assert "absent.csv" in capsys.readouterr().err


def test_select_non_numeric_input(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,y\n1,2,3\n4,x,6\n7,8,9\n", encoding="utf-8")
    assert run("select", "--input", path, "--k", 1, "--output-dir", tmp_path) == selector.EXIT_DATA


def test_select_is_deterministic_across_threads(tmp_path, friedman_csv):
    outputs = []
    for threads in (1, 2, 8):
        out = tmp_path / f"t{threads}"
        code = run("select", "--input", friedman_csv, "--k", 8, "-P", 20, "--threads", threads,
                   "--seed", 11, "--output-dir", out, "--quiet")
        assert code == 0
        outputs.append((out / "trace.json").read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]


def test_select_report_and_quiet(tmp_path, friedman_csv, capsys):
    run("select", "--input", friedman_csv, "--k", 8, "-P", 20, "--output-dir", tmp_path, "--report")
    assert "Sélection (arrêt par permutation)" in capsys.readouterr().out
    run("select", "--input", friedman_csv, "--k", 8, "-P", 20, "--output-dir", tmp_path, "--quiet")
    assert capsys.readouterr().out == ""


# -------
# eval
# -------

def test_eval_identical_sets_with_one_neighbor(tmp_path, friedman_csv):
    code = run("eval", "--train", friedman_csv, "--test", friedman_csv, "--all-features", "--k-reg", 1,
               "--output-dir", tmp_path, "--quiet")
    assert code == 0
    report = json.loads((tmp_path / "eval.json").read_text(encoding="utf-8"))
    assert report["rmse"] == 0.0


def test_eval_with_trace(tmp_path, friedman_csv):
    trace = write_json({"selected_names": ["X4", "X1"]}, tmp_path / "trace.json")
    code = run("eval", "--train", friedman_csv, "--test", friedman_csv, "--trace", trace,
               "--output-dir", tmp_path, "--quiet")
    assert code == 0
    report = json.loads((tmp_path / "eval.json").read_text(encoding="utf-8"))
    assert report["feature_names"] == ["X4", "X1"]


def test_eval_empty_selection_is_a_usage_error(tmp_path, friedman_csv):
    trace = write_json({"selected_names": []}, tmp_path / "trace.json")
    code = run("eval", "--train", friedman_csv, "--test", friedman_csv, "--trace", trace, "--output-dir", tmp_path)
    assert code == selector.EXIT_USAGE


# ----------------------
# simulate / kprofile
# ----------------------

def test_simulate_small_study(tmp_path):
    code = run("simulate", "--replicates", 2, "-n", 60, "--k-min", 2, "--k-max", 4, "-K", 5, "-P", 10,
               "--output-dir", tmp_path, "--quiet")
    assert code == 0
    document = json.loads((tmp_path / "simulation.json").read_text(encoding="utf-8"))
    assert document["replicates"] == 2
    assert len(document["runs"]) == 2
    assert sum(document["stopping"]["size"].values()) == 2


def test_kprofile_writes_rows(tmp_path):
    code = run("kprofile", "--replicates", 5, "-n", 60, "--k-min", 1, "--k-max", 4, "--output-dir", tmp_path, "--quiet")
    assert code == 0
    profile = pd.read_csv(tmp_path / "kprofile.csv")
    assert len(profile) == 8
    assert set(profile["feature"]) == {"X4", "X10"}
    assert (profile["q01"] <= profile["mean"]).all() and (profile["mean"] <= profile["q99"]).all()
