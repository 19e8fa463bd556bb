import json

import numpy as np
import pytest

from linkanomaly import generate_ba
from linkanomaly.cli import main
from linkanomaly.errors import ParseError
from linkanomaly.io import (load_edge_list, load_labels, load_profiles_csv,
                            write_edge_list, write_labels)


# -- edge lists ---------------------------------------------------------------


def test_load_edge_list_comma_and_whitespace(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("a,b\nb c\n# comment\n\nc\td\n")
    g = load_edge_list(path, directed=False)
    assert g.vertex_count == 4
    assert g.edge_count == 3


def test_load_edge_list_malformed_line(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("a\n")
    with pytest.raises(ParseError, match=":1"):
        load_edge_list(path, directed=False)


def test_edge_list_roundtrip(tmp_path):
    g = generate_ba(60, 3, seed=2)
    path = tmp_path / "g.csv"
    write_edge_list(g, path, comment="round trip")
    back = load_edge_list(path, directed=False)
    assert back == g


def test_edge_list_roundtrip_directed(tmp_path):
    rng = np.random.default_rng(0)
    lines = {(f"v{a}", f"v{b}") for a, b in rng.integers(0, 20, (60, 2)) if a != b}
    from linkanomaly import build_graph

    g = build_graph(sorted(lines), directed=True)
    path = tmp_path / "g.csv"
    write_edge_list(g, path)
    assert load_edge_list(path, directed=True) == g


# -- labels ---------------------------------------------------------------------


def test_labels_roundtrip(tmp_path):
    path = tmp_path / "labels.csv"
    write_labels(path, {"v1": 1, "v2": 0})
    assert load_labels(path) == {"v1": 1, "v2": 0}


def test_labels_tokens(tmp_path):
    path = tmp_path / "labels.csv"
    path.write_text("vertex,label\nv1,anomalous\nv2,normal\n")
    assert load_labels(path) == {"v1": 1, "v2": 0}


def test_labels_empty_body(tmp_path):
    path = tmp_path / "labels.csv"
    path.write_text("vertex,label\n")
    assert load_labels(path) == {}


def test_labels_unknown_token(tmp_path):
    path = tmp_path / "labels.csv"
    path.write_text("vertex,label\nv1,maybe\n")
    with pytest.raises(ParseError):
        load_labels(path)


# -- CLI ---------------------------------------------------------------------------


def test_cli_generate_deterministic(tmp_path, capsys):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["-q", "generate", "--n", "100", "--m", "2", "--seed", "7",
                 "--out", str(out1)]) == 0
    assert main(["-q", "generate", "--n", "100", "--m", "2", "--seed", "7",
                 "--out", str(out2)]) == 0
    assert out1.read_text() == out2.read_text()


def test_cli_usage_errors(tmp_path):
    assert main(["generate", "--n", "10"]) == 1  # missing required flags
    assert main(["-q", "evaluate", "--config", str(tmp_path / "missing.cfg")]) == 1


def test_cli_data_error(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("only_one_token\n")
    assert main(["-q", "train-link", "--graph", str(bad), "--size", "5",
                 "--model-out", str(tmp_path / "m.json")]) == 2


def test_cli_full_pipeline(tmp_path):
    graph = tmp_path / "graph.csv"
    injected = tmp_path / "injected.csv"
    labels = tmp_path / "labels.csv"
    record = tmp_path / "record.csv"
    model = tmp_path / "model.json"
    vertices = tmp_path / "vertices.txt"
    profiles = tmp_path / "profiles.csv"

    assert main(["-q", "generate", "--n", "400", "--m", "3", "--seed", "1",
                 "--out", str(graph)]) == 0
    assert main(["-q", "inject", "--graph", str(graph), "--fraction", "0.1",
                 "--seed", "2", "--out", str(injected),
                 "--labels-out", str(labels), "--record-out", str(record)]) == 0
    assert load_labels(labels)  # non-empty anomalous map

    g = load_edge_list(injected, directed=False)
    vertices.write_text("\n".join(g.names[:50]) + "\n")
    assert main(["-q", "train-link", "--graph", str(injected),
                 "--exclude", str(vertices), "--size", "100", "--seed", "3",
                 "--trees", "20", "--model-out", str(model)]) == 0
    assert main(["-q", "score", "--graph", str(injected), "--model", str(model),
                 "--vertices", str(vertices), "--out", str(profiles)]) == 0
    entries = load_profiles_csv(profiles)
    assert 0 < len(entries) <= 50

    assert main(["-q", "rank", "--profiles", str(profiles), "--top", "5"]) == 0


def test_cli_evaluate_emits_valid_json(tmp_path):
    config = tmp_path / "exp.cfg"
    config.write_text(
        "ba_n = 1000\nba_m = 3\nmaster_seed = 3\n"
        "test_positive_count = 15\ntest_negative_count = 85\n"
        "link_train_size_per_class = 200\nlink_holdout_per_class = 50\n"
        "tree_count = 15\nmeta_tree_count = 20\nrun_count = 1\nfolds = 5\n")
    report_path = tmp_path / "report.json"
    pk_path = tmp_path / "pk.csv"
    assert main(["-q", "evaluate", "--config", str(config),
                 "--report-out", str(report_path), "--pk-out", str(pk_path)]) == 0
    doc = json.loads(report_path.read_text())
    assert doc["schema_version"] == 1
    assert doc["test_composition"] == {"anomalous": 15, "normal": 85}
    assert doc["config"]["ba_n"] == 1000  # resolved config embedded
    assert doc["config"]["threshold"] == 0.8  # defaults included
    lines = pk_path.read_text().strip().splitlines()
    assert lines[0] == "k,precision"
    assert len(lines) >= 2


def test_cli_evaluate_set_override(tmp_path):
    config = tmp_path / "exp.cfg"
    config.write_text("ba_n = 1000\nba_m = 3\n")
    report_path = tmp_path / "report.json"
    assert main(["-q", "evaluate", "--config", str(config),
                 "--set", "run_count=1", "--set", "folds=4",
                 "--set", "test_positive_count=15",
                 "--set", "test_negative_count=85",
                 "--set", "link_train_size_per_class=150",
                 "--set", "link_holdout_per_class=0",
                 "--set", "tree_count=10", "--set", "meta_tree_count=10",
                 "--report-out", str(report_path),
                 "--pk-out", str(tmp_path / "pk.csv")]) == 0
    doc = json.loads(report_path.read_text())
    assert doc["config"]["folds"] == 4
    assert doc["link_auc"] is None  # holdout disabled


def test_cli_bad_config_value(tmp_path):
    config = tmp_path / "exp.cfg"
    config.write_text("ba_n = 1000\nba_m = 3\nthreshold = 2.0\n")
    assert main(["-q", "evaluate", "--config", str(config)]) == 1
