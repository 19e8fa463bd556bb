"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s`.  The two experiment
fixtures are module-scoped because criteria 1, 3, 4, and 5 all read the
same (expensive) run, and criterion 2 runs its own configuration.
"""

import time

import numpy as np
import pytest

from linkanomaly import (ExperimentConfig, auc, build_graph,
                         extract_edge_features, generate_ba, inject_anomalies,
                         run_experiment, vertex_profile)
from linkanomaly.anomaly import META_FEATURE_NAMES
from linkanomaly.io import report_json

from _oracles import all_graphs, auc_pair_counting, edge_features, meta_features
from conftest import random_graph


def _verdict(criterion: str, ok: bool, detail: str) -> bool:
    print(f"[criterion {criterion}] {'PASS' if ok else 'FAIL'}: {detail}")
    return ok


@pytest.fixture(scope="module")
def fully_simulated_run():
    """Criterion 1 configuration: BA(30000, 6), 10% anomalies, 3 repetitions."""
    config = ExperimentConfig(ba_n=30_000, ba_m=6, master_seed=1234,
                              anomaly_fraction=0.10,
                              test_positive_count=100, test_negative_count=900,
                              min_friends=3, threshold=0.8,
                              folds=10, run_count=3)
    start = time.time()
    report = run_experiment(config)
    return report, time.time() - start


@pytest.fixture(scope="module")
def second_ba_run():
    """Criterion 2 substitute configuration: BA(50000, 4), same harness."""
    config = ExperimentConfig(ba_n=50_000, ba_m=4, master_seed=4321,
                              anomaly_fraction=0.10,
                              test_positive_count=100, test_negative_count=900,
                              min_friends=3, threshold=0.8,
                              folds=10, run_count=3)
    return run_experiment(config)


def test_criterion_1_fully_simulated(fully_simulated_run):
    report, runtime = fully_simulated_run
    auc_avg = report.averaged["auc"]
    fpr_avg = report.averaged["fpr"]
    ok = auc_avg >= 0.95 and fpr_avg <= 0.05 and runtime <= 600
    _verdict("1", ok,
             f"BA(30000, 6) averaged AUC {auc_avg:.4f} (need >= 0.95), "
             f"FPR {fpr_avg:.4f} (need <= 0.05), runtime {runtime:.0f}s (need <= 600s)")
    assert runtime <= 600
    assert fpr_avg <= 0.05
    assert auc_avg >= 0.95


def test_criterion_2_second_configuration(second_ba_run):
    report = second_ba_run
    auc_avg = report.averaged["auc"]
    ok = auc_avg >= 0.95
    _verdict("2", ok, f"BA(50000, 4) averaged AUC {auc_avg:.4f} (need >= 0.95)")
    assert auc_avg >= 0.95


def test_criterion_3_unsupervised_ranking(fully_simulated_run):
    report, _ = fully_simulated_run
    p100 = report.precision_at_k[100]
    ok = p100 >= 0.80
    _verdict("3", ok,
             f"precision@100 by abnormality_probability {p100:.3f} (need >= 0.80)")
    assert p100 >= 0.80


def test_criterion_4_feature_importance(fully_simulated_run):
    report, _ = fully_simulated_run
    ranked = sorted(report.info_gain, key=report.info_gain.get, reverse=True)
    position = ranked.index("abnormality_probability") + 1
    ok = position <= 3
    _verdict("4", ok,
             f"abnormality_probability ranks #{position} of 7 by info gain "
             f"(need top 3); order {ranked}")
    assert position <= 3


def test_criterion_5_link_classifier_gate(fully_simulated_run):
    report, _ = fully_simulated_run
    link = report.link_auc["mean"]
    ok = link >= 0.90
    _verdict("5", ok, f"link-classifier held-out AUC {link:.4f} (need >= 0.90)")
    assert link >= 0.90


# -- criterion 6: oracle and property suites ---------------------------------------


def test_criterion_6a_feature_oracle_exhaustive():
    failures = 0
    checked = 0

    def check(pairs, edges, directed, n):
        nonlocal checked
        g = build_graph(pairs, directed)
        for vn in g.names:
            for un in g.names:
                if vn == un:
                    continue
                fv = extract_edge_features(g, g.id_of(vn), g.id_of(un))
                ref = edge_features(edges, directed, n, int(vn[1:]), int(un[1:]))
                for name, value in fv:
                    assert value == pytest.approx(ref[name], abs=1e-12)
                    checked += 1

    names4 = [f"n{i}" for i in range(4)]
    for edges in all_graphs(4, directed=False):
        if edges:
            check([(names4[a], names4[b]) for a, b in edges], edges, False, 4)
    names3 = [f"n{i}" for i in range(3)]
    for edges in all_graphs(3, directed=True):
        if edges:
            check([(names3[a], names3[b]) for a, b in edges], edges, True, 3)
    rng = np.random.default_rng(99)
    for directed in (False, True):
        for _ in range(40):
            n = int(rng.integers(5, 9))
            pairs, edges = random_graph(rng, n, directed)
            check(pairs, edges, directed, n)
    _verdict("6a", True,
             f"feature equivalence vs brute-force set algebra on {checked} "
             f"pair-feature checks across exhaustive small + random graphs (<= 8 vertices)")


def test_criterion_6b_auc_oracle():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(10_000):
        n = int(rng.integers(2, 9))
        labels = rng.integers(0, 2, n)
        if labels.min() == labels.max():
            labels[0] = 1 - labels[0]
        scores = rng.integers(0, 5, n) / 4.0
        worst = max(worst, abs(auc(scores, labels) - auc_pair_counting(scores, labels)))
    ok = worst <= 1e-12
    _verdict("6b", ok, f"rank AUC vs pair counting on 10,000 cases, max |diff| {worst:.2e}")
    assert worst <= 1e-12


def test_criterion_6c_meta_feature_oracle():
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(1000):
        ep = rng.random(int(rng.integers(1, 50))).tolist()
        threshold = float(rng.uniform(0.05, 0.95))
        profile = vertex_profile(ep, threshold, v=0)
        ref = meta_features(ep, threshold)
        for name in META_FEATURE_NAMES:
            worst = max(worst, abs(profile.value(name) - ref[name]))
    ok = worst <= 1e-12
    _verdict("6c", ok, f"meta-features vs naive oracle on 1,000 EP sets, max |diff| {worst:.2e}")
    assert worst <= 1e-12


def test_criterion_6d_end_to_end_determinism():
    config = dict(ba_n=2000, ba_m=4, master_seed=77, test_positive_count=20,
                  test_negative_count=120, link_train_size_per_class=300,
                  link_holdout_per_class=100, tree_count=25, meta_tree_count=25,
                  run_count=2, folds=5)
    a = report_json(run_experiment(ExperimentConfig(**config)))
    b = report_json(run_experiment(ExperimentConfig(**config)))
    ok = a == b
    _verdict("6d", ok, f"identical master seed gives byte-identical reports ({len(a)} bytes)")
    assert a == b


def test_criterion_6e_null_experiment():
    config = ExperimentConfig(ba_n=3000, ba_m=4, master_seed=88,
                              anomaly_source="random",
                              test_positive_count=40, test_negative_count=360,
                              link_train_size_per_class=500,
                              link_holdout_per_class=0,
                              tree_count=30, meta_tree_count=50,
                              run_count=2, folds=10)
    report = run_experiment(config)
    auc_avg = report.averaged["auc"]
    ok = 0.4 <= auc_avg <= 0.6
    _verdict("6e", ok, f"null experiment (random labels) AUC {auc_avg:.4f} (need in [0.4, 0.6])")
    assert 0.4 <= auc_avg <= 0.6


def test_criterion_7_injection_degree_fidelity():
    host = generate_ba(10_000, 5, seed=2024)
    host_mean = float(host.degrees("all").mean())
    means = []
    for seed in range(10):
        _, record = inject_anomalies(host, 1000, seed=seed)
        means.append(float(np.mean(record.edge_counts)))
    pooled = float(np.mean(means))
    rel = abs(pooled - host_mean) / host_mean
    ok = rel <= 0.10
    _verdict("7", ok,
             f"injected mean degree {pooled:.3f} vs host {host_mean:.3f} over 10 seeds "
             f"(relative error {rel:.3%}, need <= 10%)")
    assert rel <= 0.10
