import pytest

import regionflow as rf


def two_triangles():
    ids = [f"n{i}" for i in range(6)]
    edges = [(0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1), (2, 3, 1)]
    return rf.FlowNetwork(ids, edges)


def test_modularity_of_two_triangles():
    net = two_triangles()
    p = {f"n{i}": int(i >= 3) for i in range(6)}
    assert rf.modularity(net, p) == pytest.approx(5 / 14, abs=1e-12)


def test_cut_recovers_triangles():
    net = two_triangles()
    d = rf.run_louvain(net)
    cut = rf.cut_to_k(net, d, 2)
    assert cut["modularity"] == pytest.approx(5 / 14, abs=1e-12)
    assert len(set(cut["partition"].values())) == 2


def test_planted_recovery_and_curve():
    data, table, net, d = rf.planted_pipeline(seed=4, regions=5, zones_per_region=10, leakage=0.05)
    assert len(d) >= 1
    final = d.levels()[-1]["partition"]
    assert rf.adjusted_rand_index(final, data["truth"]) > 0.95
    curve = rf.modularity_curve(net, d, 1, 10)
    assert curve["best_k"] == 5
    assert table.stats["records_retained"] == table.stats["records_total"]


def test_ari_matches_sklearn():
    sklearn = pytest.importorskip("sklearn.metrics")
    a = {f"z{i}": i % 3 for i in range(30)}
    b = {f"z{i}": (i * 7) % 4 for i in range(30)}
    keys = sorted(a)
    expected = sklearn.adjusted_rand_score([a[k] for k in keys], [b[k] for k in keys])
    assert rf.adjusted_rand_index(a, b) == pytest.approx(expected, abs=1e-12)


def test_baseline_and_evaluate():
    data = rf.generate_planted(regions=3, zones_per_region=5, leakage=0.0, seed=1)
    roster = rf.HospitalRoster(data["roster"])
    table = rf.ingest(data["flows"], roster)
    base = rf.plurality_assign(table, roster)
    repaired = rf.enforce_contiguity(base["partition"], data["adjacency"], table)
    assert rf.adjusted_rand_index(repaired["partition"], data["truth"]) == pytest.approx(1.0)
    report = rf.evaluate(table, data["truth"], roster)
    assert all(row["LI"] == 1.0 for row in report["regions"])


def test_input_errors_raise():
    roster = rf.HospitalRoster([("H", "a", True)])
    with pytest.raises(rf.InputError):
        rf.ingest([("a", "H", 0, "G")], roster)
    with pytest.raises(ValueError):
        rf.run_louvain(rf.FlowNetwork(["a"], []))
