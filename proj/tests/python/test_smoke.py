import json
import math

import pytest

import collusion


def test_hoeffding_and_window():
    assert collusion.hoeffding_term(0.05, 2000) == pytest.approx(
        math.sqrt(math.log(20) / 4000), abs=1e-16)
    dt = collusion.union_delta(0.05, "erasing", 5, 4, 2388787200)
    n_min, n_max, t = collusion.erasure_sample_window(dt, 0.03, 1_000_000)
    assert n_min == 59761
    assert n_max == math.floor(1_000_000 - t)
    assert collusion.union_delta(0.05, "planting-fl", 5, 4) == pytest.approx(0.05 / 52)


def test_car_schema_and_transformation():
    u = collusion.car_universe()
    assert u.cardinality == 2_388_787_200
    assert u.labels == ["Excellent", "Good", "Average", "Poor"]
    g = collusion.paper_transformation(u)
    assert g.signal_set_size == 5
    for x in g.signal_set():
        assert g.apply(x) == x


def test_planting_and_success_sweep():
    base = collusion.generate_car_dataset(300_000, seed=1)
    g = collusion.profile_transformation(base)
    collective, = collusion.sample_disjoint(base, [40_000], seed=2)
    fl = collusion.planting_bound(collective, g, "Poor", N=100_000, N_test=10_000)
    fo = collusion.planting_bound(collective, g, "Poor", N=100_000, N_test=10_000,
                                  feature_only=True)
    assert fl["bound"] >= fo["bound"]
    assert fl["bound_clamped"] == max(fl["bound"], 0.0)
    assert len(fl["per_feature"]) == 5

    rows, skipped = collusion.run_sweep({
        "objective": "plant-fl",
        "N": 100_000,
        "N_test": 10_000,
        "n_grid": [30_000, 200_000],
        "seeds": [0],
        "source": {"generator": "car", "rows": 300_000, "seed": 1},
    })
    assert len(rows) == 1 and len(skipped) == 1
    assert rows[0]["bound_clamped"] <= rows[0]["success"] <= 1.0
    assert "0 < n < N" in skipped[0][2]


def test_unplanting_and_naive():
    base = collusion.generate_car_dataset(200_000, seed=3)
    g = collusion.profile_transformation(base)
    collective, = collusion.sample_disjoint(base, [30_000], seed=4)
    est, rest = collusion.split_dataset(collective, 6_000, seed=5)
    assert len(est) == 6_000 and len(rest) == 24_000
    adaptive = collusion.unplanting_bound(est, rest, g, "Excellent", N=100_000, N_test=10_000)
    assert "R(n-n_e)" in adaptive["r_terms"]
    best, report, candidates = collusion.naive_unplanting_bound(
        collective, g, "Excellent", N=100_000, N_test=10_000)
    assert set(candidates) == {"Good", "Average", "Poor"}
    assert report["bound"] == max(c["bound"] for c in candidates.values())


def test_erasing_window_error():
    base = collusion.generate_car_dataset(150_000, seed=0, reduced=True)
    g = collusion.profile_transformation(base, reduced=True)
    collective, = collusion.sample_disjoint(base, [1_000], seed=1)
    with pytest.raises(collusion.ErasureWindowError):
        collusion.erasing_bound(collective, g, N=100_000, N_test=10_000, eta=0.036)
    with pytest.raises(collusion.CollusionError):
        collusion.planting_bound(collective, g, "Poor", N=1_000, N_test=10)


def test_idr_worked_example():
    u = collusion.Universe([("x", ["t", "s"])], ["0", "1"])
    pop = collusion.Population(u, [(0, 0, 0.3), (0, 1, 0.1), (1, 0, 0.3), (1, 1, 0.3)])
    g = collusion.Transformation(u, {"x": "t"})
    assert collusion.idr_bound(pop, g, "planting-fl", "1", alpha=0.25)["bound"] == 1.0
    assert collusion.prior_bound_planting(pop, g, "1", 0.25) == pytest.approx(0.4)
    assert collusion.idr_bound(pop, g, "planting-fl", "1", alpha=0.1)["bound"] == 0.0


def test_csv_round_trip(tmp_path):
    u = collusion.Universe([("color", ["red", "blue"]), ("size", ["S", "M", "L"])], ["no", "yes"])
    d = collusion.Dataset(u, [(0, 0), (5, 1), (3, 0)])
    path = str(tmp_path / "d.csv")
    d.write_csv(path)
    back = collusion.read_csv(path, u)
    assert back.rows() == d.rows()
    assert json.loads(json.dumps(u.to_json()))["labels"] == ["no", "yes"]
