import math

import pytest

import tucore


def g3():
    return tucore.TUGame(3, [0, 0, 0, 0, 0, 0, 0, 1], "g3")


def test_game_values_and_shapley():
    g = tucore.model_game("museum", 8)
    assert g.n == 8
    assert g.values[0] == 0
    phi = tucore.shapley_value(g)
    assert math.isclose(sum(phi), g.grand_value, abs_tol=1e-9)
    assert tucore.TUGame.from_json(g.to_json()).values == g.values


def test_approximate_g3():
    r = tucore.approximate_core(g3(), 50, "rand", seed=9)
    pts = sorted(tuple(p) for p in r["vertices"])
    assert pts == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert not r["core_empty"]


def test_empty_core():
    g = tucore.nonconvex_game(3)
    assert not tucore.check_nonempty(g)
    r = tucore.approximate_core(g, 10, "det")
    assert r["core_empty"] and len(r["vertices"]) == 0


def test_metrics_against_oracle():
    g = tucore.model_game("savings", 5)
    exact = tucore.enumerate_vertices(g)
    r = tucore.approximate_core(g, 200, "rand", seed=1)
    m = tucore.metrics(r["vertices"], exact, g.grand_value)
    assert 0 < m["epr"] <= 1
    assert 0 < m["vr"] <= 1
    for p in r["vertices"]:
        assert tucore.in_core(g, p)


def test_rdc_closed_form():
    adc, wdc, rdc = tucore.rdc([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [0.5, 0.5, 0.0])
    assert abs(rdc - 0.5) <= 1e-12


def test_volume_and_membership():
    tri = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert math.isclose(tucore.volume(tri, 1.0), 0.5)
    assert tucore.volume(tri[:2], 1.0) is None
    assert tucore.in_hull(tri, [1 / 3, 1 / 3, 1 / 3])
    assert not tucore.in_hull(tri, [1.1, -0.05, -0.05])


def test_capacity_and_domain_errors():
    with pytest.raises(tucore.CapacityError):
        tucore.enumerate_vertices(tucore.model_game("museum", 7))
    with pytest.raises(ValueError):
        tucore.approximate_core(g3(), 10, "sobol")


def test_bench_csv_deterministic():
    cfg = '{"model": "museum", "n": 5, "k_list": [20, 40], "scheme": "det", "seed": 2, "runs": 2}'
    a = tucore.bench(cfg, include_timing=False)
    assert a == tucore.bench(cfg, include_timing=False)
    assert a.splitlines()[0].startswith("model,n,scheme,k")
    assert len(a.splitlines()) == 3
