import math

import numpy as np
import pytest

import fri_graph as fri


@pytest.fixture(scope="module")
def dataset():
    cfg = fri.SynthConfig()
    cfg.n_tickers = 12
    cfg.n_days = 120
    cfg.n_event_pairs = 6
    cfg.event_length_min = 20
    cfg.event_length_max = 25
    cfg.seed = 3
    return fri.generate(cfg)


def test_panel_round_trip():
    values = np.array([[0.01, -0.02], [0.03, 0.00], [-0.01, 0.02]])
    p = fri.Panel(["AAA", "BBB"], ["2024-01-02", "2024-01-03", "2024-01-04"], values)
    assert p.tickers == ["AAA", "BBB"]
    assert len(p) == 3
    np.testing.assert_array_equal(p.values, values)


def test_panel_shape_mismatch():
    with pytest.raises(ValueError):
        fri.Panel(["AAA"], ["2024-01-02"], np.zeros((2, 1)))


def test_generate_shapes(dataset):
    returns = dataset["returns"]
    assert len(returns) == 120
    assert len(dataset["prices"]) == 121
    assert len(dataset["truth"]) == 120
    assert len(dataset["events"]) == 6
    assert dataset["truth"].total_edges() > 0


def test_log_returns_match_numpy(dataset):
    prices = dataset["prices"].values
    expected = np.log(prices[1:] / prices[:-1])
    np.testing.assert_allclose(fri.compute_log_returns(dataset["prices"]).values, expected, rtol=1e-12)


def test_rolling_corr_matches_numpy(dataset):
    r = dataset["returns"]
    a, b = r.tickers[0], r.tickers[1]
    series = fri.rolling_corr(r, a, b, 21)
    assert all(math.isnan(v) for v in series[:21])
    t = 60
    window = r.values[t - 20 : t + 1]
    assert series[t] == pytest.approx(np.corrcoef(window[:, 0], window[:, 1])[0, 1], abs=1e-12)


def test_graph_builders(dataset):
    r = dataset["returns"]
    corr = fri.build_corr_graphset(r, 21, 0.5)
    assert len(corr) == len(r)
    assert corr.edges(0) == []
    news = fri.build_news_graphset(dataset["news"], r, 0)
    assert news == dataset["truth"]
    static = fri.build_static_graphset(news, 50)
    assert all(static.edges(t) == static.edges(0) for t in range(len(static)))


def test_jsonl_round_trip(dataset, tmp_path):
    g = dataset["truth"]
    path = tmp_path / "g.jsonl"
    path.write_text(g.to_jsonl())
    assert fri.read_graphset(path, g.nodes) == g


def test_shuffle_keeps_edge_total(dataset):
    g = dataset["truth"]
    s = fri.shuffle_graphset(g, 11)
    assert s.total_edges() == g.total_edges()
    assert s == fri.shuffle_graphset(g, 11)


def test_stats_against_numpy():
    x = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    y = 0.5 + 2.0 * x
    fit = fri.ols_fit(y, x)
    assert fit["beta"] == pytest.approx(2.0)
    assert fit["alpha"] == pytest.approx(0.5)
    assert fri.delta_beta([1.0, 0.5, 0.0]) == pytest.approx(-0.5)
    w = fri.welch_greater([3.0, 4.0, 5.0, 6.0], [1.0, 2.0, 3.0])
    assert w["t"] > 0
    assert 0.0 < w["p_value"] < 0.5


def test_garch_and_dcc(dataset):
    r = dataset["returns"].values
    ga = fri.fit_garch11(r[:, 0], min_observations=100)
    gb = fri.fit_garch11(r[:, 1], min_observations=100)
    for g in (ga, gb):
        assert g["omega"] > 0
        assert g["alpha"] + g["beta"] < 1
        assert len(g["std_resid"]) == len(r)
    d = fri.fit_dcc11(ga["std_resid"], gb["std_resid"], min_observations=100)
    assert d["a"] + d["b"] < 1
    assert np.all(np.abs(d["correlation"]) <= 1)


def test_evaluate_report(dataset):
    report = fri.evaluate(dataset["truth"], dataset["returns"], seed=5, only=["css", "aecr"])
    assert report["css"]["status"] == "ok"
    assert report["aecr"]["status"] == "ok"
    assert report["factor"]["status"] == "not_requested"
    same = fri.evaluate(dataset["truth"], dataset["returns"], seed=5, jobs=4, only=["css", "aecr"])
    assert same == report
