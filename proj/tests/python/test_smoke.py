"""Smoke tests for the Python bindings."""

import math

import pytest

import datasel


def test_flop_accounting():
    cfg = datasel.builtin_model_configs()["llama2-7b"]
    n = datasel.param_count(cfg)
    assert n == pytest.approx(6738149376.0)
    assert datasel.training_flops_per_token(cfg) == 3 * datasel.forward_flops_per_token(cfg)
    assert datasel.approx_6nd(1.0, 1.0) == 6.0

    spec = datasel.SelectionCostSpec()
    spec.method = datasel.SelectionMethod.BM25
    assert datasel.selection_cost(spec, 1e8, 0.0, cfg).selection_flops == 1e8


def test_scoring_and_selection():
    train = datasel.Corpus(
        [
            datasel.Example("a", "apples and pears", 3),
            datasel.Example("b", "bananas apples", 2),
            datasel.Example("c", "cherries", 1),
        ]
    )
    val = datasel.Corpus([datasel.Example("v", "apples", 1)])

    scores = datasel.bm25_utility(train, val)
    assert set(scores.scores) == {"a", "b", "c"}
    assert scores.scores["c"] == 0.0
    assert scores.scores["a"] > 0.0

    selection = datasel.select_topk(scores, train, 2)
    assert len(selection.ids) == 2
    assert "c" not in selection.ids

    plan = datasel.make_budget_plan(100.0, _cost_breakdown(selection_flops=40.0, per_token=6.0))
    assert plan.trainable_tokens == 10

    ranking = datasel.ppl_rank(scores, datasel.PplMode.TOP)
    under = datasel.select_under_budget(ranking, train, plan, scores)
    assert under.tokens_used <= plan.trainable_tokens


def _cost_breakdown(selection_flops, per_token):
    cost = datasel.CostBreakdown()
    cost.selection_flops = selection_flops
    cost.train_flops_per_token = per_token
    return cost


def test_theory_and_frontier():
    params = datasel.UtilityModelParams(
        dataset_size=1000, budget=100.0, train_cost=1.0, concentration=0.05, rate=0.1
    )
    assert datasel.expected_utility_ds(0.0, params) == datasel.expected_utility_random(params)
    opt = datasel.optimal_selection_compute(params, 1e-6)
    assert opt.u_star >= datasel.expected_utility_random(params)
    assert 0.0 <= opt.c_ds_star <= params.budget

    runs = [
        datasel.Run("m", 1, 10.0, 0.30),
        datasel.Run("m", 2, 20.0, 0.50),
        datasel.Run("m", 3, 30.0, 0.40),
    ]
    frontier = datasel.pareto_frontier(runs)
    assert [r.compute for r in frontier] == [10.0, 20.0]
    fit = datasel.fit_frontier(frontier)
    assert fit.a == pytest.approx((0.50 - 0.30) / (math.log(20.0) - math.log(10.0)))


def test_curve_fit_roundtrip():
    cost = datasel.MethodCostModel(
        label="m", fixed_selection_flops=0.0, train_flops_per_token=1.0, dataset_tokens=10**8
    )
    curve = datasel.PerfCurveParams(p0=0.25, pbar=0.60, lam=40.0)
    u_max = math.log((0.60 - 0.25) / 0.05) / 40.0
    obs = []
    for i in range(1, 9):
        k = round(u_max * i / 8 * 10**8)
        obs.append((k, datasel.predicted_performance(k, curve, cost)))
    fit = datasel.fit_perf_curve(obs, cost, 0.05)
    assert fit.lam == pytest.approx(40.0, rel=1e-3)


def test_errors_surface_as_python_exceptions():
    with pytest.raises(ValueError):
        datasel.TransformerConfig(0, 1, 1, 1, 1, 1)
    with pytest.raises(ValueError):
        datasel.jaccard_matrix({"only": {"a"}})
