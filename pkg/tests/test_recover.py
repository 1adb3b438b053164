import numpy as np
import pytest
from sklearn.base import clone

from cubecut import CubeCutError, ScaleError
from cubecut.bitcube import CubeParams, VertexSet, coordinate_cut
from cubecut.recover import (
    CutFamily,
    PlantedCutRecovery,
    SolverConfig,
    Strategy,
    match_to_coordinates,
    optimal_families,
    solve,
    solve_exact,
    solve_local,
)
from cubecut.sample import SampleParams, sampled_cut_size, subsample

import oracles


def coordinate_family(params):
    return CutFamily(tuple(coordinate_cut(params, j, 1) for j in range(1, params.d + 1)))


@pytest.mark.parametrize("p,seed", [(1.0, 0), (0.8, 1), (0.6, 2), (0.5, 3), (0.3, 4), (0.0, 0)])
def test_exact_matches_bruteforce_d3(p, seed):
    params = CubeParams(3, 1)
    G = subsample(params, SampleParams(p, seed))
    edges = [tuple(e) for e in G.retained_edges().tolist()]
    best, fams = oracles.brute_force_optimum(3, 1, "full", edges)
    for strategy in ("branch_bound", "exhaustive"):
        res = solve_exact(G, SolverConfig(strategy))
        assert res.objective == best
        got = {frozenset(A.canonical().indices().tolist()) for A in res.family}
        assert any(got == {frozenset(c) for c in f} for f in fams)


@pytest.mark.parametrize("p,seed", [(0.9, 1), (0.6, 2), (0.5, 8)])
def test_exact_matches_bruteforce_even_component(p, seed):
    params = CubeParams(4, 2, "even")
    G = subsample(params, SampleParams(p, seed))
    edges = [tuple(e) for e in G.retained_edges().tolist()]
    best, _ = oracles.brute_force_optimum(4, 2, "even", edges)
    assert solve_exact(G).objective == best


@pytest.mark.parametrize("params", [CubeParams(3, 1), CubeParams(4, 2, "even"), CubeParams(4, 2, "odd")])
def test_strategies_agree(params):
    for seed in range(6):
        G = subsample(params, SampleParams(0.5, seed))
        a = solve_exact(G, SolverConfig("branch_bound"))
        b = solve_exact(G, SolverConfig("exhaustive"))
        assert a.family == b.family and a.objective == b.objective


def test_tie_break_is_canonical():
    params = CubeParams(4, 1)
    for seed in range(6):
        G = subsample(params, SampleParams(0.5, seed))
        a = solve_exact(G)
        opt, fams = optimal_families(G)
        assert opt == a.objective
        keys = [sorted(A.canonical().local_mask() for A in f) for f in fams]
        assert sorted(A.local_mask() for A in a.family.canonical()) == min(keys)


@pytest.mark.parametrize("params", [CubeParams(2, 1), CubeParams(3, 1), CubeParams(4, 1), CubeParams(5, 2, "even")])
def test_full_graph_recovers_coordinates(params):
    res = solve_exact(subsample(params, SampleParams(1.0)))
    assert res.exact_recovery and res.matching_ok
    assert res.family.canonical() == coordinate_family(params).canonical()
    assert res.objective == params.d * params.crossing_degree * params.n_vertices // 2


def test_infeasible_and_over_scale():
    with pytest.raises(CubeCutError):
        solve_exact(subsample(CubeParams(2, 2, "even"), SampleParams(1.0)))
    with pytest.raises(ScaleError):
        solve_exact(subsample(CubeParams(5, 1), SampleParams(1.0)))
    with pytest.raises(ScaleError):
        solve_exact(subsample(CubeParams(4, 1), SampleParams(1.0)), SolverConfig("exhaustive"))


def test_local_search_is_feasible_and_not_worse_than_start():
    params = CubeParams(6, 1)
    start = 6 * 32
    for seed in range(3):
        G = subsample(params, SampleParams(0.7, seed))
        res = solve_local(G, SolverConfig("local_search", restarts=2))
        assert len(res.family) == 6
        assert res.objective <= sum(sampled_cut_size(G, S) for S in coordinate_family(params)) <= start
    G = subsample(CubeParams(4, 1), SampleParams(1.0))
    assert solve(G, SolverConfig("local_search")).exact_recovery


def test_local_search_deterministic():
    G = subsample(CubeParams(6, 1), SampleParams(0.5, 4))
    cfg = SolverConfig("local_search", restarts=3)
    assert solve_local(G, cfg) == solve_local(G, cfg)


def test_family_validation():
    params = CubeParams(3, 1)
    with pytest.raises(CubeCutError):
        CutFamily((VertexSet.from_indices(params, [0, 1, 2]),))
    with pytest.raises(CubeCutError):
        CutFamily((coordinate_cut(params, 1, 0), coordinate_cut(params, 1, 1)))


def test_matching_distances():
    params = CubeParams(3, 1)
    fam = coordinate_family(params)
    rep = match_to_coordinates(params, fam)
    assert rep.matching_ok and [m.distance for m in rep.per_cut] == [0, 0, 0]
    assert [(m.j, m.b) for m in rep.per_cut] == [(1, 1), (2, 1), (3, 1)]


def test_solver_config_validation():
    with pytest.raises(CubeCutError):
        SolverConfig("annealing")
    with pytest.raises(CubeCutError):
        SolverConfig(tie_break="random")
    assert SolverConfig("exhaustive").strategy is Strategy.EXHAUSTIVE


def test_estimator_on_graph_and_edge_array():
    params = CubeParams(3, 1)
    G = subsample(params, SampleParams(1.0))
    est = PlantedCutRecovery().fit(G)
    assert est.exact_recovery_ and est.score() == -12.0
    codes = est.predict(np.arange(8))
    assert len({tuple(r) for r in codes}) == 8
    est2 = clone(PlantedCutRecovery(d=3)).fit(G.retained_edges())
    assert est2.objective_ == 12
    with pytest.raises(CubeCutError):
        PlantedCutRecovery(d=3).fit(np.array([[0, 3]]))
    with pytest.raises(CubeCutError):
        PlantedCutRecovery().fit(np.array([[0, 1]]))
    assert PlantedCutRecovery(strategy="exhaustive").get_params()["strategy"] == "exhaustive"
