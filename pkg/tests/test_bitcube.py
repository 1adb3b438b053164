import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cubecut import CubeCutError, ScaleError
from cubecut.bitcube import (
    Component,
    CubeParams,
    VertexSet,
    are_orthogonal,
    boundary,
    coordinate_cut,
    cut_size,
    edge_array,
    edge_index,
    hamming_distance,
    is_balanced,
    laplacian_apply,
    membership,
    neighbors,
    vertices,
)

import oracles

SMALL = [(2, 1, "full"), (3, 1, "full"), (4, 2, "even"), (4, 2, "odd"), (4, 3, "full"), (5, 2, "even")]


@pytest.mark.parametrize("d,k,comp", SMALL)
def test_edges_match_bruteforce_graph(d, k, comp):
    params = CubeParams(d, k, comp)
    got = [tuple(e) for e in edge_array(params).tolist()]
    assert got == oracles.edge_list(d, k, comp)
    assert params.n_edges == len(got)
    assert params.n_vertices == len(oracles.component_vertices(d, k, comp))


@pytest.mark.parametrize("d,k,comp", SMALL)
def test_edge_index_is_position(d, k, comp):
    params = CubeParams(d, k, comp)
    for i, (u, v) in enumerate(edge_array(params).tolist()):
        assert edge_index(params, u, v) == i
        assert edge_index(params, v, u) == i


def test_degree_and_neighbors():
    params = CubeParams(5, 2, "even")
    assert params.degree == comb(5, 2)
    assert params.crossing_degree == comb(4, 1)
    for v in vertices(params)[:4]:
        nb = sorted(neighbors(params, int(v)))
        assert len(nb) == params.degree
        assert all(oracles.hamming(int(v), u, 5) == 2 for u in nb)


def test_component_defaults_and_errors():
    assert CubeParams.for_k(4, 1).component is Component.FULL
    assert CubeParams.for_k(4, 2).component is Component.EVEN
    with pytest.raises(CubeCutError):
        CubeParams(4, 1, "even")
    with pytest.raises(CubeCutError):
        CubeParams(3, 4)
    with pytest.raises(CubeCutError):
        CubeParams(0, 1)


def test_materialization_cap():
    with pytest.raises(ScaleError):
        edge_array(CubeParams(30, 1))


def test_membership_parity():
    params = CubeParams(4, 2, "odd")
    m = membership(params)
    assert [v for v in range(16) if m[v]] == oracles.component_vertices(4, 2, "odd")
    with pytest.raises(CubeCutError):
        VertexSet.from_indices(params, [0])


@pytest.mark.parametrize("d,k,comp", SMALL)
def test_coordinate_cut_sizes(d, k, comp):
    params = CubeParams(d, k, comp)
    G = oracles.cube_graph(d, k, comp)
    for j in range(1, d + 1):
        for b in (0, 1):
            S = coordinate_cut(params, j, b)
            want = [v for v in oracles.component_vertices(d, k, comp) if oracles.bits(v, d)[j - 1] == b]
            assert S.indices().tolist() == want
            assert cut_size(params, S) == oracles.cut(G, want) == comb(d - 1, k - 1) * params.n_vertices // 2


def test_coordinate_cuts_are_balanced_and_orthogonal():
    params = CubeParams(4, 1)
    cuts = [coordinate_cut(params, j, 1) for j in range(1, 5)]
    assert all(is_balanced(S) for S in cuts)
    assert all(are_orthogonal(A, B) for A, B in itertools.combinations(cuts, 2))
    assert hamming_distance(coordinate_cut(params, 1, 0), coordinate_cut(params, 1, 1)) == 16


def test_vertex_set_algebra():
    params = CubeParams(3, 1)
    A = VertexSet.from_indices(params, [0, 1, 2])
    B = VertexSet.from_indices(params, [2, 5])
    assert (A ^ B).indices().tolist() == [0, 1, 5]
    assert (A & B).indices().tolist() == [2]
    assert (A | B).indices().tolist() == [0, 1, 2, 5]
    assert len(A.complement()) == 5
    assert A.canonical() == A.complement()
    assert VertexSet.from_local_mask(params, A.local_mask()) == A
    assert hash(A) == hash(VertexSet.from_indices(params, [2, 1, 0]))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_cut_size_matches_oracle(case, data):
    d, k, comp = case
    params = CubeParams(d, k, comp)
    vs = oracles.component_vertices(d, k, comp)
    A = data.draw(st.lists(st.sampled_from(vs), unique=True))
    S = VertexSet.from_indices(params, A)
    G = oracles.cube_graph(d, k, comp)
    assert cut_size(params, S) == oracles.cut(G, A) == len(boundary(params, S))


@pytest.mark.parametrize("d,k", [(3, 1), (4, 2), (4, 3)])
def test_laplacian_apply_matches_dense(d, k):
    L = oracles.dense_laplacian(d, k)
    rng = np.random.default_rng(1)
    f = rng.integers(-5, 5, size=(3, 1 << d))
    got = laplacian_apply(CubeParams(d, k, "full") if k % 2 else CubeParams(d, k, "even"), f)
    np.testing.assert_array_equal(got, f @ L.T)
