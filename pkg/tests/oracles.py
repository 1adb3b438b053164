"""Slow, obviously-correct reference implementations used by the tests."""
import itertools

import networkx as nx
import numpy as np


def bits(x, d):
    """Coordinates ``(x_1, ..., x_d)`` of vertex ``x`` (x_j is bit j-1)."""
    return tuple((x >> (j - 1)) & 1 for j in range(1, d + 1))


def hamming(x, y, d):
    return sum(a != b for a, b in zip(bits(x, d), bits(y, d)))


def component_vertices(d, k, component):
    vs = range(1 << d)
    if component == "even":
        return [v for v in vs if sum(bits(v, d)) % 2 == 0]
    if component == "odd":
        return [v for v in vs if sum(bits(v, d)) % 2 == 1]
    return list(vs)


def cube_graph(d, k, component="full"):
    vs = component_vertices(d, k, component)
    G = nx.Graph()
    G.add_nodes_from(vs)
    G.add_edges_from((u, v) for u, v in itertools.combinations(vs, 2) if hamming(u, v, d) == k)
    return G


def edge_list(d, k, component="full"):
    return sorted(tuple(sorted(e)) for e in cube_graph(d, k, component).edges())


def cut(G, A):
    A = set(A)
    return sum((u in A) != (v in A) for u, v in G.edges())


def fourier_coefficient(values, S, d):
    return sum(values[x] * (-1) ** bin(x & S).count("1") for x in range(1 << d)) / (1 << d)


def dense_laplacian(d, k):
    G = cube_graph(d, k)
    return nx.laplacian_matrix(G, nodelist=range(1 << d)).toarray().astype(np.int64)


def brute_force_optimum(d, k, component, retained_edges):
    """Best family of d orthogonal balanced cuts by plain enumeration (tiny cubes only)."""
    vs = component_vertices(d, k, component)
    n = len(vs)
    root = vs[0]
    cuts = [frozenset(c) for c in itertools.combinations(vs, n // 2) if root not in c]
    score = {A: sum((u in A) != (v in A) for u, v in retained_edges) for A in cuts}
    best, fams = None, []
    for fam in itertools.combinations(cuts, d):
        if any(len(A ^ B) != n // 2 for A, B in itertools.combinations(fam, 2)):
            continue
        s = sum(score[A] for A in fam)
        if best is None or s < best:
            best, fams = s, [fam]
        elif s == best:
            fams.append(fam)
    return best, fams
