"""Bitmask enumeration over the vertices of a small component.

Vertices are addressed by local position (rank within the component), so a
subset of a component with ``n <= 64`` vertices is one ``uint64``.
"""
from functools import lru_cache
import itertools

import numpy as np

from .bitcube import CubeParams, coordinate_cut, edge_array, popcount, vertices

ONE = np.uint64(1)


@lru_cache(maxsize=32)
def local_edges(params: CubeParams) -> tuple[np.ndarray, np.ndarray]:
    vs = vertices(params)
    pos = np.full(1 << params.d, -1, dtype=np.int64)
    pos[vs] = np.arange(len(vs))
    e = pos[edge_array(params)]
    return e[:, 0].astype(np.uint64), e[:, 1].astype(np.uint64)


def cut_sizes(params: CubeParams, masks: np.ndarray, weights=None) -> np.ndarray:
    """``|∂(mask)|`` for every local bitmask (optionally counting weighted edges)."""
    a, b = local_edges(params)
    masks = np.asarray(masks, dtype=np.uint64)
    out = np.zeros(masks.shape, dtype=np.int64)
    for i in range(a.size):
        if weights is not None and not weights[i]:
            continue
        out += (((masks >> a[i]) ^ (masks >> b[i])) & ONE).astype(np.int64)
    return out


def proper_cut_classes(n: int) -> np.ndarray:
    """Every nonempty proper subset with local vertex 0 outside: 2^(n-1) - 1 masks."""
    return (np.arange(1, 1 << (n - 1), dtype=np.uint64) << ONE).astype(np.uint64)


def balanced_masks(n: int, exclude_root: bool = False) -> np.ndarray:
    start = 1 if exclude_root else 0
    return np.array(
        sorted(sum(1 << i for i in c) for c in itertools.combinations(range(start, n), n // 2)),
        dtype=np.uint64,
    )


def coordinate_masks(params: CubeParams) -> list[tuple[int, int, int]]:
    """``(j, b, local mask)`` for all 2d coordinate cuts."""
    return [
        (j, b, coordinate_cut(params, j, b).local_mask())
        for j in range(1, params.d + 1)
        for b in (0, 1)
    ]


def nearest_coordinate(params: CubeParams, masks: np.ndarray):
    """Index into ``coordinate_masks`` and distance of the nearest coordinate cut."""
    coords = np.array([m for _, _, m in coordinate_masks(params)], dtype=np.uint64)
    dist = popcount(masks[:, None] ^ coords[None, :])
    which = np.argmin(dist, axis=1)
    return which, dist[np.arange(masks.size), which]
