"""Implicit hypercubes Q_d and k-distance hypercubes Q_{d,k}.

Vertex encoding
---------------
A vertex ``x = (x_1, ..., x_d)`` is stored as the integer whose bit ``j - 1``
holds ``x_j`` (little-endian).  Coordinates are numbered from 1 in every public
function (``coordinate_cut(params, j=1, b=0)`` is ``{x : x_1 = 0}``); bit
positions are numbered from 0.

Graphs are never stored as adjacency lists.  Edges join ``x`` and ``x ^ m``
for every mask ``m`` of popcount ``k``.  For even ``k`` the graph splits into
the even-weight and odd-weight components and a ``CubeParams`` must name one
of them; for odd ``k`` only the full cube is accepted.

A ``VertexSet`` is always a boolean vector of length ``2**d`` over the ambient
cube, with the invariant that it only marks vertices of its component.

Edges are canonical pairs ``(u, v)`` with ``u < v``.  The canonical edge index
is the rank of the pair in lexicographic order, which is what subsampling
keys its random decisions on.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from ._errors import CubeCutError, ScaleError

#: Largest dimension for which any routine materializes all 2**d vertices.
MAX_MATERIALIZED_D = 24


class Component(str, enum.Enum):
    FULL = "full"
    EVEN = "even"
    ODD = "odd"


def popcount(a):
    """Bit count of every entry of an integer array (or a Python int)."""
    if isinstance(a, (int, np.integer)):
        return int(a).bit_count()
    return np.bitwise_count(np.asarray(a)).astype(np.int64)


@dataclass(frozen=True)
class CubeParams:
    """Dimension ``d``, adjacency distance ``k`` and the component in use."""

    d: int
    k: int = 1
    component: Component = Component.FULL

    def __post_init__(self):
        comp = self.component
        if not isinstance(comp, Component):
            try:
                comp = Component(str(comp).lower())
            except ValueError:
                raise CubeCutError(f"unknown component {self.component!r}") from None
            object.__setattr__(self, "component", comp)
        if isinstance(self.d, bool) or not isinstance(self.d, (int, np.integer)):
            raise CubeCutError(f"d must be an integer, got {self.d!r}")
        if isinstance(self.k, bool) or not isinstance(self.k, (int, np.integer)):
            raise CubeCutError(f"k must be an integer, got {self.k!r}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "k", int(self.k))
        if self.d < 1:
            raise CubeCutError(f"d must be >= 1, got {self.d}")
        if not 1 <= self.k <= self.d:
            raise CubeCutError(f"k must satisfy 1 <= k <= d, got k={self.k}, d={self.d}")
        if self.k % 2 == 1 and comp is not Component.FULL:
            raise CubeCutError(f"odd k={self.k} requires the full cube, got {comp.value}")
        if self.k % 2 == 0 and comp is Component.FULL:
            raise CubeCutError(
                f"even k={self.k} disconnects the cube; choose component 'even' or 'odd'"
            )

    @classmethod
    def for_k(cls, d, k, component=None):
        """Build params, defaulting the component to full (odd k) or even (even k)."""
        if component is None:
            component = Component.FULL if k % 2 else Component.EVEN
        return cls(d, k, component)

    @property
    def n_vertices(self) -> int:
        return 1 << self.d if self.component is Component.FULL else 1 << (self.d - 1)

    @property
    def degree(self) -> int:
        return comb(self.d, self.k)

    @property
    def crossing_degree(self) -> int:
        """Edges at each vertex crossing any coordinate cut: C(d-1, k-1)."""
        return comb(self.d - 1, self.k - 1)

    @property
    def n_edges(self) -> int:
        return self.n_vertices * self.degree // 2

    @property
    def root(self) -> int:
        """Smallest vertex index of the component."""
        return 1 if self.component is Component.ODD else 0

    def contains(self, v: int) -> bool:
        if not 0 <= v < (1 << self.d):
            return False
        if self.component is Component.FULL:
            return True
        return (int(v).bit_count() % 2 == 1) == (self.component is Component.ODD)

    def describe(self) -> dict:
        return {"d": self.d, "k": self.k, "component": self.component.value}


def require_materializable(params: CubeParams, what: str = "this operation"):
    if params.d > MAX_MATERIALIZED_D:
        raise ScaleError(
            f"{what} materializes all 2^d vertices; d={params.d} exceeds the cap "
            f"d <= {MAX_MATERIALIZED_D}"
        )


@lru_cache(maxsize=None)
def flip_masks(d: int, k: int) -> np.ndarray:
    """All d-bit masks of popcount k, ascending."""
    out = np.array(
        sorted(sum(1 << i for i in c) for c in itertools.combinations(range(d), k)),
        dtype=np.int64,
    )
    out.flags.writeable = False
    return out


@lru_cache(maxsize=64)
def membership(params: CubeParams) -> np.ndarray:
    """Boolean vector of length 2**d marking the component's vertices."""
    require_materializable(params)
    idx = np.arange(1 << params.d, dtype=np.int64)
    if params.component is Component.FULL:
        mask = np.ones(idx.shape, dtype=bool)
    else:
        odd = (popcount(idx) & 1).astype(bool)
        mask = odd if params.component is Component.ODD else ~odd
    mask.flags.writeable = False
    return mask


@lru_cache(maxsize=64)
def vertices(params: CubeParams) -> np.ndarray:
    """Vertex indices of the component, ascending."""
    out = np.flatnonzero(membership(params)).astype(np.int64)
    out.flags.writeable = False
    return out


def _check_vertex(params: CubeParams, v: int) -> int:
    v = int(v)
    if not params.contains(v):
        raise CubeCutError(f"vertex {v} is not in the {params.component.value} component of Q_{params.d}")
    return v


def neighbors(params: CubeParams, v: int) -> Iterator[int]:
    """Yield the C(d, k) neighbours ``v ^ m`` of ``v`` in mask order."""
    v = _check_vertex(params, v)
    for m in flip_masks(params.d, params.k):
        yield v ^ int(m)


class Edge(NamedTuple):
    u: int
    v: int


@lru_cache(maxsize=32)
def edge_array(params: CubeParams) -> np.ndarray:
    """All edges as an (E, 2) array of canonical pairs in lexicographic order.

    Row ``i`` is the edge with canonical index ``i``.
    """
    require_materializable(params, "edge enumeration")
    vs = vertices(params)
    nbr = vs[:, None] ^ flip_masks(params.d, params.k)[None, :]
    nbr = np.sort(nbr, axis=1)
    up = nbr > vs[:, None]
    rows = np.broadcast_to(vs[:, None], nbr.shape)[up]
    out = np.stack([rows, nbr[up]], axis=1)
    out.flags.writeable = False
    return out


def edges(params: CubeParams) -> Iterator[Edge]:
    """Yield every edge once, in canonical-index order."""
    for u, v in edge_array(params):
        yield Edge(int(u), int(v))


def edge_index(params: CubeParams, u: int, v: int) -> int:
    """Canonical index of the edge {u, v}."""
    u, v = sorted((_check_vertex(params, u), _check_vertex(params, v)))
    if popcount(u ^ v) != params.k:
        raise CubeCutError(f"{u} and {v} are not adjacent in Q_{{{params.d},{params.k}}}")
    e = edge_array(params)
    key = e[:, 0] << params.d | e[:, 1]
    return int(np.searchsorted(key, (u << params.d) | v))


@dataclass(frozen=True, eq=False)
class VertexSet:
    """A subset of one component, stored as a length-2**d membership vector."""

    params: CubeParams
    bits: np.ndarray = field(repr=False)

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=bool)
        if bits.shape != (1 << self.params.d,):
            raise CubeCutError(f"bits must have length 2^{self.params.d}, got shape {bits.shape}")
        if np.any(bits & ~membership(self.params)):
            raise CubeCutError(f"vertex set leaves the {self.params.component.value} component")
        if bits.flags.writeable:
            bits = bits.copy()
            bits.flags.writeable = False
        object.__setattr__(self, "bits", bits)

    @classmethod
    def empty(cls, params):
        return cls(params, np.zeros(1 << params.d, dtype=bool))

    @classmethod
    def full(cls, params):
        return cls(params, membership(params))

    @classmethod
    def from_indices(cls, params, indices: Iterable[int]):
        bits = np.zeros(1 << params.d, dtype=bool)
        idx = np.fromiter((int(i) for i in indices), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= bits.size):
            raise CubeCutError("vertex index out of range")
        bits[idx] = True
        return cls(params, bits)

    @classmethod
    def from_local_mask(cls, params, mask: int):
        """Build from an integer whose bit i marks the i-th component vertex."""
        vs = vertices(params)
        sel = [vs[i] for i in range(len(vs)) if (mask >> i) & 1]
        return cls.from_indices(params, sel)

    def local_mask(self) -> int:
        """Inverse of ``from_local_mask``; sensible for small components only."""
        sel = self.bits[vertices(self.params)]
        return sum(1 << int(i) for i in np.flatnonzero(sel))

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def __len__(self):
        return int(np.count_nonzero(self.bits))

    def __contains__(self, v):
        return 0 <= v < self.bits.size and bool(self.bits[v])

    def __eq__(self, other):
        if not isinstance(other, VertexSet):
            return NotImplemented
        return self.params == other.params and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((self.params, self.bits.tobytes()))

    def __repr__(self):
        n = len(self)
        head = ", ".join(str(i) for i in self.indices()[:8])
        more = ", ..." if n > 8 else ""
        return f"VertexSet(d={self.params.d}, k={self.params.k}, |A|={n}, {{{head}{more}}})"

    def _same(self, other):
        if self.params != other.params:
            raise CubeCutError("vertex sets belong to different cubes or components")

    def complement(self):
        return VertexSet(self.params, membership(self.params) & ~self.bits)

    def __xor__(self, other):
        self._same(other)
        return VertexSet(self.params, self.bits ^ other.bits)

    def __and__(self, other):
        self._same(other)
        return VertexSet(self.params, self.bits & other.bits)

    def __or__(self, other):
        self._same(other)
        return VertexSet(self.params, self.bits | other.bits)

    def canonical(self):
        """The side of the cut that excludes the component's root vertex."""
        return self.complement() if self.bits[self.params.root] else self

    def indicator(self) -> np.ndarray:
        return self.bits.astype(np.float64)


def coordinate_cut(params: CubeParams, j: int, b: int) -> VertexSet:
    """``{x : x_j = b}`` intersected with the component (``j`` is 1-based)."""
    if not 1 <= j <= params.d:
        raise CubeCutError(f"coordinate j must be in [1, {params.d}], got {j}")
    if b not in (0, 1):
        raise CubeCutError(f"bit b must be 0 or 1, got {b}")
    idx = np.arange(1 << params.d, dtype=np.int64)
    bits = (((idx >> (j - 1)) & 1) == b) & membership(params)
    return VertexSet(params, bits)


def coordinate_cuts(params: CubeParams) -> list[tuple[int, int, VertexSet]]:
    """All 2d coordinate cuts as ``(j, b, set)`` in (j, b) order."""
    return [(j, b, coordinate_cut(params, j, b)) for j in range(1, params.d + 1) for b in (0, 1)]


def _check_set(params, A):
    if A.params != params:
        raise CubeCutError("vertex set was built for different cube parameters")


def boundary_mask(params: CubeParams, A: VertexSet) -> np.ndarray:
    """Boolean vector over canonical edge indices marking the edges of ∂(A)."""
    _check_set(params, A)
    e = edge_array(params)
    return A.bits[e[:, 0]] != A.bits[e[:, 1]]


def boundary(params: CubeParams, A: VertexSet) -> frozenset[Edge]:
    e = edge_array(params)
    return frozenset(Edge(int(u), int(v)) for u, v in e[boundary_mask(params, A)])


def cut_size(params: CubeParams, A: VertexSet) -> int:
    """Number of edges with exactly one endpoint in ``A``."""
    return int(np.count_nonzero(boundary_mask(params, A)))


def hamming_distance(A: VertexSet, B: VertexSet) -> int:
    A._same(B)
    return int(np.count_nonzero(A.bits ^ B.bits))


def is_balanced(A: VertexSet) -> bool:
    return 2 * len(A) == A.params.n_vertices


def are_orthogonal(A: VertexSet, B: VertexSet) -> bool:
    return 2 * hamming_distance(A, B) == A.params.n_vertices


def laplacian_apply(params: CubeParams, values: np.ndarray) -> np.ndarray:
    """Apply the unnormalized Laplacian of the whole graph Q_{d,k} along the last axis.

    Works on the ambient cube (both components for even k); integer input
    stays integer, so eigen-relations can be checked exactly.
    """
    d = params.d
    require_materializable(params)
    values = np.asarray(values)
    if values.shape[-1] != 1 << d:
        raise CubeCutError(f"expected vectors of length 2^{d}")
    idx = np.arange(1 << d, dtype=np.int64)
    acc = np.zeros_like(values)
    for m in flip_masks(d, params.k):
        acc += values[..., idx ^ m]
    return params.degree * values - acc
