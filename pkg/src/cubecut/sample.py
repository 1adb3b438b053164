"""Independent Bernoulli edge subsampling with order-free, reproducible decisions.

Edge ``e`` (canonical index) is retained iff ``u(seed, e) < p``, where ``u`` is
the counter-based uniform from ``cubecut._rng``.  Because the threshold is the
only thing that depends on ``p``, samples for the same seed are nested:
``p1 <= p2`` implies ``retained(p1) ⊆ retained(p2)``.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _rng
from ._errors import CubeCutError
from ._validation import check_probability, check_seed
from .bitcube import CubeParams, VertexSet, boundary_mask, edge_array, membership

_HEADER = "# cubecut sampled-graph v1"
_CHUNK = 1 << 22


@dataclass(frozen=True)
class SampleParams:
    p: float
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "p", check_probability(self.p))
        object.__setattr__(self, "seed", check_seed(self.seed))


@dataclass(frozen=True, eq=False)
class SampledGraph:
    """The retained edge set E' as a boolean vector over canonical edge indices."""

    params: CubeParams
    sample: SampleParams
    retained: np.ndarray = field(repr=False)

    def __post_init__(self):
        r = np.asarray(self.retained, dtype=bool)
        if r.shape != (self.params.n_edges,):
            raise CubeCutError(f"retained must have one flag per edge ({self.params.n_edges}), got {r.shape}")
        if r.flags.writeable:
            r = r.copy()
            r.flags.writeable = False
        object.__setattr__(self, "retained", r)

    def __eq__(self, other):
        if not isinstance(other, SampledGraph):
            return NotImplemented
        return (
            self.params == other.params
            and self.sample == other.sample
            and np.array_equal(self.retained, other.retained)
        )

    @property
    def n_retained(self) -> int:
        return int(np.count_nonzero(self.retained))

    def retained_indices(self) -> np.ndarray:
        return np.flatnonzero(self.retained)

    def retained_edges(self) -> np.ndarray:
        return edge_array(self.params)[self.retained]

    def degrees(self) -> np.ndarray:
        """Retained degree of every ambient vertex (zero off the component)."""
        e = self.retained_edges()
        return np.bincount(e.ravel(), minlength=1 << self.params.d)

    def dumps(self) -> str:
        buf = io.StringIO()
        buf.write(f"{_HEADER}\n")
        buf.write(f"d {self.params.d}\nk {self.params.k}\ncomponent {self.params.component.value}\n")
        buf.write(f"p {self.sample.p!r}\nseed {self.sample.seed}\n")
        idx = self.retained_indices()
        buf.write(f"edges {idx.size}\n")
        for i in idx:
            buf.write(f"{i}\n")
        return buf.getvalue()

    @classmethod
    def loads(cls, text: str) -> "SampledGraph":
        lines = text.splitlines()
        if not lines or lines[0].strip() != _HEADER:
            raise CubeCutError("not a cubecut sampled-graph file")
        head = {}
        pos = 1
        while pos < len(lines):
            key, _, val = lines[pos].partition(" ")
            pos += 1
            head[key] = val.strip()
            if key == "edges":
                break
        try:
            params = CubeParams(int(head["d"]), int(head["k"]), head["component"])
            sample = SampleParams(float(head["p"]), int(head["seed"]))
            count = int(head["edges"])
        except KeyError as exc:
            raise CubeCutError(f"sampled-graph header lacks {exc}") from None
        idx = np.array([int(s) for s in lines[pos:pos + count]], dtype=np.int64)
        if idx.size != count:
            raise CubeCutError(f"expected {count} edge indices, found {idx.size}")
        if idx.size and (idx.min() < 0 or idx.max() >= params.n_edges):
            raise CubeCutError("edge index out of range")
        retained = np.zeros(params.n_edges, dtype=bool)
        retained[idx] = True
        return cls(params, sample, retained)

    def save(self, path):
        Path(path).write_text(self.dumps())

    @classmethod
    def load(cls, path) -> "SampledGraph":
        return cls.loads(Path(path).read_text())


def edge_uniforms(params: CubeParams, seed: int) -> np.ndarray:
    """The uniform attached to every canonical edge index under ``seed``."""
    n = params.n_edges
    parts = [_rng.uniforms(seed, lo, min(lo + _CHUNK, n)) for lo in range(0, n, _CHUNK)]
    return np.concatenate(parts) if parts else np.zeros(0)


def subsample(params: CubeParams, sample: SampleParams) -> SampledGraph:
    if not isinstance(sample, SampleParams):
        raise CubeCutError("sample must be a SampleParams")
    edge_array(params)  # enforces the materialization cap
    retained = edge_uniforms(params, sample.seed) < sample.p
    return SampledGraph(params, sample, retained)


def sampled_cut_size(G: SampledGraph, A: VertexSet) -> int:
    """Retained edges with exactly one endpoint in ``A``."""
    if A.params != G.params:
        raise CubeCutError("vertex set and sampled graph use different cube parameters")
    return int(np.count_nonzero(boundary_mask(G.params, A) & G.retained))


def isolated_vertex_count(G: SampledGraph) -> int:
    """Component vertices left without any retained edge."""
    deg = G.degrees()
    return int(np.count_nonzero((deg == 0) & membership(G.params)))
