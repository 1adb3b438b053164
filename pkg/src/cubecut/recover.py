"""Orthogonal balanced-cut recovery on a subsampled cube.

The solvers minimize ``sum_i |E'(A_i, V minus A_i)|`` over families of ``d``
balanced, pairwise orthogonal cuts of one component.  Cut size and
orthogonality are both invariant under complementing a cut, so every cut is
handled in canonical form: the side that excludes the component's smallest
vertex.  A family is the tuple of its canonical cuts sorted by their local
bitmask (bit ``i`` = ``i``-th component vertex, compared as integers); among
optimal families the exact solver returns the smallest such tuple.

Exact solving scores every canonical balanced cut once and then looks for a
minimum-weight ``d``-clique of the orthogonality graph:

* pass 1 walks cuts in (score, mask) order and prunes with the sum of the
  smallest remaining candidate scores, starting from the coordinate family as
  incumbent, to find the optimal value;
* pass 2 collects every family attaining the optimum (same order, bound
  ``<= optimum``) and keeps the lexicographically smallest.  When ties are so
  heavy that more than ``_TIE_LIMIT`` optimal families exist, it instead walks
  cuts in mask order and stops at the first optimal leaf, which is the
  smallest family by construction.

Both passes are exponential in ``|V|``; they are capped at ``|V| <= 16``
(``exhaustive``, which drops the bound, at ``|V| <= 8``).
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._errors import CubeCutError, ScaleError
from .bitcube import (
    Component,
    CubeParams,
    VertexSet,
    are_orthogonal,
    coordinate_cut,
    coordinate_cuts,
    edge_array,
    hamming_distance,
    is_balanced,
    membership,
    popcount,
    vertices,
)
from .sample import SampledGraph, SampleParams, sampled_cut_size

#: Largest component size accepted by the branch-and-bound solver.
MAX_BRANCH_BOUND_VERTICES = 16
#: Largest component size accepted by plain enumeration of all families.
MAX_EXHAUSTIVE_VERTICES = 8


class Strategy(str, enum.Enum):
    EXHAUSTIVE = "exhaustive"
    BRANCH_BOUND = "branch_bound"
    LOCAL_SEARCH = "local_search"


@dataclass(frozen=True)
class SolverConfig:
    strategy: Strategy = Strategy.BRANCH_BOUND
    tie_break: str = "canonical_lex"
    restarts: int = 1
    max_passes: int = 1000

    def __post_init__(self):
        try:
            object.__setattr__(self, "strategy", Strategy(self.strategy))
        except ValueError:
            raise CubeCutError(f"unknown strategy {self.strategy!r}") from None
        if self.tie_break != "canonical_lex":
            raise CubeCutError(f"unsupported tie_break {self.tie_break!r}")
        if self.restarts < 1 or self.max_passes < 1:
            raise CubeCutError("restarts and max_passes must be >= 1")

    def describe(self):
        return {
            "strategy": self.strategy.value,
            "tie_break": self.tie_break,
            "restarts": self.restarts,
            "max_passes": self.max_passes,
        }


@dataclass(frozen=True)
class CutFamily:
    """``d`` balanced, pairwise orthogonal cuts of one component."""

    cuts: tuple[VertexSet, ...]

    def __post_init__(self):
        cuts = tuple(self.cuts)
        object.__setattr__(self, "cuts", cuts)
        if not cuts:
            raise CubeCutError("a cut family needs at least one cut")
        params = cuts[0].params
        for A in cuts:
            if A.params != params:
                raise CubeCutError("cuts of one family must share cube parameters")
            if not is_balanced(A):
                raise CubeCutError(f"cut of size {len(A)} is not balanced in |V|={params.n_vertices}")
        for A, B in itertools.combinations(cuts, 2):
            if not are_orthogonal(A, B):
                raise CubeCutError(f"cuts are not orthogonal: |A△B|={hamming_distance(A, B)}")

    @property
    def params(self) -> CubeParams:
        return self.cuts[0].params

    def __len__(self):
        return len(self.cuts)

    def __iter__(self):
        return iter(self.cuts)

    def canonical(self) -> "CutFamily":
        cuts = [A.canonical() for A in self.cuts]
        return CutFamily(tuple(sorted(cuts, key=lambda A: A.local_mask())))

    def membership_codes(self) -> np.ndarray:
        """``(2**d, len)`` 0/1 matrix; row ``x`` says which cuts contain ``x``."""
        return np.stack([A.bits for A in self.cuts], axis=1).astype(np.int8)


@dataclass(frozen=True)
class CutMatch:
    j: int
    b: int
    distance: int


@dataclass(frozen=True)
class MatchReport:
    per_cut: tuple[CutMatch, ...]
    matching_ok: bool
    max_distance: int
    mean_distance: float


def match_to_coordinates(params: CubeParams, family: CutFamily) -> MatchReport:
    """Nearest of the ``2d`` coordinate cuts for every cut of the family.

    ``matching_ok`` holds when the nearest cuts use ``len(family)`` distinct
    coordinates.  Ties go to the smallest ``(j, b)``.
    """
    coords = coordinate_cuts(params)
    per_cut = []
    for A in family:
        if A.params != params:
            raise CubeCutError("family was built for different cube parameters")
        best = min(((hamming_distance(A, S), j, b) for j, b, S in coords))
        per_cut.append(CutMatch(best[1], best[2], best[0]))
    dists = [m.distance for m in per_cut]
    return MatchReport(
        tuple(per_cut),
        len({m.j for m in per_cut}) == len(per_cut),
        max(dists),
        float(np.mean(dists)),
    )


@dataclass(frozen=True)
class RecoveryResult:
    family: CutFamily
    objective: int
    per_cut: tuple[CutMatch, ...]
    matching_ok: bool
    config: SolverConfig
    sample: SampleParams
    nodes: int = field(default=0, compare=False)

    @property
    def exact_recovery(self) -> bool:
        return self.matching_ok and all(m.distance == 0 for m in self.per_cut)

    @property
    def max_distance(self) -> int:
        return max(m.distance for m in self.per_cut)

    @property
    def mean_distance(self) -> float:
        return float(np.mean([m.distance for m in self.per_cut]))

    def to_dict(self) -> dict:
        params = self.family.params
        return {
            "params": params.describe(),
            "family": [[int(v) for v in A.indices()] for A in self.family],
            "objective": int(self.objective),
            "per_cut": [{"j": m.j, "b": m.b, "distance": m.distance} for m in self.per_cut],
            "matching_ok": self.matching_ok,
            "exact_recovery": self.exact_recovery,
            "config": self.config.describe(),
            "p": self.sample.p,
            "seed": self.sample.seed,
        }


# --------------------------------------------------------------------------
# small-component frame: local vertex positions and canonical balanced cuts


@dataclass(frozen=True, eq=False)
class _Frame:
    params: CubeParams
    n: int
    masks: np.ndarray  # canonical balanced cuts as local bitmasks, ascending
    crossing: np.ndarray  # (n_cuts, n_edges) bool: cut separates edge


def _check_cap(params: CubeParams, cap: int, what: str):
    n = params.n_vertices
    if n > cap:
        raise ScaleError(
            f"{what} is capped at |V| <= {cap} "
            f"({comb(n, n // 2)} balanced cuts requested for |V|={n})"
        )


@lru_cache(maxsize=8)
def _frame(params: CubeParams) -> _Frame:
    _check_cap(params, MAX_BRANCH_BOUND_VERTICES, "exact solving")
    vs = vertices(params)
    n = len(vs)
    pos = np.full(1 << params.d, -1, dtype=np.int64)
    pos[vs] = np.arange(n)
    local_edges = pos[edge_array(params)]
    half = n // 2
    # the root (local position 0) stays outside every canonical cut
    masks = np.array(
        sorted(sum(1 << i for i in c) for c in itertools.combinations(range(1, n), half)),
        dtype=np.uint64,
    )
    a = local_edges[:, 0].astype(np.uint64)
    b = local_edges[:, 1].astype(np.uint64)
    crossing = (((masks[:, None] >> a[None, :]) ^ (masks[:, None] >> b[None, :])) & np.uint64(1)).astype(bool)
    masks.flags.writeable = False
    crossing.flags.writeable = False
    return _Frame(params, n, masks, crossing)


def _scores(frame: _Frame, G: SampledGraph) -> np.ndarray:
    return frame.crossing.astype(np.int64) @ G.retained.astype(np.int64)


def _coordinate_local_masks(params: CubeParams) -> list[int]:
    return [coordinate_cut(params, j, 1).canonical().local_mask() for j in range(1, params.d + 1)]


class _CliqueSearch:
    """Minimum-weight ``size``-cliques of the orthogonality graph."""

    def __init__(self, masks, scores, size, half):
        self.masks = masks
        self.scores = scores
        self.size = size
        self.half = half
        self.nodes = 0

    def _orthogonal(self, c, cand):
        return cand[popcount(self.masks[cand] ^ self.masks[c]) == self.half]

    def optimum(self, incumbent: int | None, use_bound: bool = True):
        """Optimal objective; ``incumbent`` is the objective of a known feasible family."""
        order = np.lexsort((self.masks, self.scores))
        self.best = math.inf if incumbent is None else incumbent
        self._descend(order, 0, 0, use_bound)
        return None if self.best == math.inf else int(self.best)

    def _descend(self, cand, depth, cur, use_bound):
        need = self.size - depth
        self.nodes += 1
        s = self.scores
        for i in range(len(cand) - need + 1):
            if use_bound and cur + int(s[cand[i:i + need]].sum()) >= self.best:
                return
            c = cand[i]
            total = cur + int(s[c])
            if need == 1:
                self.best = min(self.best, total)
                continue
            nxt = self._orthogonal(c, cand[i + 1:])
            if len(nxt) >= need - 1:
                self._descend(nxt, depth + 1, total, use_bound)

    def smallest_family(self, target: int, use_bound: bool = True):
        """Lexicographically smallest family (by mask) with objective ``target``."""
        order = np.argsort(self.masks, kind="stable")
        if use_bound:
            # a cut can only sit in an optimal family if it fits next to the
            # size-1 globally cheapest others
            floor = int(np.sort(self.scores)[: self.size - 1].sum())
            order = order[self.scores[order] + floor <= target]
        return self._first(order, [], 0, target, use_bound)

    def _first(self, cand, chosen, cur, target, use_bound):
        need = self.size - len(chosen)
        self.nodes += 1
        if need == 0:
            return list(chosen) if cur == target else None
        if len(cand) < need:
            return None
        s = self.scores
        if use_bound:
            cs = np.sort(s[cand])
            if cur + int(cs[:need].sum()) > target:
                return None
        for i in range(len(cand) - need + 1):
            c = cand[i]
            total = cur + int(s[c])
            if use_bound and total > target:
                continue
            nxt = self._orthogonal(c, cand[i + 1:]) if need > 1 else cand[:0]
            chosen.append(c)
            hit = self._first(nxt, chosen, total, target, use_bound)
            chosen.pop()
            if hit is not None:
                return hit
        return None

    def all_families(self, target: int, limit: int | None = None):
        """Every family with objective exactly ``target``, found in score order.

        Raises ``_TooManyFamilies`` once more than ``limit`` are found.
        """
        order = np.lexsort((self.masks, self.scores))
        out = []
        self._collect(order, [], 0, target, out, limit)
        return out

    def _collect(self, cand, chosen, cur, target, out, limit):
        need = self.size - len(chosen)
        self.nodes += 1
        if need == 0:
            if cur == target:
                out.append(tuple(sorted(int(self.masks[c]) for c in chosen)))
                if limit is not None and len(out) > limit:
                    raise _TooManyFamilies
            return
        s = self.scores
        for i in range(len(cand) - need + 1):
            if cur + int(s[cand[i:i + need]].sum()) > target:
                return
            c = cand[i]
            chosen.append(c)
            self._collect(self._orthogonal(c, cand[i + 1:]), chosen, cur + int(s[c]), target, out, limit)
            chosen.pop()


class _TooManyFamilies(Exception):
    pass


#: Optimal families collected before switching to the mask-order search.
_TIE_LIMIT = 2000


def _family_from_masks(params, masks) -> CutFamily:
    return CutFamily(tuple(VertexSet.from_local_mask(params, int(m)) for m in sorted(masks)))


def _result(G, family, config, nodes=0) -> RecoveryResult:
    family = family.canonical()
    objective = sum(sampled_cut_size(G, A) for A in family)
    match = match_to_coordinates(G.params, family)
    return RecoveryResult(family, objective, match.per_cut, match.matching_ok, config, G.sample, nodes)


def _search(G: SampledGraph, use_bound: bool):
    params = G.params
    frame = _frame(params)
    scores = _scores(frame, G)
    search = _CliqueSearch(frame.masks, scores, params.d, frame.n // 2)
    incumbent = None
    if use_bound:
        coords = _coordinate_local_masks(params)
        if len(set(coords)) == params.d:
            idx = np.searchsorted(frame.masks, np.array(coords, dtype=np.uint64))
            if all(popcount(a ^ b) == frame.n // 2 for a, b in itertools.combinations(coords, 2)):
                incumbent = int(scores[idx].sum())
    return frame, scores, search, incumbent


def solve_exact(G: SampledGraph, config: SolverConfig = SolverConfig()) -> RecoveryResult:
    """Globally optimal family, ties broken by the canonical lexicographic rule."""
    if config.strategy is Strategy.LOCAL_SEARCH:
        raise CubeCutError("solve_exact needs strategy 'exhaustive' or 'branch_bound'")
    use_bound = config.strategy is Strategy.BRANCH_BOUND
    if not use_bound:
        _check_cap(G.params, MAX_EXHAUSTIVE_VERTICES, "exhaustive solving")
    frame, scores, search, incumbent = _search(G, use_bound)
    opt = search.optimum(incumbent, use_bound)
    if opt is None:
        raise CubeCutError(f"no family of {G.params.d} orthogonal balanced cuts exists for {G.params}")
    best = None
    if use_bound:
        try:
            fams = search.all_families(opt, _TIE_LIMIT)
            best = min(fams) if fams else None
        except _TooManyFamilies:
            pass
    if best is None:
        # heavy ties (e.g. p = 0): walk in mask order, first hit is smallest
        chosen = search.smallest_family(opt, use_bound)
        if chosen is None:
            raise RuntimeError("optimum was found but no family attains it")
        best = [frame.masks[c] for c in chosen]
    family = _family_from_masks(G.params, best)
    result = _result(G, family, config, search.nodes)
    if result.objective != opt:
        raise RuntimeError(f"objective mismatch: search {opt}, recount {result.objective}")
    return result


def optimal_families(G: SampledGraph) -> tuple[int, list[CutFamily]]:
    """The optimal value and every family attaining it.

    Used to settle uniqueness questions; the list can be huge when many
    families tie (e.g. ``p = 0``).
    """
    frame, scores, search, incumbent = _search(G, True)
    opt = search.optimum(incumbent, True)
    if opt is None:
        return None, []
    fams = search.all_families(opt)
    return opt, [_family_from_masks(G.params, f) for f in sorted(set(fams))]


# --------------------------------------------------------------------------
# local search


def _initial_family(params: CubeParams) -> list[np.ndarray]:
    """One coordinate cut per coordinate, canonical side."""
    cuts = [coordinate_cut(params, j, 1).canonical() for j in range(1, params.d + 1)]
    fam = CutFamily(tuple(cuts))  # validates orthogonality
    return [A.bits.copy() for A in fam]


def _gains(bits, eu, ev, n_amb):
    """Change in sampled cut size from moving each single vertex across."""
    same = bits[eu] == bits[ev]
    w = np.where(same, 1.0, -1.0)
    return (np.bincount(eu, weights=w, minlength=n_amb) + np.bincount(ev, weights=w, minlength=n_amb)).astype(np.int64)


def _best_swap(i, cuts, member, eu, ev, edge_keys, d):
    """Best balance- and orthogonality-preserving swap for cut ``i``.

    Moving ``u`` out of and ``v`` into ``A_i`` keeps ``|A_i △ A_j|`` fixed for
    every ``j != i`` exactly when ``u`` and ``v`` agree on all other cuts.
    Returns ``(delta, u, v)`` or None.
    """
    bits = cuts[i]
    n_amb = bits.size
    g = _gains(bits, eu, ev, n_amb)
    vs = np.flatnonzero(member)
    sig = np.zeros(vs.size, dtype=np.int64)
    shift = 0
    for j, other in enumerate(cuts):
        if j != i:
            sig |= other[vs].astype(np.int64) << shift
            shift += 1
    inside = bits[vs]
    order = np.lexsort((vs, sig))
    vs, sig, inside = vs[order], sig[order], inside[order]
    bounds = np.flatnonzero(np.diff(sig)) + 1
    starts = np.concatenate(([0], bounds))
    ends = np.concatenate((bounds, [vs.size]))

    best = None
    for lo, hi in zip(starts, ends):
        grp = vs[lo:hi]
        a = grp[inside[lo:hi]]
        b = grp[~inside[lo:hi]]
        if a.size == 0 or b.size == 0:
            continue
        if a.size * b.size > 4096:
            a = a[np.argsort(g[a], kind="stable")[:64]]
            b = b[np.argsort(g[b], kind="stable")[:64]]
        uu, vv = np.meshgrid(a, b, indexing="ij")
        uu, vv = uu.ravel(), vv.ravel()
        lo_, hi_ = np.minimum(uu, vv), np.maximum(uu, vv)
        key = (lo_ << d) | hi_
        pos = np.searchsorted(edge_keys, key)
        adj = (pos < edge_keys.size) & (edge_keys[np.minimum(pos, edge_keys.size - 1)] == key)
        delta = g[uu] + g[vv] + 2 * adj
        k = int(np.lexsort((vv, uu, delta))[0])
        cand = (int(delta[k]), int(uu[k]), int(vv[k]))
        if best is None or cand < best:
            best = cand
    return best


def solve_local(G: SampledGraph, config: SolverConfig = SolverConfig(Strategy.LOCAL_SEARCH)) -> RecoveryResult:
    """Swap-based descent from the coordinate family.

    Each pass visits the cuts once and applies the best improving swap of each
    visited cut.  Restart 0 visits cuts in index order; later restarts use an
    order drawn from the sample seed.  The objective never increases.
    """
    if config.strategy is not Strategy.LOCAL_SEARCH:
        raise CubeCutError("solve_local needs strategy 'local_search'")
    params = G.params
    d = params.d
    member = membership(params)
    edges = G.retained_edges()
    eu, ev = edges[:, 0], edges[:, 1]
    edge_keys = np.sort((eu << d) | ev)
    rng = np.random.default_rng(G.sample.seed)

    best_cuts, best_obj = None, None
    for restart in range(config.restarts):
        visit = np.arange(d) if restart == 0 else rng.permutation(d)
        cuts = _initial_family(params)
        for _ in range(config.max_passes):
            improved = False
            for i in visit:
                swap = _best_swap(int(i), cuts, member, eu, ev, edge_keys, d)
                if swap is not None and swap[0] < 0:
                    _, u, v = swap
                    cuts[i][u] = False
                    cuts[i][v] = True
                    improved = True
            if not improved:
                break
        fam = CutFamily(tuple(VertexSet(params, c) for c in cuts))
        obj = sum(sampled_cut_size(G, A) for A in fam)
        if best_obj is None or obj < best_obj:
            best_cuts, best_obj = fam, obj
    return _result(G, best_cuts, config)


def solve(G: SampledGraph, config: SolverConfig = SolverConfig()) -> RecoveryResult:
    if config.strategy is Strategy.LOCAL_SEARCH:
        return solve_local(G, config)
    return solve_exact(G, config)


class PlantedCutRecovery(BaseEstimator):
    """Recover ``d`` orthogonal sparse cuts from a subsampled cube.

    ``fit`` takes a :class:`~cubecut.sample.SampledGraph`, or an ``(m, 2)``
    array of retained vertex pairs together with ``d``/``k``/``component``.
    After fitting, ``predict`` maps vertex indices to their 0/1 membership code
    across the recovered cuts; under exact recovery this is each vertex's
    coordinate vector up to a permutation and bit flips.

    Parameters
    ----------
    strategy : {'branch_bound', 'exhaustive', 'local_search'}
    restarts, max_passes : int
        Local-search controls; ignored by the exact strategies.
    d, k, component : optional
        Cube description, only needed when ``X`` is an edge array.
    """

    def __init__(self, strategy="branch_bound", restarts=1, max_passes=1000, d=None, k=1, component=None):
        self.strategy = strategy
        self.restarts = restarts
        self.max_passes = max_passes
        self.d = d
        self.k = k
        self.component = component

    def _as_graph(self, X) -> SampledGraph:
        if isinstance(X, SampledGraph):
            return X
        if self.d is None:
            raise CubeCutError("pass a SampledGraph, or set d (and k, component) to fit on an edge array")
        params = CubeParams.for_k(self.d, self.k, self.component)
        X = np.asarray(X, dtype=np.int64)
        if X.ndim != 2 or X.shape[1] != 2:
            raise CubeCutError(f"edge array must have shape (m, 2), got {X.shape}")
        e = edge_array(params)
        keys = e[:, 0] << params.d | e[:, 1]
        lo, hi = np.minimum(X[:, 0], X[:, 1]), np.maximum(X[:, 0], X[:, 1])
        want = lo << params.d | hi
        pos = np.searchsorted(keys, want)
        if np.any(pos >= keys.size) or np.any(keys[np.minimum(pos, keys.size - 1)] != want):
            raise CubeCutError("edge array contains pairs that are not edges of the cube")
        retained = np.zeros(params.n_edges, dtype=bool)
        retained[pos] = True
        return SampledGraph(params, SampleParams(float(retained.mean())), retained)

    def fit(self, X, y=None):
        G = self._as_graph(X)
        config = SolverConfig(self.strategy, restarts=self.restarts, max_passes=self.max_passes)
        self.result_ = solve(G, config)
        self.params_ = G.params
        self.cuts_ = self.result_.family
        self.objective_ = self.result_.objective
        self.matching_ok_ = self.result_.matching_ok
        self.exact_recovery_ = self.result_.exact_recovery
        return self

    def predict(self, X):
        """Membership codes ``(n, d)`` for the vertex indices in ``X``."""
        check_is_fitted(self, "result_")
        X = np.asarray(X, dtype=np.int64).ravel()
        member = membership(self.params_)
        if np.any(X < 0) or np.any(X >= member.size) or not np.all(member[X]):
            raise CubeCutError("vertex index outside the fitted component")
        return self.cuts_.membership_codes()[X]

    def score(self, X=None, y=None):
        """Negative objective, so that larger is better."""
        check_is_fitted(self, "result_")
        return -float(self.objective_)
