"""Fourier analysis on {0,1}^d and spectral descriptions of cuts in Q_{d,k}.

Characters are ``chi_S(x) = (-1)^popcount(x & S)`` with ``S`` a subset bitmask
in the same little-endian encoding as vertices.  The forward transform carries
the ``2**-d`` factor (coefficients are expectations), the inverse carries none.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Callable

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._errors import CubeCutError
from ._validation import check_cube_vectors, check_power_of_two
from .bitcube import (
    MAX_MATERIALIZED_D,
    Component,
    CubeParams,
    VertexSet,
    coordinate_cuts,
    cut_size,
    hamming_distance,
    is_balanced,
    membership,
    popcount,
)

# floating tolerance for "is this function boolean / parity-supported"
_EXACT_TOL = 1e-12


@dataclass(frozen=True)
class CubeFunction:
    """Real function on {0,1}^d as a dense vector indexed by vertex."""

    values: np.ndarray
    d: int

    @classmethod
    def of(cls, values):
        values = np.asarray(values, dtype=np.float64)
        return cls(values, check_power_of_two(values.shape[-1]))

    @property
    def is_boolean(self) -> bool:
        v = self.values
        return bool(np.all((np.abs(v) < _EXACT_TOL) | (np.abs(v - 1) < _EXACT_TOL)))


@dataclass(frozen=True)
class FourierSpectrum:
    """Dense coefficients ``f^(S)`` indexed by subset bitmask."""

    coeffs: np.ndarray
    d: int

    def __getitem__(self, S):
        return self.coeffs[S]

    def levels(self) -> np.ndarray:
        return levels(self.d)

    def total_mass(self) -> float:
        return float(np.dot(self.coeffs, self.coeffs))


def levels(d: int) -> np.ndarray:
    """``|S|`` for every subset mask ``S`` of ``[d]``."""
    return popcount(np.arange(1 << d, dtype=np.int64))


def _butterfly(a: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard butterflies along the last axis."""
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < n:
        blocks = a.reshape(*lead, n // (2 * h), 2, h)
        x = blocks[..., 0, :].copy()
        y = blocks[..., 1, :]
        blocks[..., 0, :] += y
        blocks[..., 1, :] = x - y
        h *= 2
    return a


def _as_values(f):
    if isinstance(f, CubeFunction):
        return f.values
    if isinstance(f, VertexSet):
        return f.indicator()
    return np.asarray(f, dtype=np.float64)


def wht(f) -> FourierSpectrum:
    """Fourier coefficients ``f^(S) = 2^-d sum_x f(x) chi_S(x)`` in O(d 2^d)."""
    values = _as_values(f)
    if values.ndim != 1:
        raise CubeCutError("wht expects a single function; use WalshHadamardTransformer for batches")
    d = check_power_of_two(values.shape[0])
    if d > MAX_MATERIALIZED_D:
        raise CubeCutError(f"d={d} exceeds the dense-transform cap {MAX_MATERIALIZED_D}")
    return FourierSpectrum(_butterfly(values) / (1 << d), d)


def inverse_wht(spectrum) -> CubeFunction:
    """``f(x) = sum_S f^(S) chi_S(x)``."""
    coeffs = spectrum.coeffs if isinstance(spectrum, FourierSpectrum) else np.asarray(spectrum, float)
    d = check_power_of_two(coeffs.shape[-1])
    return CubeFunction(_butterfly(coeffs), d)


def character(d: int, S: int) -> np.ndarray:
    """The +-1 vector of ``chi_S`` (integer dtype)."""
    x = np.arange(1 << d, dtype=np.int64)
    return 1 - 2 * (popcount(x & S) & 1)


@dataclass(frozen=True)
class EigenvalueTable:
    """Laplacian (``lam``) and adjacency (``mu``) eigenvalues of Q_{d,k} by level."""

    d: int
    k: int
    lam: tuple[int, ...]
    mu: tuple[int, ...]

    def by_mask(self) -> np.ndarray:
        """Laplacian eigenvalue of every character, indexed by subset mask."""
        return np.asarray(self.lam, dtype=np.float64)[levels(self.d)]

    def rows(self):
        return [(s, self.lam[s], self.mu[s]) for s in range(self.d + 1)]


def laplacian_eigenvalue(d: int, k: int, s: int) -> int:
    """``2 * sum over odd j of C(s, j) C(d - s, k - j)`` in exact integers."""
    return 2 * sum(comb(s, j) * comb(d - s, k - j) for j in range(1, k + 1, 2))


def krawtchouk(k: int, s: int, d: int) -> int:
    """Binary Krawtchouk polynomial ``K_k(s; d)``."""
    return sum((-1) ** j * comb(s, j) * comb(d - s, k - j) for j in range(k + 1))


def laplacian_eigenvalues(d: int, k: int) -> EigenvalueTable:
    if d < 1 or not 1 <= k <= d:
        raise CubeCutError(f"need 1 <= k <= d, got d={d}, k={k}")
    lam = tuple(laplacian_eigenvalue(d, k, s) for s in range(d + 1))
    mu = tuple(krawtchouk(k, s, d) for s in range(d + 1))
    return EigenvalueTable(d, k, lam, mu)


def cut_size_via_fourier(params: CubeParams, A: VertexSet) -> float:
    """``2^d sum_S lambda_S f^(S)^2`` for the indicator ``f`` of ``A``."""
    if A.params != params:
        raise CubeCutError("vertex set was built for different cube parameters")
    spec = wht(A.indicator())
    lam = laplacian_eigenvalues(params.d, params.k).by_mask()
    return float((1 << params.d) * np.dot(lam, spec.coeffs**2))


def level_mass(spectrum: FourierSpectrum, level_predicate: Callable[[int], bool]) -> float:
    """Sum of ``f^(S)^2`` over masks whose level satisfies the predicate."""
    keep = np.array([bool(level_predicate(s)) for s in range(spectrum.d + 1)])
    sel = keep[levels(spectrum.d)]
    return float(np.dot(spectrum.coeffs[sel], spectrum.coeffs[sel]))


def tail_predicate(d: int, k: int) -> Callable[[int], bool]:
    """Levels outside the ones a sparse cut may occupy.

    Odd k: levels >= 2.  Even k: levels 2..d-2 (the top two levels mirror the
    bottom two on a parity component).
    """
    if k % 2:
        return lambda s: s >= 2
    return lambda s: 2 <= s <= d - 2


@dataclass(frozen=True)
class FknDiagnosis:
    epsilon: float
    nearest: tuple[int, int]
    distance: int
    tail_mass: float


def expansion_excess(params: CubeParams, A: VertexSet) -> float:
    """``|∂A| / (C(d-1, k-1) |A|) - 1``; zero exactly for coordinate cuts."""
    n = len(A)
    if n == 0:
        raise CubeCutError("expansion of the empty set is undefined")
    return cut_size(params, A) / (params.crossing_degree * n) - 1.0


def nearest_coordinate_cut(params: CubeParams, A: VertexSet) -> tuple[int, int, int]:
    """``(j, b, |A △ S_{j,b}|)`` minimizing the distance; ties go to the first (j, b)."""
    best = None
    for j, b, S in coordinate_cuts(params):
        dist = hamming_distance(A, S)
        if best is None or dist < best[2]:
            best = (j, b, dist)
    return best


def fkn_diagnose(params: CubeParams, A: VertexSet) -> FknDiagnosis:
    """Distance of a balanced cut to the coordinate cuts, against its expansion."""
    if A.params != params:
        raise CubeCutError("vertex set was built for different cube parameters")
    if not is_balanced(A):
        raise CubeCutError(f"fkn_diagnose needs a balanced set, got |A|={len(A)} of {params.n_vertices}")
    j, b, dist = nearest_coordinate_cut(params, A)
    tail = level_mass(wht(A.indicator()), tail_predicate(params.d, params.k))
    return FknDiagnosis(expansion_excess(params, A), (j, b), dist, tail)


def _parity_support(values: np.ndarray, d: int, component: Component):
    component = Component(component)
    if component is Component.FULL:
        raise CubeCutError("symmetry needs a parity component ('even' or 'odd')")
    outside = ~membership(CubeParams(d, 2, component)) if d >= 2 else None
    if outside is None:
        raise CubeCutError("parity components need d >= 2")
    if np.any(np.abs(values[outside]) > _EXACT_TOL):
        raise CubeCutError(f"function does not vanish outside the {component.value} component")
    return component


def symmetry_defect(f, component: Component = Component.EVEN) -> float:
    """``max_T |f^(T) -+ f^([d] minus T)|`` for a parity-supported function."""
    values = _as_values(f)
    d = check_power_of_two(values.shape[0])
    component = _parity_support(values, d, component)
    c = wht(values).coeffs
    mirror = c[np.arange(1 << d) ^ ((1 << d) - 1)]
    sign = 1.0 if component is Component.EVEN else -1.0
    return float(np.max(np.abs(c - sign * mirror)))


def even_symmetry_check(f, component: Component = Component.EVEN, tol: float = 1e-9) -> bool:
    """True iff the spectrum is (anti)symmetric under ``T -> [d] minus T``."""
    return symmetry_defect(f, component) <= tol


@dataclass(frozen=True)
class DecompositionReport:
    """Deviations found while checking the even-component FKN decomposition.

    ``r2_odd_deviation`` is recorded, not asserted: pointwise ``2 S_2^2 - S_2``
    only matches its closed form on even-weight inputs.
    """

    epsilon: float
    r1_spectrum_deviation: float
    r2_even_deviation: float
    r1_plus_r2_odd: float
    mass_split_deviation: float
    empty_coeff_deviation: float
    r2_odd_deviation: float

    @property
    def max_deviation(self) -> float:
        return max(
            self.r1_spectrum_deviation,
            self.r2_even_deviation,
            self.r1_plus_r2_odd,
            self.mass_split_deviation,
            self.empty_coeff_deviation,
        )


def fkn_decomposition_check(f) -> DecompositionReport:
    """Split ``f`` into bottom levels ``S1``, top levels ``S2`` and middle ``L``.

    ``f`` must be a 0/1 function supported on the even-weight vertices with
    ``E[f^2] = 1/4``, i.e. a balanced cut of the even component, and ``d >= 3``.
    """
    values = _as_values(f)
    d = check_power_of_two(values.shape[0])
    if d < 3:
        raise CubeCutError("the decomposition needs d >= 3 so the bottom and top levels are disjoint")
    if not CubeFunction(values, d).is_boolean:
        raise CubeCutError("function is not 0/1 valued")
    _parity_support(values, d, Component.EVEN)
    if abs(np.mean(values**2) - 0.25) > _EXACT_TOL:
        raise CubeCutError("function must satisfy E[f^2] = 1/4")

    n = 1 << d
    full = n - 1
    c = wht(values).coeffs
    lv = levels(d)
    s1 = inverse_wht(np.where(lv <= 1, c, 0.0)).values
    s2 = inverse_wht(np.where(lv >= d - 1, c, 0.0)).values
    mid = inverse_wht(np.where((lv >= 2) & (lv <= d - 2), c, 0.0)).values
    eps = float(np.mean(mid**2))

    r1 = 2 * s1**2 - s1
    r2 = 2 * s2**2 - s2

    singles = [1 << i for i in range(d)]
    r1_hat = np.zeros(n)
    r2_hat = np.zeros(n)
    r1_hat[0] = -eps
    r2_hat[full] = -eps
    for a in range(d):
        for b in range(a + 1, d):
            pair = singles[a] | singles[b]
            r1_hat[pair] += 4 * c[singles[a]] * c[singles[b]]
            r2_hat[full ^ pair] += 4 * c[singles[a]] * c[singles[b]]
    r2_closed = inverse_wht(r2_hat).values
    r1_closed = inverse_wht(r1_hat).values

    odd = (lv & 1).astype(bool)  # vertex parity uses the same popcount
    mass_s1 = float(np.mean(s1**2))
    mass_s2 = float(np.mean(s2**2))
    return DecompositionReport(
        epsilon=eps,
        r1_spectrum_deviation=float(np.max(np.abs(wht(r1).coeffs - r1_hat))),
        r2_even_deviation=float(np.max(np.abs(r2 - r2_closed)[~odd])),
        r1_plus_r2_odd=float(np.max(np.abs(r1_closed + r2_closed)[odd])),
        mass_split_deviation=max(abs(mass_s1 - mass_s2), abs(mass_s1 + mass_s2 + eps - 0.25)),
        empty_coeff_deviation=float(abs(c[0] - 0.25)),
        r2_odd_deviation=float(np.max(np.abs(r2 - r2_closed)[odd])),
    )


@dataclass(frozen=True)
class HypercontractivityReport:
    d: int
    degree: int
    trials: int
    bound: float
    worst_ratio: float
    violations: int


def random_low_degree(d: int, degree: int, rng: np.random.Generator) -> np.ndarray:
    """Values of a polynomial with Gaussian coefficients on levels <= degree."""
    coeffs = np.where(levels(d) <= degree, rng.standard_normal(1 << d), 0.0)
    return inverse_wht(coeffs).values


def lp_norm(values: np.ndarray, p: float) -> float:
    """``(E |f|^p)^(1/p)`` under the uniform measure."""
    return float(np.mean(np.abs(values) ** p) ** (1.0 / p))


def hypercontractivity_spot_check(d: int, degree: int, trials: int, seed: int = 0) -> HypercontractivityReport:
    """Check ``||f||_4 <= 3^(degree/2) ||f||_2`` on random degree-bounded polynomials."""
    if not 0 <= degree <= d:
        raise CubeCutError(f"degree must lie in [0, d], got {degree}")
    rng = np.random.default_rng(seed)
    bound = 3.0 ** (degree / 2)
    worst = 0.0
    bad = 0
    for _ in range(trials):
        f = random_low_degree(d, degree, rng)
        ratio = lp_norm(f, 4) / lp_norm(f, 2)
        worst = max(worst, ratio)
        bad += ratio > bound * (1 + 1e-12)
    return HypercontractivityReport(d, degree, trials, bound, worst, int(bad))


class WalshHadamardTransformer(TransformerMixin, BaseEstimator):
    """Row-wise Fourier transform of functions on {0,1}^d.

    Each row of ``X`` holds the ``2**d`` values of one function.  ``transform``
    returns coefficients (optionally only the levels up to ``max_level``, with
    higher levels zeroed); ``inverse_transform`` maps coefficients back.
    """

    def __init__(self, max_level=None):
        self.max_level = max_level

    def fit(self, X, y=None):
        X = check_cube_vectors(X)
        self.n_features_in_ = X.shape[1]
        self.d_ = check_power_of_two(X.shape[1])
        if self.max_level is not None and not 0 <= self.max_level <= self.d_:
            raise CubeCutError(f"max_level must lie in [0, {self.d_}]")
        return self

    def transform(self, X):
        check_is_fitted(self, "d_")
        X = check_cube_vectors(X, n_features=self.n_features_in_)
        out = _butterfly(X) / self.n_features_in_
        if self.max_level is not None:
            out[:, levels(self.d_) > self.max_level] = 0.0
        return out

    def inverse_transform(self, X):
        check_is_fitted(self, "d_")
        X = check_cube_vectors(X, n_features=self.n_features_in_)
        return _butterfly(X)

    def level_masses(self, X):
        """Fourier mass per level, shape ``(n_samples, d + 1)``."""
        coeffs = self.transform(X)
        lv = levels(self.d_)
        return np.stack([np.sum(coeffs[:, lv == s] ** 2, axis=1) for s in range(self.d_ + 1)], axis=1)


def eigengap_ratio(d: int, k: int):
    """``min lambda_s / lambda_1`` over the levels that must clear the gap.

    Odd k: levels ``2..d``.  Even k: levels ``2..d-2``.  None when that range
    is empty.
    """
    lam = laplacian_eigenvalues(d, k).lam
    top = d if k % 2 else d - 2
    if top < 2 or lam[1] == 0:
        return None
    return min(lam[s] for s in range(2, top + 1)) / lam[1]


def eigengap_holds(d: int, k: int) -> bool:
    """``2 lambda_s >= 3 lambda_1`` on every level of the gap range (exact integers)."""
    lam = laplacian_eigenvalues(d, k).lam
    top = d if k % 2 else d - 2
    return all(2 * lam[s] >= 3 * lam[1] for s in range(2, top + 1))


def eigengap_threshold(k: int, d_max: int = 60):
    """Least ``d0 >= k`` such that the gap holds for every ``d0 <= d <= d_max``.

    None if it already fails at ``d_max``.
    """
    d0 = None
    for d in range(d_max, k - 1, -1):
        if not eigengap_holds(d, k):
            break
        d0 = d
    return d0
