"""Input checks shared by the estimators and the functional API."""
import numbers

import numpy as np
from sklearn.utils.validation import check_array

from ._errors import CubeCutError

UINT64_MAX = (1 << 64) - 1


def check_power_of_two(n) -> int:
    """Return ``d`` with ``n == 2**d``; reject anything else."""
    n = int(n)
    if n < 2 or n & (n - 1):
        raise CubeCutError(f"length must be a power of two >= 2, got {n}")
    return n.bit_length() - 1


def check_cube_vectors(X, n_features=None):
    """2-D float array whose rows are functions on a cube."""
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    check_power_of_two(X.shape[1])
    if n_features is not None and X.shape[1] != n_features:
        raise CubeCutError(f"X has {X.shape[1]} columns, expected {n_features}")
    return X


def check_probability(p, name="p") -> float:
    if isinstance(p, bool) or not isinstance(p, numbers.Real):
        raise CubeCutError(f"{name} must be a real number, got {p!r}")
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise CubeCutError(f"{name} must lie in [0, 1], got {p}")
    return p


def check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, numbers.Integral):
        raise CubeCutError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed <= UINT64_MAX:
        raise CubeCutError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed
