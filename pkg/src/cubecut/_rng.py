"""Counter-based 64-bit mixing used for edge decisions and per-trial seeds.

``mix64`` is the SplitMix64 finalizer.  The uniform attached to counter ``i``
under ``seed`` is the top 53 bits of
``mix64(mix64(seed + G) + (i + 1) * G)`` scaled to [0, 1), where
``G = 0x9E3779B97F4A7C15`` and all arithmetic is modulo 2**64.  The value
depends only on ``(seed, i)``, never on evaluation order.
"""
import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1


def mix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * _M1) & _MASK
    z = ((z ^ (z >> 27)) * _M2) & _MASK
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_M1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def stream_key(seed: int) -> int:
    return mix64((seed + GOLDEN) & _MASK)


def uniforms(seed: int, start: int, stop: int) -> np.ndarray:
    """Uniforms for counters ``start .. stop - 1``."""
    key = np.uint64(stream_key(seed))
    ctr = np.arange(start + 1, stop + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = _mix64_array(key + ctr * np.uint64(GOLDEN))
    return (z >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def derive_seed(master_seed: int, index: int) -> int:
    """Seed for trial ``index``; trials never share a stream."""
    return mix64((stream_key(master_seed) + (index + 1) * GOLDEN) & _MASK)
