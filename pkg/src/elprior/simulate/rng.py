"""Counter-based uniform streams for reproducible replications.

Replication ``r`` of a run with master seed ``S`` draws its ``i``-th uniform
as a pure function of ``(S, r, i)``:

    key_r = mix64(mix64(S) + (r + 1) * GOLDEN)
    x_ri  = mix64(key_r + (i + 1) * GOLDEN)
    u_ri  = ((x_ri >> 12) + 0.5) * 2^-52

``mix64`` is the SplitMix64 output finalizer, so for fixed ``r`` the stream
``x_r0, x_r1, ...`` is exactly SplitMix64 seeded with ``key_r``. All
arithmetic is modulo 2^64. ``u`` lies strictly inside ``(0, 1)``: the
smallest value is 2^-53 and the largest 1 - 2^-53, both exact doubles.

Because nothing depends on evaluation order, any partition of replications
across workers or blocks produces bit-identical variates.
"""

from __future__ import annotations

import numpy as np

GENERATOR_ID = "splitmix64-counter/v1"
GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S12 = np.uint64(12)
_TWO_M52 = 2.0**-52
_MASK64 = (1 << 64) - 1


def mix64(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (x ^ (x >> _S30)) * _M1
        z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def stream_keys(master_seed: int, reps: np.ndarray) -> np.ndarray:
    """Per-replication keys for replication indices ``reps``."""
    seed = np.asarray([master_seed & _MASK64], dtype=np.uint64)
    base = mix64(seed)
    r = np.asarray(reps, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(base + (r + np.uint64(1)) * GOLDEN)


def uniforms(master_seed: int, rep_start: int, rep_stop: int, n: int) -> np.ndarray:
    """``(rep_stop - rep_start, n)`` array of uniforms in the open unit interval."""
    keys = stream_keys(master_seed, np.arange(rep_start, rep_stop, dtype=np.uint64))
    with np.errstate(over="ignore"):
        offsets = (np.arange(n, dtype=np.uint64) + np.uint64(1)) * GOLDEN
        x = mix64(keys[:, None] + offsets[None, :])
    return ((x >> _S12).astype(np.float64) + 0.5) * _TWO_M52


def uniform_scalar(master_seed: int, rep: int, index: int) -> float:
    """Reference implementation with Python integers, for testing."""

    def mix(v: int) -> int:
        v &= _MASK64
        v = ((v ^ (v >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        v = ((v ^ (v >> 27)) * 0x94D049BB133111EB) & _MASK64
        return v ^ (v >> 31)

    golden = 0x9E3779B97F4A7C15
    key = mix(mix(master_seed) + (rep + 1) * golden)
    x = mix(key + (index + 1) * golden)
    return ((x >> 12) + 0.5) * _TWO_M52
