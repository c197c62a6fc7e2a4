"""Seeded hash families mapping opaque keys onto bucket indices.

Two families are provided. ``HashFamily`` derives all of its functions
from two 64-bit digests via double hashing, which is the cheap scheme
the search application uses. ``IndependentFamily`` pays for one digest
per function and is the scheme the Monte-Carlo error harness relies on,
since its functions behave like independently drawn random functions
even at very small bucket counts.
"""

from __future__ import annotations

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1

# splitmix64 constants
_GOLDEN = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB

# role salts separating the digest streams of the double-hashing scheme
_ROLE_G1 = 0xA0761D6478BD642F
_ROLE_G2 = 0xE7037ED1A0B428DB


def mix64(x: int) -> int:
    """SplitMix64 finalizer: a 64-bit avalanche mixer."""
    x &= MASK64
    x ^= x >> 30
    x = (x * _MUL1) & MASK64
    x ^= x >> 27
    x = (x * _MUL2) & MASK64
    x ^= x >> 31
    return x


def mix64_array(x: np.ndarray) -> np.ndarray:
    """Vectorized :func:`mix64`; bit-identical to the scalar path."""
    x = x.astype(np.uint64, copy=True)
    x ^= x >> np.uint64(30)
    x *= np.uint64(_MUL1)
    x ^= x >> np.uint64(27)
    x *= np.uint64(_MUL2)
    x ^= x >> np.uint64(31)
    return x


def key_to_u64(key) -> int:
    """Canonicalize a key to an unsigned 64-bit integer.

    Nonnegative ints (code points, ids) are used directly, reduced
    mod 2^64; str/bytes keys are digested. The mapping is stable across
    runs and platforms.
    """
    if isinstance(key, (int, np.integer)):
        key = int(key)
        if key < 0:
            raise ValueError(f"integer keys must be nonnegative, got {key}")
        return key & MASK64
    if isinstance(key, str):
        key = key.encode("utf-8")
    if isinstance(key, (bytes, bytearray)):
        digest = hashlib.blake2b(bytes(key), digest_size=8).digest()
        return int.from_bytes(digest, "little")
    raise TypeError(f"unsupported key type: {type(key).__name__}")


def keys_to_u64_array(keys) -> np.ndarray:
    """Canonicalize a sequence of keys to a uint64 array."""
    arr = np.asarray(keys)
    if arr.dtype.kind in "iu":
        if arr.dtype.kind == "i" and arr.size and int(arr.min()) < 0:
            raise ValueError("integer keys must be nonnegative")
        return arr.astype(np.uint64)
    return np.array([key_to_u64(k) for k in keys], dtype=np.uint64)


def derive_seed(master: int, label: str) -> int:
    """Named 64-bit sub-seed; independent streams for independent uses."""
    key = (int(master) & MASK64).to_bytes(8, "little")
    digest = hashlib.blake2b(label.encode("utf-8"), digest_size=8, key=key).digest()
    return int.from_bytes(digest, "little")


def seed_sequence(master: int, count: int, start: int = 0) -> np.ndarray:
    """Indexed per-trial sub-seeds, independent of how work is chunked."""
    t = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    return mix64_array(np.uint64(int(master) & MASK64) + np.uint64(_GOLDEN) * t)


class HashFamily:
    """d seeded hash functions onto [0, m) via double hashing.

    Two digests g1, g2 are derived per key with seed-salted mixing and
    function j returns (g1 + j*g2) mod 2^64 mod m; g2 is forced odd so
    the progression never degenerates. Immutable and shareable; lookups
    are pure.
    """

    def __init__(self, seed: int, d: int, m: int):
        if d < 1:
            raise ValueError(f"d must be >= 1, got {d}")
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        self.seed = int(seed) & MASK64
        self.d = int(d)
        self.m = int(m)
        self._salt1 = mix64(self.seed ^ _ROLE_G1)
        self._salt2 = mix64(self.seed ^ _ROLE_G2)

    def index(self, key, j: int) -> int:
        if not 0 <= j < self.d:
            raise ValueError(f"function index {j} out of range [0, {self.d})")
        k = key_to_u64(key)
        g1 = mix64(k ^ self._salt1)
        g2 = mix64(k ^ self._salt2) | 1
        return ((g1 + j * g2) & MASK64) % self.m

    def indices(self, key) -> list[int]:
        """The d bucket indices of a key."""
        k = key_to_u64(key)
        g1 = mix64(k ^ self._salt1)
        g2 = mix64(k ^ self._salt2) | 1
        return [((g1 + j * g2) & MASK64) % self.m for j in range(self.d)]

    def index_matrix(self, keys) -> np.ndarray:
        """(len(keys), d) bucket indices for a batch of keys."""
        k = keys_to_u64_array(keys)
        g1 = mix64_array(k ^ np.uint64(self._salt1))
        g2 = mix64_array(k ^ np.uint64(self._salt2)) | np.uint64(1)
        j = np.arange(self.d, dtype=np.uint64)
        idx = (g1[:, None] + j[None, :] * g2[:, None]) % np.uint64(self.m)
        return idx.astype(np.int64)


class IndependentFamily:
    """d independently salted hash functions onto [0, m).

    One fresh digest per (key, function) pair; function j mixes the key
    against salt_j = mix64(seed + golden*(j+1)). This is the family the
    error analysis assumes: the d values of a key carry none of the
    arithmetic structure double hashing introduces.
    """

    def __init__(self, seed: int, d: int, m: int):
        if d < 1:
            raise ValueError(f"d must be >= 1, got {d}")
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        self.seed = int(seed) & MASK64
        self.d = int(d)
        self.m = int(m)
        self._salts = [
            mix64((self.seed + _GOLDEN * (j + 1)) & MASK64) for j in range(self.d)
        ]

    def index(self, key, j: int) -> int:
        if not 0 <= j < self.d:
            raise ValueError(f"function index {j} out of range [0, {self.d})")
        return mix64(key_to_u64(key) ^ self._salts[j]) % self.m

    def indices(self, key) -> list[int]:
        k = key_to_u64(key)
        return [mix64(k ^ s) % self.m for s in self._salts]

    def index_matrix(self, keys) -> np.ndarray:
        k = keys_to_u64_array(keys)
        salts = np.array(self._salts, dtype=np.uint64)
        idx = mix64_array(k[:, None] ^ salts[None, :]) % np.uint64(self.m)
        return idx.astype(np.int64)


def independent_salts(seeds: np.ndarray, d: int) -> np.ndarray:
    """(T, d) salts matching IndependentFamily(seeds[t], d, m) row-wise."""
    seeds = np.asarray(seeds, dtype=np.uint64)
    j = np.arange(1, d + 1, dtype=np.uint64)
    return mix64_array(seeds[:, None] + np.uint64(_GOLDEN) * j[None, :])


def bulk_independent_indices(seeds: np.ndarray, keys: np.ndarray, d: int, m: int) -> np.ndarray:
    """Bucket indices for many trials at once, one family per trial.

    ``seeds``: (T,) per-trial family seeds. ``keys``: (n,) shared by all
    trials or (T, n) per-trial. Returns (T, n, d) int64. Row t agrees
    elementwise with ``IndependentFamily(seeds[t], d, m)``.
    """
    salts = independent_salts(seeds, d)  # (T, d)
    keys = np.asarray(keys, dtype=np.uint64)
    if keys.ndim == 1:
        keys = keys[None, :]
    idx = mix64_array(keys[:, :, None] ^ salts[:, None, :]) % np.uint64(m)
    return idx.astype(np.int64)


class FixedFamily:
    """Explicit hash callables over integer keys; for worked examples."""

    def __init__(self, functions, m: int):
        if not functions:
            raise ValueError("need at least one function")
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        self.functions = list(functions)
        self.d = len(self.functions)
        self.m = int(m)

    def index(self, key, j: int) -> int:
        if not 0 <= j < self.d:
            raise ValueError(f"function index {j} out of range [0, {self.d})")
        v = int(self.functions[j](key))
        if not 0 <= v < self.m:
            raise ValueError(f"function {j} mapped {key!r} to {v}, outside [0, {self.m})")
        return v

    def indices(self, key) -> list[int]:
        return [self.index(key, j) for j in range(self.d)]

    def index_matrix(self, keys) -> np.ndarray:
        return np.array([self.indices(k) for k in keys], dtype=np.int64)
