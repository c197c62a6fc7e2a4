"""The compact approximator: write joins, read meets, never undershoot."""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from functools import reduce

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_count, check_support, check_value
from .hashing import HashFamily, keys_to_u64_array
from .lattices import resolve_lattice

LN2 = math.log(2.0)


@dataclass(frozen=True)
class BuildParams:
    """Sizing triple: support estimate n, hash count d, bucket count m."""

    n: int
    d: int
    m: int


def choose_params(n: int, d: int, m_floor: int = 16) -> BuildParams:
    """Size the bucket vector as ceil(n*d / ln 2), floored at m_floor.

    The floor compensates the fixed setup overhead on very short
    supports; 16 is the default knob value.
    """
    n = check_count("n", n, 0)
    d = check_count("d", d, 1)
    m_floor = check_count("m_floor", m_floor, 1)
    m = max(m_floor, math.ceil(n * d / LN2))
    return BuildParams(n=n, d=d, m=m)


def optimal_d(n: int, m: int) -> int:
    """Hash count minimizing the bottom-case error rate at this n, m."""
    n = check_count("n", n, 0)
    m = check_count("m", m, 1)
    if n == 0:
        raise ValueError("n must be >= 1; an empty support has no finite optimum")
    return max(1, round(m * LN2 / n))


_SAVE_MAGIC = b"LSKB"
_SAVE_VERSION = 1
_SAVE_HEADER = struct.Struct("<4sHBxIQQ")
_LATTICE_TAGS = {"nat": 0, "bool": 1}
_TAG_LATTICES = {v: k for k, v in _LATTICE_TAGS.items()}


class CompactApproximator(BaseEstimator):
    """Fixed-size randomized store of an upper approximation of a map.

    Each inserted key spreads its value over ``n_hashes`` buckets,
    merging collisions with the lattice join; reads take the meet over
    the key's buckets. Reads therefore never fall below the stored
    value: ``query(x) >= f(x)`` in the lattice order for every key,
    including keys never inserted (which read back bottom unless all
    their buckets were taken). Space is ``n_buckets`` cells regardless
    of key size or universe size. With the ``bool`` lattice this is
    exactly a Bloom filter; with one hash function it degenerates to a
    plain max-merged table.

    The build phase is single-writer; after it the structure is
    effectively immutable and queries are safe from any number of
    concurrent readers.

    Parameters
    ----------
    lattice : "nat", "bool" or Lattice, default "nat"
        Value lattice. "nat" stores nonnegative integers under max/min.
    n_hashes : int, default 3
        Hash functions per key (ignored when `family` is given).
    n_buckets : int or None, default None
        Bucket count; None sizes ceil(n * n_hashes / ln 2) from the
        fitted support, floored at `m_floor`.
    m_floor : int, default 16
        Lower bound used when auto-sizing.
    seed : int, default 0
        Seed of the double-hashing family (ignored when `family` is
        given).
    family : hash family or None, default None
        Explicit family (e.g. FixedFamily or IndependentFamily); its
        d and m take precedence over `n_hashes`/`n_buckets`.
    """

    def __init__(self, lattice="nat", n_hashes=3, n_buckets=None, m_floor=16,
                 seed=0, family=None):
        self.lattice = lattice
        self.n_hashes = n_hashes
        self.n_buckets = n_buckets
        self.m_floor = m_floor
        self.seed = seed
        self.family = family

    # -- construction ---------------------------------------------------

    def _allocate(self, n_for_sizing: int):
        self.lattice_ = resolve_lattice(self.lattice)
        if self.family is not None:
            self.family_ = self.family
        else:
            d = check_count("n_hashes", self.n_hashes, 1)
            if self.n_buckets is not None:
                m = check_count("n_buckets", self.n_buckets, 1)
            else:
                m = choose_params(n_for_sizing, d, self.m_floor).m
            self.family_ = HashFamily(self.seed, d, m)
        self.n_buckets_ = self.family_.m
        name = self.lattice_.name
        if name == "nat":
            self.buckets_ = np.zeros(self.n_buckets_, dtype=np.int64)
        elif name == "bool":
            self.buckets_ = np.zeros(self.n_buckets_, dtype=bool)
        else:
            self.buckets_ = [self.lattice_.bottom] * self.n_buckets_
        return self

    def fit(self, X, y):
        """Build from support pairs: distinct keys X, non-bottom values y."""
        lat = resolve_lattice(self.lattice)
        keys, values = check_support(X, y, lat)
        self._allocate(len(keys))
        self._insert_batch(keys, values)
        return self

    def partial_fit(self, X, y):
        """Insert more pairs; allocates on the first call.

        Unlike ``fit``, keys may repeat (within or across calls): a
        repeated key simply joins its values. The first call needs an
        explicit ``n_buckets`` or ``family``, since no support size is
        available to auto-size from.
        """
        if not hasattr(self, "buckets_"):
            if self.n_buckets is None and self.family is None:
                raise ValueError(
                    "partial_fit needs n_buckets or family set before the first call"
                )
            self._allocate(0)
        keys = list(X)
        values = list(y)
        if len(keys) != len(values):
            raise ValueError(f"X and y length mismatch: {len(keys)} != {len(values)}")
        for v in values:
            check_value(v, self.lattice_)
        self._insert_batch(keys, values)
        return self

    def insert(self, x, v):
        """Join one value into the buckets of one key."""
        if not hasattr(self, "buckets_"):
            if self.n_buckets is None and self.family is None:
                raise ValueError(
                    "insert needs n_buckets or family set before the first call"
                )
            self._allocate(0)
        check_value(v, self.lattice_)
        idxs = self.family_.indices(x)
        if isinstance(self.buckets_, np.ndarray):
            self.buckets_[idxs] = np.maximum(self.buckets_[idxs], v)
        else:
            join = self.lattice_.join
            for i in idxs:
                self.buckets_[i] = join(self.buckets_[i], v)
        return self

    def _insert_batch(self, keys, values):
        if not keys:
            return
        if isinstance(self.buckets_, np.ndarray):
            mat = self.family_.index_matrix(keys)
            if self.buckets_.dtype == bool:
                # non-bottom bool values are all True
                self.buckets_[mat.ravel()] = True
            else:
                vals = np.asarray(values, dtype=np.int64)
                if vals.size and int(vals.min()) < 0:
                    raise ValueError("nat lattice values must be nonnegative integers")
                np.maximum.at(self.buckets_, mat.ravel(), np.repeat(vals, self.family_.d))
        else:
            join = self.lattice_.join
            for k, v in zip(keys, values):
                for i in self.family_.indices(k):
                    self.buckets_[i] = join(self.buckets_[i], v)

    # -- reads ------------------------------------------------------------

    def query(self, x):
        """Meet over the key's buckets; an upper bound of the stored value."""
        check_is_fitted(self, "buckets_")
        idxs = self.family_.indices(x)
        if isinstance(self.buckets_, np.ndarray):
            out = self.buckets_[idxs].min()
            return bool(out) if self.buckets_.dtype == bool else int(out)
        return reduce(self.lattice_.meet, (self.buckets_[i] for i in idxs))

    def predict(self, X):
        """Vectorized :meth:`query` over a sequence of keys."""
        check_is_fitted(self, "buckets_")
        if isinstance(self.buckets_, np.ndarray):
            mat = self.family_.index_matrix(X)
            return self.buckets_[mat].min(axis=1)
        return [self.query(x) for x in X]

    # -- serialization -----------------------------------------------------

    def save(self, path):
        """Write a binary snapshot; see :meth:`load` for the round trip.

        Layout: magic, version, lattice tag, d, m, seed, then m
        little-endian uint64 bucket values. Only seed-derived families
        over the built-in lattices can be snapshotted.
        """
        check_is_fitted(self, "buckets_")
        if not isinstance(self.family_, HashFamily):
            raise ValueError("only HashFamily-backed approximators can be saved")
        tag = _LATTICE_TAGS.get(self.lattice_.name)
        if tag is None:
            raise ValueError(f"lattice {self.lattice_.name!r} has no serialization tag")
        header = _SAVE_HEADER.pack(
            _SAVE_MAGIC, _SAVE_VERSION, tag,
            self.family_.d, self.family_.m, self.family_.seed,
        )
        body = self.buckets_.astype("<u8").tobytes()
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(body)

    @classmethod
    def load(cls, path) -> "CompactApproximator":
        """Reconstruct a saved approximator bit-exactly."""
        with open(path, "rb") as fh:
            raw = fh.read()
        if len(raw) < _SAVE_HEADER.size:
            raise ValueError("truncated approximator snapshot")
        magic, version, tag, d, m, seed = _SAVE_HEADER.unpack_from(raw)
        if magic != _SAVE_MAGIC:
            raise ValueError("not an approximator snapshot (bad magic)")
        if version != _SAVE_VERSION:
            raise ValueError(f"unsupported snapshot version {version}")
        if tag not in _TAG_LATTICES:
            raise ValueError(f"unknown lattice tag {tag}")
        name = _TAG_LATTICES[tag]
        body = raw[_SAVE_HEADER.size:]
        if len(body) != 8 * m:
            raise ValueError("snapshot body size disagrees with header")
        buckets = np.frombuffer(body, dtype="<u8").astype(np.int64)
        est = cls(lattice=name, n_hashes=d, n_buckets=m, seed=seed)
        est.lattice_ = resolve_lattice(name)
        est.family_ = HashFamily(seed, d, m)
        est.n_buckets_ = m
        est.buckets_ = buckets.astype(bool) if name == "bool" else buckets
        return est


def build(lattice, family, X, y) -> CompactApproximator:
    """Fill a fresh approximator over an explicit hash family."""
    est = CompactApproximator(lattice=lattice, family=family)
    return est.fit(X, y)
