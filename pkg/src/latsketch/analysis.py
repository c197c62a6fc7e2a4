"""Closed-form error rates of the sketch and Monte-Carlo measurement.

The closed forms treat bucket occupancies as independent, exactly like
the textbook Bloom-filter analysis; they are asymptotically right and
slightly optimistic at very small bucket counts. The Monte-Carlo
harness measures the structure itself: every trial draws a fresh family
of d independently salted hash functions, fills a bucket vector by the
join rule and reads back by the meet rule, so the reported rate is over
hash randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_count
from .hashing import bulk_independent_indices, derive_seed, seed_sequence

_CHUNK = 65536


def phi_exact(n: int, m: float, d: int) -> float:
    """Probability a never-stored key reads back non-bottom (exact form).

    (1 - (1 - 1/m)^(d n))^d: all d buckets of the key must be occupied.
    ``m`` may be fractional for analytic scans.
    """
    n = check_count("n", n, 0)
    d = check_count("d", d, 1)
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return (1.0 - (1.0 - 1.0 / m) ** (d * n)) ** d


def phi_approx(n: int, m: float, d: int) -> float:
    """Exponential approximation (1 - e^(-d n / m))^d of :func:`phi_exact`."""
    n = check_count("n", n, 0)
    d = check_count("d", d, 1)
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return (1.0 - math.exp(-d * n / m)) ** d


def min_phi(d: int) -> float:
    """Value of :func:`phi_approx` at the tuned ratio m = d n / ln 2: 2^-d."""
    d = check_count("d", d, 1)
    return 0.5 ** d


@dataclass(frozen=True)
class ValueDistribution:
    """Strictly increasing non-bottom values with positive multiplicities."""

    values: tuple
    counts: tuple

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        counts = tuple(int(a) for a in self.counts)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "counts", counts)
        if not values:
            raise ValueError("distribution must be nonempty")
        if len(values) != len(counts):
            raise ValueError("values and counts length mismatch")
        if any(a < 1 for a in counts):
            raise ValueError("multiplicities must be >= 1")
        if values[0] < 1:
            raise ValueError("values must lie strictly above the bottom (>= 1)")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("values must be strictly increasing")

    @property
    def n(self) -> int:
        """Support size: total multiplicity."""
        return sum(self.counts)

    @classmethod
    def uniform(cls, n: int) -> "ValueDistribution":
        """Each of the values 1..n taken exactly once."""
        n = check_count("n", n, 1)
        return cls(tuple(range(1, n + 1)), (1,) * n)


def psi_general(dist: ValueDistribution, m: float, d: int) -> float:
    """Error probability on the support for an arbitrary value profile.

    Sum over value levels of (a_i / n) * (1 - (1 - 1/m)^(d T_i))^d with
    T_i the number of strictly larger support points; the top level
    contributes exactly zero (the maximum cannot be stored wrongly).
    """
    d = check_count("d", d, 1)
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    n = dist.n
    total = 0.0
    larger = n
    for a in dist.counts:
        larger -= a
        total += (a / n) * (1.0 - (1.0 - 1.0 / m) ** (d * larger)) ** d
    return total


def psi_uniform(n: int, m: float, d: int) -> float:
    """Error probability on the support when each value occurs once."""
    n = check_count("n", n, 1)
    d = check_count("d", d, 1)
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return sum(
        (1.0 - (1.0 - 1.0 / m) ** (d * (n - i))) ** d for i in range(1, n)
    ) / n


def summand_uniform(i: int, n: int, m: float, d: int) -> float:
    """One level's term (1 - (1 - 1/m)^(d (n-i)))^d of the uniform sum.

    Zero at i = n; its approximate form is minimized near
    d = m ln 2 / (n - i), so larger values favor more hash functions.
    """
    n = check_count("n", n, 1)
    d = check_count("d", d, 1)
    i = check_count("i", i, 1)
    if i > n:
        raise ValueError(f"i must be in [1, {n}], got {i}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return (1.0 - (1.0 - 1.0 / m) ** (d * (n - i))) ** d


def psi_exponential(s: int, m: float, d: int) -> float:
    """Error probability when value v has 2^(s-i) holders, v_i = 2^(s-i).

    Evaluates sum_{i=0}^{s-1} (2^(s-i)/n) (1 - (1 - 1/m)^(d 2^(s-i+1)))^d
    with n = 2^(s+1) - 1; the i = 0 term also covers the bottom case.
    """
    s = check_count("s", s, 1)
    d = check_count("d", d, 1)
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    n = 2 ** (s + 1) - 1
    return sum(
        (2 ** (s - i) / n) * (1.0 - (1.0 - 1.0 / m) ** (d * 2 ** (s - i + 1))) ** d
        for i in range(0, s)
    )


@dataclass(frozen=True)
class MonteCarloReport:
    """Empirical error rate next to its closed-form reference."""

    trials: int
    errors: int
    rate: float
    analytic: float
    seed: int

    @property
    def stderr(self) -> float:
        """Binomial standard error of the empirical rate."""
        return math.sqrt(max(self.rate * (1.0 - self.rate), 0.0) / self.trials)


def _distinct_rows(rng: np.random.Generator, rows: int, cols: int, universe: int) -> np.ndarray:
    """Uniform distinct-key tuples per row, by redraw-on-collision."""
    out = rng.integers(0, universe, size=(rows, cols), dtype=np.int64)
    if cols < 2:
        return out
    while True:
        bad = (np.diff(np.sort(out, axis=1), axis=1) == 0).any(axis=1)
        if not bad.any():
            return out
        out[bad] = rng.integers(0, universe, size=(int(bad.sum()), cols), dtype=np.int64)


def _fill_buckets(idx: np.ndarray, values: np.ndarray, m: int) -> np.ndarray:
    """Per-trial bucket vectors from index tensor (T, n, d) and values (n,)."""
    trials, n, d = idx.shape
    buckets = np.zeros((trials, m), dtype=np.int64)
    rows = np.arange(trials)
    for i in range(n):
        v = values[i]
        for j in range(d):
            col = idx[:, i, j]
            buckets[rows, col] = np.maximum(buckets[rows, col], v)
    return buckets


def measure_bottom_error(n: int, m: int, d: int, universe: int | None = None,
                         trials: int = 10000, seed: int = 0) -> MonteCarloReport:
    """Measure how often an off-support key reads back non-bottom.

    Each trial draws a fresh d-function family, a random distinct-key
    support of size n with distinct values, plus one off-support probe
    key from the same universe; the report compares the observed rate of
    probe reads != bottom with :func:`phi_exact`.
    """
    n = check_count("n", n, 0)
    m = check_count("m", m, 1)
    d = check_count("d", d, 1)
    trials = check_count("trials", trials, 1)
    floor = max(100 * n, n + 1)
    if universe is None:
        universe = floor
    else:
        universe = check_count("universe", universe, 1)
        if universe < floor:
            raise ValueError(f"universe must be >= {floor} (= max(100n, n+1)), got {universe}")

    analytic = phi_exact(n, m, d)
    values = np.arange(1, n + 1, dtype=np.int64)
    key_rng = np.random.default_rng(derive_seed(seed, "bottom-keys"))
    errors = 0
    done = 0
    while done < trials:
        c = min(_CHUNK, trials - done)
        seeds = seed_sequence(seed, c, start=done)
        keys = _distinct_rows(key_rng, c, n + 1, universe)
        idx = bulk_independent_indices(seeds, keys.astype(np.uint64), d, m)
        buckets = _fill_buckets(idx[:, :n, :], values, m)
        probe = idx[:, n, :]
        q = buckets[np.arange(c)[:, None], probe].min(axis=1)
        errors += int((q != 0).sum())
        done += c
    return MonteCarloReport(trials, errors, errors / trials, analytic, seed)


def measure_value_error(dist: ValueDistribution, m: int, d: int,
                        trials: int = 10000, seed: int = 0) -> MonteCarloReport:
    """Measure how often an on-support key reads back a larger value.

    Each trial draws a fresh d-function family over a support realizing
    ``dist``, then queries one support key uniformly at random; the
    report compares the observed rate of reads != true value with
    :func:`psi_general`.
    """
    m = check_count("m", m, 1)
    d = check_count("d", d, 1)
    trials = check_count("trials", trials, 1)
    analytic = psi_general(dist, m, d)
    values = np.repeat(
        np.asarray(dist.values, dtype=np.int64), np.asarray(dist.counts)
    )
    n = len(values)
    keys = np.arange(n, dtype=np.uint64)
    probe_rng = np.random.default_rng(derive_seed(seed, "value-probe"))
    errors = 0
    done = 0
    while done < trials:
        c = min(_CHUNK, trials - done)
        seeds = seed_sequence(seed, c, start=done)
        idx = bulk_independent_indices(seeds, keys, d, m)
        buckets = _fill_buckets(idx, values, m)
        k = probe_rng.integers(0, n, size=c)
        qidx = np.take_along_axis(idx, k[:, None, None], axis=1)[:, 0, :]
        q = buckets[np.arange(c)[:, None], qidx].min(axis=1)
        errors += int((q != values[k]).sum())
        done += c
    return MonteCarloReport(trials, errors, errors / trials, analytic, seed)
