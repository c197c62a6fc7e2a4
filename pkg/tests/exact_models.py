"""Independent exact-model oracles for the Monte-Carlo tests.

The closed forms in the package treat the occupancy of a key's d
buckets as independent (the usual Bloom-filter shortcut). These
oracles compute the exact error probabilities of the structure under
the d-independent-random-functions model, via the occupancy
distribution of a key's buckets (Stirling numbers) and
inclusion-exclusion over bucket subsets. They share no code with the
package's formulas or its simulation.
"""

from functools import lru_cache
from math import comb


@lru_cache(None)
def stirling2(n, k):
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def occupancy(d, m, b):
    """P(d iid uniform balls over m urns land in exactly b distinct urns)."""
    falling = 1
    for t in range(b):
        falling *= m - t
    return stirling2(d, b) * falling / m**d


def inex_all_hit(b, balls, m):
    """P(each urn of a fixed b-subset receives >= 1 of `balls` iid balls)."""
    return sum((-1) ** s * comb(b, s) * (1 - s / m) ** balls for s in range(b + 1))


def hit_all_of_key(d, m, balls):
    """P(every bucket of a key is hit by >= 1 of `balls` iid balls)."""
    return sum(occupancy(d, m, b) * inex_all_hit(b, balls, m) for b in range(1, d + 1))


def phi_model_exact(n, m, d):
    """Exact bottom-case error rate under the independence model."""
    return hit_all_of_key(d, m, d * n)


def psi_uniform_model_exact(n, m, d):
    """Exact uniform-case error rate under the independence model."""
    return sum(hit_all_of_key(d, m, d * (n - i)) for i in range(1, n)) / n
