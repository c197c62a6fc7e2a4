import math

import numpy as np
import pytest

from exact_models import phi_model_exact, psi_uniform_model_exact
from latsketch.analysis import (
    MonteCarloReport,
    ValueDistribution,
    _distinct_rows,
    measure_bottom_error,
    measure_value_error,
    min_phi,
    phi_approx,
    phi_exact,
    psi_exponential,
    psi_general,
    psi_uniform,
    summand_uniform,
)
from latsketch.approximator import CompactApproximator
from latsketch.hashing import IndependentFamily, derive_seed, seed_sequence

LN2 = math.log(2.0)


# -- closed forms ------------------------------------------------------------

def test_phi_exact_edges():
    assert phi_exact(0, 433, 3) == 0.0
    assert phi_exact(1, 1, 1) == 1.0


def test_phi_exact_frozen_value():
    # direct evaluation of (1 - (1 - 1/433)^300)^3
    assert phi_exact(100, 433, 3) == pytest.approx(0.12518557598024, abs=1e-12)
    assert phi_exact(100, 433, 1) == pytest.approx(0.20643035686247, abs=1e-12)


def test_phi_approx_values():
    # about 1/8 with three functions, about 1/5 with one
    assert phi_approx(100, 433, 3) == pytest.approx(0.12488506740772, abs=1e-12)
    assert phi_approx(100, 433, 1) == pytest.approx(0.20621837116433, abs=1e-12)
    assert phi_approx(0, 10, 2) == 0.0


def test_min_phi():
    assert min_phi(3) == 0.125
    assert min_phi(1) == 0.5
    assert min_phi(10) == pytest.approx(0.0009765625)


def test_min_phi_halves_exactly():
    for d in range(1, 12):
        assert min_phi(d + 1) / min_phi(d) == 0.5


def test_phi_approx_hits_min_phi_at_tuned_ratio():
    for d in range(1, 8):
        n = 64
        m = d * n / LN2  # real-valued tuned bucket count
        assert phi_approx(n, m, d) == pytest.approx(min_phi(d), rel=1e-12)


def test_phi_exact_close_to_phi_approx_on_grid():
    """The two forms agree within 0.01 whenever m >= 48 and dn/m <= 2.

    The bound does not extend all the way down to m = 10: the per-factor
    gap between (1 - 1/m) and e^(-1/m) adds up to ~0.04 there, so the
    sampled grid starts where the claim actually holds, and the m = 10
    worst case is pinned separately below.
    """
    for n in (5, 20, 100, 500):
        for d in (1, 2, 3, 4):
            for ratio in (0.25, 0.5, 1.0, 2.0):
                m = max(48, int(d * n / ratio))
                if d * n / m > 2:
                    continue
                assert abs(phi_exact(n, m, d) - phi_approx(n, m, d)) < 0.01


def test_phi_forms_gap_at_tiny_m():
    worst = max(
        abs(phi_exact(n, 10, d) - phi_approx(n, 10, d))
        for d in range(1, 6)
        for n in range(0, 20 // d + 1)
    )
    assert worst == pytest.approx(0.0397, abs=0.001)


def test_d1_inverse_linear_decay():
    n = 50
    for ratio in (10, 100, 1000):
        m = n * ratio
        assert phi_exact(n, m, 1) * (m / n) == pytest.approx(1.0, rel=0.1)


def test_value_distribution_validation():
    with pytest.raises(ValueError):
        ValueDistribution((), ())
    with pytest.raises(ValueError):
        ValueDistribution((1, 1), (1, 1))  # not strictly increasing
    with pytest.raises(ValueError):
        ValueDistribution((0,), (1,))  # bottom is not a support value
    with pytest.raises(ValueError):
        ValueDistribution((1,), (0,))  # empty level
    assert ValueDistribution.uniform(4).n == 4


def test_psi_general_single_value_is_zero():
    # the maximum attained value cannot be stored wrongly
    assert psi_general(ValueDistribution((7,), (5,)), 16, 2) == 0.0


def test_psi_general_two_values_hand_value():
    # (1/2) * (1 - (1 - 1/2)^1)^1 = 1/4
    dist = ValueDistribution((1, 2), (1, 1))
    assert psi_general(dist, 2, 1) == pytest.approx(0.25)


def test_psi_general_reduces_to_psi_uniform():
    for n in (1, 2, 5, 16):
        for d in (1, 2, 3):
            m = max(2, math.ceil(2 * n / LN2))
            assert psi_general(ValueDistribution.uniform(n), m, d) == pytest.approx(
                psi_uniform(n, m, d), rel=1e-12, abs=1e-15
            )


def test_psi_uniform_values():
    assert psi_uniform(1, 8, 2) == 0.0
    assert psi_uniform(2, 2, 1) == pytest.approx(0.25)
    # direct evaluation, cross-checked below by Monte Carlo
    assert psi_uniform(8, 24, 2) == pytest.approx(0.08085283391220, abs=1e-12)


def test_summand_uniform():
    for d in range(1, 11):
        assert summand_uniform(8, 8, 24, d) == 0.0
    assert summand_uniform(7, 8, 24, 1) == pytest.approx(1 / 24)
    with pytest.raises(ValueError):
        summand_uniform(0, 8, 24, 1)
    with pytest.raises(ValueError):
        summand_uniform(9, 8, 24, 1)


def test_summand_minimizer_tracks_tuning_rule_at_top_level():
    # i = 1, n = 8, m = 24: analytic minimizer m ln2 / (n - 1) ~ 2.38
    values = {d: summand_uniform(1, 8, 24, d) for d in range(1, 13)}
    best = min(values, key=values.get)
    assert abs(best - 24 * LN2 / 7) <= 1


def test_psi_exponential_values():
    # (2/3) * (1 - (5/6)^4) for one level over six buckets
    assert psi_exponential(1, 6, 1) == pytest.approx(0.34516460905350, abs=1e-12)
    # seven levels puts 255 points on the support
    assert 2 ** (7 + 1) - 1 == 255
    for d in (1, 2, 3, 6):
        for m in (64, 256, 736, 2048):
            assert 0.0 <= psi_exponential(7, m, d) <= 1.0


def test_psi_exponential_monotone_in_m():
    for d in (1, 2, 3):
        values = [psi_exponential(7, m, d) for m in (64, 128, 256, 512, 736, 1024, 2048)]
        assert all(a >= b for a, b in zip(values, values[1:]))


# -- Monte Carlo ---------------------------------------------------------------

def test_report_stderr():
    r = MonteCarloReport(trials=10000, errors=100, rate=0.01, analytic=0.01, seed=0)
    assert r.stderr == pytest.approx(math.sqrt(0.01 * 0.99 / 10000))


def test_bottom_empty_support_never_errs():
    r = measure_bottom_error(0, 16, 2, trials=1000, seed=1)
    assert r.errors == 0 and r.rate == 0.0 and r.analytic == 0.0


def test_bottom_universe_validation():
    with pytest.raises(ValueError):
        measure_bottom_error(10, 64, 2, universe=500, trials=10)  # < 100 n
    measure_bottom_error(10, 64, 2, universe=1000, trials=10)


def test_bottom_error_tracks_model():
    """Empirical rate sits on the exact model value (and near the formula)."""
    n, m, d = 20, 200, 2
    r = measure_bottom_error(n, m, d, trials=200_000, seed=11)
    model = phi_model_exact(n, m, d)
    assert abs(r.rate - model) < 4 * r.stderr
    assert r.analytic == pytest.approx(phi_exact(n, m, d))
    assert abs(r.analytic - model) < 0.001  # formula is a tight approximation here


def test_bottom_error_d1_formula_is_exact():
    n, m, d = 50, 700, 1
    r = measure_bottom_error(n, m, d, trials=200_000, seed=5)
    assert abs(r.rate - r.analytic) < 4 * r.stderr


def test_value_error_single_value_is_exact():
    dist = ValueDistribution((9,), (12,))
    r = measure_value_error(dist, 8, 2, trials=5000, seed=3)
    assert r.errors == 0 and r.analytic == 0.0


def test_value_error_two_values_d1():
    # d = 1 makes the closed form exact: rate ~ 0.25
    dist = ValueDistribution((1, 2), (1, 1))
    r = measure_value_error(dist, 2, 1, trials=400_000, seed=17)
    assert abs(r.rate - 0.25) < 4 * r.stderr


def test_value_error_uniform_tracks_exact_model():
    """At n=8, m=24, d=2 the structure's true rate is 0.082003, about 1.4%
    above the independence-approximation closed form 0.080853; the
    measurement must match the model, and the formula must stay close."""
    r = measure_value_error(ValueDistribution.uniform(8), 24, 2, trials=400_000, seed=23)
    model = psi_uniform_model_exact(8, 24, 2)
    assert model == pytest.approx(0.08200268254440, abs=1e-12)
    assert abs(r.rate - model) < 4 * r.stderr
    assert abs(r.analytic - model) < 0.002


def test_determinism_of_measures():
    a = measure_value_error(ValueDistribution.uniform(5), 16, 2, trials=3000, seed=9)
    b = measure_value_error(ValueDistribution.uniform(5), 16, 2, trials=3000, seed=9)
    assert a == b
    c = measure_bottom_error(5, 16, 2, trials=3000, seed=9)
    d = measure_bottom_error(5, 16, 2, trials=3000, seed=9)
    assert c == d


def test_vectorized_value_measure_matches_object_path():
    """The chunked simulation is bit-faithful to per-trial objects."""
    dist = ValueDistribution.uniform(6)
    m, d, trials, seed = 20, 2, 300, 77
    report = measure_value_error(dist, m, d, trials=trials, seed=seed)

    values = [v for v, a in zip(dist.values, dist.counts) for _ in range(a)]
    seeds = seed_sequence(seed, trials)
    probe_rng = np.random.default_rng(derive_seed(seed, "value-probe"))
    probes = probe_rng.integers(0, len(values), size=trials)
    errors = 0
    for t in range(trials):
        fam = IndependentFamily(int(seeds[t]), d, m)
        ap = CompactApproximator(lattice="nat", family=fam)
        ap.fit(range(len(values)), values)
        k = int(probes[t])
        errors += ap.query(k) != values[k]
    assert errors == report.errors


def test_vectorized_bottom_measure_matches_object_path():
    n, m, d, trials, seed = 7, 32, 3, 250, 13
    report = measure_bottom_error(n, m, d, trials=trials, seed=seed)

    key_rng = np.random.default_rng(derive_seed(seed, "bottom-keys"))
    keys = _distinct_rows(key_rng, trials, n + 1, max(100 * n, n + 1))
    seeds = seed_sequence(seed, trials)
    errors = 0
    for t in range(trials):
        fam = IndependentFamily(int(seeds[t]), d, m)
        ap = CompactApproximator(lattice="nat", family=fam)
        ap.fit([int(k) for k in keys[t, :n]], list(range(1, n + 1)))
        errors += ap.query(int(keys[t, n])) != 0
    assert errors == report.errors
