import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from latsketch.cardinality import DistinctEstimate, estimate_distinct, exact_distinct


def test_exact_distinct():
    assert exact_distinct("mississippi") == 4
    assert exact_distinct("") == 0
    assert exact_distinct("aaaa") == 1
    assert exact_distinct([5, 5, 7]) == 2


def test_empty_pattern():
    est = estimate_distinct("")
    assert est.estimate == 0.0
    assert est.upper_bound == 0
    assert est.for_sizing == 0


def test_short_patterns_report_the_length_bound():
    est = estimate_distinct("abcd" * 10)  # 40 symbols, 4 distinct
    assert est.method == "length-bound"
    assert est.estimate == 40.0
    assert 1 <= est.for_sizing <= 40


def test_estimate_never_exceeds_the_length_bound():
    rng = np.random.default_rng(3)
    for trial in range(20):
        length = int(rng.integers(1, 400))
        pattern = list(rng.integers(0, 10, size=length))
        est = estimate_distinct(pattern, seed=trial)
        assert 1 <= est.for_sizing <= length
        assert est.estimate <= length


def test_determinism_per_seed():
    pattern = [i % 37 for i in range(500)]
    a = estimate_distinct(pattern, seed=99)
    b = estimate_distinct(pattern, seed=99)
    assert a == b
    c = estimate_distinct(pattern, seed=100)
    assert isinstance(c, DistinctEstimate)


def test_median_accuracy_within_factor_two():
    """64 seeds on a 10^4-symbol pattern with 1000 distinct symbols."""
    pattern = [i % 1000 for i in range(10_000)]
    truth = exact_distinct(pattern)
    assert truth == 1000
    estimates = [estimate_distinct(pattern, seed=s).estimate for s in range(64)]
    median = float(np.median(estimates))
    assert truth / 2 <= median <= truth * 2


def test_str_and_code_point_streams_agree():
    text = "abcdefgh" * 20
    as_ints = [ord(c) for c in text]
    assert estimate_distinct(text, seed=5) == estimate_distinct(as_ints, seed=5)


@settings(max_examples=60, deadline=None)
@given(st.text(min_size=1, max_size=200), st.integers(0, 2**32))
def test_sizing_value_always_usable(pattern, seed):
    est = estimate_distinct(pattern, seed=seed)
    assert 1 <= est.for_sizing <= len(pattern)
