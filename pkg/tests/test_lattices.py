import itertools

import pytest
from hypothesis import given, strategies as st

from latsketch.lattices import BOOL, NAT, Lattice, check_lattice_laws, resolve_lattice


def nat_triples(values):
    return list(itertools.product(values, repeat=3))


def test_nat_laws_hold_on_small_values():
    assert check_lattice_laws(NAT, nat_triples([0, 1, 5])) == []


def test_bool_laws_hold_on_all_triples():
    assert check_lattice_laws(BOOL, nat_triples([False, True])) == []


def test_broken_join_is_reported():
    # addition is not idempotent: join(1, 1) = 2 != 1
    broken = Lattice("plus", join=lambda a, b: a + b, meet=min, bottom=0,
                     leq=lambda a, b: a <= b)
    report = check_lattice_laws(broken, [(1, 1, 0)])
    assert any("idempotent" in line for line in report)


def test_empty_samples_rejected():
    with pytest.raises(ValueError):
        check_lattice_laws(NAT, [])


@given(st.lists(st.tuples(st.integers(0, 1000), st.integers(0, 1000),
                          st.integers(0, 1000)), min_size=1, max_size=50))
def test_nat_laws_hold_on_random_triples(triples):
    assert check_lattice_laws(NAT, triples) == []


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_nat_leq_is_a_partial_order(x, y, z):
    assert NAT.leq(x, x)
    if NAT.leq(x, y) and NAT.leq(y, x):
        assert x == y
    if NAT.leq(x, y) and NAT.leq(y, z):
        assert NAT.leq(x, z)


def test_resolve_lattice():
    assert resolve_lattice("nat") is NAT
    assert resolve_lattice("bool") is BOOL
    assert resolve_lattice(NAT) is NAT
    with pytest.raises(ValueError):
        resolve_lattice("ring")
