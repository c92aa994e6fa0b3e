from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from fgc.errors import CapExceeded, NotCoprime
from fgc.torsion import (MultiplicityVector, admissible_vectors, brute_force_torsion, class_size, count_torsion,
                         count_torsion_total, count_tuples, gl_order, orbit_structure, sigma_set, torsion_report)


def test_orbit_examples():
    s = orbit_structure(4, 3)
    assert s.orbits == ((1, 3), (2,), (4,)) and s.lengths == (2, 1, 1)
    assert orbit_structure(3, 4).lengths == (1, 1, 1)
    s = orbit_structure(5, 2)
    assert s.orbits == ((1, 2, 3, 4), (5,)) and s.lengths == (4, 1)
    with pytest.raises(NotCoprime):
        orbit_structure(4, 2)


@given(st.integers(1, 60), st.sampled_from([2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 49]))
def test_orbits_partition(a, q):
    if gcd(a, q) != 1:
        return
    s = orbit_structure(a, q)
    flat = sorted(i for o in s.orbits for i in o)
    assert flat == list(range(1, a + 1))
    assert sum(s.lengths) == a
    for o in s.orbits:
        assert {(q * i) % a or a for i in o} == set(o)


def test_gl_order():
    assert (gl_order(0, 5), gl_order(1, 7), gl_order(2, 3), gl_order(3, 2)) == (1, 6, 48, 168)


def test_class_size_examples():
    s = orbit_structure(2, 3)
    assert class_size(MultiplicityVector.from_full(s, (1, 1))) == 12
    assert class_size(MultiplicityVector.from_full(s, (0, 2))) == 1
    assert class_size(MultiplicityVector.from_full(orbit_structure(4, 3), (1, 0, 1, 0))) == 6
    with pytest.raises(ValueError):
        MultiplicityVector.from_full(orbit_structure(4, 3), (1, 0, 0, 1))


def test_count_examples():
    assert count_torsion(2, 3, 2, 0) == 2
    assert count_torsion(2, 3, 2, 1) == 12
    assert count_torsion(4, 3, 2, 1) == 0
    assert count_torsion_total(2, 3, 2) == 14
    assert count_torsion_total(4, 3, 2) == 20
    assert count_torsion_total(1, 5, 3) == 1
    assert brute_force_torsion(2, 5, 2, 1) == 30
    assert brute_force_torsion(2, 3, 1) == 2
    assert brute_force_torsion(6, 5, 2) == count_torsion_total(6, 5, 2)


def test_sigma_set_and_tuples():
    assert len(sigma_set((2, 2, 2))) == 4
    assert len(sigma_set((2, 3, 6))) == 6
    assert sigma_set((2,)) == [(0,)]
    assert count_tuples((2, 2, 2), 3, 1) == 4
    assert count_tuples((), 5, 4) == 1
    assert count_tuples((2, 2), 3, 2) == 148


def test_tuples_match_sigma_set_sum():
    periods, q, n = (2, 3, 6), 7, 2
    direct = 0
    for ks in sigma_set(periods):
        term = 1
        for a, k in zip(periods, ks):
            term *= count_torsion(a, q, n, k)
        direct += term
    assert count_tuples(periods, q, n) == direct


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.sampled_from([2, 3, 4, 5, 7, 8, 9, 11, 13]), st.integers(0, 7))
def test_class_equation(a, q, n):
    if gcd(a, q) != 1:
        return
    s = orbit_structure(a, q)
    total = sum(class_size(v, q) for v in admissible_vectors(s, n))
    assert total == count_torsion_total(a, q, n)
    assert sum(count_torsion(a, q, n, k) for k in range(a)) == total
    # determinant values outside F_q never occur
    for k in range(a):
        if (k * (q - 1)) % a:
            assert count_torsion(a, q, n, k) == 0


def test_report_json_strings():
    rep = torsion_report(4, 3, 2)
    assert rep["total"] == "20"
    assert [d["empty_coset"] for d in rep["per_det"]] == [False, True, False, True]


def test_brute_force_cap():
    with pytest.raises(CapExceeded):
        brute_force_torsion(2, 3, 3, cap=1000)
