import warnings
from fractions import Fraction
from itertools import product

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from fgc.dimension import (alpha_levi, character_bound_calculator, conjugate_square_sum, dimension_from_counts,
                           hom_variety_dim, hom_variety_dim_oracle, min_centralizer_dim, min_centralizer_formula,
                           min_dim_by_residue, optimal_tuple_min_sum, optimal_tuple_oracle, partitions)
from fgc.errors import CapExceeded, DomainError
from fgc.signature import FuchsianSignature, parse_signature

pytestmark = pytest.mark.filterwarnings("ignore::UserWarning")


def _compositions(n, a):
    if a == 1:
        yield (n,)
        return
    for m in range(n + 1):
        for rest in _compositions(n - m, a - 1):
            yield (m,) + rest


def test_centralizer_examples():
    p = min_centralizer_dim(5, 3)
    assert p.dimension == 9 and sorted(p.witness) == [1, 2, 2]
    assert min_centralizer_dim(6, 3).dimension == 12
    assert min_centralizer_dim(6, 2).dimension == 18
    assert min_centralizer_dim(6, 2, -1).dimension == 18
    assert min_centralizer_dim(6, 2, 1).dimension == 20
    with pytest.raises(DomainError):
        min_centralizer_dim(6, 3, -1)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 14), st.integers(2, 5))
def test_centralizer_against_compositions(n, a):
    best = {}
    for m in _compositions(n, a):
        k = sum(i * x for i, x in enumerate(m, 1)) % a
        best[k] = min(best.get(k, 10**9), sum(x * x for x in m))
    assert min(best.values()) == min_centralizer_formula(n, a) == min_centralizer_dim(n, a).dimension
    assert tuple(best.get(k, float("inf")) for k in range(a)) == min_dim_by_residue(n, a)
    assert best[0] == min_centralizer_dim(n, a, 1).dimension
    if a % 2 == 0:
        assert best[a // 2] == min_centralizer_dim(n, a, -1).dimension


def test_optimal_tuple_examples():
    assert optimal_tuple_min_sum(parse_signature("0;2,4,6"), 12) == 134 == optimal_tuple_oracle((2, 4, 6), 12)
    assert optimal_tuple_min_sum((2, 3, 7), 42) == 1724
    assert optimal_tuple_min_sum((3, 3, 5), 45) == 1755


def test_dimension_examples():
    d = hom_variety_dim(parse_signature("0;2,3,7"), 42)
    assert d.dimension == 1805 and d.excluded and d.below_one_period
    assert hom_variety_dim(parse_signature("0;2,3,7"), 43).dimension == 1892
    assert hom_variety_dim(parse_signature("2;"), 5).dimension == 76
    assert not hom_variety_dim(parse_signature("0;2,3,7"), 84).below_one_period


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3), st.lists(st.integers(2, 10), max_size=4), st.integers(1, 30))
def test_dimension_properties(g, periods, n):
    sig = FuchsianSignature(g, periods)
    d = hom_variety_dim(sig, n)
    assert d.dimension == hom_variety_dim_oracle(sig, n)
    assert d.dimension >= d.lower_bound
    A = sig.period_lcm()
    # dimension minus its quadratic part is periodic with period 2A
    chi = sig.euler_characteristic()
    quad = lambda m: (1 - chi) * m * m
    assert hom_variety_dim(sig, n + 2 * A).dimension - quad(n + 2 * A) == d.dimension - quad(n)


def test_dimension_from_counts():
    sig = parse_signature("0;2,3,7")
    seq = dimension_from_counts(sig, 13, 6, 4)
    assert abs(seq[-1] - hom_variety_dim(sig, 6).dimension) < 0.5
    surf = dimension_from_counts(parse_signature("2;"), 3, 4, 3)
    assert all(v == 1 + 3 * 16 for v in surf)
    seq = dimension_from_counts(parse_signature("0;2,4,6"), 5, 12, 3)
    target = hom_variety_dim(parse_signature("0;2,4,6"), 12).dimension
    gaps = [abs(v - target) for v in seq]
    assert gaps == sorted(gaps, reverse=True)


def test_partitions_and_conjugates():
    assert [len(list(partitions(m))) for m in range(1, 11)] == [1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
    for lam in partitions(9):
        conj = [sum(1 for p in lam if p > j) for j in range(lam[0])]
        assert conjugate_square_sum(lam) == sum(c * c for c in conj)


def test_alpha_examples():
    assert alpha_levi((2, 2)) == (Fraction(1, 2), ((2,), (2,)))
    assert alpha_levi((3, 1)) == (Fraction(2, 3), ((2, 1), (1,)))
    assert alpha_levi((1, 1, 1))[0] == 0
    assert alpha_levi((4,))[0] == 1
    with pytest.raises(CapExceeded):
        alpha_levi((20, 20))


def test_character_bound_calculator():
    assert character_bound_calculator("levi", 7, 5, 0, 0, 0, 1) == 1
    hc = character_bound_calculator("hc", 4, 9, 1, 6, Fraction(1, 2), 81)
    expected = 4 * 9**4 * mpmath.mpf(10 / 8) ** 3 * 9
    assert abs(hc - expected) < 1e-30 * expected
    levi = character_bound_calculator("levi", 4, 9, 1, 6, Fraction(1, 2), 81)
    assert abs(hc / levi - mpmath.mpf(4) * 9**4 / 4**3) < 1e-30
    with pytest.raises(DomainError):
        character_bound_calculator("other", 4, 9, 1, 6, 0, 1)
