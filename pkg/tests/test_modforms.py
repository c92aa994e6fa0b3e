from fractions import Fraction
from itertools import product
from math import gcd, lcm

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from fgc.errors import EmptyCoset, PrecisionUnachievable
from fgc.modforms import (ExcludedSignatureWarning, build_coset, compare_rows, congruence_lattice, evaluate_at_nome,
                          f_n_series, predict_hom_count, predict_J, predict_j, same_coset, theta_series)
from fgc.series import PuiseuxSeries, eta_series
from fgc.signature import parse_signature
from fgc.torsion import count_tuples, gl_order, orbit_structure

QS = [3, 4, 5, 7, 8, 9, 11, 13]


def test_lattice_constraints():
    for a, q in [(2, 3), (4, 3), (5, 2), (6, 5), (7, 2), (8, 3), (12, 5)]:
        lat = congruence_lattice(a, q)
        for v in lat.full_basis():
            assert sum(v) == 0 and sum(i * x for i, x in enumerate(v, 1)) % a == 0
        assert lat.rank == len(orbit_structure(a, q).orbits) - 1


def test_coset_examples():
    assert congruence_lattice(2, 3).full_basis() in ([[2, -2]], [[-2, 2]])
    c = build_coset(2, 3, 1, 1)
    assert c.lambda_n is not None and sum(c.lambda_n) == 1 and c.lambda_n[0] % 2 == 1
    assert c.full_shift() in ([Fraction(1, 2), Fraction(-1, 2)], [Fraction(-3, 2), Fraction(3, 2)])
    for n in range(1, 8):
        assert build_coset(4, 3, n, 1).empty
    with pytest.raises(EmptyCoset):
        f_n_series(4, 3, 2, 1, 10)


def test_theta_examples():
    s0 = theta_series(build_coset(2, 3, 4, 0), 20)
    assert s0.items() == [(0, 1), (8, 2)]
    s2 = theta_series(build_coset(2, 3, 6, 0), 20)
    assert s2.items() == [(2, 2), (18, 2)]


def _theta_brute(a, q, n, k, trunc, radius=6):
    """Count orbit-constant integer vectors with sum n and det exponent k by norm of (v - n/a)."""
    s = orbit_structure(a, q)
    counts = {}
    for w in product(range(-radius, radius + 1), repeat=len(s.orbits)):
        if sum(l * x for l, x in zip(s.lengths, w)) != n:
            continue
        if sum(c * x for c, x in zip(s.residue_sums, w)) % a != k % a:
            continue
        norm = sum(l * (x - Fraction(n, a)) ** 2 for l, x in zip(s.lengths, w))
        if norm < trunc:
            counts[norm] = counts.get(norm, 0) + 1
    return counts


@pytest.mark.parametrize("a, q, n, k", [(2, 3, 5, 1), (3, 7, 4, 1), (4, 5, 6, 2), (5, 4, 3, 0), (6, 7, 2, 4)])
def test_theta_counts_lattice_vectors(a, q, n, k):
    trunc = 8
    s = theta_series(build_coset(a, q, n, k), trunc)
    assert dict(s.items()) == _theta_brute(a, q, n, k, trunc)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.sampled_from(QS), st.integers(0, 30), st.integers(0, 7))
def test_coset_periodic(a, q, n, k):
    if gcd(a, q) != 1:
        return
    c1, c2 = build_coset(a, q, n, k), build_coset(a, q, n + 2 * a, k)
    assert same_coset(c1, c2)
    if not c1.empty:
        assert c1.shift == c2.shift
        assert sum(c1.full_shift()) == 0


@pytest.mark.parametrize("a, q, n, k", [(2, 5, 4, 0), (3, 7, 5, 2), (4, 5, 3, 1), (5, 11, 6, 3), (6, 7, 7, 1)])
def test_f_n_integral_and_leading_term(a, q, n, k):
    f = f_n_series(a, q, n, k, 12)
    assert f.is_integral()
    if (a, n, k) == (2, 4, 0):
        assert f.valuation == Fraction(-1, 24) and f.coefficient(Fraction(-1, 24)) == 1


def test_f_n_trivial_for_a_one():
    f = f_n_series(1, 5, 3, 0, 10)
    assert f.terms == {0: 1}


def test_evaluate_at_nome_examples():
    with mpmath.workdps(30):
        euler = eta_series(1, 60).shift(Fraction(-1, 24))
        v = evaluate_at_nome(euler, 4, 20, check=False)
        assert v.radius < 1e-30
        assert abs(v.value - mpmath.mpf("0.688537537")) < 1e-6
        assert evaluate_at_nome(PuiseuxSeries.one(10), 7, 20, check=False).value == 1
        root = evaluate_at_nome(PuiseuxSeries.from_exponents([(Fraction(1, 24), 1)], 10), 2, 20, check=False).value
        assert abs(root - mpmath.mpf(2) ** (-mpmath.mpf(1) / 24)) < 1e-18


def test_tail_estimate_bounds_change():
    s = f_n_series(3, 7, 5, 0, 30)
    s2 = f_n_series(3, 7, 5, 0, 60)
    with mpmath.workdps(40):
        v1 = evaluate_at_nome(s, 7, 30, check=False)
        v2 = evaluate_at_nome(s2, 7, 30, check=False)
        assert abs(v1.value - v2.value) <= v1.radius


def test_precision_unachievable():
    with pytest.raises(PrecisionUnachievable):
        evaluate_at_nome(f_n_series(4, 5, 40, 0, 5), 5, 30)


def test_predict_examples():
    row = compare_rows(2, 5, [12], 0)[0]
    assert abs(row["ratio_minus_one"]) < 1e-3
    assert predict_j(4, 3, 2, 1).mantissa.value == 0
    assert predict_J((), 5, 3).mantissa.value == 1
    exact = count_tuples((2, 2), 5, 8)
    assert abs(predict_J((2, 2), 5, 8).ratio_to(exact) - 1) < 0.01


def test_ratio_improves_along_residue_class():
    errs = [abs(r["ratio_minus_one"]) for r in compare_rows(3, 4, [10, 16, 22, 28], 1, trunc=80, precision_digits=20)]
    assert errs == sorted(errs, reverse=True)


def test_hom_prediction_bookkeeping():
    sig = parse_signature("0;2,3,7")
    with pytest.warns(ExcludedSignatureWarning):
        pred = predict_hom_count(sig, 13, 6, trunc=80, precision_digits=30)
    chi = sig.euler_characteristic()
    assert pred.predicted.exponent == (1 - chi) * 36 + Fraction(3 - 12, 24)
    assert pred.excluded and pred.as_json()["excluded_signature"]
    assert abs(pred.c_qn.value / pred.c_qn_modular.value - 1) < 1e-6
    surf = predict_hom_count(parse_signature("2;"), 3, 5, trunc=120, precision_digits=30)
    assert surf.exact_linear_term == 2 * gl_order(5, 3) ** 3
    assert surf.e == Fraction(3, 24)
    # the linear term of the exact count equals the prediction up to the o(1)
    assert abs(surf.predicted.ratio_to(surf.exact_linear_term) - 1) < 1e-20
