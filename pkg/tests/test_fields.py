import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import factorint

from fgc.errors import NotPrimePower
from fgc.fields import field_parameter, gf


@pytest.mark.parametrize("q, p, e", [(2, 2, 1), (9, 3, 2), (64, 2, 6), (10007, 10007, 1), (3**20, 3, 20)])
def test_prime_powers(q, p, e):
    fp = field_parameter(q)
    assert (fp.p, fp.e, int(fp)) == (p, e, q)


@pytest.mark.parametrize("q", [0, 1, 6, 12, 100, 10007 * 10009])
def test_rejects_non_prime_powers(q):
    with pytest.raises(NotPrimePower):
        field_parameter(q)


@given(st.integers(2, 10**6))
def test_agrees_with_factorization(q):
    f = factorint(q)
    if len(f) == 1:
        (p, e), = f.items()
        assert (field_parameter(q).p, field_parameter(q).e) == (p, e)
    else:
        with pytest.raises(NotPrimePower):
            field_parameter(q)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16, 25, 27])
def test_field_axioms(q):
    F = gf(q)
    x = np.arange(q)
    assert (F.add[x, 0] == x).all() and (F.mul[x, 1] == x).all()
    assert (F.add == F.add.T).all() and (F.mul == F.mul.T).all()
    for a in range(q):
        assert F.add[a, F.neg[a]] == 0
        if a:
            assert F.mul[a, F.inv[a]] == 1
    # distributivity on all triples
    lhs = F.mul[x[:, None, None], F.add[x[None, :, None], x[None, None, :]]]
    rhs = F.add[F.mul[x[:, None, None], x[None, :, None]], F.mul[x[:, None, None], x[None, None, :]]]
    assert (lhs == rhs).all()
    assert F.order(F.generator) == q - 1
