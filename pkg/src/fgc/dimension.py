"""Centralizer-dimension minimization, dimensions of representation varieties,
alpha(L) for split Levi subgroups, and the character-bound evaluators.

All optimization here is in the split setting (q = 1 mod a): multiplicities
m_1..m_a of the eigenvalues zeta^1..zeta^a are free non-negative integers,
the centralizer dimension is sum m_i^2 and det = zeta^(sum i m_i).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, inf, lcm
from typing import Sequence

import mpmath

from .errors import CapExceeded, DomainError
from .signature import FuchsianSignature, euler_characteristic, fractional_part, is_on_excluded_list, sigma
from .torsion import count_tuples

ALPHA_CAP = 30


def min_centralizer_formula(n: int, a: int) -> int:
    """n^2/a + a {n/a} {-n/a}, asserted integral."""
    v = Fraction(n * n, a) + a * fractional_part(Fraction(n, a)) * fractional_part(Fraction(-n, a))
    assert v.denominator == 1, v
    return v.numerator


@dataclass(frozen=True)
class CentralizerProfile:
    n: int
    a: int
    det_constraint: int | None  # None, +1 or -1
    dimension: int
    witness: tuple[int, ...]  # m_1..m_a (index a is the eigenvalue 1)

    def __post_init__(self):
        assert sum(m * m for m in self.witness) == self.dimension
        assert sum(self.witness) == self.n


def _det_exponent(m: Sequence[int]) -> int:
    a = len(m)
    return sum((i + 1) * x for i, x in enumerate(m)) % a


def _balanced_witness(n: int, a: int, target: int | None) -> tuple[int, ...] | None:
    """Vector with entries n//a or n//a + 1 and det exponent ``target`` (any if None)."""
    base, b = divmod(n, a)
    if target is None:
        return tuple([base + 1] * b + [base] * (a - b))
    need = (target - base * (a * (a + 1) // 2)) % a
    # choose b residues (1..a) summing to need mod a
    reach: dict[tuple[int, int], tuple] = {(0, 0): ()}
    for i in range(1, a + 1):
        nxt = dict(reach)
        for (cnt, s), chosen in reach.items():
            if cnt < b:
                key = (cnt + 1, (s + i) % a)
                if key not in nxt:
                    nxt[key] = chosen + (i,)
        reach = nxt
    chosen = reach.get((b, need))
    if chosen is None:
        return None
    return tuple(base + (1 if i in chosen else 0) for i in range(1, a + 1))


def min_centralizer_dim(n: int, a: int, det_constraint: int | None = None) -> CentralizerProfile:
    """Minimum of sum m_i^2 over eigenvalue multiplicities, optionally with det = +1 or -1.

    Case analysis: the minimum n^2/a + a{n/a}{-n/a} is attained with det 1
    for odd a and with either sign for even a when a does not divide n.  If
    a | n (a even) the minimizer is unique with det (-1)^(n/a); the other
    sign costs n^2/a + 2.
    """
    if a < 2 or n < 1:
        raise DomainError("need a >= 2 and n >= 1")
    if det_constraint not in (None, 1, -1):
        raise DomainError("det constraint must be None, +1 or -1")
    if det_constraint == -1 and a % 2:
        raise DomainError("-1 is not an a-th root of unity for odd a")
    base = min_centralizer_formula(n, a)
    if det_constraint is None:
        return CentralizerProfile(n, a, None, base, _balanced_witness(n, a, None))
    target = 0 if det_constraint == 1 else a // 2
    if a % 2 == 0 and n % a == 0:
        forced = 1 if (n // a) % 2 == 0 else -1
        if det_constraint == forced:
            return CentralizerProfile(n, a, det_constraint, base, tuple([n // a] * a))
        m = [n // a] * a
        m[a - 1] -= 1
        m[a // 2 - 1] += 1
        assert _det_exponent(m) == target
        return CentralizerProfile(n, a, det_constraint, base + 2, tuple(m))
    witness = _balanced_witness(n, a, target)
    assert witness is not None, (n, a, det_constraint)
    return CentralizerProfile(n, a, det_constraint, base, witness)


@lru_cache(maxsize=None)
def min_dim_by_residue(n: int, a: int) -> tuple[int, ...]:
    """best[k] = min sum m_i^2 over vectors with sum n and det exponent k (exhaustive DP)."""
    # states: (remaining, residue) after deciding m_1..m_i
    layer = {(n, 0): 0}
    for i in range(1, a + 1):
        nxt: dict[tuple[int, int], int] = {}
        for (rem, res), cost in layer.items():
            choices = [rem] if i == a else range(rem + 1)
            for m in choices:
                key = (rem - m, (res + i * m) % a)
                c = cost + m * m
                if c < nxt.get(key, inf):
                    nxt[key] = c
        layer = nxt
    best = [inf] * a
    for (rem, res), cost in layer.items():
        if rem == 0:
            best[res] = min(best[res], cost)
    return tuple(best)


def optimal_tuple_min_sum(sig: FuchsianSignature | Sequence[int], n: int) -> int:
    """1 - sigma + sum_i (n^2/a_i + a_i {n/a_i}{-n/a_i})."""
    periods = sig.periods if isinstance(sig, FuchsianSignature) else tuple(sorted(sig))
    if not periods:
        raise DomainError("need at least one period")
    s = sigma(FuchsianSignature(0, periods), n)
    return 1 - s + sum(min_centralizer_formula(n, a) for a in periods)


def optimal_tuple_oracle(periods: Sequence[int], n: int) -> int:
    """Exhaustive minimum of sum_i dim C(t_i) over split tuples with prod det = 1 (min-plus over Z/A)."""
    periods = sorted(periods)
    A = lcm(*periods)
    acc = [inf] * A
    acc[0] = 0
    for a in periods:
        best = min_dim_by_residue(n, a)
        nxt = [inf] * A
        for i, x in enumerate(acc):
            if x == inf:
                continue
            for k, y in enumerate(best):
                j = (i + k * (A // a)) % A
                if x + y < nxt[j]:
                    nxt[j] = x + y
        acc = nxt
    return acc[0]


@dataclass(frozen=True)
class VarietyDimension:
    signature: str
    n: int
    dimension: int
    lower_bound: Fraction  # -1/2 + (1 - chi) n^2 - sum a_i / 4
    below_one_period: bool  # n < 2A; the formula is only guaranteed for large n
    excluded: bool

    def as_json(self) -> dict:
        return {
            "signature": self.signature,
            "n": self.n,
            "dimension": self.dimension,
            "lower_bound": str(self.lower_bound),
            "below_one_period": self.below_one_period,
            "excluded_signature": self.excluded,
        }


def hom_variety_dim(sig: FuchsianSignature, n: int) -> VarietyDimension:
    """sigma + (1 - chi) n^2 - sum_i a_i {n/a_i}{-n/a_i}."""
    excluded = is_on_excluded_list(sig)
    if excluded:
        warnings.warn(f"signature {sig} is on the exclusion list", UserWarning, stacklevel=2)
    chi = euler_characteristic(sig)
    val = sigma(sig, n) + (1 - chi) * n * n - sum(
        a * fractional_part(Fraction(n, a)) * fractional_part(Fraction(-n, a)) for a in sig.periods)
    assert val.denominator == 1
    lower = Fraction(-1, 2) + (1 - chi) * n * n - Fraction(sum(sig.periods), 4)
    return VarietyDimension(str(sig), n, val.numerator, lower, n < 2 * sig.period_lcm(), excluded)


def hom_variety_dim_oracle(sig: FuchsianSignature, n: int) -> int:
    """1 + (2g-1) n^2 + r n^2 - (exhaustive optimal tuple sum)."""
    base = 1 + (2 * sig.genus - 1) * n * n
    if not sig.periods:
        return base
    return base + sig.r * n * n - optimal_tuple_oracle(sig.periods, n)


def dimension_from_counts(sig: FuchsianSignature, q: int, n: int, M: int) -> list:
    """1 + (2g-1) n^2 + log_{q^m} J_{q^m, n}(periods) for m = 1..M."""
    out = []
    for m in range(1, M + 1):
        Q = q**m
        J = count_tuples(sig.periods, Q, n)
        out.append(mpmath.mpf(1 + (2 * sig.genus - 1) * n * n) + mpmath.log(J) / mpmath.log(Q))
    return out


# ------------------------------------------------------------------ alpha(L)


def partitions(m: int, largest: int | None = None):
    """Partitions of m as non-increasing tuples."""
    largest = m if largest is None else largest
    if m == 0:
        yield ()
        return
    for first in range(min(m, largest), 0, -1):
        for rest in partitions(m - first, first):
            yield (first,) + rest


def conjugate_square_sum(parts: Sequence[int]) -> int:
    """sum_j (lambda'_j)^2 = sum_i (2i - 1) lambda_i for lambda sorted non-increasingly."""
    return sum((2 * i + 1) * p for i, p in enumerate(sorted(parts, reverse=True)))


@lru_cache(maxsize=None)
def _partition_data(m: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    return tuple((p, conjugate_square_sum(p)) for p in partitions(m))


def alpha_levi(shape: Sequence[int], cap: int = ALPHA_CAP) -> tuple[Fraction, tuple]:
    """Max over non-identity unipotent classes of L of dim(class in L) / dim(class in GL_n).

    Returns (alpha, witness multipartition); alpha = 0 with an empty witness
    when every block has size 1.
    """
    shape = tuple(shape)
    if any(m <= 0 for m in shape):
        raise DomainError("Levi block sizes must be positive")
    n = sum(shape)
    if n > cap:
        raise CapExceeded(f"n = {n} exceeds partition search cap {cap}")
    if all(m == 1 for m in shape):
        return Fraction(0), ()
    best, witness = Fraction(-1), ()
    choices = [_partition_data(m) for m in shape]
    levi_total = sum(m * m for m in shape)

    def rec(i, chosen, lsum):
        nonlocal best, witness
        if i == len(shape):
            parts = [p for lam, _ in chosen for p in lam]
            if all(p == 1 for p in parts):
                return
            num = levi_total - lsum
            den = n * n - conjugate_square_sum(parts)
            ratio = Fraction(num, den)
            if ratio > best:
                best, witness = ratio, tuple(lam for lam, _ in chosen)
            return
        for lam, s in choices[i]:
            chosen.append((lam, s))
            rec(i + 1, chosen, lsum + s)
            chosen.pop()

    rec(0, [], 0)
    assert best <= Fraction(max(shape), n)
    return best, witness


def _mp(x):
    x = Fraction(x) if not isinstance(x, float) else x
    return mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpf(x)


def character_bound_calculator(mode: str, n: int, q: int, j: int, D, alpha, chi1):
    """Evaluate the Harish-Chandra ('hc') or Levi ('levi') character bound."""
    if min(n, q, j) < 0 or D < 0 or alpha < 0 or chi1 < 1:
        raise DomainError("inputs must be non-negative and chi(1) >= 1")
    common = mpmath.power(mpmath.mpf(q + 1) / (q - 1), _mp(D) / 2) * mpmath.power(_mp(chi1), _mp(alpha))
    if mode == "hc":
        return mpmath.mpf(n) ** j * factorial(j) ** 2 * mpmath.mpf(q) ** (4 * j * j) * common
    if mode == "levi":
        return mpmath.mpf(n) ** (3 * j) * common
    raise DomainError(f"unknown mode {mode!r}")
