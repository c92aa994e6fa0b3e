"""Prime-power validation and small finite fields GF(p^e) as lookup tables.

Field elements are the integers 0..q-1, read as base-p digit vectors of
polynomials modulo the lexicographically smallest monic irreducible of
degree e.  Only the brute-force oracles need actual field arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np
from sympy import integer_nthroot, isprime

from .errors import NotPrimePower

TRIAL_DIVISION_LIMIT = 10**6


@dataclass(frozen=True)
class FieldParameter:
    q: int
    p: int
    e: int

    def __int__(self):
        return self.q


@lru_cache(maxsize=None)
def field_parameter(q: int) -> FieldParameter:
    """Validate that ``q`` is a prime power and return it with q = p^e."""
    q = int(q)
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    p = None
    d = 2
    while d * d <= q and d <= TRIAL_DIVISION_LIMIT:
        if q % d == 0:
            p = d
            break
        d += 1 if d == 2 else 2
    if p is None:
        if isprime(q):
            return FieldParameter(q, q, 1)
        # No factor below the trial limit: q can only be a power of a large prime.
        for e in range(2, q.bit_length() + 1):
            root, exact = integer_nthroot(q, e)
            if exact and isprime(root):
                return FieldParameter(q, root, e)
        raise NotPrimePower(f"{q} is not a prime power")
    e, m = 0, q
    while m % p == 0:
        m //= p
        e += 1
    if m != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    return FieldParameter(q, p, e)


def _poly_is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    # coeffs: monic polynomial low-to-high, degree <= 3 in practice; test by root
    # search for degree <= 3 and by trial division otherwise.
    deg = len(coeffs) - 1
    for cand_deg in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=cand_deg):
            div = list(low) + [1]
            if _poly_mod(list(coeffs), div, p) == [0] * cand_deg:
                return False
    return True


def _poly_mod(num: list[int], den: list[int], p: int) -> list[int]:
    num = num[:]
    dd = len(den) - 1
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] % p
        if c:
            for j in range(dd + 1):
                num[i - dd + j] = (num[i - dd + j] - c * den[j]) % p
    return [c % p for c in num[:dd]]


def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree e over F_p (low-to-high)."""
    if e == 1:
        return (0, 1)
    for low in product(range(p), repeat=e):
        coeffs = tuple(reversed(low)) + (1,)
        # iterate with the leading low coefficients varying slowest
        if coeffs[0] != 0 and _poly_is_irreducible(coeffs, p):
            return coeffs
    raise AssertionError("no irreducible polynomial found")


class GF:
    """GF(q) realized by addition/multiplication tables (q small)."""

    def __init__(self, q: int):
        fp = field_parameter(q)
        if q > 256:
            raise ValueError("table-based GF supports q <= 256")
        self.q, self.p, self.e = q, fp.p, fp.e
        self.modulus = smallest_irreducible(self.p, self.e)
        digits = [self._digits(x) for x in range(q)]
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for x in range(q):
            for y in range(q):
                add[x, y] = self._num([(a + b) % self.p for a, b in zip(digits[x], digits[y])])
                mul[x, y] = self._num(self._polymul(digits[x], digits[y]))
        self.add = add
        self.mul = mul
        self.neg = np.array([int(np.where(add[x] == 0)[0][0]) for x in range(q)])
        self.inv = np.zeros(q, dtype=np.int64)
        for x in range(1, q):
            self.inv[x] = int(np.where(mul[x] == 1)[0][0])
        self.generator = self._find_generator()

    def _digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.e):
            out.append(x % self.p)
            x //= self.p
        return out

    def _num(self, digits) -> int:
        return sum(int(d) * self.p**i for i, d in enumerate(digits))

    def _polymul(self, a, b):
        prod_ = [0] * (2 * self.e - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod_[i + j] = (prod_[i + j] + x * y) % self.p
        if self.e == 1:
            return prod_
        return _poly_mod(prod_, list(self.modulus), self.p)

    def power(self, x: int, k: int) -> int:
        k %= self.q - 1
        result = 1
        for _ in range(k):
            result = int(self.mul[result, x])
        return result

    def order(self, x: int) -> int:
        y, k = x, 1
        while y != 1:
            y = int(self.mul[y, x])
            k += 1
        return k

    def _find_generator(self) -> int:
        # deterministic: smallest element of multiplicative order q - 1
        for x in range(1, self.q):
            if self.order(x) == self.q - 1:
                return x
        raise AssertionError("multiplicative group is not cyclic?")


@lru_cache(maxsize=None)
def gf(q: int) -> GF:
    return GF(q)
