"""Truncated Puiseux series in a nome u with exact rational coefficients.

A series stores exponents as integer numerators over a common denominator
``N``; every exponent below ``trunc`` is represented (zeros omitted) and
nothing at or above it is.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping

from .errors import DivisionByZeroSeries

Coeff = "int | Fraction"


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


@dataclass(frozen=True)
class PuiseuxSeries:
    N: int
    terms: Mapping[int, object]
    trunc: Fraction

    def __post_init__(self):
        trunc = Fraction(self.trunc)
        limit = trunc * self.N
        clean = {e: _norm(c) for e, c in self.terms.items() if c != 0 and e < limit}
        object.__setattr__(self, "terms", dict(sorted(clean.items())))
        object.__setattr__(self, "trunc", trunc)

    # -- construction ----------------------------------------------------
    @classmethod
    def from_exponents(cls, items: Iterable[tuple[Fraction, object]], trunc) -> "PuiseuxSeries":
        items = [(Fraction(e), c) for e, c in items]
        N = lcm(1, *(e.denominator for e, _ in items), Fraction(trunc).denominator)
        terms: dict[int, object] = {}
        for e, c in items:
            k = e.numerator * (N // e.denominator)
            terms[k] = terms.get(k, 0) + c
        return cls(N, terms, Fraction(trunc))

    @classmethod
    def one(cls, trunc) -> "PuiseuxSeries":
        return cls(1, {0: 1}, Fraction(trunc))

    # -- inspection --------------------------------------------------------
    def items(self) -> list[tuple[Fraction, object]]:
        return [(Fraction(e, self.N), c) for e, c in self.terms.items()]

    def coefficient(self, exponent) -> object:
        e = Fraction(exponent) * self.N
        if e.denominator != 1:
            return 0
        return self.terms.get(e.numerator, 0)

    @property
    def valuation(self) -> Fraction | None:
        if not self.terms:
            return None
        return Fraction(next(iter(self.terms)), self.N)

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    def reduced(self) -> "PuiseuxSeries":
        """Same series with the smallest possible exponent denominator."""
        g = self.N
        for e in self.terms:
            g = gcd(g, e)
        t = self.trunc * self.N
        if t.denominator == 1:
            g = gcd(g, t.numerator)
        else:
            g = 1
        if g <= 1:
            return self
        return PuiseuxSeries(self.N // g, {e // g: c for e, c in self.terms.items()}, self.trunc)

    def with_denominator(self, N: int) -> "PuiseuxSeries":
        if N % self.N:
            raise ValueError(f"{N} is not a multiple of {self.N}")
        f = N // self.N
        return PuiseuxSeries(N, {e * f: c for e, c in self.terms.items()}, self.trunc)

    def truncate(self, trunc) -> "PuiseuxSeries":
        return PuiseuxSeries(self.N, self.terms, min(Fraction(trunc), self.trunc))

    def dump(self) -> str:
        """Debug format: one ``e/N<TAB>coefficient`` line per term."""
        return "".join(f"{e}/{self.N}\t{c}\n" for e, c in self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        a, b = _common(self, other)
        return a.trunc == b.trunc and a.terms == b.terms

    def __hash__(self):
        r = self.reduced()
        return hash((r.N, tuple(r.terms.items()), r.trunc))

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        a, b = _common(self, other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            terms[e] = terms.get(e, 0) + c
        return PuiseuxSeries(a.N, terms, min(a.trunc, b.trunc))

    def __neg__(self):
        return PuiseuxSeries(self.N, {e: -c for e, c in self.terms.items()}, self.trunc)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PuiseuxSeries":
        return PuiseuxSeries(self.N, {e: x * c for e, x in self.terms.items()}, self.trunc)

    def shift(self, exponent) -> "PuiseuxSeries":
        """Multiply by u^exponent."""
        exponent = Fraction(exponent)
        N = lcm(self.N, exponent.denominator)
        s = self.with_denominator(N)
        k = exponent.numerator * (N // exponent.denominator)
        return PuiseuxSeries(N, {e + k: c for e, c in s.terms.items()}, self.trunc + exponent)

    def substitute_power(self, l: int) -> "PuiseuxSeries":
        """u -> u^l."""
        return PuiseuxSeries(self.N, {e * l: c for e, c in self.terms.items()}, self.trunc * l)

    def __mul__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        return series_mul(self, other)

    def __truediv__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        return series_div(self, other)


def _common(x: PuiseuxSeries, y: PuiseuxSeries) -> tuple[PuiseuxSeries, PuiseuxSeries]:
    N = lcm(x.N, y.N)
    return x.with_denominator(N), y.with_denominator(N)


def _product_trunc(x: PuiseuxSeries, y: PuiseuxSeries) -> Fraction:
    # x = known part + O(u^tx); the error term times y starts at tx + v(y)
    vx = x.valuation if x.terms else x.trunc
    vy = y.valuation if y.terms else y.trunc
    return min(x.trunc + vy, y.trunc + vx)


def series_mul(x: PuiseuxSeries, y: PuiseuxSeries) -> PuiseuxSeries:
    x, y = _common(x, y)
    trunc = _product_trunc(x, y)
    limit = trunc * x.N
    terms: dict[int, object] = {}
    y_items = list(y.terms.items())
    for ex, cx in x.terms.items():
        for ey, cy in y_items:
            e = ex + ey
            if e >= limit:
                break
            terms[e] = terms.get(e, 0) + cx * cy
    return PuiseuxSeries(x.N, terms, trunc)


def series_inverse(y: PuiseuxSeries) -> PuiseuxSeries:
    """1/y via the leading term u^v * c and geometric inversion of 1 + w."""
    if not y.terms:
        raise DivisionByZeroSeries("series has no known nonzero term")
    items = list(y.terms.items())
    e0, c0 = items[0]
    inv_c0 = Fraction(1) / Fraction(c0)
    # w = y / (c0 u^e0) - 1, exponents > 0 (integers over N)
    w = [(e - e0, _norm(c * inv_c0)) for e, c in items[1:]]
    known = y.trunc * y.N - e0  # w known for exponent numerators < known
    g = 0
    for e, _ in w:
        g = gcd(g, e)
    z: dict[int, object] = {0: 1}
    if g:
        steps = int(-(-known // g))  # ceil(known / g)
        for s in range(1, steps):
            e = s * g
            acc = 0
            for f, wf in w:
                if f > e:
                    break
                zc = z.get(e - f)
                if zc:
                    acc -= wf * zc
            if acc:
                z[e] = _norm(acc)
    inv = PuiseuxSeries(y.N, z, Fraction(known, y.N))
    return inv.scale(_norm(inv_c0)).shift(Fraction(-e0, y.N))


def series_div(x: PuiseuxSeries, y: PuiseuxSeries) -> PuiseuxSeries:
    return series_mul(x, series_inverse(y))


def eta_series(scale: int, trunc) -> PuiseuxSeries:
    """eta(scale*z) in the nome: u^(scale/24) * prod_{j>=1} (1 - u^(scale*j)), exponents < trunc.

    Uses Euler's pentagonal number theorem for the product.
    """
    trunc = Fraction(trunc)
    if trunc <= 0:
        raise ValueError("truncation must be positive")
    l = scale
    items = []
    k = 0
    while True:
        found = False
        for kk in ((k, -k) if k else (0,)):
            e = Fraction(l, 24) + l * kk * (3 * kk - 1) // 2
            if e < trunc:
                items.append((e, -1 if kk % 2 else 1))
                found = True
        if not found and k > 0:
            break
        k += 1
    s = PuiseuxSeries.from_exponents(items, trunc)
    return s.with_denominator(lcm(24, s.N))
