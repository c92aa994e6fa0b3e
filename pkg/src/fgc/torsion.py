"""Exact counts of torsion elements of GL_n(q) via eigenvalue multiplicity vectors.

A semisimple element t with t^a = 1 (gcd(a, q) = 1) is determined up to
conjugacy by the multiplicities m_1, ..., m_a of zeta^1, ..., zeta^a = 1,
where the m_i are constant on orbits of i -> q*i (mod a).  Residue 0 is
stored as index a throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm, prod
from typing import Iterator, Sequence

import numpy as np

from .errors import CapExceeded, InexactDivision, NotCoprime
from .fields import field_parameter, gf

BRUTE_FORCE_CAP = 10**7


@dataclass(frozen=True)
class FrobeniusOrbitStructure:
    a: int
    q: int
    orbits: tuple[tuple[int, ...], ...]  # each orbit sorted, residues in 1..a

    @property
    def reps(self) -> tuple[int, ...]:
        return tuple(o[0] for o in self.orbits)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(o) for o in self.orbits)

    @property
    def residue_sums(self) -> tuple[int, ...]:
        """Sum of the residues i in each orbit (the orbit's contribution to det exponent)."""
        return tuple(sum(o) for o in self.orbits)

    def orbit_index(self) -> dict[int, int]:
        return {i: s for s, o in enumerate(self.orbits) for i in o}

    def expand(self, w: Sequence) -> list:
        """Orbit coordinates -> length-a vector indexed by residues 1..a."""
        idx = self.orbit_index()
        return [w[idx[i]] for i in range(1, self.a + 1)]


def _check_coprime(a: int, q: int) -> None:
    if gcd(a, q) != 1:
        raise NotCoprime(f"gcd(a={a}, q={q}) = {gcd(a, q)} > 1")


@lru_cache(maxsize=None)
def orbit_structure(a: int, q: int) -> FrobeniusOrbitStructure:
    if a < 1:
        raise ValueError("a must be >= 1")
    field_parameter(q)
    _check_coprime(a, q)
    seen: set[int] = set()
    orbits = []
    for i in range(1, a + 1):
        if i in seen:
            continue
        orbit = []
        j = i
        while j not in orbit:
            orbit.append(j)
            j = (q * j) % a or a
        seen.update(orbit)
        orbits.append(tuple(sorted(orbit)))
    return FrobeniusOrbitStructure(a, q, tuple(orbits))


@lru_cache(maxsize=4096)
def gl_order(n: int, q: int) -> int:
    return prod(q**n - q**i for i in range(n))


@dataclass(frozen=True)
class MultiplicityVector:
    """Eigenvalue multiplicities, stored per orbit (m_s for s in S)."""

    structure: FrobeniusOrbitStructure
    per_orbit: tuple[int, ...]

    def __post_init__(self):
        if len(self.per_orbit) != len(self.structure.orbits):
            raise ValueError("one multiplicity per Frobenius orbit expected")
        if any(m < 0 for m in self.per_orbit):
            raise ValueError("multiplicities must be non-negative")

    @classmethod
    def from_full(cls, structure: FrobeniusOrbitStructure, m: Sequence[int]) -> "MultiplicityVector":
        if len(m) != structure.a:
            raise ValueError(f"expected {structure.a} multiplicities")
        for orbit in structure.orbits:
            if len({m[i - 1] for i in orbit}) != 1:
                raise ValueError(f"multiplicities not constant on orbit {orbit}")
        return cls(structure, tuple(m[o[0] - 1] for o in structure.orbits))

    @property
    def full(self) -> list[int]:
        return self.structure.expand(self.per_orbit)

    @property
    def n(self) -> int:
        return sum(l * m for l, m in zip(self.structure.lengths, self.per_orbit))

    @property
    def det_exponent(self) -> int:
        return sum(c * m for c, m in zip(self.structure.residue_sums, self.per_orbit)) % self.structure.a


def class_size(v: MultiplicityVector, q: int | None = None) -> int:
    q = v.structure.q if q is None else q
    num = gl_order(v.n, q)
    den = prod(gl_order(m, q**l) for m, l in zip(v.per_orbit, v.structure.lengths))
    quo, rem = divmod(num, den)
    if rem:
        raise InexactDivision(f"|GL| not divisible by centralizer order for {v.full}")
    return quo


def admissible_vectors(structure: FrobeniusOrbitStructure, n: int) -> Iterator[MultiplicityVector]:
    """All non-negative orbit-constant vectors with sum n (the last orbit coordinate is forced)."""
    lengths = structure.lengths
    k = len(lengths)
    cur = [0] * k

    def rec(pos: int, remaining: int):
        if pos == k - 1:
            if remaining % lengths[pos] == 0:
                cur[pos] = remaining // lengths[pos]
                yield MultiplicityVector(structure, tuple(cur))
            return
        for m in range(remaining // lengths[pos] + 1):
            cur[pos] = m
            yield from rec(pos + 1, remaining - m * lengths[pos])

    yield from rec(0, n)


@lru_cache(maxsize=4096)
def torsion_counts_by_det(a: int, q: int, n: int) -> tuple[int, ...]:
    """Tuple c with c[k] = j_{q,n,k}(a), k = 0..a-1."""
    structure = orbit_structure(a, q)
    counts = [0] * a
    for v in admissible_vectors(structure, n):
        counts[v.det_exponent] += class_size(v, q)
    return tuple(counts)


def count_torsion(a: int, q: int, n: int, k: int) -> int:
    """j_{q,n,k}(a): elements x of GL_n(q) with x^a = 1 and det x = zeta_a^k."""
    return torsion_counts_by_det(a, q, n)[k % a]


def count_torsion_total(a: int, q: int, n: int) -> int:
    return sum(torsion_counts_by_det(a, q, n))


def realizable_det_exponents(a: int, q: int) -> list[int]:
    """Exponents k for which zeta_a^k lies in F_q (a divides k(q-1))."""
    return [k for k in range(a) if (k * (q - 1)) % a == 0]


def sigma_set(periods: Sequence[int]) -> list[tuple[int, ...]]:
    """All (k_1..k_r) with prod zeta_{a_i}^{k_i} = 1, zeta_{a_i} = zeta_A^{A/a_i}."""
    periods = list(periods)
    if not periods:
        return [()]
    A = lcm(*periods)
    out: list[tuple[int, ...]] = []

    def rec(i: int, acc: int, cur: list[int]):
        if i == len(periods) - 1:
            a = periods[i]
            step = A // a
            need = (-acc) % A
            if need % step == 0:
                out.append(tuple(cur) + (need // step,))
            return
        a = periods[i]
        for k in range(a):
            rec(i + 1, (acc + k * (A // a)) % A, cur + [k])

    rec(0, 0, [])
    return out


def count_tuples(periods: Sequence[int], q: int, n: int) -> int:
    """J_{q,n}(a_1..a_r) by convolving A-normalized determinant count vectors over Z/A."""
    periods = list(periods)
    if not periods:
        return 1
    A = lcm(*periods)
    acc = [0] * A
    acc[0] = 1
    for a in periods:
        counts = torsion_counts_by_det(a, q, n)
        vec = [0] * A
        for k, c in enumerate(counts):
            vec[(k * (A // a)) % A] += c
        nxt = [0] * A
        for i, x in enumerate(acc):
            if x:
                for j, y in enumerate(vec):
                    if y:
                        nxt[(i + j) % A] += x * y
        acc = nxt
    return acc[0]


def torsion_report(a: int, q: int, n: int) -> dict:
    """JSON-ready summary; big integers as decimal strings."""
    counts = torsion_counts_by_det(a, q, n)
    realizable = set(realizable_det_exponents(a, q))
    return {
        "a": a,
        "q": q,
        "n": n,
        "per_det": [
            {"k": k, "count": str(c), "empty_coset": k not in realizable}
            for k, c in enumerate(counts)
        ],
        "total": str(sum(counts)),
    }


# ---------------------------------------------------------------- brute force


class _MatrixBatch:
    """All n x n matrices over GF(q), as an (N, n, n) integer array, with table-driven products."""

    def __init__(self, q: int, n: int):
        self.F = gf(q)
        self.q, self.n = q, n
        digits = np.indices((q,) * (n * n)).reshape(n * n, -1).T if n else np.zeros((1, 0), int)
        self.mats = digits.reshape(-1, n, n).astype(np.int16)

    def matmul(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        F, n = self.F, self.n
        out = np.zeros_like(X)
        for i in range(n):
            for k in range(n):
                acc = F.mul[X[:, i, 0], Y[:, 0, k]]
                for j in range(1, n):
                    acc = F.add[acc, F.mul[X[:, i, j], Y[:, j, k]]]
                out[:, i, k] = acc
        return out

    def det(self, X: np.ndarray) -> np.ndarray:
        # Leibniz expansion; n <= 3 in practice
        from itertools import permutations

        F, n = self.F, self.n
        total = np.zeros(X.shape[0], dtype=np.int64)
        for perm in permutations(range(n)):
            sign = _perm_sign(perm)
            term = np.ones(X.shape[0], dtype=np.int64)
            for i, j in enumerate(perm):
                term = F.mul[term, X[:, i, j]]
            if sign < 0:
                term = F.neg[term]
            total = F.add[total, term]
        return total


def _perm_sign(perm) -> int:
    sign, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@lru_cache(maxsize=8)
def _gl_elements(q: int, n: int):
    batch = _MatrixBatch(q, n)
    dets = batch.det(batch.mats)
    keep = dets != 0
    return batch, batch.mats[keep], dets[keep]


def _matrix_power(batch: _MatrixBatch, X: np.ndarray, a: int) -> np.ndarray:
    result = np.broadcast_to(np.eye(batch.n, dtype=np.int64), X.shape).copy()
    base = X
    while a:
        if a & 1:
            result = batch.matmul(result, base)
        a >>= 1
        if a:
            base = batch.matmul(base, base)
    return result


def brute_force_torsion(a: int, q: int, n: int, k: int | None = None, cap: int = BRUTE_FORCE_CAP) -> int:
    """Count x in GL_n(q) with x^a = 1 (and det x = zeta_a^k) by enumerating matrices.

    zeta_a^k is realized in F_q as g^(k(q-1)/a) for the smallest generator g;
    if a does not divide k(q-1) that value is not in F_q and the count is 0.
    """
    field_parameter(q)
    _check_coprime(a, q)
    if gl_order(n, q) > cap or q ** (n * n) > 4 * cap:
        raise CapExceeded(f"|GL_{n}({q})| = {gl_order(n, q)} exceeds cap {cap}")
    if n == 0:
        return 1 if k is None or k % a == 0 else 0
    batch, mats, dets = _gl_elements(q, n)
    powered = _matrix_power(batch, mats, a)
    is_one = np.all(powered == np.eye(n, dtype=np.int64), axis=(1, 2))
    if k is None:
        return int(is_one.sum())
    k %= a
    if (k * (q - 1)) % a:
        return 0
    F = batch.F
    target = F.power(F.generator, k * (q - 1) // a)
    return int((is_one & (dets == target)).sum())
