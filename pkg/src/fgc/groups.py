"""Small finite groups given by a full multiplication table.

Elements are indices 0..N-1.  GL_n(q) is built by enumerating invertible
matrices; symmetric groups from permutations.  The table makes conjugacy
classes, element orders and brute-force products cheap for N up to a few
thousand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Hashable, Sequence

import numpy as np

from .errors import CapExceeded
from .fields import field_parameter

TABLE_CAP = 5000


@dataclass
class ExplicitGroup:
    name: str
    table: np.ndarray  # table[i, j] = index of element_i * element_j
    identity: int
    labels: list = field(default_factory=list)
    det: np.ndarray | None = None  # exponent of det w.r.t. a generator of F_q^*, GL only
    det_modulus: int | None = None

    def __post_init__(self):
        N = self.order
        if self.table.shape != (N, N):
            raise ValueError("multiplication table must be square")
        self.inverse = np.argmax(self.table == self.identity, axis=1)
        if not np.all(self.table[np.arange(N), self.inverse] == self.identity):
            raise ValueError("table is not a group table (missing inverses)")
        self._classes: list[list[int]] | None = None
        self._orders: np.ndarray | None = None

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    @property
    def element_orders(self) -> np.ndarray:
        if self._orders is None:
            N = self.order
            orders = np.zeros(N, dtype=np.int64)
            power = np.arange(N)
            k = 1
            while np.any(orders == 0):
                done = (power == self.identity) & (orders == 0)
                orders[done] = k
                power = self.table[power, np.arange(N)]
                k += 1
            self._orders = orders
        return self._orders

    @property
    def classes(self) -> list[list[int]]:
        """Conjugacy classes (sorted index lists), the identity class first."""
        if self._classes is None:
            N = self.order
            seen = np.zeros(N, dtype=bool)
            out = []
            g = np.arange(N)
            for x in [self.identity] + list(range(N)):
                if seen[x]:
                    continue
                conj = np.unique(self.table[self.table[g, x], self.inverse])
                seen[conj] = True
                out.append([int(c) for c in conj])
            self._classes = out
        return self._classes

    def class_of(self) -> np.ndarray:
        idx = np.empty(self.order, dtype=np.int64)
        for c, members in enumerate(self.classes):
            idx[members] = c
        return idx

    def solutions_of_power(self, a: int) -> np.ndarray:
        """Indices x with x^a = 1."""
        return np.nonzero(a % self.element_orders == 0)[0]


def group_from_elements(name: str, elements: Sequence[Hashable], mul: Callable, identity: Hashable,
                        labels=None) -> ExplicitGroup:
    N = len(elements)
    if N > TABLE_CAP:
        raise CapExceeded(f"group of order {N} exceeds table cap {TABLE_CAP}")
    index = {e: i for i, e in enumerate(elements)}
    table = np.empty((N, N), dtype=np.int64)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            table[i, j] = index[mul(x, y)]
    return ExplicitGroup(name, table, index[identity], list(labels or elements))


def symmetric_group(m: int) -> ExplicitGroup:
    elements = list(permutations(range(m)))

    def compose(x, y):  # (x*y)(i) = x(y(i))
        return tuple(x[y[i]] for i in range(m))

    return group_from_elements(f"S_{m}", elements, compose, tuple(range(m)))


def trivial_group() -> ExplicitGroup:
    return ExplicitGroup("trivial", np.zeros((1, 1), dtype=np.int64), 0, [()])


def general_linear_group(n: int, q: int, cap: int = TABLE_CAP) -> ExplicitGroup:
    """GL_n(q) with matrices encoded as base-q digit strings (row-major)."""
    from .torsion import _MatrixBatch, gl_order

    field_parameter(q)
    if gl_order(n, q) > cap:
        raise CapExceeded(f"|GL_{n}({q})| = {gl_order(n, q)} exceeds cap {cap}")
    batch = _MatrixBatch(q, n)
    dets = batch.det(batch.mats)
    keep = np.nonzero(dets != 0)[0]
    mats = batch.mats[keep]
    N = len(keep)
    lookup = np.full(q ** (n * n), -1, dtype=np.int64)
    lookup[keep] = np.arange(N)
    weights = q ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    table = np.empty((N, N), dtype=np.int64)
    for i in range(N):
        prod = batch.matmul(np.broadcast_to(mats[i], mats.shape), mats)
        table[i] = lookup[prod.reshape(N, -1).astype(np.int64) @ weights]
    identity = int(lookup[int(np.eye(n, dtype=np.int64).reshape(-1) @ weights)])
    F = batch.F
    log = {F.power(F.generator, e): e for e in range(q - 1)}
    det_exp = np.array([log[int(d)] for d in dets[keep]], dtype=np.int64)
    labels = [tuple(map(int, m.reshape(-1))) for m in mats]
    return ExplicitGroup(f"GL_{n}({q})", table, identity, labels, det_exp, q - 1)
