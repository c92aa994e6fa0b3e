"""Integer lattice helpers: Hermite normal form, kernels, Diophantine solving,
coset reduction and Fincke-Pohst enumeration of short coset vectors.

Matrices are lists of rows of Python ints (or Fractions for shifts).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        t = a // b
        a, b = b, a - t * b
        x0, x1 = x1, x0 - t * x1
        y0, y1 = y1, y0 - t * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def column_echelon(M: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[tuple[int, int]]]:
    """Unimodular column reduction M U = H.

    Returns (H, U, pivots) where pivots lists (row, column) of the echelon
    pivots; columns of H beyond the last pivot are zero, so the matching
    columns of U span the integer kernel of M.
    """
    m = len(M)
    k = len(M[0]) if m else 0
    H = [row[:] for row in M]
    U = [[int(i == j) for j in range(k)] for i in range(k)]

    def colop(j1: int, j2: int, a: int, b: int, c: int, d: int):
        # (col j1, col j2) <- (a*c1 + b*c2, c*c1 + d*c2)
        for mat in (H, U):
            for row in mat:
                x, y = row[j1], row[j2]
                row[j1], row[j2] = a * x + b * y, c * x + d * y

    pivots = []
    col = 0
    for i in range(m):
        if col >= k:
            break
        for j in range(col + 1, k):
            if H[i][j]:
                g, x, y = _ext_gcd(H[i][col], H[i][j])
                p, r = H[i][col] // g, H[i][j] // g
                # [[x, -r], [y, p]] has determinant x*p + y*r = 1
                colop(col, j, x, y, -r, p)
        if H[i][col] == 0:
            continue
        if H[i][col] < 0:
            for mat in (H, U):
                for row in mat:
                    row[col] = -row[col]
        pivots.append((i, col))
        col += 1
    return H, U, pivots


def integer_kernel(M: list[list[int]]) -> list[list[int]]:
    """Basis (as rows) of {x in Z^k : M x = 0}."""
    k = len(M[0])
    H, U, pivots = column_echelon(M)
    rank = len(pivots)
    return [[U[i][j] for i in range(k)] for j in range(rank, k)]


def solve_integer(M: list[list[int]], b: Sequence[int]) -> list[int] | None:
    """One integer solution of M x = b, or None if none exists (exact test)."""
    k = len(M[0])
    H, U, pivots = column_echelon(M)
    y = [0] * k
    pivot_rows = {r: c for r, c in pivots}
    for i in range(len(M)):
        acc = sum(H[i][j] * y[j] for j in range(k))
        rest = b[i] - acc
        if i in pivot_rows:
            c = pivot_rows[i]
            if rest % H[i][c]:
                return None
            y[c] = rest // H[i][c]
        elif rest != 0:
            return None
    return [sum(U[i][j] * y[j] for j in range(k)) for i in range(k)]


def hnf_rows(B: list[list[int]]) -> list[list[int]]:
    """Canonical row Hermite normal form of the lattice spanned by the rows of B.

    Zero rows are dropped; pivots are positive and entries above each pivot
    are reduced into [0, pivot).
    """
    if not B:
        return []
    # row HNF of B == transpose of column echelon of B^T, then reduce
    Bt = [list(col) for col in zip(*B)]
    H, _, pivots = column_echelon(Bt)
    rows = [[H[i][c] for i in range(len(Bt))] for _, c in pivots]
    piv_cols = [r for r, _ in pivots]
    for t, (row, p) in enumerate(zip(rows, piv_cols)):
        for s in range(t):
            f = rows[s][p] // row[p]
            if f:
                rows[s] = [x - f * y for x, y in zip(rows[s], row)]
    return rows


def pivot_columns(hnf: list[list[int]]) -> list[int]:
    return [next(j for j, x in enumerate(row) if x) for row in hnf]


def reduce_mod_lattice(v: Sequence, hnf: list[list[int]]) -> list:
    """Canonical representative of v + L (v may be rational) using the HNF basis."""
    v = list(v)
    for row, p in zip(hnf, pivot_columns(hnf)):
        t = math.floor(Fraction(v[p]) / row[p])
        if t:
            v = [x - t * y for x, y in zip(v, row)]
    return v


def in_lattice(v: Sequence, hnf: list[list[int]]) -> bool:
    return all(x == 0 for x in reduce_mod_lattice(v, hnf))


def enumerate_coset(shift: Sequence[Fraction], basis: list[list[int]], weights: Sequence[int],
                    bound: Fraction) -> list[tuple[Fraction, tuple]]:
    """All vectors w = shift + c.basis (c in Z^d) with sum_s weights[s] * w_s^2 < bound.

    Fincke-Pohst over the Gram matrix of the weighted form; floating point is
    used only to prune (with slack) and every returned norm is exact.
    Returns a list of (norm, w).
    """
    shift = [Fraction(x) for x in shift]
    bound = Fraction(bound)
    d = len(basis)

    def norm(w):
        return sum(l * x * x for l, x in zip(weights, w))

    if d == 0:
        nv = norm(shift)
        return [(nv, tuple(shift))] if nv < bound else []
    dim = len(shift)
    Q = [[sum(weights[s] * basis[i][s] * basis[j][s] for s in range(dim)) for j in range(d)] for i in range(d)]
    # centre mu with shift + c.basis minimal at c = -mu (exact, projected onto span)
    rhs = [sum(weights[s] * basis[i][s] * shift[s] for s in range(dim)) for i in range(d)]
    mu = _solve_fraction(Q, rhs)
    mu_f = np.array([float(x) for x in mu])
    const = norm(shift) - sum(mu[i] * rhs[i] for i in range(d))  # orthogonal residual (>= 0)
    R = np.linalg.cholesky(np.array(Q, dtype=float)).T  # Q = R^T R, R upper triangular
    radius2 = float(bound - const) * (1 + 1e-9) + 1e-9
    out = []
    if radius2 < 0:
        return out
    c = [0] * d

    def rec(i: int, partial: float):
        # coordinates i+1..d-1 fixed; choose c[i]
        centre = -mu_f[i]
        tail = 0.0
        for j in range(i + 1, d):
            tail += R[i, j] * (c[j] + mu_f[j])
        centre = -mu_f[i] - tail / R[i, i]
        room = radius2 - partial
        if room < 0:
            return
        span = math.sqrt(room) / R[i, i]
        for ci in range(math.ceil(centre - span - 1e-9), math.floor(centre + span + 1e-9) + 1):
            c[i] = ci
            val = R[i, i] * (ci + mu_f[i]) + tail
            p2 = partial + val * val
            if p2 > radius2:
                continue
            if i == 0:
                w = tuple(shift[s] + sum(c[j] * basis[j][s] for j in range(d)) for s in range(dim))
                nv = norm(w)
                if nv < bound:
                    out.append((nv, w))
            else:
                rec(i - 1, p2)
        c[i] = 0

    rec(d - 1, 0.0)
    return out


def _solve_fraction(A: list[list[int]], b: list) -> list[Fraction]:
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(A)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col] / M[col][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] / M[i][i] for i in range(n)]
