"""Counting homomorphisms from Fuchsian groups into finite groups.

Character route: for classes C_1..C_r,

    #{(x_j, y_j, z_i) : prod [x_j, y_j] prod z_i = 1, z_i in C_i}
        = |G|^(2g-1) |C_1|...|C_r| sum_chi chi(C_1)...chi(C_r) / chi(1)^(2g+r-2),

and |Hom(Gamma, G)| sums this over all class tuples whose element orders
divide the periods.  Brute-force route: accumulate the distribution of
partial products over group elements using the multiplication table.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Sequence

import mpmath
import numpy as np
from mpmath import mpf

from .characters import CharacterTable
from .errors import CapExceeded, NonIntegralResult
from .groups import ExplicitGroup
from .signature import FuchsianSignature
from .torsion import count_tuples, gl_order

ROUNDING_TOLERANCE = mpf("1e-6")
BRUTE_FORCE_CAP = 10**9


def _round_checked(value, tol=ROUNDING_TOLERANCE) -> int:
    nearest = mpmath.nint(value.real)
    residual = max(abs(value.real - nearest), abs(value.imag))
    if residual > tol:
        raise NonIntegralResult(f"value {mpmath.nstr(value, 15)} is {mpmath.nstr(residual, 3)} from an integer")
    return int(nearest)


def hurwitz_class_count(T: CharacterTable, g: int, classes: Sequence[int], tol=ROUNDING_TOLERANCE) -> int:
    r = len(classes)
    with mpmath.workdps(T.precision_digits + 10):
        total = mpmath.mpc(0)
        for chi in T.values:
            term = mpmath.mpc(1)
            for c in classes:
                term *= chi[c]
            total += term / chi[0] ** (2 * g + r - 2)
        scale = mpf(T.group_order) ** (2 * g - 1)
        for c in classes:
            scale *= T.classes[c].size
        return _round_checked(total * scale, tol)


def _admissible_classes(T: CharacterTable, a: int) -> list[int]:
    return [c for c, info in enumerate(T.classes) if a % info.element_order == 0]


def total_hom_count(T: CharacterTable, sig: FuchsianSignature, det_filter: bool = False,
                    tol=ROUNDING_TOLERANCE) -> int:
    """|Hom(Gamma, G)| by the Frobenius formula, summed over class tuples of admissible orders.

    The class-tuple sum factorizes per character.  With ``det_filter`` only
    tuples whose determinants multiply to 1 are kept (needs per-class
    determinants); tuples violating this contribute 0 anyway.
    """
    g, periods = sig.genus, sig.periods
    r = len(periods)
    admissible = [_admissible_classes(T, a) for a in periods]
    if det_filter and T.class_det is None:
        raise ValueError("determinant filter needs per-class determinants")
    M = T.det_modulus or 1
    with mpmath.workdps(T.precision_digits + 10):
        total = mpmath.mpc(0)
        for chi in T.values:
            # vec[d] = sum over partial tuples with det exponent d of prod |C| chi(C)
            vec = [mpmath.mpc(0)] * M
            vec[0] = mpmath.mpc(1)
            for adm in admissible:
                nxt = [mpmath.mpc(0)] * M
                for c in adm:
                    w = T.classes[c].size * chi[c]
                    shift = T.class_det[c] % M if det_filter else 0
                    for d in range(M):
                        if vec[d] != 0:
                            nxt[(d + shift) % M] += vec[d] * w
                vec = nxt
            total += vec[0] / chi[0] ** (2 * g + r - 2)
        value = total * mpf(T.group_order) ** (2 * g - 1)
        return _round_checked(value, tol)


def total_hom_count_by_tuples(T: CharacterTable, sig: FuchsianSignature, tol=ROUNDING_TOLERANCE) -> int:
    """Same total as :func:`total_hom_count`, summing hurwitz_class_count tuple by tuple."""
    admissible = [_admissible_classes(T, a) for a in sig.periods]
    return sum(hurwitz_class_count(T, sig.genus, cs, tol) for cs in product(*admissible))


def linear_contribution(sig: FuchsianSignature, q: int, n: int) -> int | Fraction:
    """(q-1) J_{q,n}(periods) |GL_n(q)|^(2g-1), exact; an int when integral."""
    val = Fraction((q - 1) * count_tuples(sig.periods, q, n)) * Fraction(gl_order(n, q)) ** (2 * sig.genus - 1)
    return val.numerator if val.denominator == 1 else val


def _commutator_distribution(G: ExplicitGroup) -> np.ndarray:
    t, inv = G.table, G.inverse
    xy = t                               # xy[x, y]
    xiyi = t[np.ix_(inv, inv)]           # x^-1 y^-1
    comm = t[xy, xiyi]
    return np.bincount(comm.ravel(), minlength=G.order).astype(object)


def _right_multiply(G: ExplicitGroup, vec: np.ndarray, elements: np.ndarray) -> np.ndarray:
    """out[h z] += vec[h] for z in elements."""
    out = np.zeros(G.order, dtype=object)
    nz = np.nonzero(vec)[0]
    for z in elements:
        np.add.at(out, G.table[nz, z], vec[nz])
    return out


def brute_force_work(G: ExplicitGroup, sig: FuchsianSignature) -> int:
    work = G.order ** (2 * sig.genus)
    for a in sig.periods[:-1]:
        work *= len(G.solutions_of_power(a))
    return work


def brute_force_hom_count(G: ExplicitGroup, sig: FuchsianSignature, cap: int = BRUTE_FORCE_CAP) -> int:
    """Count (x_1, y_1, ..., z_r) with z_i^{a_i} = 1 and the long relator trivial.

    Partial products are tracked as a distribution over group elements; the
    last z is forced to be the inverse of the accumulated product and kept
    when its order divides the last period.
    """
    if brute_force_work(G, sig) > cap:
        raise CapExceeded(f"brute force on {G.name} for {sig} exceeds {cap} work units")
    vec = np.zeros(G.order, dtype=object)
    vec[G.identity] = 1
    if sig.genus:
        comm = _commutator_distribution(G)
        support = np.nonzero(comm)[0]
        for _ in range(sig.genus):
            nxt = np.zeros(G.order, dtype=object)
            nz = np.nonzero(vec)[0]
            for c in support:
                np.add.at(nxt, G.table[nz, c], vec[nz] * comm[c])
            vec = nxt
    periods = sig.periods
    if not periods:
        return int(vec[G.identity])
    for a in periods[:-1]:
        vec = _right_multiply(G, vec, G.solutions_of_power(a))
    last = set(int(x) for x in G.solutions_of_power(periods[-1]))
    return int(sum(vec[h] for h in range(G.order) if int(G.inverse[h]) in last))
