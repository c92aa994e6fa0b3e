"""Eta quotients, lattice-coset theta series and the asymptotic counts they predict.

For a Frobenius orbit structure of (a, q) and determinant residue k, the
torsion count j_{q,n,k}(a) is asymptotic to

    f_n(1/q) * q^((1-a)/24) * q^((1-1/a) n^2),
    f_n = eta(z) * theta_{lambda'_n}(z) / prod_s eta(l_s z),

where theta sums u^{|v|^2} over the shifted coset lambda'_n + Lambda of
orbit-constant integer vectors.  Series work in the nome u; evaluating
"at i log q / 2 pi" means substituting u = 1/q.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Sequence

import mpmath
from mpmath import mpf

from .errors import EmptyCoset, PrecisionUnachievable
from .lattice import enumerate_coset, hnf_rows, in_lattice, integer_kernel, reduce_mod_lattice, solve_integer
from .precision import Approx, ScaledReal, ulp_radius, workdps
from .series import PuiseuxSeries, eta_series
from .signature import FuchsianSignature, euler_characteristic, is_on_excluded_list
from .torsion import FrobeniusOrbitStructure, count_tuples, gl_order, orbit_structure, sigma_set

DEFAULT_TRUNC = 200
DEFAULT_PRECISION = 50


class ExcludedSignatureWarning(UserWarning):
    """Signature is on the exclusion list; predictions are outside the proven range."""


@dataclass(frozen=True)
class CongruenceLattice:
    """Orbit-constant v in Z^a with sum 0 and sum i*v_i = 0 (mod a).

    ``basis`` rows are in orbit coordinates (one entry per Frobenius orbit),
    in row Hermite normal form; the Euclidean norm of the expanded vector is
    sum_s l_s w_s^2.
    """

    structure: FrobeniusOrbitStructure
    basis: tuple[tuple[int, ...], ...]

    @property
    def a(self) -> int:
        return self.structure.a

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def weights(self) -> tuple[int, ...]:
        return self.structure.lengths

    def full_basis(self) -> list[list[int]]:
        return [self.structure.expand(row) for row in self.basis]

    def contains(self, w: Sequence) -> bool:
        return in_lattice(w, [list(r) for r in self.basis])


@dataclass(frozen=True)
class ShiftedCoset:
    lattice: CongruenceLattice
    n: int
    k: int
    shift: tuple[Fraction, ...] | None  # lambda'_n, orbit coordinates, canonical mod Lambda
    lambda_n: tuple[int, ...] | None  # integer representative with coordinate sum n

    @property
    def empty(self) -> bool:
        return self.shift is None

    def full_shift(self) -> list[Fraction]:
        return self.lattice.structure.expand(self.shift)


def _constraint_matrix(structure: FrobeniusOrbitStructure) -> list[list[int]]:
    # unknowns (w_1..w_|S|, t):  sum l_s w_s = n ;  sum c_s w_s + a t = k
    return [list(structure.lengths) + [0], list(structure.residue_sums) + [structure.a]]


@lru_cache(maxsize=None)
def congruence_lattice(a: int, q: int) -> CongruenceLattice:
    structure = orbit_structure(a, q)
    kernel = integer_kernel(_constraint_matrix(structure))
    projected = [row[:-1] for row in kernel]  # injective: w = 0 forces t = 0
    basis = hnf_rows(projected) if projected else []
    return CongruenceLattice(structure, tuple(tuple(r) for r in basis))


def build_coset(a: int, q: int, n: int, k: int) -> ShiftedCoset:
    """The coset lambda'_n + Lambda of conditions (1)-(3) plus det exponent k (entries may be negative)."""
    lattice = congruence_lattice(a, q)
    structure = lattice.structure
    k %= a
    sol = solve_integer(_constraint_matrix(structure), [n, k])
    if sol is None:
        return ShiftedCoset(lattice, n, k, None, None)
    basis = [list(r) for r in lattice.basis]
    lam = reduce_mod_lattice(sol[:-1], basis)
    shift = reduce_mod_lattice([Fraction(x) - Fraction(n, a) for x in lam], basis)
    return ShiftedCoset(lattice, n, k, tuple(Fraction(x) for x in shift), tuple(int(x) for x in lam))


def same_coset(c1: ShiftedCoset, c2: ShiftedCoset) -> bool:
    if c1.empty or c2.empty:
        return c1.empty and c2.empty
    return c1.lattice.contains([x - y for x, y in zip(c1.shift, c2.shift)])


def coset_vectors(coset: ShiftedCoset, trunc) -> list[tuple[Fraction, tuple]]:
    if coset.empty:
        raise EmptyCoset(f"no integer solution for a={coset.lattice.a}, n={coset.n}, k={coset.k}")
    lat = coset.lattice
    return enumerate_coset(coset.shift, [list(r) for r in lat.basis], lat.weights, Fraction(trunc))


def theta_series(coset: ShiftedCoset, trunc) -> PuiseuxSeries:
    """sum over v in the coset with |v|^2 < trunc of u^{|v|^2}."""
    items = [(norm, 1) for norm, _ in coset_vectors(coset, trunc)]
    s = PuiseuxSeries.from_exponents(items, trunc)
    return s.with_denominator(lcm(s.N, coset.lattice.a))


@lru_cache(maxsize=256)
def eta_quotient(a: int, q: int, trunc: Fraction) -> PuiseuxSeries:
    """eta(z) / prod_{s in S} eta(l_s z), known for exponents < trunc."""
    structure = orbit_structure(a, q)
    margin = Fraction(a, 12) + 1
    work = Fraction(trunc) + margin
    den = PuiseuxSeries.one(work)
    for l in structure.lengths:
        den = den * eta_series(l, work)
    out = eta_series(1, work) / den
    return out.truncate(trunc)


def f_n_series(a: int, q: int, n: int, k: int, trunc=DEFAULT_TRUNC) -> PuiseuxSeries:
    trunc = Fraction(trunc)
    coset = build_coset(a, q, n, k)
    if coset.empty:
        raise EmptyCoset(f"determinant zeta_{a}^{k} has an empty coset over F_{q}")
    quotient = eta_quotient(a, q, trunc)
    theta = theta_series(coset, trunc + Fraction(a, 24) + 1)
    f = (quotient * theta).truncate(trunc).reduced()
    if not f.is_integral():
        raise AssertionError("f_n has non-integral coefficients")
    return f


def evaluate_at_nome(s: PuiseuxSeries, q: int, precision_digits: int = DEFAULT_PRECISION,
                     check: bool = True) -> Approx:
    """Sum of c * q^(-e) with a rounding radius plus an estimate of the truncation tail.

    The tail estimate assumes the unknown coefficients grow no faster than
    the ratio observed between the last two unit windows of exponents.
    """
    if q < 2:
        raise ValueError("nome 1/q requires q >= 2")
    with workdps(precision_digits):
        total = mpf(0)
        rounding = mpf(0)
        qq = mpf(q)
        for e, c in s.items():
            term = mpf(c.numerator) / c.denominator if isinstance(c, Fraction) else mpf(c)
            term *= mpmath.power(qq, -mpf(e.numerator) / e.denominator)
            total += term
            rounding += 2 * ulp_radius(term, precision_digits) + ulp_radius(total, precision_digits)
        tail = _tail_estimate(s, qq)
        if check and tail > mpf(10) ** (-precision_digits) * max(abs(total), mpf(1)):
            raise PrecisionUnachievable(
                f"truncation tail ~{mpmath.nstr(tail, 3)} exceeds 1e-{precision_digits}; raise trunc")
        return Approx(total, rounding + tail)


def _tail_estimate(s: PuiseuxSeries, qq):
    T = s.trunc
    if not s.terms:
        return mpf(0)

    def window_max(lo, hi):
        vals = [abs(c) for e, c in s.items() if lo <= e < hi]
        return max(vals) if vals else 0

    last = window_max(T - 1, T)
    prev = window_max(T - 2, T - 1)
    biggest = max(abs(c) for c in s.terms.values())
    m = mpf(max(last, 1) if last else biggest)
    growth = mpf(last) / prev if (last and prev) else mpf(1)
    growth = max(growth, mpf(1))
    if growth >= qq:
        return mpf("inf")
    per_window = s.reduced().N  # at most this many exponents per unit window
    return m * growth * per_window * mpmath.power(qq, -mpf(T.numerator) / T.denominator) / (1 - growth / qq)


def predict_j(a: int, q: int, n: int, k: int, trunc=DEFAULT_TRUNC,
              precision_digits: int = DEFAULT_PRECISION) -> ScaledReal:
    """f_n(1/q) * q^((1-a)/24 + (1-1/a) n^2), the exponent kept exact."""
    exponent = Fraction(1 - a, 24) + (1 - Fraction(1, a)) * n * n
    if build_coset(a, q, n, k).empty:
        return ScaledReal(Approx.exact(0), exponent, q)
    value = evaluate_at_nome(f_n_series(a, q, n, k, trunc), q, precision_digits)
    return ScaledReal(value, exponent, q)


def _f_values(a: int, q: int, n: int, trunc, precision_digits: int) -> list[Approx]:
    out = []
    for k in range(a):
        if build_coset(a, q, n, k).empty:
            out.append(Approx.exact(0))
        else:
            out.append(evaluate_at_nome(f_n_series(a, q, n, k, trunc), q, precision_digits))
    return out


def predict_J(periods: Sequence[int], q: int, n: int, trunc=DEFAULT_TRUNC,
              precision_digits: int = DEFAULT_PRECISION) -> ScaledReal:
    """Prediction for J_{q,n}(a_1..a_r): sum over det-compatible residues of products of f_n values."""
    periods = sorted(periods)
    r = len(periods)
    exponent = Fraction(r - sum(periods), 24) + (r - sum(Fraction(1, a) for a in periods)) * n * n
    if not periods:
        return ScaledReal(Approx.exact(1), exponent, q)
    A = lcm(*periods)
    with workdps(precision_digits):
        acc = [Approx.exact(0) for _ in range(A)]
        acc[0] = Approx.exact(1)
        for a in periods:
            vals = _f_values(a, q, n, trunc, precision_digits)
            nxt = [Approx.exact(0) for _ in range(A)]
            for i, x in enumerate(acc):
                if x.value == 0 and x.radius == 0:
                    continue
                for kk, y in enumerate(vals):
                    if y.value == 0 and y.radius == 0:
                        continue
                    j = (i + kk * (A // a)) % A
                    nxt[j] = nxt[j] + x * y
            acc = nxt
        return ScaledReal(acc[0], exponent, q)


def eta_at_nome(q: int, trunc=DEFAULT_TRUNC, precision_digits: int = DEFAULT_PRECISION) -> Approx:
    return evaluate_at_nome(eta_series(1, trunc), q, precision_digits)


@dataclass(frozen=True)
class HomPrediction:
    signature: FuchsianSignature
    q: int
    n: int
    predicted: ScaledReal  # (q-1) * J-prediction * |GL_n(q)|^(2g-1)
    c_qn: Approx  # predicted / q^((1-chi) n^2)
    c_qn_modular: Approx  # (q-1) q^e f(1/q) with f = f_J * eta^(2g-1)
    e: Fraction  # (r - sum a_i)/24 + (2g-1)/24
    exact_linear_term: Fraction | None
    excluded: bool

    def as_json(self) -> dict:
        return {
            "signature": str(self.signature),
            "q": self.q,
            "n": self.n,
            "predicted": self.predicted.as_json(),
            "c_qn": mpmath.nstr(self.c_qn.value, 20),
            "c_qn_modular": mpmath.nstr(self.c_qn_modular.value, 20),
            "e": f"{self.e.numerator}/{self.e.denominator}",
            "exact_linear_term": None if self.exact_linear_term is None else str(self.exact_linear_term),
            "excluded_signature": self.excluded,
        }


def predict_hom_count(sig: FuchsianSignature, q: int, n: int, trunc=DEFAULT_TRUNC,
                      precision_digits: int = DEFAULT_PRECISION, exact_linear: bool = True) -> HomPrediction:
    """Predicted |Hom(Gamma, GL_n(q))| = (q-1) J_{q,n} |GL_n(q)|^(2g-1) with exponent bookkeeping."""
    excluded = is_on_excluded_list(sig)
    if excluded:
        warnings.warn(f"signature {sig} is on the exclusion list", ExcludedSignatureWarning, stacklevel=2)
    g, periods = sig.genus, sig.periods
    chi = euler_characteristic(sig)
    Jp = predict_J(periods, q, n, trunc, precision_digits)
    e = Fraction(len(periods) - sum(periods), 24) + Fraction(2 * g - 1, 24)
    with workdps(precision_digits):
        gl_mant = Approx(mpf(gl_order(n, q)) / mpmath.power(q, n * n), mpf(0))
        gl_mant = Approx(gl_mant.value, ulp_radius(gl_mant.value, precision_digits))
        gl_pow = Approx.exact(1)
        if 2 * g - 1 >= 0:
            for _ in range(2 * g - 1):
                gl_pow = gl_pow * gl_mant
        else:
            inv = mpf(1) / gl_mant.value
            gl_pow = Approx(inv, ulp_radius(inv, precision_digits) + gl_mant.radius * inv * inv)
        mant = Approx.exact(q - 1) * Jp.mantissa * gl_pow
        predicted = ScaledReal(mant, Jp.exponent + (2 * g - 1) * n * n, q)
        assert predicted.exponent == (1 - chi) * n * n + Fraction(len(periods) - sum(periods), 24)
        scale = mpmath.power(q, mpf(len(periods) - sum(periods)) / 24)
        c_qn = Approx(mant.value * scale, mant.radius * scale)
        eta_v = eta_at_nome(q, trunc, precision_digits)
        eta_pow = mpmath.power(eta_v.value, 2 * g - 1)
        mod_val = (q - 1) * mpmath.power(q, mpf(e.numerator) / e.denominator) * Jp.mantissa.value * eta_pow
        c_mod = Approx(mod_val, abs(mod_val) * (Jp.mantissa.relative_radius() + abs(2 * g - 1) * eta_v.relative_radius()))
    exact = None
    if exact_linear:
        exact = linear_term_exact(sig, q, n)
    return HomPrediction(sig, q, n, predicted, c_qn, c_mod, e, exact, excluded)


def linear_term_exact(sig: FuchsianSignature, q: int, n: int) -> Fraction:
    """(q-1) * J_{q,n}(periods) * |GL_n(q)|^(2g-1), exact (rational when g = 0)."""
    val = Fraction((q - 1) * count_tuples(sig.periods, q, n)) * Fraction(gl_order(n, q)) ** (2 * sig.genus - 1)
    return val


def compare_rows(a_or_periods, q: int, ns: Sequence[int], k: int | None = None, trunc=DEFAULT_TRUNC,
                 precision_digits: int = DEFAULT_PRECISION) -> list[dict]:
    """Exact count vs prediction for each n (j when ``k`` is given, else J over the periods)."""
    from .torsion import count_torsion

    rows = []
    for n in ns:
        if k is not None:
            exact = count_torsion(a_or_periods, q, n, k)
            pred = predict_j(a_or_periods, q, n, k, trunc, precision_digits)
        else:
            exact = count_tuples(a_or_periods, q, n)
            pred = predict_J(a_or_periods, q, n, trunc, precision_digits)
        with workdps(precision_digits):
            ratio = pred.ratio_to(exact) if pred.mantissa.value != 0 else (mpf(1) if exact == 0 else mpf("inf"))
        rows.append({
            "n": n,
            "exact_count": str(exact),
            "predicted_mantissa": mpmath.nstr(pred.mantissa.value, precision_digits, strip_zeros=False),
            "predicted_exponent": f"{pred.exponent.numerator}/{pred.exponent.denominator}",
            "ratio": ratio,
            "ratio_minus_one": ratio - 1,
        })
    return rows
