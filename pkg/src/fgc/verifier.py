"""Certified verification of the torsion-sum inequalities behind the exclusion list.

For a >= 2 and 0 < x <= 1/2 let

    f_{a,x}(delta) = min((1/a + delta) x, (1/a + a delta^2/(a-1)) / 2),
    B_a(x) = sup_delta (f_{a,x}(delta) - a delta^2/(a-1)) / x.

B_a(x) equals max(x/a, G_{a,x}, H_{a,x}) with

    G = ((a-1)x + 4)/(4a)                  when x <= (2 sqrt(3a+1) - 4)/(3(a-1)),
    H = sqrt((a-1)^2x^2 + 2(a-1)x - (a-1))/a - (a-1)x/a + (1-x)/(ax)
                                            when (a-1)x^2 + 2x >= 1,

inactive branches counting as -infinity.  A tuple (a_1..a_r) is certified
when sum_i B_{a_i}(x) < r - 2 - eps for every x in (0, 1/2].

Arithmetic is exact: cells are dyadic intervals, and every bound is an
integer multiple of 2^-64 rounded in the safe direction (up for upper
bounds, down for lower bounds); square roots come from integer square roots
and are checked by squaring.  A cell (d, k) is [k/2^(d+1), (k+1)/2^(d+1)].
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .cache import CACHE_VERSION, atomic_write_json, read_json
from .errors import DepthExceeded, DomainError
from .signature import EXCLUDED_QUADRUPLES, EXCLUDED_TRIPLES

log = logging.getLogger(__name__)

FRAC_BITS = 64
ONE = 1 << FRAC_BITS
DEFAULT_EPS = Fraction(1, 10**4)
DEFAULT_DEPTH = 24
CERT_EPS = Fraction(1, 10**5)
CERT_DEPTH = 48
GATES = ("proof", "statement")

TABLE_TARGETS = (
    # (lowest a, highest a exclusive, required bound)
    (2, 3, Fraction(555, 1000)),
    (3, 4, Fraction(399, 1000)),
    (4, 100, Fraction(318, 1000)),
    (100, 10000, Fraction(2, 10)),
)
TABLE_SAMPLES = (100, 101, 999, 5000, 9999)


# ---------------------------------------------------------------- arithmetic


def ceil_fx(v: Fraction) -> int:
    return -((-v.numerator << FRAC_BITS) // v.denominator)


def floor_fx(v: Fraction) -> int:
    return (v.numerator << FRAC_BITS) // v.denominator


def sqrt_fx(r: Fraction, upper: bool) -> int:
    """sqrt(r) * 2^64 rounded up (``upper``) or down, from an integer square root."""
    if r < 0:
        raise DomainError("square root of a negative number")
    num, den = r.numerator << (2 * FRAC_BITS), r.denominator
    if upper:
        N = -(-num // den)
        s = isqrt(N)
        if s * s < N:
            s += 1
        assert s * s * den >= num
    else:
        s = isqrt(num // den)
        assert s * s * den <= num
    return s


def fx_to_fraction(v: int) -> Fraction:
    return Fraction(v, ONE)


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise DomainError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def bisect(self) -> tuple["RationalInterval", "RationalInterval"]:
        m = self.mid
        return RationalInterval(self.lo, m), RationalInterval(m, self.hi)

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, other: "RationalInterval") -> "RationalInterval":
        return RationalInterval(self.lo + other.lo, self.hi + other.hi)


def cell_interval(d: int, k: int) -> RationalInterval:
    w = Fraction(1, 2 ** (d + 1))
    return RationalInterval(k * w, (k + 1) * w)


# ---------------------------------------------------------------- closed forms


def f_axd(a: int, x, delta) -> Fraction:
    x, delta = Fraction(x), Fraction(delta)
    if a < 2 or not (0 <= x <= Fraction(1, 2)) or not (0 <= delta <= 1 - Fraction(1, a)):
        raise DomainError(f"f_(a,x)(delta) undefined for a={a}, x={x}, delta={delta}")
    return min((Fraction(1, a) + delta) * x, (Fraction(1, a) + Fraction(a, a - 1) * delta * delta) / 2)


def objective(a: int, x, delta) -> Fraction:
    """(f_{a,x}(delta) - a delta^2/(a-1)) / x."""
    x, delta = Fraction(x), Fraction(delta)
    return (f_axd(a, x, delta) - Fraction(a, a - 1) * delta * delta) / x


def _gate_holds(a: int, x: Fraction, gate: str) -> bool:
    rad_ok = (a - 1) * x * x + 2 * x >= 1
    if gate == "proof":
        return rad_ok
    if gate == "statement":
        # radicand is (a-1) times the proof-gate expression; negative radicand means inactive
        return (a - 1) * x * x + a * x >= 1 and rad_ok
    raise DomainError(f"unknown gate {gate!r}")


def _radicand(a: int, x: Fraction) -> Fraction:
    return (a - 1) ** 2 * x * x + 2 * (a - 1) * x - (a - 1)


def _g_active(a: int, x: Fraction) -> bool:
    # x <= (2 sqrt(3a+1) - 4) / (3(a-1)), squared exactly (both sides positive)
    lhs = 3 * (a - 1) * x + 4
    return lhs * lhs <= 4 * (3 * a + 1)


def _g_value(a: int, x: Fraction) -> Fraction:
    return ((a - 1) * x + 4) / (4 * a)


def _h_tail(a: int, x: Fraction) -> Fraction:
    """-(a-1)x/a + (1-x)/(ax)."""
    return -(a - 1) * x / a + (1 - x) / (a * x)


@dataclass(frozen=True)
class ClosedForm:
    x_over_a: Fraction
    G: Fraction | None  # None when inactive
    H_upper: Fraction | None  # sqrt replaced by a rational upper bound; None when inactive

    @property
    def bound(self) -> Fraction:
        return max(v for v in (self.x_over_a, self.G, self.H_upper) if v is not None)


def closed_form_bounds(a: int, x, gate: str = "proof") -> ClosedForm:
    x = Fraction(x)
    if a < 2 or not (0 < x <= Fraction(1, 2)):
        raise DomainError(f"closed forms need a >= 2 and 0 < x <= 1/2 (a={a}, x={x})")
    G = _g_value(a, x) if _g_active(a, x) else None
    H = None
    if _gate_holds(a, x, gate):
        H = Fraction(-(-sqrt_fx(_radicand(a, x), True) // a), ONE) + _h_tail(a, x)
    return ClosedForm(x / a, G, H)


def _isqrt_up(N: int) -> int:
    s = isqrt(N)
    return s + 1 if s * s < N else s


def _cdiv(n: int, d: int) -> int:
    return -(-n // d)


def _gate_int(a: int, p: int, q: int, gate: str) -> bool:
    rad_ok = (a - 1) * p * p + 2 * p * q >= q * q
    if gate == "proof":
        return rad_ok
    if gate == "statement":
        return (a - 1) * p * p + a * p * q >= q * q and rad_ok
    raise DomainError(f"unknown gate {gate!r}")


def _g_active_int(a: int, p: int, q: int) -> bool:
    lhs = 3 * (a - 1) * p + 4 * q
    return lhs * lhs <= 4 * (3 * a + 1) * q * q


def _point_lower_int(a: int, p: int, q: int, gate: str) -> int:
    # x = p/q > 0; all quantities times 2^64, rounded down
    best = (p << FRAC_BITS) // (a * q)
    if _g_active_int(a, p, q):
        best = max(best, (((a - 1) * p + 4 * q) << FRAC_BITS) // (4 * a * q))
    if _gate_int(a, p, q, gate):
        E = (a - 1) * ((a - 1) * p * p + 2 * p * q - q * q)
        root = isqrt(E << (2 * FRAC_BITS)) // (a * q)
        tail = ((q * q - p * q - (a - 1) * p * p) << FRAC_BITS) // (a * p * q)
        best = max(best, root + tail)
    return best


def _cell_upper_int(a: int, lp: int, lq: int, hp: int, hq: int, gate: str) -> tuple[int, str]:
    # cell [lp/lq, hp/hq]; all quantities times 2^64, rounded up
    best, tag = _cdiv(hp << FRAC_BITS, a * hq), "endpoint-x/a"
    if _g_active_int(a, lp, lq):
        if _g_active_int(a, hp, hq):
            g = _cdiv(((a - 1) * hp + 4 * hq) << FRAC_BITS, 4 * a * hq)
        else:
            g = _constants(a)[0]
        if g > best:
            best, tag = g, "G-closed-form"
    if _gate_int(a, hp, hq, gate):
        rp, rq = _constants(a)[1]
        if lp * rq < rp * lq:
            lp, lq = rp, rq
        E = (a - 1) * ((a - 1) * hp * hp + 2 * hp * hq - hq * hq)
        root = _cdiv(_isqrt_up(E << (2 * FRAC_BITS)), a * hq)
        tail = _cdiv((lq * lq - lp * lq - (a - 1) * lp * lp) << FRAC_BITS, a * lp * lq)
        h = root + tail
        if h > best:
            best, tag = h, "H-closed-form"
    return best, tag


def point_lower_fx(a: int, x: Fraction, gate: str = "proof") -> int:
    """Lower bound (times 2^64, rounded down) of max(x/a, G, H) at x > 0."""
    x = Fraction(x)
    return _point_lower_int(a, x.numerator, x.denominator, gate)


@lru_cache(maxsize=None)
def _constants(a: int) -> tuple[int, tuple[int, int]]:
    """(upper bound of G at its threshold, lower bound p/q of the H-gate root 1/(sqrt(a)+1))."""
    s = sqrt_fx(Fraction(3 * a + 1), True)
    g_at_threshold = _cdiv(2 * s + 8 * ONE, 12 * a)  # (2 sqrt(3a+1) + 8) / (12a)
    return g_at_threshold, (ONE, sqrt_fx(Fraction(a), True) + ONE)


def cell_upper_fx(a: int, lo: Fraction, hi: Fraction, gate: str = "proof") -> tuple[int, str]:
    """Upper bound (times 2^64) of max(x/a, G, H) over [lo, hi] and the term attaining it.

    x/a and G increase in x; under the gate the square-root term increases
    and the remaining H terms decrease, so each is bounded at one endpoint.
    The H terms are only evaluated from the gate's root onwards.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    return _cell_upper_int(a, lo.numerator, lo.denominator, hi.numerator, hi.denominator, gate)


def sup_bound_on_cell(a: int, xlo, xhi, gate: str = "proof") -> Fraction:
    xlo, xhi = Fraction(xlo), Fraction(xhi)
    if a < 2 or not (0 <= xlo < xhi <= Fraction(1, 2)):
        raise DomainError(f"invalid cell [{xlo}, {xhi}] for a={a}")
    return fx_to_fraction(cell_upper_fx(a, xlo, xhi, gate)[0])


def dumb_upper(a: int) -> Fraction:
    """Rational upper bound of 2/sqrt(a)."""
    return fx_to_fraction(sqrt_fx(Fraction(4, a), True))


def dumb_lower(a: int) -> Fraction:
    return fx_to_fraction(sqrt_fx(Fraction(4, a), False))


# -------------------------------------------------------------- certificates


@dataclass
class BoundCertificate:
    a: int
    breakpoints: list[Fraction]
    bounds: list[Fraction]
    methods: list[str]
    lower_bound: Fraction  # largest exactly evaluated lower bound of sup B_a
    gate: str
    eps_refine: Fraction
    max_depth: int
    depth_exceeded: bool = False

    @property
    def global_bound(self) -> Fraction:
        return max(self.bounds)

    def covering_bounds(self, x: Fraction) -> list[Fraction]:
        """Bounds of every cell containing x (two cells at a breakpoint)."""
        import bisect

        i = bisect.bisect_left(self.breakpoints, x)
        out = []
        for c in (i - 1, i):
            if 0 <= c < len(self.bounds) and self.breakpoints[c] <= x <= self.breakpoints[c + 1]:
                out.append(self.bounds[c])
        return out

    def to_json(self) -> dict:
        return {
            "cache_version": CACHE_VERSION,
            "a": self.a,
            "breakpoints": [str(b) for b in self.breakpoints],
            "bounds": [str(b) for b in self.bounds],
            "methods": self.methods,
            "lower_bound": str(self.lower_bound),
            "global_bound": str(self.global_bound),
            "gate": self.gate,
            "eps_refine": str(self.eps_refine),
            "max_depth": self.max_depth,
            "depth_exceeded": self.depth_exceeded,
        }

    @classmethod
    def from_json(cls, data: dict) -> "BoundCertificate":
        return cls(int(data["a"]), [Fraction(b) for b in data["breakpoints"]],
                   [Fraction(b) for b in data["bounds"]], list(data["methods"]),
                   Fraction(data["lower_bound"]), data["gate"], Fraction(data["eps_refine"]),
                   int(data["max_depth"]), bool(data["depth_exceeded"]))


def certify_sup(a: int, eps_refine=CERT_EPS, max_depth: int = CERT_DEPTH, gate: str = "proof",
                strict: bool = False) -> BoundCertificate:
    """Adaptive bisection of (0, 1/2] until the largest cell bound is within eps of a proven value.

    If ``max_depth`` is reached first the certificate is still a valid upper
    bound, flagged ``depth_exceeded`` (or DepthExceeded with ``strict``).
    """
    if a < 2:
        raise DomainError("a must be >= 2")
    eps_fx = ceil_fx(Fraction(eps_refine))
    ub, tag = cell_upper_fx(a, Fraction(0), Fraction(1, 2), gate)
    heap = [(-ub, 0, 0, tag)]
    best_lb = point_lower_fx(a, Fraction(1, 2), gate)
    exceeded = False
    while True:
        neg, d, k, _ = heap[0]
        if -neg - best_lb <= eps_fx:
            break
        if d >= max_depth:
            exceeded = True
            break
        heapq.heappop(heap)
        den = 4 << d
        for kk in (2 * k, 2 * k + 1):
            ub, tag = _cell_upper_int(a, kk, den, kk + 1, den, gate)
            heapq.heappush(heap, (-ub, d + 1, kk, tag))
            best_lb = max(best_lb, _point_lower_int(a, 2 * kk + 1, 2 * den, gate))
    if exceeded and strict:
        raise DepthExceeded(f"a={a}: depth {max_depth} reached before eps {eps_refine}")
    cells = sorted(heap, key=lambda t: Fraction(t[2], 2 ** (t[1] + 1)))
    breakpoints = [cell_interval(d, k).lo for _, d, k, _ in cells] + [Fraction(1, 2)]
    return BoundCertificate(a, breakpoints, [fx_to_fraction(-t[0]) for t in cells], [t[3] for t in cells],
                            fx_to_fraction(best_lb), gate, Fraction(eps_refine), max_depth, exceeded)


class CertificateStore:
    """Per-a certificates computed once and optionally persisted as cert_a<value>.json."""

    def __init__(self, cache_dir: Path | None = None, eps_refine=CERT_EPS, max_depth: int = CERT_DEPTH,
                 gate: str = "proof"):
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self.eps_refine = Fraction(eps_refine)
        self.max_depth = max_depth
        self.gate = gate
        self._certs: dict[int, BoundCertificate] = {}

    def path(self, a: int) -> Path | None:
        if self.cache_dir is None:
            return None
        return self.cache_dir / f"cert_a{a}.json"

    def _matches(self, cert: BoundCertificate) -> bool:
        return (cert.gate == self.gate and cert.eps_refine == self.eps_refine
                and cert.max_depth == self.max_depth)

    def get(self, a: int) -> BoundCertificate:
        cert = self._certs.get(a)
        if cert is not None:
            return cert
        p = self.path(a)
        if p is not None:
            data = read_json(p)
            if data is not None:
                try:
                    cert = BoundCertificate.from_json(data)
                except (KeyError, ValueError, ZeroDivisionError):
                    cert = None
                if cert is not None and (cert.a != a or not self._matches(cert)):
                    cert = None
        if cert is None:
            cert = certify_sup(a, self.eps_refine, self.max_depth, self.gate)
            if p is not None:
                atomic_write_json(p, cert.to_json())
        self._certs[a] = cert
        return cert

    def bound(self, a: int) -> Fraction:
        return self.get(a).global_bound


# ------------------------------------------------------------ table checks


def required_table_bound(a: int) -> Fraction:
    for lo, hi, bound in TABLE_TARGETS:
        if lo <= a < hi:
            return bound
    return Fraction(2, 100)


def verify_table(a_values: Iterable[int], store: CertificateStore | None = None) -> list[dict]:
    store = store or CertificateStore()
    rows = []
    for a in a_values:
        cert = store.get(a)
        need = required_table_bound(a)
        rows.append({
            "a": a,
            "certified_bound": cert.global_bound,
            "lower_bound": cert.lower_bound,
            "required": need,
            "cells": len(cert.bounds),
            "depth_exceeded": cert.depth_exceeded,
            "pass": cert.global_bound <= need,
        })
    return rows


def check_dumb_bound(a_max: int = 200, store: CertificateStore | None = None) -> dict:
    """Certified sup B_a < 2/sqrt(a) for 2 <= a <= a_max (2/sqrt(a) rounded down)."""
    if a_max < 2:
        raise DomainError("a_max must be >= 2")
    store = store or CertificateStore()
    rows = []
    for a in range(2, a_max + 1):
        cert_b, limit = store.bound(a), dumb_lower(a)
        rows.append({"a": a, "certified_bound": cert_b, "two_over_sqrt_a_lower": limit, "pass": cert_b < limit})
    failures = [r["a"] for r in rows if not r["pass"]]
    return {"a_max": a_max, "rows": rows, "failures": failures, "pass": not failures,
            "large_a_note": "for a >= 10000, 2/sqrt(a) <= 1/50"}


def oracle_sample_sup(a: int, x_grid: Sequence, delta_grid: Sequence) -> Fraction:
    """Exact max over the grid of (f_{a,x}(delta) - a delta^2/(a-1)) / x."""
    return max(v for v in oracle_row_maxima(a, x_grid, delta_grid))


def oracle_row_maxima(a: int, x_grid: Sequence, delta_grid: Sequence) -> list[Fraction]:
    """For each x, the exact max over delta of the objective.

    A float pass picks candidate deltas within 1e-9 of each row's float
    maximum; only those are evaluated exactly.
    """
    xs = [Fraction(x) for x in x_grid]
    ds = [Fraction(d) for d in delta_grid]
    xf = np.array([float(x) for x in xs])[:, None]
    df = np.array([float(d) for d in ds])[None, :]
    c = a / (a - 1)
    vals = (np.minimum((1 / a + df) * xf, 0.5 * (1 / a + c * df * df)) - c * df * df) / xf
    rowmax = vals.max(axis=1, keepdims=True)
    cand = vals >= rowmax - 1e-9
    out = []
    for i, x in enumerate(xs):
        out.append(max(objective(a, x, ds[j]) for j in np.nonzero(cand[i])[0]))
    return out


def soundness_check(cert: BoundCertificate, grid_size: int = 1000) -> dict:
    """Compare a dense rational grid against every covering cell bound of the certificate."""
    a = cert.a
    xs = [Fraction(i, 2 * grid_size) for i in range(1, grid_size + 1)]
    top = 1 - Fraction(1, a)
    ds = [top * Fraction(j, grid_size - 1) for j in range(grid_size)]
    maxima = oracle_row_maxima(a, xs, ds)
    violations = []
    worst_gap = None
    for x, m in zip(xs, maxima):
        for b in cert.covering_bounds(x):
            gap = b - m
            worst_gap = gap if worst_gap is None else min(worst_gap, gap)
            if gap < 0:
                violations.append((x, m, b))
    return {"a": a, "points": len(xs) * len(ds), "violations": violations,
            "sample_sup": max(maxima), "certified": cert.global_bound, "smallest_gap": worst_gap}


# ------------------------------------------------------------ tuple checks


@dataclass
class TupleResult:
    periods: tuple[int, ...]
    passed: bool
    method: str  # 'global', 'dumb', 'cells', 'analytic'
    margin: Fraction  # target - (upper bound) on pass; target - lower bound on a proven failure
    cell: tuple[Fraction, Fraction] | None = None
    cells_checked: int = 0
    depth_exhausted: bool = False


class CellCache:
    """Memoized per-(a, cell) upper bounds and midpoint lower bounds, shared across tuples."""

    def __init__(self, gate: str = "proof"):
        self.gate = gate
        self._ub: dict[tuple[int, int, int], int] = {}
        self._lb: dict[tuple[int, int, int], int] = {}

    def upper(self, a: int, d: int, k: int) -> int:
        key = (a, d, k)
        v = self._ub.get(key)
        if v is None:
            den = 2 << d
            v = self._ub[key] = _cell_upper_int(a, k, den, k + 1, den, self.gate)[0]
        return v

    def lower(self, a: int, d: int, k: int) -> int:
        key = (a, d, k)
        v = self._lb.get(key)
        if v is None:
            v = self._lb[key] = _point_lower_int(a, 2 * k + 1, 4 << d, self.gate)
        return v


def check_tuple(periods: Sequence[int], eps=DEFAULT_EPS, depth: int = DEFAULT_DEPTH,
                cells: CellCache | None = None, gate: str = "proof") -> TupleResult:
    """Certify sum_i B_{a_i}(x) < r - 2 - eps on a shared dyadic partition, or find a failing cell."""
    periods = tuple(sorted(periods))
    cells = cells or CellCache(gate)
    target = len(periods) - 2 - Fraction(eps)
    tn, td = target.numerator, target.denominator
    stack = [(0, 0)]
    checked = 0
    worst = None
    while stack:
        d, k = stack.pop()
        checked += 1
        ub = sum(cells.upper(a, d, k) for a in periods)
        if ub * td < (tn << FRAC_BITS):
            m = target - fx_to_fraction(ub)
            worst = m if worst is None else min(worst, m)
            continue
        lb = sum(cells.lower(a, d, k) for a in periods)
        c = cell_interval(d, k)
        if lb * td >= (tn << FRAC_BITS):
            return TupleResult(periods, False, "cells", target - fx_to_fraction(lb), (c.lo, c.hi), checked)
        if d >= depth:
            return TupleResult(periods, False, "cells", target - fx_to_fraction(ub), (c.lo, c.hi), checked, True)
        stack.append((d + 1, 2 * k + 1))
        stack.append((d + 1, 2 * k))
    return TupleResult(periods, True, "cells", worst, None, checked)


def check_triple(a1: int, a2: int, a3: int, eps=DEFAULT_EPS, depth: int = DEFAULT_DEPTH,
                 cells: CellCache | None = None, gate: str = "proof") -> TupleResult:
    if not 2 <= a1 <= a2 <= a3:
        raise DomainError("need 2 <= a1 <= a2 <= a3")
    if Fraction(1, a1) + Fraction(1, a2) + Fraction(1, a3) >= 1:
        raise DomainError(f"({a1},{a2},{a3}) is not hyperbolic")
    res = check_tuple((a1, a2, a3), eps, depth, cells, gate)
    if res.depth_exhausted:
        res = check_tuple((a1, a2, a3), eps, depth + 8, cells, gate)
    return res


# ------------------------------------------------------------------ scans


@dataclass
class ExclusionReport:
    config: dict
    failures: list[dict]
    counts: dict
    expected: list[tuple[int, ...]]
    reductions: list[dict] = field(default_factory=list)

    @property
    def failure_set(self) -> set[tuple[int, ...]]:
        return {tuple(f["periods"]) for f in self.failures}

    @property
    def missing(self) -> list[tuple[int, ...]]:
        return sorted(set(self.expected) - self.failure_set)

    @property
    def extra(self) -> list[tuple[int, ...]]:
        return sorted(self.failure_set - set(self.expected))

    @property
    def matches_expected(self) -> bool:
        return not self.missing and not self.extra

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return str(v)
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            if isinstance(v, dict):
                return {k: enc(x) for k, x in v.items()}
            return v

        return enc({
            "config": self.config,
            "failures": self.failures,
            "counts": self.counts,
            "reductions": self.reductions,
            "expected": [list(t) for t in self.expected],
            "missing": [list(t) for t in self.missing],
            "extra": [list(t) for t in self.extra],
            "matches_expected": self.matches_expected,
        })


def _first_below(lo: int, hi: int, pred: Callable[[int], bool]) -> int:
    """Smallest a in [lo, hi] with pred(a), pred monotone (False...True); hi if none before."""
    while lo < hi:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def _failure_entry(res: TupleResult) -> dict:
    return {"periods": list(res.periods), "cell": list(res.cell) if res.cell else None,
            "margin": res.margin, "depth_exhausted": res.depth_exhausted}


def _scan_pairs(work: list[tuple[int, int]], max_a3: int, eps: Fraction, depth: int, gate: str,
                store: CertificateStore) -> tuple[list[dict], dict]:
    cells = CellCache(gate)
    target = 1 - eps
    failures = []
    counts = {"triples": 0, "dumb": 0, "global": 0, "cells": 0}
    for a1, a2 in work:
        M1, M2 = store.bound(a1), store.bound(a2)
        rem = target - M1 - M2
        lo3 = _lo3(a1, a2)
        if lo3 is None or lo3 > max_a3:
            continue
        if rem > 0:
            T = _first_below(lo3, max_a3 + 1, lambda c: dumb_upper(c) < rem)
        else:
            T = max_a3 + 1
        n_total = max_a3 - lo3 + 1
        counts["triples"] += n_total
        counts["dumb"] += max_a3 + 1 - T
        for a3 in range(lo3, T):
            if M1 + M2 + store.bound(a3) < target:
                counts["global"] += 1
                continue
            counts["cells"] += 1
            res = check_tuple((a1, a2, a3), eps, depth, cells, gate)
            if res.depth_exhausted:
                res = check_tuple((a1, a2, a3), eps, depth + 8, cells, gate)
            if not res.passed:
                failures.append(_failure_entry(res))
    return failures, counts


def _pair_worker(args):
    work, max_a3, eps, depth, gate, cache_dir, cert_eps, cert_depth = args
    store = CertificateStore(cache_dir, cert_eps, cert_depth, gate)
    return _scan_pairs(work, max_a3, eps, depth, gate, store)


def triple_work_items(max_a3: int, eps: Fraction, store: CertificateStore) -> tuple[list[tuple[int, int]], int]:
    """(a1, a2) pairs that may contain a failing triple; the rest pass by 2/sqrt(a) (count returned)."""
    target = 1 - eps
    pairs = []
    skipped = 0
    for a1 in range(2, max_a3 + 1):
        if 3 * dumb_upper(a1) < target:
            skipped += _count_triples_from(a1, a1, max_a3, all_a1=True)
            break
        M1 = store.bound(a1)
        for a2 in range(a1, max_a3 + 1):
            if M1 + 2 * dumb_upper(a2) < target:
                skipped += _count_triples_from(a1, a2, max_a3)
                break
            pairs.append((a1, a2))
    return pairs, skipped


def _lo3(b1: int, b2: int) -> int | None:
    """Smallest a3 >= b2 with 1/b1 + 1/b2 + 1/a3 < 1, or None if there is none."""
    den = b1 * b2 - b1 - b2
    if den <= 0:
        return None
    return max(b2, b1 * b2 // den + 1)


def _count_triples_from(a1: int, a2_start: int, max_a3: int, all_a1: bool = False) -> int:
    """Number of hyperbolic triples with the given a1 (or every a1' >= a1) and a2 >= a2_start."""
    total = 0
    for b1 in (range(a1, max_a3 + 1) if all_a1 else (a1,)):
        b2 = max(b1, a2_start)
        while b2 <= max_a3:
            lo3 = _lo3(b1, b2)
            if lo3 == b2:
                m = max_a3 - b2 + 1  # from here on every a3 >= b2 is hyperbolic
                total += m * (m + 1) // 2
                break
            if lo3 is not None and lo3 <= max_a3:
                total += max_a3 - lo3 + 1
            b2 += 1
    return total


def scan_quadruples(eps: Fraction, depth: int, gate: str, store: CertificateStore) -> tuple[list[dict], list[dict]]:
    """Quadruples: explicit cells for (2,2,2,c) below the 2/sqrt(c) tail, class bounds otherwise."""
    target = 2 - eps
    cells = CellCache(gate)
    failures, reductions = [], []
    M2 = store.bound(2)
    c_tail = 3
    while 3 * M2 + dumb_upper(c_tail) >= target:
        c_tail += 1
    for c in range(3, c_tail):
        res = check_tuple((2, 2, 2, c), eps, depth, cells, gate)
        if res.depth_exhausted:
            res = check_tuple((2, 2, 2, c), eps, depth + 8, cells, gate)
        if not res.passed:
            failures.append(_failure_entry(res))
    reductions.append({"family": "(2,2,2,c)", "explicit_up_to": c_tail - 1,
                       "tail_bound": 3 * M2 + dumb_upper(c_tail), "target": target,
                       "pass": 3 * M2 + dumb_upper(c_tail) < target})
    m3 = sup_bound_from(3, store)
    value = 2 * M2 + 2 * m3
    reductions.append({"family": "a3 >= 3", "bound": value, "target": target, "pass": value < target})
    return failures, reductions


def sup_bound_from(a_min: int, store: CertificateStore) -> Fraction:
    """Upper bound of sup_{a >= a_min} sup_x B_a(x): certificates until 2/sqrt(a) takes over."""
    best = store.bound(a_min)
    a = a_min + 1
    while dumb_upper(a) > best:
        best = max(best, store.bound(a))
        a += 1
    return best


def scan_genus0(max_a3: int = 500, eps=DEFAULT_EPS, depth: int = DEFAULT_DEPTH, gate: str = "proof",
                jobs: int = 1, store: CertificateStore | None = None,
                expected: Sequence[tuple[int, ...]] | None = None) -> ExclusionReport:
    """Scan every hyperbolic genus-0 signature with periods <= max_a3 (r = 3), all r = 4, all r >= 5."""
    if max_a3 < 7:
        raise DomainError("max_a3 must be >= 7")
    eps = Fraction(eps)
    store = store or CertificateStore(gate=gate)
    pairs, skipped = triple_work_items(max_a3, eps, store)
    # certify every period the pairs can touch before forking workers
    needed = sorted({a for p in pairs for a in p})
    for a in needed:
        store.get(a)
    if jobs > 1 and len(pairs) > 1:
        import multiprocessing as mp

        for a in range(2, max_a3 + 1):
            store.get(a)
        chunks = [pairs[i::jobs] for i in range(jobs)]
        args = [(c, max_a3, eps, depth, gate, store.cache_dir, store.eps_refine, store.max_depth) for c in chunks]
        with mp.Pool(jobs) as pool:
            results = pool.map(_pair_worker, args)
    else:
        results = [_scan_pairs(pairs, max_a3, eps, depth, gate, store)]
    failures: list[dict] = []
    counts = {"triples": skipped, "dumb": skipped, "global": 0, "cells": 0}
    for f, c in results:
        failures.extend(f)
        for k in counts:
            counts[k] += c[k]
    qfail, reductions = scan_quadruples(eps, depth, gate, store)
    failures.extend(qfail)
    m_all = sup_bound_from(2, store)
    r5 = {"family": "r >= 5", "bound_per_period": m_all, "value_at_r5": 5 * m_all, "target": 3 - eps,
          "pass": 5 * (1 - m_all) - 2 > eps}
    reductions.append(r5)
    failures.sort(key=lambda f: (len(f["periods"]), f["periods"]))
    if expected is None:
        expected = sorted(EXCLUDED_TRIPLES + EXCLUDED_QUADRUPLES, key=lambda t: (len(t), t))
    config = {"max_a3": max_a3, "eps": eps, "depth": depth, "gate": gate, "jobs": jobs,
              "cert_eps": store.eps_refine, "cert_depth": store.max_depth}
    return ExclusionReport(config, failures, counts, list(expected), reductions)


def check_positive_genus(g_max: int = 5, r_max: int = 10, per_period=Fraction(555, 1000),
                         store: CertificateStore | None = None) -> dict:
    """Margins (2g + r - 2) - 0.44 - r * per_period over the (g, r) grid, after certifying per_period."""
    store = store or CertificateStore()
    certified = sup_bound_from(2, store)
    rows = []
    for g in range(1, g_max + 1):
        for r in range(0, r_max + 1):
            if g == 1 and r == 0:
                continue
            margin = (2 * g + r - 2) - Fraction(44, 100) - r * per_period
            rows.append({"g": g, "r": r, "margin": margin, "pass": margin > 0})
    smallest = min(rows, key=lambda row: row["margin"])
    return {
        "certified_sup_over_a": certified,
        "per_period_bound": per_period,
        "per_period_certified": certified <= per_period,
        "rows": rows,
        "smallest": (smallest["g"], smallest["r"], smallest["margin"]),
        "pass": certified <= per_period and all(row["pass"] for row in rows),
    }
