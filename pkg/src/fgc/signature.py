"""Signature data (g; a_1, ..., a_r) of a cocompact oriented Fuchsian group."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .errors import ParseError

# Genus-0 signatures for which the certified inequality method does not apply.
EXCLUDED_TRIPLES: tuple[tuple[int, int, int], ...] = (
    tuple((2, 3, c) for c in range(7, 25))
    + tuple((2, 4, c) for c in range(5, 10))
    + tuple((2, 5, c) for c in range(5, 8))
    + ((2, 6, 6),)
    + tuple((3, 3, c) for c in range(4, 7))
    + ((3, 4, 4),)
)
EXCLUDED_QUADRUPLES: tuple[tuple[int, ...], ...] = ((2, 2, 2, 3),)
EXCLUDED_PERIODS = frozenset(EXCLUDED_TRIPLES + EXCLUDED_QUADRUPLES)

# Triangle groups left open by the earlier argument that used no machine
# computation; kept for comparison only.
HAND_PROOF_TRIPLES: tuple[tuple[int, int, int], ...] = (
    tuple((2, 3, c) for c in range(7, 296))
    + tuple((2, 4, c) for c in range(5, 27))
    + tuple((2, 5, c) for c in range(5, 16))
    + tuple((2, 6, c) for c in range(6, 12))
    + ((2, 7, 7), (2, 7, 8), (2, 7, 9), (2, 7, 10), (2, 8, 8))
    + tuple((3, 3, c) for c in range(4, 12))
    + ((3, 4, 4), (3, 4, 5), (3, 4, 6), (3, 4, 7), (3, 5, 5), (4, 4, 4))
)
HAND_PROOF_QUADRUPLES: tuple[tuple[int, ...], ...] = ((2, 2, 2, 3), (2, 2, 2, 4))


@dataclass(frozen=True)
class FuchsianSignature:
    """Genus plus a sorted list of periods, each >= 2.

    Hyperbolicity is not enforced at construction; several formulas are
    meaningful (and tested) on Euclidean or spherical tuples as well.
    """

    genus: int
    periods: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError(f"genus must be non-negative, got {self.genus}")
        periods = tuple(sorted(int(a) for a in self.periods))
        if any(a < 2 for a in periods):
            raise ValueError(f"periods must be >= 2, got {periods}")
        object.__setattr__(self, "periods", periods)

    @property
    def r(self) -> int:
        return len(self.periods)

    def euler_characteristic(self) -> Fraction:
        return euler_characteristic(self)

    def period_lcm(self) -> int:
        return period_lcm(self)

    def is_hyperbolic(self) -> bool:
        return euler_characteristic(self) < 0

    def sigma(self, n: int) -> int:
        return sigma(self, n)

    def __str__(self) -> str:
        return f"{self.genus};" + ",".join(str(a) for a in self.periods)


def parse_signature(text: str) -> FuchsianSignature:
    """Parse ``g;a1,a2,...`` (e.g. ``0;2,3,7`` or ``2;``)."""
    text = text.strip()
    if ";" not in text:
        raise ParseError(f"signature {text!r} must look like 'g;a1,a2,...'")
    g_part, a_part = text.split(";", 1)
    try:
        genus = int(g_part)
        periods = tuple(int(t) for t in a_part.replace(" ", "").split(",") if t)
        return FuchsianSignature(genus, periods)
    except ValueError as exc:
        raise ParseError(f"bad signature {text!r}: {exc}") from None


def euler_characteristic(sig: FuchsianSignature) -> Fraction:
    return 2 - 2 * sig.genus - sum((1 - Fraction(1, a) for a in sig.periods), Fraction(0))


def period_lcm(sig: FuchsianSignature) -> int:
    return lcm(*sig.periods) if sig.periods else 1


def sigma(sig: FuchsianSignature, n: int) -> int:
    """Parity sign: -1 iff every even period divides n and the quotients sum to an odd number."""
    even = [a for a in sig.periods if a % 2 == 0]
    if any(n % a for a in even):
        return 1
    return -1 if sum(n // a for a in even) % 2 else 1


def is_on_excluded_list(sig: FuchsianSignature) -> bool:
    return sig.genus == 0 and sig.periods in EXCLUDED_PERIODS


def fractional_part(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)
