"""Exact rational angles on the circle R/Z and the multiplication map tau_d."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "Angle",
    "OrbitInfo",
    "angle",
    "tau",
    "orbit",
    "orbit_info",
    "base_d_digits",
    "from_digits",
    "parse_angle",
]


@total_ordering
class Angle:
    """A rational angle p/q, stored reduced with 0 <= p < q.

    Angles are measured in full turns. Two angles compare equal iff they are
    the same point of R/Z; ordering is that of the representatives in [0, 1).
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: int, denominator: int = 1):
        if denominator == 0:
            raise ZeroDivisionError("angle with zero denominator")
        if denominator < 0:
            numerator, denominator = -numerator, -denominator
        numerator %= denominator
        g = gcd(numerator, denominator)
        object.__setattr__(self, "numerator", numerator // g)
        object.__setattr__(self, "denominator", denominator // g)

    def __setattr__(self, name, value):
        raise AttributeError("Angle is immutable")

    @classmethod
    def from_fraction(cls, value: Fraction) -> "Angle":
        return cls(value.numerator, value.denominator)

    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __eq__(self, other):
        if isinstance(other, Angle):
            return (self.numerator, self.denominator) == (other.numerator, other.denominator)
        return NotImplemented

    def __lt__(self, other):
        if not isinstance(other, Angle):
            return NotImplemented
        return self.numerator * other.denominator < other.numerator * self.denominator

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def __float__(self):
        return self.numerator / self.denominator

    def __neg__(self):
        return Angle(-self.numerator, self.denominator)

    def __add__(self, other):
        if isinstance(other, Angle):
            other = other.fraction()
        if isinstance(other, (int, Fraction)):
            return Angle.from_fraction(self.fraction() + other)
        return NotImplemented

    __radd__ = __add__

    def __str__(self):
        return f"{self.numerator}/{self.denominator}"

    def __repr__(self):
        return f"Angle({self.numerator}, {self.denominator})"

    def __reduce__(self):
        return (Angle, (self.numerator, self.denominator))


@dataclass(frozen=True)
class OrbitInfo:
    preperiod: int
    period: int

    @property
    def is_periodic(self) -> bool:
        return self.preperiod == 0


def angle(p: int, q: int) -> Angle:
    """Return p/q reduced modulo 1."""
    return Angle(p, q)


def parse_angle(text: str) -> Angle:
    """Parse "p/q" (or a bare integer); unreduced and out-of-range input is fine."""
    text = text.strip()
    if "/" in text:
        p, q = text.split("/", 1)
        return Angle(int(p), int(q))
    return Angle(int(text), 1)


def _check_degree(d: int) -> None:
    if d < 2:
        raise ValueError(f"degree must be >= 2, got {d}")


def tau(d: int, a: Angle) -> Angle:
    """Multiplication by d modulo 1."""
    _check_degree(d)
    return Angle(d * a.numerator, a.denominator)


def orbit(d: int, a: Angle, length: int) -> list[Angle]:
    out = [a]
    for _ in range(length - 1):
        out.append(tau(d, out[-1]))
    return out


def orbit_info(d: int, a: Angle) -> OrbitInfo:
    """Minimal preperiod and period of ``a`` under tau_d.

    Only the d-part of the denominator is consumed along the orbit, so the
    orbit visits at most ``denominator`` distinct angles.
    """
    _check_degree(d)
    seen: dict[int, int] = {}
    q = a.denominator
    p = a.numerator
    i = 0
    # work with unreduced numerators over the fixed denominator q
    while p not in seen:
        seen[p] = i
        p = (d * p) % q
        i += 1
    first = seen[p]
    return OrbitInfo(preperiod=first, period=i - first)


def base_d_digits(d: int, a: Angle, length: int) -> list[int]:
    """First ``length`` base-d digits, digit_k = floor(d * tau_d^k(a)).

    Terminating expansions come out in their terminating form (trailing zeros).
    """
    _check_degree(d)
    digits = []
    p, q = a.numerator, a.denominator
    for _ in range(length):
        digit, p = divmod(d * p, q)
        digits.append(digit)
    return digits


def from_digits(d: int, preperiodic: Sequence[int], periodic: Sequence[int]) -> Angle:
    """Angle whose base-d expansion is ``preperiodic`` followed by ``periodic`` repeated."""
    _check_degree(d)
    head = 0
    for digit in preperiodic:
        head = head * d + digit
    l = len(preperiodic)
    if not periodic:
        return Angle(head, d**l)
    block = 0
    for digit in periodic:
        block = block * d + digit
    n = len(periodic)
    value = Fraction(head, d**l) + Fraction(block, d**l * (d**n - 1))
    return Angle.from_fraction(value)


def sorted_angles(angles: Iterable[Angle]) -> list[Angle]:
    return sorted(set(angles))
