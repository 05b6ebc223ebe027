"""Rotation subsets of the circle for the map tau_d (Goldberg's classification).

A finite set X = {theta_0 < ... < theta_{n-1}} is an m/n rotation set when
tau_d(theta_i) = theta_{(i+m) mod n} for every i. Such a set is pinned down by
its rotation number and its deployment sequence, the counts of points below
each fixed point j/(d-1) of tau_d.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

from .angles import Angle, orbit_info, tau
from .errors import (
    InstanceTooLargeError,
    MalformedDeploymentError,
    NotInvariantError,
    NotRotationSetError,
    UnrealizableError,
)

BRUTE_FORCE_LIMIT = 10**6


@dataclass(frozen=True)
class RotationSet:
    d: int
    angles: tuple[Angle, ...]
    rot_num: Fraction
    k: int
    deployment: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.angles)

    @property
    def shift(self) -> int:
        """Index shift m with m/n equal to the unreduced rotation number."""
        return self.k * self.rot_num.numerator

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "angles": [str(a) for a in self.angles],
            "rotation_number": f"{self.rot_num.numerator}/{self.rot_num.denominator}",
            "k": self.k,
            "deployment": list(self.deployment),
        }


def deployment_sequence(d: int, angles: Sequence[Angle]) -> tuple[int, ...]:
    """s_i = #{theta < i/(d-1)} for i = 1..d-1 (half-open intervals)."""
    out = []
    for i in range(1, d):
        # theta < i/(d-1)  <=>  p*(d-1) < i*q
        out.append(sum(1 for a in angles if a.numerator * (d - 1) < i * a.denominator))
    return tuple(out)


def recognize(d: int, angles: Iterable[Angle]) -> RotationSet:
    """Validate a candidate set and compute its rotation data."""
    xs = sorted(set(angles))
    if not xs:
        raise ValueError("empty angle set")
    n = len(xs)
    index = {a: i for i, a in enumerate(xs)}
    images = [tau(d, a) for a in xs]
    if any(b not in index for b in images):
        raise NotInvariantError("set is not invariant under tau_%d" % d)
    m = index[images[0]]
    for i, b in enumerate(images):
        if index[b] != (i + m) % n:
            raise NotRotationSetError(
                "tau_%d permutes the set but not as a cyclic rotation" % d
            )
    rot = Fraction(m, n)
    q = rot.denominator
    k = n // q
    return RotationSet(d, tuple(xs), rot, k, deployment_sequence(d, xs))


def goldberg_realizable(k: int, deployment: Sequence[int]) -> bool:
    """Goldberg's criterion: every residue class mod k occurs among the s_j."""
    return {s % k for s in deployment} == set(range(k))


def _validate(d: int, rot_num: Fraction, deployment: Sequence[int]) -> tuple[int, int]:
    if d < 2:
        raise ValueError("degree must be >= 2")
    if not 0 <= rot_num < 1:
        raise ValueError("rotation number must lie in [0, 1)")
    deployment = list(deployment)
    if len(deployment) != d - 1:
        raise MalformedDeploymentError(f"deployment needs {d - 1} entries, got {len(deployment)}")
    if any(s < 0 for s in deployment) or deployment != sorted(deployment):
        raise MalformedDeploymentError("deployment must be non-decreasing and non-negative")
    q = rot_num.denominator
    n = deployment[-1]
    if n == 0 or n % q:
        raise MalformedDeploymentError(f"last entry {n} is not a positive multiple of q={q}")
    k = n // q
    if k > d - 1:
        raise MalformedDeploymentError(f"k = {k} cycles exceeds d-1 = {d - 1}")
    return n, k


def construct(d: int, rot_num: Fraction, deployment: Sequence[int]) -> RotationSet:
    """Build the unique rotation set with the given rotation data.

    Lifting tau_d to x -> d*x, the base-d digit of theta_i is the number of
    fixed points j/(d-1) at or below theta_i, plus one when the image index
    wraps past n. The fixed-point count is #{j : s_j <= i}, so the digits and
    hence every angle follow from (m, n, deployment) alone.
    """
    rot_num = Fraction(rot_num)
    n, k = _validate(d, rot_num, deployment)
    if not goldberg_realizable(k, deployment):
        raise UnrealizableError(
            f"some class mod {k} is missing from deployment {list(deployment)}"
        )
    q = rot_num.denominator
    m = k * rot_num.numerator
    digits = [
        sum(1 for s in deployment if s <= i) + (1 if i + m >= n else 0) for i in range(n)
    ]
    modulus = d**q - 1
    thetas = []
    for i in range(n):
        block = 0
        j = i
        for _ in range(q):
            block = block * d + digits[j]
            j = (j + m) % n
        thetas.append(Angle(block, modulus))
    if len(set(thetas)) != n or thetas != sorted(thetas):
        raise UnrealizableError("digit itinerary does not produce an ordered set")
    result = recognize(d, thetas)
    if result.rot_num != rot_num or result.deployment != tuple(deployment):
        raise UnrealizableError("constructed set has different rotation data")
    return result


def _cycles_of_period(d: int, q: int) -> list[tuple[Angle, ...]]:
    modulus = d**q - 1
    seen = set()
    cycles = []
    for p in range(modulus):
        if p in seen:
            continue
        a = Angle(p, modulus)
        cyc = []
        x = p
        while x not in seen:
            seen.add(x)
            cyc.append(Angle(x, modulus))
            x = (x * d) % modulus
        if orbit_info(d, a).period == q:
            cycles.append(tuple(cyc))
    return cycles


def brute_force_enumerate(d: int, q: int) -> list[RotationSet]:
    """Every rotation set whose cycles have exact period q, by exhaustive search.

    All tau_d-cycles of exact period q are listed; single cycles are tested
    directly, and unions of up to d-1 rotation cycles sharing a rotation
    number are tested as candidate sets. (An invariant subset of a rotation
    set is again one, so discarding non-rotation cycles loses nothing.)
    """
    if d < 2 or q < 1:
        raise ValueError("need d >= 2 and q >= 1")
    if d**q > BRUTE_FORCE_LIMIT:
        raise InstanceTooLargeError(f"d^q = {d**q} exceeds {BRUTE_FORCE_LIMIT}")
    by_rot: dict[Fraction, list[RotationSet]] = {}
    for cyc in _cycles_of_period(d, q):
        try:
            rs = recognize(d, cyc)
        except NotRotationSetError:
            continue
        by_rot.setdefault(rs.rot_num, []).append(rs)
    found = []
    for rot in sorted(by_rot):
        singles = by_rot[rot]
        for size in range(1, d):
            for combo in combinations(singles, size):
                pts = [a for rs in combo for a in rs.angles]
                try:
                    found.append(recognize(d, pts))
                except NotRotationSetError:
                    pass
    found.sort(key=lambda rs: (rs.rot_num, rs.k, rs.deployment, rs.angles))
    return found


def enumerate_constructive(d: int, q: int) -> list[RotationSet]:
    """All realizable (rotation number p/q, deployment) pairs, via ``construct``."""
    rots = [Fraction(0)] if q == 1 else [Fraction(p, q) for p in range(1, q) if gcd(p, q) == 1]
    out = []
    for rot in rots:
        for k in range(1, d):
            for dep in _nondecreasing(d - 1, k * q):
                if goldberg_realizable(k, dep):
                    out.append(construct(d, rot, dep))
    out.sort(key=lambda rs: (rs.rot_num, rs.k, rs.deployment, rs.angles))
    return out


def _nondecreasing(length: int, last: int) -> Iterable[tuple[int, ...]]:
    """Non-decreasing tuples of ``length`` entries in [0, last] ending with ``last``."""

    def rec(prefix, lo, remaining):
        if remaining == 1:
            yield prefix + (last,)
            return
        for v in range(lo, last + 1):
            yield from rec(prefix + (v,), v, remaining - 1)

    yield from rec((), 0, length)


def prop35_family(d: int, n: int) -> list[RotationSet]:
    """The d-1 rotation sets with rotation number 1/n, one cycle, entries in {0, n}.

    Ordered by the number of leading zeros, so the first member has deployment
    (n, ..., n) and consists of the angles d^j/(d^n - 1).
    """
    if d < 2 or n < 2:
        raise ValueError("need d >= 2 and n >= 2")
    family = []
    for zeros in range(d - 1):
        dep = (0,) * zeros + (n,) * (d - 1 - zeros)
        family.append(construct(d, Fraction(1, n), dep))
    return family


def prop35_set(d: int, n: int) -> tuple[Angle, ...]:
    modulus = d**n - 1
    return tuple(sorted(Angle(d**j, modulus) for j in range(n)))
