"""Postcritically finite parameters of z^d + c and the main hyperbolic component.

P_n(c) = f_c^n(0) has non-negative integer coefficients, so exact
expansion is done by packing a polynomial into one big integer (Kronecker
substitution) and using integer powering. Root finding never touches those
coefficients: P_n and its derivative are evaluated along the critical orbit,
the roots are found simultaneously by Aberth iteration in double precision,
polished by Newton in mpmath, and sorted by recomputing the critical orbit at
high precision.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import DegreeCapError, RootFindingError

DEGREE_CAP = 4096
WORK_PREC = 128  # bits; orbit classification runs at twice this
CLASSIFY_TOL = 1e-20


@dataclass(frozen=True)
class CriticalOrbitPoly:
    d: int
    n: int
    coeffs: tuple[int, ...]  # index = power of c

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, c):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * c + a
        return acc


@dataclass(frozen=True)
class ParabolicParam:
    c: complex
    alpha: complex
    multiplier: complex

    def residuals(self, d: int) -> tuple[float, float]:
        return (
            abs(d * self.alpha ** (d - 1) - self.multiplier),
            abs(self.alpha**d + self.c - self.alpha),
        )

    def to_dict(self) -> dict:
        return {
            "c": [self.c.real, self.c.imag],
            "alpha": [self.alpha.real, self.alpha.imag],
            "multiplier": [self.multiplier.real, self.multiplier.imag],
        }


@dataclass(frozen=True)
class PCFPoint:
    c: complex
    kind: str  # "center" or "misiurewicz"
    period: int
    preperiod: int

    def row(self) -> list:
        return [repr(self.c.real), repr(self.c.imag), self.kind, self.period, self.preperiod]


# ---------------------------------------------------------------------------
# Exact critical orbit polynomials
# ---------------------------------------------------------------------------


def _pack(coeffs, width: int) -> int:
    out = 0
    for a in reversed(coeffs):
        out = (out << width) | a
    return out


def _unpack(value: int, width: int, length: int) -> list[int]:
    mask = (1 << width) - 1
    out = []
    for _ in range(length):
        out.append(value & mask)
        value >>= width
    return out


def _check_cap(d: int, n: int, cap: int) -> None:
    if d < 2 or n < 1:
        raise ValueError("need d >= 2 and n >= 1")
    if d ** (n - 1) > cap:
        raise DegreeCapError(f"degree d^(n-1) = {d ** (n - 1)} exceeds cap {cap}")


def critical_orbit_poly(d: int, n: int, cap: int = DEGREE_CAP) -> CriticalOrbitPoly:
    """Exact P_n with P_1 = c and P_{k+1} = P_k^d + c."""
    _check_cap(d, n, cap)
    coeffs = [0, 1]
    for _ in range(n - 1):
        deg = len(coeffs) - 1
        # every coefficient of P^d is at most (sum of coefficients)^d
        bound = sum(coeffs) ** d
        width = bound.bit_length() + 1
        packed = _pack(coeffs, width) ** d
        nxt = _unpack(packed, width, deg * d + 1)
        nxt[1] += 1
        coeffs = nxt
    return CriticalOrbitPoly(d, n, tuple(coeffs))


# ---------------------------------------------------------------------------
# Aberth iteration on orbit-evaluated polynomials
# ---------------------------------------------------------------------------


def _orbit_newton_ratio(d: int, n: int, c: np.ndarray) -> np.ndarray:
    """P_n(c) / P_n'(c) evaluated along the orbit, robust to escape."""
    z = np.zeros_like(c)
    dz = np.zeros_like(c)
    ratio = np.full(c.shape, np.nan + 0j)
    done = np.zeros(c.shape, dtype=bool)
    with np.errstate(all="ignore"):
        for k in range(n):
            dz = d * z ** (d - 1) * dz + 1
            z = z**d + c
            big = (~done) & (np.abs(z) > 1e20)
            if big.any():
                # beyond here z_{j+1}/z'_{j+1} ~ (z_j/z'_j)/d
                ratio[big] = (z[big] / dz[big]) / float(d) ** (n - 1 - k)
                done |= big
        rest = ~done
        ratio[rest] = z[rest] / dz[rest]
    return ratio


def _misiurewicz_newton_ratio(d: int, m: int, n: int, c: np.ndarray) -> np.ndarray:
    """Q/Q' for Q = prod_{w^d = 1, w != 1} (P_{m+n-1} - w P_{m-1})."""
    z = np.zeros_like(c)
    dz = np.zeros_like(c)
    zb = dzb = None
    with np.errstate(all="ignore"):
        for k in range(1, m + n):
            dz = d * z ** (d - 1) * dz + 1
            z = z**d + c
            if k == m - 1:
                zb, dzb = z.copy(), dz.copy()
        if zb is None:  # m == 1: P_0 = 0
            zb = np.zeros_like(c)
            dzb = np.zeros_like(c)
        total = np.zeros_like(c)
        for j in range(1, d):
            w = cmath.exp(2j * math.pi * j / d)
            total += (dz - w * dzb) / (z - w * zb)
        return 1 / total


def _initial_points(degree: int, radius: float) -> np.ndarray:
    k = np.arange(degree)
    return radius * np.exp(2j * np.pi * (k + 0.25) / degree)


def aberth(newton_ratio, degree: int, radius: float = 2.0, max_iter: int = 800, tol: float = 1e-13) -> np.ndarray:
    """Simultaneous roots of a polynomial given only its Newton ratio p/p'."""
    roots = _initial_points(degree, radius)
    active = np.ones(degree, dtype=bool)
    chunk = 512
    for _ in range(max_iter):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        ratio = newton_ratio(roots[idx])
        # sum over j != i of 1/(z_i - z_j), in blocks to bound memory
        rep = np.empty(idx.size, dtype=complex)
        for s in range(0, idx.size, chunk):
            zi = roots[idx[s : s + chunk]][:, None]
            diff = zi - roots[None, :]
            with np.errstate(divide="ignore", invalid="ignore"):
                inv = 1 / diff
            inv[~np.isfinite(inv)] = 0
            rep[s : s + chunk] = inv.sum(axis=1)
        with np.errstate(all="ignore"):
            step = ratio / (1 - ratio * rep)
        bad = ~np.isfinite(step)
        step[bad] = 0
        roots[idx] -= step
        small = np.abs(step) <= tol * np.maximum(1.0, np.abs(roots[idx]))
        active[idx[small & ~bad]] = False
    return roots


# ---------------------------------------------------------------------------
# High-precision polishing and orbit classification
# ---------------------------------------------------------------------------


def _mp_orbit(d: int, c, steps: int) -> list:
    z = mpmath.mpc(0)
    out = [z]
    for _ in range(steps):
        z = z**d + c
        out.append(z)
    return out


def _polish_center(d: int, n: int, c0: complex, prec: int):
    with mpmath.workprec(prec):
        c = mpmath.mpc(c0)
        for _ in range(100):
            z = mpmath.mpc(0)
            dz = mpmath.mpc(0)
            for _ in range(n):
                dz = d * z ** (d - 1) * dz + 1
                z = z**d + c
            if dz == 0:
                return None
            step = z / dz
            c -= step
            if abs(step) < mpmath.mpf(2) ** (-prec + 8) * max(1, abs(c)):
                return c
        return None


def _polish_misiurewicz(d: int, m: int, n: int, c0: complex, prec: int):
    with mpmath.workprec(prec):
        ws = [mpmath.expjpi(mpmath.mpf(2 * j) / d) for j in range(1, d)]
        c = mpmath.mpc(c0)
        for _ in range(100):
            z = dz = mpmath.mpc(0)
            zb = dzb = mpmath.mpc(0)
            for k in range(1, m + n):
                dz = d * z ** (d - 1) * dz + 1
                z = z**d + c
                if k == m - 1:
                    zb, dzb = z, dz
            total = mpmath.mpc(0)
            for w in ws:
                den = z - w * zb
                if den == 0:
                    return c
                total += (dz - w * dzb) / den
            if total == 0:
                return None
            step = 1 / total
            c -= step
            if abs(step) < mpmath.mpf(2) ** (-prec + 8) * max(1, abs(c)):
                return c
        return None


def orbit_type(d: int, c, max_steps: int, tol: float = CLASSIFY_TOL, prec: int = 2 * WORK_PREC):
    """(preperiod, period) of the critical orbit, comparing points within tol.

    Returns None when no repetition shows up within ``max_steps`` iterates.
    """
    with mpmath.workprec(prec):
        orb = _mp_orbit(d, mpmath.mpc(c), max_steps)
        for j in range(1, max_steps + 1):
            for i in range(j):
                if abs(orb[j] - orb[i]) < tol:
                    return i, j - i
    return None


def _dedupe_check(roots, what: str) -> None:
    pts = sorted(roots, key=lambda z: (z.real, z.imag))
    for a, b in zip(pts, pts[1:]):
        if abs(a - b) < 1e-12:
            raise RootFindingError(f"{what}: two approximations converged to {a}")


def hyperbolic_centers(d: int, n: int, cap: int = DEGREE_CAP, prec: int = WORK_PREC) -> list[complex]:
    """Centers of exact period n: roots of P_n whose critical orbit has
    minimal period n."""
    _check_cap(d, n, cap)
    degree = d ** (n - 1)
    if degree == 1:
        approx = np.array([0j])
    else:
        approx = aberth(lambda c: _orbit_newton_ratio(d, n, c), degree, radius=2 ** (1 / (d - 1)) + 0.1)
    out = []
    failures = []
    for c0 in approx:
        c = _polish_center(d, n, complex(c0), 2 * prec)
        if c is None:
            failures.append(complex(c0))
            continue
        kind = orbit_type(d, c, n, prec=2 * prec)
        if kind is None or kind[0] != 0:
            failures.append(complex(c0))
            continue
        if kind[1] == n:
            out.append(complex(c))
    if failures:
        raise RootFindingError(f"{len(failures)} of {degree} roots of P_{n} failed to converge: {failures[:3]}")
    out.sort(key=lambda z: (z.real, z.imag))
    _dedupe_check(out, f"P_{n} (d={d})")
    return out


def misiurewicz(d: int, m: int, n: int, cap: int = DEGREE_CAP, prec: int = WORK_PREC) -> list[complex]:
    """Parameters whose critical orbit has exact preperiod m and period n.

    P_{m+n} - P_m factors as prod over d-th roots of unity w of
    (P_{m+n-1} - w P_{m-1}); the w = 1 factor holds the orbits that are
    already periodic at step m-1, so only the other d-1 factors are solved.
    """
    if m < 1 or n < 1:
        raise ValueError("need m >= 1 and n >= 1")
    if m == 1:
        # c = f^n(c) forces f^(n-1)(c) to be the unique preimage 0 of c,
        # so the critical point itself is periodic
        return []
    degree = (d - 1) * d ** (m + n - 2)
    if degree > cap:
        raise DegreeCapError(f"degree {degree} exceeds cap {cap}")
    approx = aberth(lambda c: _misiurewicz_newton_ratio(d, m, n, c), degree, radius=2 ** (1 / (d - 1)) + 0.1)
    out = []
    failures = []
    for c0 in approx:
        c = _polish_misiurewicz(d, m, n, complex(c0), 2 * prec)
        if c is None:
            # Q has multiple roots exactly at centers whose orbit hits 0 at
            # step m-1; Newton crawls there, but such c are periodic anyway
            rough = orbit_type(d, complex(c0), m + n, tol=1e-6, prec=53)
            if rough is None or rough[0] != 0:
                failures.append(complex(c0))
            continue
        kind = orbit_type(d, c, m + n, prec=2 * prec)
        if kind == (m, n):
            out.append(complex(c))
    if failures:
        raise RootFindingError(f"{len(failures)} of {degree} Misiurewicz roots failed to converge")
    # repeated factors give repeated roots; keep each parameter once
    uniq: list[complex] = []
    for z in sorted(out, key=lambda z: (z.real, z.imag)):
        if not uniq or abs(z - uniq[-1]) > 1e-12:
            uniq.append(z)
    return uniq


def pcf_points(d: int, n: int, m: int = 0, prec: int = WORK_PREC) -> list[PCFPoint]:
    if m == 0:
        return [PCFPoint(c, "center", n, 0) for c in hyperbolic_centers(d, n, prec=prec)]
    return [PCFPoint(c, "misiurewicz", n, m) for c in misiurewicz(d, m, n, prec=prec)]


# ---------------------------------------------------------------------------
# Main hyperbolic component
# ---------------------------------------------------------------------------


def main_component_point(d: int, lam: complex) -> list[ParabolicParam]:
    """All alpha with d alpha^(d-1) = lam, and c = alpha - alpha^d.

    For |lam| <= 1 these fill the main hyperbolic component; |lam| = 1 gives
    its boundary."""
    lam = complex(lam)
    if abs(lam) > 1 + 1e-12:
        raise ValueError("multiplier must satisfy |lambda| <= 1")
    if lam == 0:
        return [ParabolicParam(0j, 0j, 0j)]
    base = (lam / d) ** (1 / (d - 1))
    out = []
    for k in range(d - 1):
        alpha = base * cmath.exp(2j * math.pi * k / (d - 1))
        out.append(ParabolicParam(alpha - alpha**d, alpha, lam))
    return out


def parabolic_boundary(d: int, n: int) -> list[ParabolicParam]:
    """The d-1 boundary parameters of the main component with a fixed point
    of multiplier e^(2 pi i/n)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return main_component_point(d, cmath.exp(2j * math.pi / n))


def is_pcf_numeric(d: int, c: complex, max_iter: int = 200, tol: float = 1e-9) -> bool:
    """Heuristic: the critical orbit comes back within tol of an earlier point.

    Orbits attracted to a cycle also pass this test, so a True answer is only
    a hint."""
    orb = [0j]
    z = 0j
    for _ in range(max_iter):
        z = z**d + c
        if abs(z) > 1e6:
            return False
        if any(abs(z - w) < tol for w in orb):
            return True
        orb.append(z)
    return False
