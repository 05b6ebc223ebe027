"""Green's function, the uniformization Phi of C \\ M_d, its inverse Psi, and
the affine symmetry group of the multibrot set.

The Boettcher coordinate is the product

    phi_c(z) = z * prod_{n>=0} (1 + c / f_c^n(z)^d)^(1/d^(n+1)),

and with z = c every factor is a power series in 1/c with rational
coefficients, so Phi(c) = phi_c(c) is expanded exactly term by term.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import series as ps
from .errors import BranchTrackingError, PointInsideError, TruncationError
from .series import LaurentTail

# |z| beyond which the principal-branch product for log phi_c(z) is trusted
BOETTCHER_RADIUS = 100.0


@dataclass(frozen=True)
class AffineMap:
    """mu(z) = A z + B. ``turn`` is the exact rotation angle of A in turns."""

    A: complex
    B: complex
    turn: Fraction = field(default=Fraction(0))

    def __call__(self, z: complex) -> complex:
        return self.A * z + self.B

    def to_dict(self) -> dict:
        return {
            "A": [self.A.real, self.A.imag],
            "B": [self.B.real, self.B.imag],
            "rotation_turns": f"{self.turn.numerator}/{self.turn.denominator}",
        }


def default_order(d: int) -> int:
    return 2 * d + 8


# ---------------------------------------------------------------------------
# Green's function
# ---------------------------------------------------------------------------


def escape_radius(d: int, c: complex) -> float:
    return max(2 ** (1 / (d - 1)), abs(c) ** (1 / (d - 1))) + 1


def log_boettcher_dynamic(d: int, c: complex, z: complex, terms: int = 64) -> complex:
    """log phi_c(z) for large |z| by the principal-branch product.

    phi_c(z) = z * prod_{j>=1} (1 + c / f^{j-1}(z)^d)^(1/d^j); every factor is
    close to 1 once |z| is well beyond the escape radius.
    """
    total = cmath.log(z)
    w = z
    scale = 1.0
    for _ in range(terms):
        scale /= d
        u = c / w**d
        total += scale * cmath.log(1 + u)
        if abs(u) * scale < 1e-18:
            break
        w = w**d + c
    return total


def green_dynamic(d: int, c: complex, z: complex, max_iter: int = 2000) -> float:
    """G_{f_c}(z); zero when the orbit stays bounded through ``max_iter``."""
    radius = max(escape_radius(d, c), BOETTCHER_RADIUS)
    scale = 1.0
    for _ in range(max_iter):
        if abs(z) > radius:
            return max(0.0, log_boettcher_dynamic(d, c, z).real * scale)
        z = z**d + c
        scale /= d
    return 0.0


def green_parameter(d: int, c: complex, max_iter: int = 2000, escape_radius_: float | None = None) -> float:
    """Parameter-plane potential G_{f_c}(c) = log |Phi(c)|.

    Iterates the critical value until it passes the escape radius, then keeps
    going until the Boettcher product is accurate and reads off the potential.
    Bounded orbits saturate to 0.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    guard = escape_radius(d, c)
    if escape_radius_ is not None and escape_radius_ < 2 ** (1 / (d - 1)):
        raise ValueError("escape radius below 2^(1/(d-1))")
    radius = max(guard, escape_radius_ or 0.0)
    z = c
    scale = 1.0
    escaped = False
    for _ in range(max_iter):
        if not escaped and abs(z) > radius:
            escaped = True
        if escaped and abs(z) > BOETTCHER_RADIUS * max(1.0, abs(c)):
            return max(0.0, log_boettcher_dynamic(d, c, z).real * scale)
        z = z**d + c
        scale /= d
    if escaped:
        return max(0.0, log_boettcher_dynamic(d, c, z).real * scale)
    return 0.0


# ---------------------------------------------------------------------------
# Exact series
# ---------------------------------------------------------------------------


def series_log1p(u: list, order: int) -> list:
    """log(1 + u) for a series u with zero constant term."""
    one = Fraction(1)
    f = [one + u[0]] + list(u[1 : order + 1])
    df = ps.derivative(f)
    q = ps.mul(df, ps.inverse(f, order), order - 1) if order else []
    return [Fraction(0)] + [q[k - 1] / k for k in range(1, order + 1)]


def series_exp(a: list, order: int) -> list:
    """exp(a) for a series with zero constant term (g' = a' g)."""
    g = [Fraction(1)] + [Fraction(0)] * order
    for k in range(1, order + 1):
        g[k] = sum((j * a[j] * g[k - j] for j in range(1, k + 1) if a[j]), Fraction(0)) / k
    return g


def _boettcher_ratio(d: int, order: int, coef, offset: int) -> list:
    """phi_c(z)/z as a power series in x = 1/z through x^order.

    Uses phi_c(z) = z prod_{n>=0} (1 + c / f^n(z)^d)^(1/d^(n+1)) with
    f^n(z) = z^(d^n) E_n(x), E_{n+1} = E_n^d + c x^(d^(n+1)). For the parameter
    map, z = c and the extra factor c is absorbed by ``offset`` = 1.
    """
    coef = Fraction(coef)
    E = [Fraction(1)] + [Fraction(0)] * order
    log_sum = [Fraction(0)] * (order + 1)
    n = 0
    while True:
        e = d ** (n + 1) - offset
        if e > order:
            break
        inv = ps.power(ps.inverse(E, order), d, order)
        u = [Fraction(0)] * e + [coef * v for v in inv[: order + 1 - e]]
        term = series_log1p(u, order)
        scale = Fraction(1, d ** (n + 1))
        log_sum = [a + scale * b for a, b in zip(log_sum, term)]
        E = ps.power(E, d, order)
        E[e] += coef
        n += 1
    return series_exp(log_sum, order)


def boettcher_dynamic_series(d: int, c, order: int) -> LaurentTail:
    """phi_c(z) = z + sum_m b_m z^-m for a fixed exact parameter c."""
    ratio = _boettcher_ratio(d, order + 1, c, 0)
    return LaurentTail.from_p_series(ratio)


@lru_cache(maxsize=None)
def _phi_series_cached(d: int, order: int) -> tuple[Fraction, ...]:
    if d < 2:
        raise ValueError("degree must be >= 2")
    ratio = _boettcher_ratio(d, order + 1, 1, 1)
    return tuple(ratio[1:])


def phi_series(d: int, order: int) -> LaurentTail:
    """Phi(c) = c + sum_{m=0}^{order} a_m c^-m, exactly."""
    if order < 1:
        raise ValueError("order must be >= 1")
    return LaurentTail(_phi_series_cached(d, order))


@lru_cache(maxsize=None)
def _psi_series_cached(d: int, order: int) -> tuple[Fraction, ...]:
    return tuple(phi_series(d, order).reverse().coeffs)


def psi_series(d: int, order: int) -> LaurentTail:
    """Psi = Phi^{-1}(w) = w + sum_{m=0}^{order} b_m w^-m, by series reversion."""
    if order < d:
        raise ValueError(f"order must be >= d = {d}")
    return LaurentTail(_psi_series_cached(d, order))


# ---------------------------------------------------------------------------
# Affine symmetries
# ---------------------------------------------------------------------------


def _in_multibrot(d: int, c: complex) -> bool:
    return green_parameter(d, c, max_iter=500) == 0.0


def _witness_points(d: int) -> list[complex]:
    """Points of M_d known in closed form: 0 and the period-2 centres
    c^(d-1) = -1 (0 -> c -> c^d + c = 0)."""
    pts = [0j]
    for k in range(d - 1):
        pts.append(cmath.exp(1j * math.pi * (2 * k + 1) / (d - 1)))
    return pts


def _clearly_not_symmetry(d: int, mu: AffineMap) -> bool:
    """True when mu sends a known point of M_d to an escaping parameter."""
    return any(not _in_multibrot(d, mu(p)) for p in _witness_points(d))


def affine_symmetries(d: int, order: int | None = None) -> list[AffineMap]:
    """All affine maps mu(z) = Az + B preserving M_d.

    Matching coefficients of Psi(lambda z) = mu(Psi(z)) gives A = lambda,
    B = b_0 (1 - lambda) and lambda^(m+1) = 1 for every m >= 1 with b_m != 0,
    so lambda ranges over the g-th roots of unity, g = gcd of those m+1.
    """
    order = default_order(d) if order is None else order
    if order < d + 2:
        raise TruncationError(f"order {order} < d + 2 = {d + 2}")
    b = psi_series(d, order)
    g = 0
    for m in range(1, order + 1):
        if b[m] != 0:
            g = gcd(g, m + 1)
    if g == 0:
        raise TruncationError("no nonzero b_m with m >= 1 within the truncation")
    out = []
    for k in range(g):
        turn = Fraction(k, g)
        lam = cmath.exp(2j * math.pi * k / g) if k else 1 + 0j
        B = complex(b[0]) * (1 - lam)
        mu = AffineMap(lam, B, turn)
        if k and _clearly_not_symmetry(d, mu):
            continue
        out.append(mu)
    return out


# ---------------------------------------------------------------------------
# Numerical evaluation of Phi
# ---------------------------------------------------------------------------


def _series_order_for(d: int, c: complex, precision: float) -> int:
    # coefficients stay O(1); the tail is ~|c|^-N
    n = int(math.ceil(math.log(1 / precision) / math.log(abs(c) / 2))) + 2
    return max(d + 2, min(n, 120))


def _log_phi_power(d: int, c: complex, radius: float = BOETTCHER_RADIUS, max_iter: int = 4000):
    """Return (N, L) with L = log phi_c(f_c^N(c)) = d^N log Phi(c) mod 2 pi i."""
    z = c
    for n in range(max_iter):
        if abs(z) > radius:
            return n, log_boettcher_dynamic(d, c, z)
        z = z**d + c
    raise PointInsideError(f"critical value orbit of c={c} bounded after {max_iter} steps")


def phi_eval(d: int, c: complex, precision: float = 1e-10, max_steps: int = 200000) -> complex:
    """Phi(c) for c outside M_d.

    Far out (|c| > 4) the exact Laurent series is summed. Closer in, Phi(c) is
    a d^N-th root of phi_c(f_c^N(c)), and the right root is picked by walking
    in from |c| = 4.5 along the ray through c, at each point taking the root
    nearest the previous value. Steps shrink until consecutive values move by
    under a quarter of the root spacing; if that cannot be met the branch is
    reported as lost instead of guessed.
    """
    c = complex(c)
    if green_parameter(d, c) <= 0.0:
        raise PointInsideError(f"c = {c} lies in M_{d} (critical orbit bounded)")
    if abs(c) > 4:
        return phi_series(d, _series_order_for(d, c, precision))(c)
    direction = c / abs(c)
    r_far = 4.5
    w_prev = phi_series(d, _series_order_for(d, r_far * direction, precision))(r_far * direction)
    r = r_far
    h = 0.05
    steps = 0
    while r > abs(c):
        r_next = max(abs(c), r - h)
        point = r_next * direction
        try:
            n, L = _log_phi_power(d, point)
        except PointInsideError as exc:
            raise BranchTrackingError(f"path to c={c} crosses M_{d} near {point}") from exc
        power = d**n
        spacing = 2 * math.pi / power
        arg_prev = cmath.phase(w_prev)
        k = round((power * arg_prev - L.imag) / (2 * math.pi))
        arg_new = (L.imag + 2 * math.pi * k) / power
        move = abs(arg_new - arg_prev)
        steps += 1
        if steps > max_steps:
            raise BranchTrackingError(f"step budget exhausted tracking Phi toward c={c}")
        if move > 0.25 * spacing:
            h /= 2
            if h < 1e-13:
                raise BranchTrackingError(f"branch ambiguous near {point}")
            continue
        w_prev = cmath.exp(complex(L.real / power, arg_new))
        r = r_next
        h *= 1.5
    return w_prev
