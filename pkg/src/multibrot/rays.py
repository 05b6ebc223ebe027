"""External rays of the multibrot set and of filled Julia sets.

Parameter rays are followed by Newton continuation in the potential t. At
each sample we solve

    log phi_c(f_c^n(c)) = d^n (t + 2 pi i theta)      (mod 2 pi i)

for c, where n is the least integer making d^n t large enough for the
Boettcher product to be accurate. The angle d^n theta is reduced exactly, so
no branch of log Phi ever has to be tracked. Landing points of periodic rays
(parabolic parameters) are approached like 1/log(1/t); they are estimated by
Richardson extrapolation in h = 1/level. Preperiodic rays converge
geometrically until the orbit loses resolution, and there the last sample
is used.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .angles import Angle, orbit_info
from .boettcher import log_boettcher_dynamic, psi_series, green_dynamic
from .errors import (
    LandingMismatchError,
    NewtonDivergenceError,
    NoParabolicMatchError,
    NotConvergedError,
    PotentialFloorError,
    UndecidableError,
)

TWO_PI = 2 * math.pi
# |f^n(c)| needed before the Boettcher product is evaluated
BOETTCHER_RADIUS = 100.0
DEFAULT_LEVELS = 160
DEFAULT_SUBSTEPS = 4
RICHARDSON_NODES = 5


@dataclass
class RayTrace:
    d: int
    theta: Angle
    samples: list = field(default_factory=list)  # (potential, point), decreasing potential
    landing_estimate: complex = 0j
    converged: bool = False
    error_estimate: float = math.inf
    method: str = ""
    dynamic_c: complex | None = None
    flags: list = field(default_factory=list)

    @property
    def points(self) -> list[complex]:
        return [p for _, p in self.samples]

    def to_dict(self) -> dict:
        out = {
            "d": self.d,
            "theta": str(self.theta),
            "landing": [self.landing_estimate.real, self.landing_estimate.imag],
            "converged": self.converged,
            "error_estimate": self.error_estimate,
            "method": self.method,
            "flags": list(self.flags),
            "samples": [[t, z.real, z.imag] for t, z in self.samples],
        }
        if self.dynamic_c is not None:
            out["c"] = [self.dynamic_c.real, self.dynamic_c.imag]
        return out


@dataclass
class LandingPair:
    theta: Angle
    theta_prime: Angle
    landing_point: complex
    period: int
    traces: tuple = ()
    separation: float = 0.0

    def to_dict(self) -> dict:
        return {
            "theta": str(self.theta),
            "theta_prime": str(self.theta_prime),
            "landing": [self.landing_point.real, self.landing_point.imag],
            "period": self.period,
            "separation": self.separation,
        }


# ---------------------------------------------------------------------------
# Newton continuation
# ---------------------------------------------------------------------------


def _wrap(x: float) -> float:
    return (x + math.pi) % TWO_PI - math.pi


def _level(d: int, t: float) -> int:
    """Least n >= 0 with d^n t >= log BOETTCHER_RADIUS."""
    target = math.log(BOETTCHER_RADIUS)
    if t >= target:
        return 0
    return math.ceil(math.log(target / t, d) - 1e-12)


def _param_residual(d: int, c: complex, n: int, t: float, theta_n: Angle):
    """Residual of the ray equation and its c-derivative (None on overflow)."""
    z = c
    dz = 1 + 0j
    try:
        for _ in range(n):
            dz = d * z ** (d - 1) * dz + 1
            z = z**d + c
            if abs(z) > 1e150:
                return None
        if z == 0:
            return None
        L = log_boettcher_dynamic(d, c, z)
    except (OverflowError, ZeroDivisionError, ValueError):
        return None
    scale = d**n
    res = complex(L.real - scale * t, _wrap(L.imag - TWO_PI * float(theta_n)))
    deriv = dz / z
    if not (math.isfinite(res.real) and math.isfinite(res.imag)) or not cmath.isfinite(deriv):
        return None
    return res, deriv


def _dynamic_residual(d: int, c: complex, z: complex, n: int, t: float, theta_n: Angle):
    dz = 1 + 0j
    try:
        for _ in range(n):
            dz = d * z ** (d - 1) * dz
            z = z**d + c
            if abs(z) > 1e150:
                return None
        if z == 0:
            return None
        L = log_boettcher_dynamic(d, c, z)
    except (OverflowError, ZeroDivisionError, ValueError):
        return None
    res = complex(L.real - d**n * t, _wrap(L.imag - TWO_PI * float(theta_n)))
    deriv = dz / z
    if not (math.isfinite(res.real) and math.isfinite(res.imag)) or not cmath.isfinite(deriv):
        return None
    return res, deriv


def _newton(residual, x0: complex, scale: float, max_iter: int = 60):
    """Damped Newton; returns the root or None when it cannot converge."""
    x = x0
    r = residual(x)
    if r is None:
        return None
    for _ in range(max_iter):
        res, deriv = r
        if deriv == 0:
            return None
        step = res / deriv
        lam = 1.0
        while True:
            trial = x - lam * step
            rt = residual(trial)
            if rt is not None and abs(rt[0]) < abs(res) * (1 - 0.25 * lam) + 1e-300:
                break
            lam /= 2
            if lam < 1e-6:
                # no decrease possible: accept only if we are already at rounding level
                return x if abs(res) < 1e-9 * max(1.0, scale) else None
        x, r = trial, rt
        if abs(lam * step) <= 1e-15 * max(1.0, abs(x)):
            break
    if abs(r[0]) > 1e-7 * max(1.0, scale):
        return None
    return x


def _default_floor(d: int, levels: int = DEFAULT_LEVELS) -> float:
    return math.log(BOETTCHER_RADIUS) * float(d) ** (-levels)


def trace_parameter_ray(
    d: int,
    theta: Angle,
    potential_floor: float | None = None,
    steps: int = DEFAULT_SUBSTEPS,
    start_potential: float = math.log(4),
    tol: float = 1e-4,
) -> RayTrace:
    """Follow the parameter ray R(theta) from potential ``start_potential``
    down to ``potential_floor``.

    ``steps`` is the number of samples per factor d of decrease in potential.
    Newton failure before reaching resolution raises NewtonDivergenceError
    carrying the last good sample.
    """
    if d < 2:
        raise ValueError("degree must be >= 2")
    floor = _default_floor(d) if potential_floor is None else potential_floor
    if floor <= 0:
        raise ValueError("potential floor must be positive")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    trace = RayTrace(d, theta)
    if theta.denominator % d == 0:
        trace.flags.append("denominator-divisible-by-d")
    w = cmath.exp(complex(start_potential, TWO_PI * float(theta)))
    c = psi_series(d, 40)(w)
    ratio = d ** (1.0 / steps)
    t = start_potential
    stopped_at_resolution = False
    while True:
        n = _level(d, t)
        theta_n = Angle(theta.numerator * d**n, theta.denominator)
        root = _newton(lambda x: _param_residual(d, x, n, t, theta_n), c, d**n * t)
        if root is None:
            if not trace.samples:
                raise NewtonDivergenceError(f"could not start ray {theta}", None)
            if _converging_geometrically(trace):
                stopped_at_resolution = True
                break
            raise NewtonDivergenceError(
                f"Newton failed on ray {theta} at potential {t:.3e}", trace.samples[-1]
            )
        c = root
        trace.samples.append((t, c))
        if t <= floor:
            break
        t /= ratio
    _estimate_landing(trace, stopped_at_resolution, tol)
    return trace


def _converging_geometrically(trace: RayTrace, window: int = 8) -> bool:
    """True when recent sample increments shrink like a geometric sequence."""
    pts = trace.points
    if len(pts) < window + 2:
        return False
    steps = [abs(pts[-i] - pts[-i - 1]) for i in range(1, window + 1)]
    return steps[0] < 1e-9 * max(1.0, abs(pts[-1])) or (
        steps[0] < 1e-6 and steps[0] < 0.5 * steps[-1]
    )


def _levels(trace: RayTrace) -> list[tuple[float, complex]]:
    t0 = trace.samples[0][0]
    return [(math.log(t0 / t, trace.d), z) for t, z in trace.samples]


def _neville_at_zero(hs: list[float], values: list[complex]) -> complex:
    p = list(values)
    n = len(hs)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (hs[i] * p[i + 1] - hs[i + m] * p[i]) / (hs[i] - hs[i + m])
    return p[0]


def richardson_landing(trace: RayTrace, nodes: int = RICHARDSON_NODES, top: float | None = None) -> complex:
    """Extrapolate the samples to potential 0 in the variable h = 1/level,
    using nodes at levels K, K/2, ..., K/2^(nodes-1)."""
    pts = [(k, z) for k, z in _levels(trace) if k > 0]
    if not pts:
        return trace.samples[-1][1]
    K = top if top is not None else pts[-1][0]
    chosen = []
    for j in range(nodes):
        target = K / 2**j
        k, z = min(pts, key=lambda p: abs(p[0] - target))
        if chosen and k == chosen[-1][0]:
            break
        chosen.append((k, z))
    if len(chosen) < 2:
        return chosen[0][1]
    return _neville_at_zero([1 / k for k, _ in chosen], [z for _, z in chosen])


def _estimate_landing(trace: RayTrace, at_resolution: bool, tol: float) -> None:
    pts = trace.points
    if at_resolution:
        trace.method = "resolution"
        trace.landing_estimate = pts[-1]
        trace.error_estimate = abs(pts[-1] - pts[-2]) * 2 if len(pts) > 1 else math.inf
    else:
        trace.method = "richardson"
        levels = _levels(trace)
        K = levels[-1][0]
        est = richardson_landing(trace, RICHARDSON_NODES, K)
        check = richardson_landing(trace, RICHARDSON_NODES, 0.75 * K)
        trace.landing_estimate = est
        trace.error_estimate = abs(est - check)
    trace.converged = trace.error_estimate < tol


# ---------------------------------------------------------------------------
# Landing pairs
# ---------------------------------------------------------------------------


def verify_landing_pair(d: int, theta: Angle, theta_prime: Angle, tol: float = 1e-4, **trace_opts) -> LandingPair:
    """Trace both rays and confirm they land at one point within ``tol``."""
    if theta == theta_prime:
        raise ValueError("a landing pair needs two distinct angles")
    info, info2 = orbit_info(d, theta), orbit_info(d, theta_prime)
    if info.preperiod or info2.preperiod:
        raise ValueError("landing pairs are formed by periodic angles")
    a = trace_parameter_ray(d, theta, tol=tol, **trace_opts)
    b = trace_parameter_ray(d, theta_prime, tol=tol, **trace_opts)
    for tr in (a, b):
        if not tr.converged:
            raise NotConvergedError(
                f"ray {tr.theta} did not settle (error estimate {tr.error_estimate:.2e})"
            )
    gap = abs(a.landing_estimate - b.landing_estimate)
    if gap > tol:
        raise LandingMismatchError(
            f"rays {theta} and {theta_prime} land {gap:.3e} apart "
            f"({a.landing_estimate:.6f} vs {b.landing_estimate:.6f})"
        )
    if info.period != info2.period:
        raise LandingMismatchError("angles of a landing pair share their period")
    point = (a.landing_estimate + b.landing_estimate) / 2
    return LandingPair(theta, theta_prime, point, info.period, (a, b), gap)


def prop35_angles(d: int, n: int) -> tuple[Angle, Angle]:
    """The angles 1/(d^n - 1) and d/(d^n - 1)."""
    return Angle(1, d**n - 1), Angle(d, d**n - 1)


def prop35_check(d: int, n: int, tol: float = 1e-3, **trace_opts):
    """Trace the rays at 1/(d^n-1) and d/(d^n-1), check they land together,
    and match the landing point with a parabolic parameter on the boundary of
    the main hyperbolic component with multiplier e^(2 pi i/n)."""
    from .pcf import parabolic_boundary

    if d < 2 or n < 2:
        raise ValueError("need d >= 2 and n >= 2")
    theta, theta_prime = prop35_angles(d, n)
    pair = verify_landing_pair(d, theta, theta_prime, tol=tol, **trace_opts)
    candidates = parabolic_boundary(d, n)
    best = min(candidates, key=lambda rec: abs(rec.c - pair.landing_point))
    if abs(best.c - pair.landing_point) > tol:
        raise NoParabolicMatchError(
            f"landing point {pair.landing_point} is {abs(best.c - pair.landing_point):.3e} "
            "from every parabolic boundary parameter"
        )
    return pair, best


# ---------------------------------------------------------------------------
# Dynamic rays
# ---------------------------------------------------------------------------


def _critical_potential(d: int, c: complex) -> float:
    return green_dynamic(d, c, 0j)


def _pull_back(d: int, c: complex, w: complex, near: complex) -> complex:
    """The preimage of w under z^d + c closest to ``near`` (ties: smallest
    argument difference)."""
    base = (w - c) ** (1.0 / d) if w != c else 0j
    best = None
    for k in range(d):
        cand = base * cmath.exp(TWO_PI * 1j * k / d)
        key = (round(abs(cand - near), 14), abs(_wrap(cmath.phase(cand) - cmath.phase(near or 1))))
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1]


def _far_point(d: int, c: complex, t: float, theta: Angle) -> complex:
    """Point of potential t and external angle theta for large t.

    Inverts phi_c(z) = z + c/(d z^(d-1)) + ... by a few Newton steps on the
    product formula."""
    w = cmath.exp(complex(t, TWO_PI * float(theta)))
    z = w
    for _ in range(20):
        r = _dynamic_residual(d, c, z, 0, t, theta)
        if r is None:
            break
        res, deriv = r
        z -= res / deriv
        if abs(res) < 1e-15:
            break
    return z


def trace_dynamic_ray(
    d: int,
    c: complex,
    theta: Angle,
    potential_floor: float | None = None,
    steps: int = DEFAULT_SUBSTEPS,
    start_potential: float = math.log(BOETTCHER_RADIUS),
    tol: float = 1e-4,
    refine: bool = True,
) -> RayTrace:
    """Follow the dynamic ray R_c(theta) by pulling back under f_c.

    The point of R_c(theta) at potential t is the preimage of the point of
    R_c(d theta) at potential d t that lies nearest the previous sample of the
    same ray, so each sample costs n square roots, n being the number of
    doublings needed to reach the far field.
    """
    c = complex(c)
    floor = _default_floor(d, 60) if potential_floor is None else potential_floor
    if floor <= 0:
        raise ValueError("potential floor must be positive")
    crit = _critical_potential(d, c)
    if crit > 0 and floor <= crit:
        raise PotentialFloorError(
            f"c = {c} escapes (critical potential {crit:.6g}); floor {floor:.6g} must exceed it"
        )
    trace = RayTrace(d, theta, dynamic_c=c)
    ratio = d ** (1.0 / steps)
    # last known point on the ray d^j theta, at potential d^j times the current t
    memory: dict[int, complex] = {}
    t = start_potential
    while True:
        n = _level(d, t)
        # far-field point on ray d^n theta at potential d^n t
        top_angle = Angle(theta.numerator * d**n, theta.denominator)
        z = _far_point(d, c, d**n * t, top_angle)
        for j in range(n - 1, -1, -1):
            near = memory.get(j)
            if near is None:
                # first visit at this depth: continue from the radial guess
                near = cmath.exp(complex(d**j * t, TWO_PI * float(Angle(theta.numerator * d**j, theta.denominator))))
            z = _pull_back(d, c, z, near)
            memory[j] = z
        trace.samples.append((t, z))
        if t <= floor:
            break
        t /= ratio
    _estimate_dynamic_landing(trace, tol, refine)
    return trace


def _geometric_ratio(pts: list[complex], window: int) -> float | None:
    """Ratio of the last step to the step ``window`` samples earlier."""
    if len(pts) < window + 2:
        return None
    late = abs(pts[-1] - pts[-2])
    early = abs(pts[-1 - window] - pts[-2 - window])
    if early == 0:
        return 0.0
    return late / early


def _estimate_dynamic_landing(trace: RayTrace, tol: float, refine: bool) -> None:
    d, c = trace.d, trace.dynamic_c
    pts = trace.points
    if _critical_potential(d, c) > 0:
        trace.method = "truncated"
        trace.landing_estimate = pts[-1]
        trace.error_estimate = math.inf
        trace.converged = False
        return
    steps_per_level = max(1, round(1 / math.log(trace.samples[0][0] / trace.samples[1][0], d)))
    ratio = _geometric_ratio(pts, 2 * steps_per_level)
    if ratio is not None and ratio < 0.7:
        # repelling landing point: samples converge geometrically
        trace.method = "geometric"
        guess = pts[-1]
        last = abs(pts[-1] - pts[-2])
        trace.error_estimate = last * ratio / (1 - ratio) if ratio < 1 else math.inf
    else:
        trace.method = "richardson"
        guess = richardson_landing(trace)
        trace.error_estimate = abs(guess - richardson_landing(trace, top=0.75 * _levels(trace)[-1][0]))
    trace.landing_estimate = guess
    trace.converged = trace.error_estimate < max(tol, 1e-3)
    if refine:
        info = orbit_info(d, trace.theta)
        z = _periodic_point_near(d, c, guess, info.preperiod, info.period)
        if z is not None and abs(z - guess) < max(10 * trace.error_estimate, 1e-2):
            trace.landing_estimate = z
            trace.method += "+newton"
            # the (pre)periodic point is accepted when the second half of the
            # trace closes in on it monotonically
            half = pts[len(pts) // 2 :]
            dist = [abs(p - z) for p in half]
            approach = all(b <= a * (1 + 1e-9) for a, b in zip(dist, dist[1:]))
            if approach:
                trace.error_estimate = min(trace.error_estimate, max(abs(z - guess), dist[-1] * 1e-3))
                trace.converged = True


def _periodic_point_near(d: int, c: complex, z0: complex, pre: int, per: int) -> complex | None:
    """Newton on f^(pre+per)(z) = f^pre(z) from z0."""

    def g(z):
        w, dw = z, 1 + 0j
        head = head_d = None
        for i in range(pre + per):
            if i == pre:
                head, head_d = w, dw
            dw = d * w ** (d - 1) * dw
            w = w**d + c
        if pre + per == pre:
            head, head_d = w, dw
        return w - head, dw - head_d

    z = z0
    for _ in range(200):
        val, der = g(z)
        if der == 0:
            return None
        step = val / der
        z -= step
        if not cmath.isfinite(z):
            return None
        if abs(step) < 1e-15 * max(1.0, abs(z)):
            break
    return z


# ---------------------------------------------------------------------------
# Wakes
# ---------------------------------------------------------------------------

WAKE_RADIUS = 1e3


def _winding(poly: list[complex], p: complex) -> int:
    total = 0.0
    for a, b in zip(poly, poly[1:] + poly[:1]):
        total += _wrap(cmath.phase(b - p) - cmath.phase(a - p))
    return round(total / TWO_PI)


def _dist_to_segment(p: complex, a: complex, b: complex) -> float:
    ab = b - a
    if ab == 0:
        return abs(p - a)
    s = ((p - a) * ab.conjugate()).real / abs(ab) ** 2
    s = min(1.0, max(0.0, s))
    return abs(p - (a + s * ab))


def _wake_polygon(pair: LandingPair, ccw: bool) -> list[complex]:
    a, b = pair.traces
    pa = [z for _, z in a.samples]
    pb = [z for _, z in b.samples]
    ta, tb = float(pair.theta) * TWO_PI, float(pair.theta_prime) * TWO_PI
    poly = [pair.landing_point] + pa[::-1]
    poly.append(WAKE_RADIUS * cmath.exp(1j * ta))
    # arc from theta to theta' (counter-clockwise or clockwise)
    span = (tb - ta) % TWO_PI
    if not ccw:
        span -= TWO_PI
    for s in range(1, 64):
        poly.append(WAKE_RADIUS * cmath.exp(1j * (ta + span * s / 64)))
    poly.append(WAKE_RADIUS * cmath.exp(1j * tb))
    poly.extend(pb)
    return poly


def wake_contains(d: int, pair: LandingPair, point: complex, resolution: float = 1e-6) -> bool:
    """True iff ``point`` lies in the wake of the landing pair.

    The two traced rays, their landing point, radial extensions out to a big
    circle and an arc of that circle bound a polygon; of the two choices of
    arc, the one whose polygon avoids 0 encloses the wake. Points within
    ``resolution`` of the boundary raise UndecidableError.
    """
    if not pair.traces:
        raise ValueError("landing pair carries no traces")
    point = complex(point)
    if abs(point) >= WAKE_RADIUS:
        raise UndecidableError("point beyond the traced region")
    poly = _wake_polygon(pair, ccw=True)
    if _winding(poly, 0j) != 0:
        poly = _wake_polygon(pair, ccw=False)
    edges = zip(poly, poly[1:] + poly[:1])
    if min(_dist_to_segment(point, a, b) for a, b in edges) < resolution:
        raise UndecidableError(f"{point} is within {resolution} of the wake boundary")
    return _winding(poly, point) != 0
