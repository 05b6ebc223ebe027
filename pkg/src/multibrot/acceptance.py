"""Acceptance checks, one function per criterion, shared by pytest and the CLI."""
from __future__ import annotations

import cmath
import itertools
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .angles import parse_angle
from .arithmetic import bang_bound, m_of_k, primitive_prime_divisors, replay_theorem
from .boettcher import affine_symmetries, default_order, psi_series
from .curves import _substitution_vanishes, implicitize_Cq, is_exceptional, is_invariant
from .exact import ExactPoly, GaussianRational
from .pcf import hyperbolic_centers, misiurewicz, orbit_type
from .rays import prop35_check, trace_parameter_ray, verify_landing_pair
from .render import RasterSpec, overlay_rays, overlay_svg, render_multibrot, write_ppm
from .rotation_sets import brute_force_enumerate, enumerate_constructive, prop35_family


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    budget: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number}. {self.name} ({self.seconds:.2f}s / {self.budget:.0f}s): {self.detail}"

    def to_dict(self) -> dict:
        return {
            "criterion": self.number,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
            "budget_seconds": self.budget,
        }


def _timed(number: int, name: str, budget: float, body) -> CriterionResult:
    start = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as exc:  # a crash is a failure, reported not raised
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if ok and elapsed > budget:
        ok, detail = False, f"{detail}; over the time budget"
    return CriterionResult(number, name, ok, detail, elapsed, budget)


# 1 -----------------------------------------------------------------------


def check_symmetry_group(degrees=range(2, 8), per_degree_budget: float = 5.0):
    notes = []
    for d in degrees:
        start = time.perf_counter()
        maps = affine_symmetries(d)
        elapsed = time.perf_counter() - start
        turns = sorted(mu.turn for mu in maps)
        expected = [Fraction(k, d - 1) for k in range(d - 1)]
        if turns != expected:
            return False, f"d={d}: rotations {turns}, expected {expected}"
        for mu in maps:
            target = cmath.exp(2j * cmath.pi * float(mu.turn))
            if abs(mu.A - target) > 1e-12 or abs(mu.B) > 1e-12:
                return False, f"d={d}: map {mu} is not a rotation about 0"
        if elapsed > per_degree_budget:
            return False, f"d={d} took {elapsed:.2f}s"
        notes.append(f"d={d}:{len(maps)}")
    return True, " ".join(notes)


# 2 -----------------------------------------------------------------------


def check_psi_coefficients(degrees=range(2, 8)):
    for d in degrees:
        b = psi_series(d, default_order(d))
        if any(b[m] != 0 for m in range(d - 2)):
            return False, f"d={d}: nonzero b_m below m = d-2"
        if b[d - 2] == 0:
            return False, f"d={d}: b_(d-2) vanishes"
    b0 = psi_series(2, default_order(2))[0]
    if b0 != Fraction(-1, 2):
        return False, f"d=2: b_0 = {b0}"
    return True, "b_m = 0 for m < d-2, b_(d-2) != 0 for d=2..7; d=2 b_0 = -1/2"


# 3 -----------------------------------------------------------------------


def check_landing_three_quarters():
    pair = verify_landing_pair(2, parse_angle("1/3"), parse_angle("2/3"))
    err = abs(pair.landing_point - (-0.75))
    return err < 1e-3, f"landing {pair.landing_point:.7f}, |error| = {err:.2e}"


# 4 -----------------------------------------------------------------------


def check_parabolic_landing(cases=((2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3))):
    notes = []
    for d, n in cases:
        pair, best = prop35_check(d, n, tol=1e-3)
        res = max(best.residuals(d))
        gap = abs(pair.landing_point - best.c)
        if res >= 1e-10 or gap >= 1e-3:
            return False, f"(d={d}, n={n}) gap {gap:.2e}, residual {res:.2e}"
        notes.append(f"({d},{n}):{gap:.1e}")
    return True, "landing-to-parabolic gaps " + " ".join(notes)


# 5 -----------------------------------------------------------------------


def _key(rs):
    return (rs.d, rs.angles, rs.rot_num, rs.k, rs.deployment)


def check_goldberg_equivalence(max_d: int = 4, max_q: int = 6):
    total = 0
    for d in range(2, max_d + 1):
        for q in range(1, max_q + 1):
            built = {_key(rs) for rs in enumerate_constructive(d, q)}
            brute = {_key(rs) for rs in brute_force_enumerate(d, q)}
            if built != brute:
                return False, f"d={d}, q={q}: {len(built ^ brute)} sets differ"
            total += len(built)
        for n in range(2, max_q + 1):
            fam = prop35_family(d, n)
            if len(fam) != d - 1 or any(s not in (0, n) for rs in fam for s in rs.deployment):
                return False, f"family (d={d}, n={n}) malformed"
    return True, f"{total} rotation sets agree; all families have d-1 members"


# 6 -----------------------------------------------------------------------


def check_replay(max_deg: int = 6, k_max: int = 20):
    if primitive_prime_divisors(2, 6).primitive_primes:
        return False, "2^6 - 1 has a primitive prime"
    if list(primitive_prime_divisors(2, 5).primitive_primes) != [31]:
        return False, "primitive primes of 2^5 - 1 are not {31}"
    checked = 0
    for d in range(2, max_deg + 1):
        bound = max(bang_bound(d, 64), 2)
        for D in range(2, max_deg + 1):
            report = replay_theorem(d, D, 1, k_max)
            for rec in report.records:
                if m_of_k(d, D, rec.k) > bound:
                    checked += 1
                    if not rec.contradiction:
                        return False, f"d={d}, D={D}, k={rec.k}: no contradiction ({rec.witness})"
    return True, f"{checked} records beyond the Bang bound all contradict"


# 7 -----------------------------------------------------------------------


def check_pcf_atlas():
    sizes = []
    for n in range(1, 5):
        centers = hyperbolic_centers(2, n)
        for c in centers:
            # double-precision roots, so compare orbit points at 1e-9
            found = orbit_type(2, c, 2 * n + 2, tol=1e-9)
            if found != (0, n):
                return False, f"n={n}: root {c} has (preperiod, period) {found}"
        sizes.append(len(centers))
    if sizes != [1, 1, 3, 6]:
        return False, f"center counts {sizes}"
    mis = misiurewicz(2, 2, 1)
    if len(mis) != 1 or abs(mis[0] + 2) > 1e-10:
        return False, f"misiurewicz(2,2,1) = {mis}"
    return True, f"center counts {sizes}; misiurewicz(2,2,1) = {mis[0].real:.12f}"


# 8 -----------------------------------------------------------------------


def small_grid_r():
    """Non-exceptional r of degree 2..4 with coefficients in {-1, 0, 1}."""
    out = []
    for deg in (2, 3, 4):
        for low in itertools.product((-1, 0, 1), repeat=deg):
            for lead in (-1, 1):
                r = ExactPoly(list(low) + [lead])
                if is_exceptional(r).kind == "none":
                    out.append(r)
    return out


def small_grid_q():
    """q of degree 1..3 with coefficients in {-1, 0, 1, i}."""
    vals = [GaussianRational(-1), GaussianRational(0), GaussianRational(1), GaussianRational(0, 1)]
    out = []
    for deg in (1, 2, 3):
        for low in itertools.product(vals, repeat=deg):
            for lead in (vals[0], vals[2], vals[3]):
                out.append(ExactPoly(list(low) + [lead]))
    return out


def invariant_pairs(rs, qs) -> list:
    curves = {q: implicitize_Cq(q).poly for q in qs}
    return [(q, r) for r in rs for q in qs if _substitution_vanishes(curves[q], q, r)]


def check_invariant_curves():
    z = ExactPoly([0, 1])
    if not is_invariant(z, ExactPoly([0, 0, 1])):
        return False, "C_z not invariant under z^2"
    if is_invariant(z, ExactPoly([1, 0, 1])):
        return False, "C_z invariant under z^2 + 1"
    expected = {"-2,0,1": "chebyshev-like", "0,0,3": "power-like", "1,0,1": "none"}
    for text, kind in expected.items():
        v = is_exceptional(ExactPoly.parse(text))
        if v.kind != kind or not v.exact:
            return False, f"{text}: {v}"
    rs, qs = small_grid_r(), small_grid_q()
    bad = invariant_pairs(rs, qs)
    if bad:
        q, r = bad[0]
        return False, f"{len(bad)} invariant pairs, e.g. q={q}, r={r}"
    return True, f"{len(rs)} non-exceptional r x {len(qs)} q: no invariant curve"


# 9 -----------------------------------------------------------------------


FIGURE_VIEW = RasterSpec(center=-0.75 + 0j, width=3.0, pixels=(300, 200), max_iter=200, d=2)


def render_figure(spec: RasterSpec, out_dir, angles=("1/3", "2/3"), threads: int = 1):
    raster = render_multibrot(spec, threads=threads)
    traces = [trace_parameter_ray(spec.d, parse_angle(a)) for a in angles]
    img, overlay = overlay_rays(raster, traces, spec)
    out_dir = Path(out_dir)
    write_ppm(out_dir / "multibrot.ppm", img)
    (out_dir / "overlay.svg").write_text(overlay_svg(spec, overlay, "multibrot.ppm"))
    return raster, img


def check_rendering():
    blobs = []
    for threads in (1, 2):
        with tempfile.TemporaryDirectory() as tmp:
            raster, _ = render_figure(FIGURE_VIEW, tmp, threads=threads)
            blobs.append(((Path(tmp) / "multibrot.ppm").read_bytes(), (Path(tmp) / "overlay.svg").read_bytes()))
    if blobs[0] != blobs[1]:
        return False, "PPM/SVG output differs between runs"
    if not (raster == raster[::-1]).all():
        return False, "raster is not mirror-symmetric"
    return True, f"deterministic PPM ({len(blobs[0][0])} bytes) and SVG; mirror-exact raster"


CRITERIA = [
    (1, "affine symmetry group", 35.0, check_symmetry_group),
    (2, "Psi coefficients", 10.0, check_psi_coefficients),
    (3, "landing pair 1/3, 2/3 at -3/4", 30.0, check_landing_three_quarters),
    (4, "parabolic landing for d in {2,3,4}, n in {2,3}", 300.0, check_parabolic_landing),
    (5, "constructive vs brute-force rotation sets", 120.0, check_goldberg_equivalence),
    (6, "primitive divisors and replay", 120.0, check_replay),
    (7, "PCF atlas", 60.0, check_pcf_atlas),
    (8, "invariant curves", 300.0, check_invariant_curves),
    (9, "rendering", 120.0, check_rendering),
]


def run_criterion(number: int) -> CriterionResult:
    for num, name, budget, fn in CRITERIA:
        if num == number:
            return _timed(num, name, budget, fn)
    raise KeyError(number)


def run_all(numbers=None) -> list[CriterionResult]:
    return [run_criterion(n) for n, *_ in CRITERIA if numbers is None or n in numbers]
