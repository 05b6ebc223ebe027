"""Invariant algebraic curves of the pair (r, r-bar) and exceptional polynomials.

The unit circle sits inside C^2 as the curve xy = 1 via z -> (z, conj z). For a
polynomial q its image is C_q = {(q(t), qbar(1/t))}, found here by eliminating
t exactly. C_q is invariant under (r, rbar) precisely when C_q = C_{r o q}.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import count

from .errors import EliminationError
from .exact import ONE, ZERO, BivariatePoly, ExactPoly, GaussianRational, determinant

NUMERIC_TOL = 1e-12


@dataclass(frozen=True)
class BivariateCurve:
    """Normalized squarefree equation F(X, Y) = 0 with its source polynomial."""

    poly: BivariatePoly
    source: ExactPoly | None = None
    multiplicity: int = 1  # power of poly that the raw resultant equalled

    def __eq__(self, other):
        return isinstance(other, BivariateCurve) and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def __str__(self):
        return str(self.poly)

    def vanishes_at(self, x, y) -> bool:
        return not self.poly(x, y)


def conjugate_poly(f: ExactPoly) -> ExactPoly:
    return f.conjugate()


@lru_cache(maxsize=None)
def chebyshev(D: int) -> ExactPoly:
    """C_D with C_D(z + 1/z) = z^D + z^-D, checked as Laurent polynomials."""
    if D < 1:
        raise ValueError("D must be >= 1")
    z = ExactPoly([0, 1])
    prev, cur = ExactPoly([2]), z
    for _ in range(D - 1):
        prev, cur = cur, z * cur - prev
    _check_chebyshev_identity(cur, D)
    return cur


def _check_chebyshev_identity(poly: ExactPoly, D: int) -> None:
    # Laurent polynomial as {exponent: coefficient}
    base = {1: Fraction(1), -1: Fraction(1)}
    acc: dict[int, Fraction] = {}
    power = {0: Fraction(1)}
    for k, c in enumerate(poly.coeffs):
        if k:
            power = _laurent_mul(power, base)
        for e, v in power.items():
            acc[e] = acc.get(e, 0) + c.re * v
    acc = {e: v for e, v in acc.items() if v}
    if acc != {D: 1, -D: 1}:
        raise ArithmeticError(f"Chebyshev recurrence failed the defining identity at D={D}")


def _laurent_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return out


# ---------------------------------------------------------------------------
# Implicitization
# ---------------------------------------------------------------------------


def _sylvester(a: list, b: list) -> list[list]:
    """Sylvester matrix of two polynomials given low-to-high (same formal degree)."""
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    rows = []
    for k in range(n):
        row = [ZERO] * size
        for idx, c in enumerate(reversed(a)):
            row[k + idx] = c
        rows.append(row)
    for k in range(m):
        row = [ZERO] * size
        for idx, c in enumerate(reversed(b)):
            row[k + idx] = c
        rows.append(row)
    return rows


def _interpolate(xs: list, values: list) -> list[GaussianRational]:
    """Coefficients (low to high) of the polynomial through (xs, values)."""
    n = len(xs)
    dd = [GaussianRational(v) for v in values]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j])
    coeffs = [ZERO] * n
    for i in range(n - 1, -1, -1):
        # coeffs <- coeffs * (x - xs[i]) + dd[i]
        shifted = [ZERO] + coeffs[:-1]
        coeffs = [s - xs[i] * c for s, c in zip(shifted, coeffs)]
        coeffs[0] = coeffs[0] + dd[i]
    return coeffs


def resultant_Cq(q: ExactPoly) -> BivariatePoly:
    """Res_t(q(t) - X, t^D (qbar(1/t) - Y)), by exact evaluation and interpolation."""
    D = q.degree
    if D < 1:
        raise ValueError("q must be non-constant")
    qb = q.conjugate()
    grid = list(range(D + 1))
    table = {}
    for X in grid:
        for Y in grid:
            a = [q[0] - X] + [q[k] for k in range(1, D + 1)]
            b = [qb[D - k] for k in range(D)] + [qb[0] - Y]
            table[X, Y] = determinant(_sylvester(a, b))
    # interpolate in X for each Y, then in Y for each X-power
    by_y = {Y: _interpolate(grid, [table[X, Y] for X in grid]) for Y in grid}
    terms = {}
    for i in range(D + 1):
        col = _interpolate(grid, [by_y[Y][i] for Y in grid])
        for j, c in enumerate(col):
            if c:
                terms[(i, j)] = c
    res = BivariatePoly(terms)
    if res.is_zero():
        raise EliminationError(f"resultant vanishes identically for q = {q}")
    return res


def _power_root(p: list, mu: int) -> list | None:
    """Exact mu-th root of a polynomial with p[0] = 1 (low to high), or None."""
    n = len(p) - 1
    if n % mu:
        return None
    m = n // mu
    alpha = Fraction(1, mu)
    g = [ONE] + [ZERO] * m
    for k in range(1, m + 1):
        acc = ZERO
        for j in range(1, k + 1):
            if j < len(p) and p[j]:
                acc = acc + p[j] * g[k - j] * ((alpha + 1) * j - k)
        g[k] = acc / k
    check = ExactPoly(g) ** mu
    return g if check == ExactPoly(p) else None


def squarefree_power(poly: BivariatePoly) -> tuple[BivariatePoly, int]:
    """Largest mu with poly = const * F^mu exactly; returns (F, mu).

    Packs X^i Y^j into x^(i + j B) so a bivariate root is a univariate one,
    then takes the mu-th root of the reversed (constant term 1) polynomial by
    the power-series binomial recurrence and verifies it by re-raising.
    """
    B = poly.degree_x + 1
    packed: dict[int, GaussianRational] = {i + j * B: c for (i, j), c in poly.terms.items()}
    N = max(packed)
    lead = packed[N]
    rev = [ZERO] * (N + 1)
    for e, c in packed.items():
        rev[N - e] = c / lead
    top = max(poly.degree_x, poly.degree_y, 1)
    for mu in range(top, 1, -1):
        g = _power_root(rev, mu)
        if g is None:
            continue
        M = len(g) - 1
        terms = {}
        for k, c in enumerate(g):
            if c:
                e = M - k
                terms[(e % B, e // B)] = c
        return BivariatePoly(terms), mu
    return poly, 1


def implicitize_Cq(q: ExactPoly) -> BivariateCurve:
    """Normalized squarefree equation of C_q = {(q(t), qbar(1/t))}."""
    res = resultant_Cq(q)
    base, mu = squarefree_power(res)
    return BivariateCurve(base.normalized(), q, mu)


# ---------------------------------------------------------------------------
# Invariance
# ---------------------------------------------------------------------------


# p = 1 mod 4 prime, so sqrt(-1) exists mod p and Q(i) maps into F_p
_P = 2305843009213693921
_I = None


def _sqrt_minus_one() -> int:
    global _I
    if _I is None:
        for g in range(2, 1000):
            x = pow(g, (_P - 1) // 4, _P)
            if x * x % _P == _P - 1:
                _I = x
                break
    return _I


def _mod_image(c: GaussianRational) -> int | None:
    den = c.re.denominator * c.im.denominator
    if den % _P == 0:
        return None
    num = c.re.numerator * c.im.denominator + c.im.numerator * c.re.denominator * _sqrt_minus_one()
    return num * pow(den, -1, _P) % _P


def _mod_poly(p: ExactPoly) -> list[int] | None:
    out = [_mod_image(c) for c in p.coeffs]
    return None if any(v is None for v in out) else out


def _mod_eval(cs: list[int], x: int) -> int:
    acc = 0
    for c in reversed(cs):
        acc = (acc * x + c) % _P
    return acc


def _substitution_vanishes(curve: BivariatePoly, q: ExactPoly, r: ExactPoly) -> bool:
    """Whether F(r(q(t)), rbar(qbar(1/t))) is the zero Laurent polynomial.

    The Laurent polynomial spans at most deg(r o q) * (deg_X F + deg_Y F) + 1
    exponents, so vanishing at that many distinct nonzero rationals t is a proof.
    Each sample is first reduced mod a prime: a nonzero residue already proves
    the exact value nonzero, and only zero residues are rechecked over Q(i).
    """
    qb, rb = q.conjugate(), r.conjugate()
    span = q.degree * r.degree * (curve.degree_x + curve.degree_y)
    mods = [_mod_poly(p) for p in (q, qb, r, rb)]
    terms = [(i, j, _mod_image(c)) for (i, j), c in curve.terms.items()]
    modular = all(m is not None for m in mods) and all(v is not None for *_, v in terms)
    for t in count(1):
        if t > span + 1:
            return True
        if modular:
            mq, mqb, mr, mrb = mods
            x = _mod_eval(mr, _mod_eval(mq, t))
            y = _mod_eval(mrb, _mod_eval(mqb, pow(t, -1, _P)))
            if sum(v * pow(x, i, _P) * pow(y, j, _P) for i, j, v in terms) % _P:
                return False
        x = r(q(GaussianRational(t)))
        y = rb(qb(GaussianRational(Fraction(1, t))))
        if curve(x, y):
            return False


def is_invariant(q: ExactPoly, r: ExactPoly, method: str = "compare") -> bool:
    """C_q is mapped onto itself by (r, rbar).

    "compare" implicitizes both C_q and C_{r o q} and tests equality.
    "substitute" checks that (r, rbar) maps the parametrization of C_q into
    C_q; since both curves are irreducible images of P^1 this is equivalent.
    """
    if q.degree < 1 or r.degree < 1:
        raise ValueError("q and r must be non-constant")
    cq = implicitize_Cq(q)
    if method == "compare":
        return cq == implicitize_Cq(r.compose(q))
    if method == "substitute":
        return _substitution_vanishes(cq.poly, q, r)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Exceptional polynomials
# ---------------------------------------------------------------------------


@dataclass
class ExceptionalVerdict:
    kind: str  # "power-like", "chebyshev-like" or "none"
    exact: bool = True
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "exact": self.exact, **self.details}

    def __str__(self):
        return self.kind if self.exact else f"undecided-exactly (numeric: {self.kind})"


def _exact_root(x: GaussianRational, k: int, max_den: int = 10**9) -> GaussianRational | None:
    """Some exact k-th root of x in Q(i), or None if none is found."""
    if k == 1:
        return x
    base = complex(x)
    for j in range(k):
        z = cmath.exp((cmath.log(base) + 2j * cmath.pi * j) / k)
        cand = GaussianRational(
            Fraction(z.real).limit_denominator(max_den), Fraction(z.imag).limit_denominator(max_den)
        )
        if cand**k == x:
            return cand
    return None


def _chebyshev_match(g: list, D: int, close) -> object | None:
    """For monic centred g, the w = lambda^2 making g a scaled C_D, else None."""
    cheb = chebyshev(D).coeffs
    cD2 = cheb[D - 2]
    w = g[D - 2] / cD2
    if not close(w ** (D - 1), 1):
        return None
    for k in range(D):
        target = 0
        if (D - k) % 2 == 0:
            target = cheb[k] * w ** ((D - k) // 2)
        if not close(g[k], target):
            return None
    return w


def is_exceptional(f: ExactPoly) -> ExceptionalVerdict:
    """Classify f as conjugate to a power map, to +-C_D, or neither.

    Power-like: f = a (z - beta)^D + beta with beta the unique critical point.
    Chebyshev-like: after an affine change making f monic and centred, the
    coefficients match C_D up to z -> lambda z with lambda^(2(D-1)) = 1.
    Making f monic needs a (D-1)-th root of its leading coefficient; when that
    root is not in Q(i) the verdict is computed in floating point instead.
    """
    D = f.degree
    if D < 2:
        raise ValueError("degree must be >= 2")
    lead = f[D]
    beta = -f[D - 1] / (lead * D)
    z = ExactPoly([0, 1])
    power_form = lead * (z - beta) ** D + beta
    if f == power_form:
        return ExceptionalVerdict("power-like", True, {"beta": str(beta), "scale": str(lead)})

    # centred: f(z + beta) - beta has no z^(D-1) term
    centred = f.compose(z + beta) - beta
    a = _exact_root(ONE / lead, D - 1)
    if a is not None:
        g = [centred[k] * a ** (k - 1) for k in range(D + 1)]
        w = _chebyshev_match(g, D, lambda u, v: u == v)
        if w is None:
            return ExceptionalVerdict("none", True)
        return ExceptionalVerdict("chebyshev-like", True, _cheb_details(w, D, beta, a))

    # numeric fallback
    cen = [complex(c) for c in centred.coeffs]
    a_num = (1 / complex(lead)) ** (1 / (D - 1))
    g_num = [cen[k] * a_num ** (k - 1) for k in range(D + 1)]

    def close(u, v):
        return abs(complex(u) - complex(v)) <= NUMERIC_TOL * max(1.0, abs(complex(v)))

    # the power-like test above is exact, so only the Chebyshev case is numeric
    beta_c = complex(beta)
    gn = [complex(v) for v in g_num]
    cheb = [complex(c) for c in chebyshev(D).coeffs]
    w = gn[D - 2] / cheb[D - 2]
    ok = close(w ** (D - 1), 1) and all(
        close(gn[k], cheb[k] * w ** ((D - k) // 2) if (D - k) % 2 == 0 else 0) for k in range(D)
    )
    if ok:
        return ExceptionalVerdict(
            "chebyshev-like", False, {"beta": [beta_c.real, beta_c.imag], "w": [w.real, w.imag]}
        )
    return ExceptionalVerdict("none", False)


def _cheb_details(w, D: int, beta, a) -> dict:
    # sign s = lambda^(D-1); for even D a choice of lambda gives s = +1
    if (D - 1) % 2 == 0:
        s = w ** ((D - 1) // 2)
        sign = 1 if s == ONE else -1
    else:
        sign = 1
    return {"sign": sign, "w": str(w), "beta": str(beta), "monic_scale": str(a)}
