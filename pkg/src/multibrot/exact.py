"""Exact Gaussian rationals and polynomials over them (uni- and bivariate)."""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable


class GaussianRational:
    """a + b i with a, b exact rationals."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            re, im = re.re, re.im
        elif isinstance(re, complex):
            re, im = re.real, re.imag
        self.re = Fraction(re)
        self.im = Fraction(im)

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(x) -> "GaussianRational":
        return x if isinstance(x, GaussianRational) else GaussianRational(x)

    def __add__(self, o):
        if isinstance(o, (ExactPoly, BivariatePoly)):
            return NotImplemented
        o = self._coerce(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, o):
        if isinstance(o, (ExactPoly, BivariatePoly)):
            return NotImplemented
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        if isinstance(o, (ExactPoly, BivariatePoly)):
            return NotImplemented
        o = self._coerce(o)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, o):
        return self * self._coerce(o).inverse()

    def __rtruediv__(self, o):
        return self._coerce(o) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = GaussianRational(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # comparison ---------------------------------------------------------
    def __eq__(self, o):
        try:
            o = self._coerce(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


GQ = GaussianRational
ZERO = GaussianRational(0)
ONE = GaussianRational(1)

_NUM = r"[0-9]+(?:/[0-9]+)?"


def parse_gaussian(text: str) -> GaussianRational:
    """Parse forms like "3", "-1/2", "i", "2-3i", "1/2+1/3i"."""
    s = text.replace(" ", "").replace("I", "i").replace("j", "i")
    if not s:
        raise ValueError("empty coefficient")
    m = re.fullmatch(rf"([+-]?{_NUM})?(?:([+-])({_NUM})?\*?i)?", s)
    if m and (m.group(1) or m.group(2)):
        re_part = Fraction(m.group(1)) if m.group(1) else Fraction(0)
        im_part = Fraction(0)
        if m.group(2):
            im_part = Fraction(m.group(3) or 1) * (-1 if m.group(2) == "-" else 1)
        return GaussianRational(re_part, im_part)
    m = re.fullmatch(rf"([+-]?)({_NUM})?\*?i", s)
    if m:
        mag = Fraction(m.group(2) or 1)
        return GaussianRational(0, -mag if m.group(1) == "-" else mag)
    raise ValueError(f"cannot parse Gaussian rational {text!r}")


class ExactPoly:
    """Univariate polynomial with Gaussian-rational coefficients (index = power)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [GaussianRational(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def parse(cls, text: str) -> "ExactPoly":
        """Comma-separated coefficients from the constant term upward."""
        return cls(parse_gaussian(part) for part in text.split(","))

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> "ExactPoly":
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> GaussianRational:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def __eq__(self, other):
        return isinstance(other, ExactPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return ExactPoly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return ExactPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return ExactPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
        return ExactPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = ExactPoly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, x):
        acc = ZERO if isinstance(x, GaussianRational) else 0
        if isinstance(x, ExactPoly):
            acc = ExactPoly()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "ExactPoly") -> "ExactPoly":
        return self(inner)

    def conjugate(self) -> "ExactPoly":
        return ExactPoly(c.conjugate() for c in self.coeffs)

    def derivative(self) -> "ExactPoly":
        return ExactPoly(k * self.coeffs[k] for k in range(1, len(self.coeffs)))

    def to_complex(self) -> list[complex]:
        return [complex(c) for c in self.coeffs]

    def __repr__(self):
        return f"ExactPoly([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if mono and c == ONE:
                terms.append(mono)
            elif mono and c == -ONE:
                terms.append(f"-{mono}")
            else:
                cs = str(c)
                if c.re and c.im:
                    cs = f"({cs})"
                terms.append(cs + ("*" + mono if mono else ""))
        return " + ".join(terms).replace("+ -", "- ")


def _as_poly(x) -> ExactPoly:
    return x if isinstance(x, ExactPoly) else ExactPoly([x])


class BivariatePoly:
    """Sparse polynomial sum c_{ij} X^i Y^j over Gaussian rationals."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: GaussianRational(v) for k, v in (terms or {}).items() if v}

    @property
    def degree_x(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    @property
    def degree_y(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, BivariatePoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def leading_monomial(self) -> tuple[int, int]:
        """Lexicographically largest exponent pair (X first)."""
        return max(self.terms)

    def normalized(self) -> "BivariatePoly":
        if not self.terms:
            return self
        lead = self.terms[self.leading_monomial()]
        inv = lead.inverse()
        return BivariatePoly({k: v * inv for k, v in self.terms.items()})

    def evaluate(self, x, y):
        total = GaussianRational(0) if isinstance(x, GaussianRational) else 0
        for (i, j), c in self.terms.items():
            total = total + c * x**i * y**j
        return total

    def __call__(self, x, y):
        return self.evaluate(x, y)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j) in sorted(self.terms, reverse=True):
            c = self.terms[(i, j)]
            mono = "*".join(
                s for s in (
                    "" if i == 0 else ("X" if i == 1 else f"X^{i}"),
                    "" if j == 0 else ("Y" if j == 1 else f"Y^{j}"),
                ) if s
            )
            if mono and c == ONE:
                parts.append(mono)
            elif mono and c == -ONE:
                parts.append(f"-{mono}")
            else:
                cs = str(c)
                if c.re and c.im:
                    cs = f"({cs})"
                parts.append(cs + ("*" + mono if mono else ""))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"BivariatePoly({str(self)!r})"


def determinant(matrix: list[list[GaussianRational]]) -> GaussianRational:
    """Exact determinant by Gaussian elimination over the field Q(i)."""
    a = [list(row) for row in matrix]
    n = len(a)
    det = ONE
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det = det * p
        inv = p.inverse()
        for r in range(col + 1, n):
            if a[r][col]:
                factor = a[r][col] * inv
                row_r, row_c = a[r], a[col]
                for k in range(col, n):
                    if row_c[k]:
                        row_r[k] = row_r[k] - factor * row_c[k]
    return det
