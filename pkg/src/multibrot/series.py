"""Truncated power series and the Laurent tails z + sum b_m z^-m built on them.

Series are plain lists of coefficients (index = power of x), over any field
supporting + and * (Fractions for exact work, complex for numerics).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _zero(like):
    return like * 0


def mul(a: Sequence, b: Sequence, order: int) -> list:
    """Product truncated after x^order."""
    out = [_zero(a[0])] * (order + 1)
    for i, ai in enumerate(a[: order + 1]):
        if not ai:
            continue
        for j, bj in enumerate(b[: order + 1 - i]):
            if bj:
                out[i + j] += ai * bj
    return out


def power(a: Sequence, e: int, order: int) -> list:
    result = [a[0] ** 0] + [_zero(a[0])] * order
    base = list(a[: order + 1]) + [_zero(a[0])] * max(0, order + 1 - len(a))
    while e:
        if e & 1:
            result = mul(result, base, order)
        e >>= 1
        if e:
            base = mul(base, base, order)
    return result


def inverse(a: Sequence, order: int) -> list:
    """1/a for a series with invertible constant term."""
    if not a[0]:
        raise ZeroDivisionError("series has zero constant term")
    inv0 = 1 / a[0] if not isinstance(a[0], int) else Fraction(1, a[0])
    out = [inv0]
    for k in range(1, order + 1):
        s = _zero(inv0)
        for j in range(1, min(k, len(a) - 1) + 1):
            if a[j]:
                s += a[j] * out[k - j]
        out.append(-s * inv0)
    return out


def compose(outer: Sequence, inner: Sequence, order: int) -> list:
    """outer(inner(x)) where inner has zero constant term (Horner)."""
    if inner and inner[0]:
        raise ValueError("inner series must vanish at 0")
    zero = _zero(outer[0])
    result = [zero] * (order + 1)
    for c in reversed(list(outer[: order + 1])):
        result = mul(result, inner, order)
        result[0] += c
    return result


def derivative(a: Sequence) -> list:
    return [k * a[k] for k in range(1, len(a))] or [_zero(a[0])]


def reversion(h: Sequence, order: int) -> list:
    """Compositional inverse g of h = x + h_2 x^2 + ..., so h(g(x)) = x.

    Newton iteration g <- g - (h(g) - x) / h'(g), doubling the number of
    correct coefficients per pass.
    """
    if h[0] or h[1] != 1:
        raise ValueError("reversion needs h = x + O(x^2)")
    one = h[1]
    g = [_zero(one), one] + [_zero(one)] * (order - 1)
    dh = derivative(list(h[: order + 2]))
    prec = 1
    while prec < order:
        prec = min(2 * prec, order)
        hg = compose(h, g, prec)
        hg[1] -= one
        dhg = compose(dh, g, prec)
        step = mul(hg, inverse(dhg, prec), prec)
        g = [g[i] - step[i] for i in range(prec + 1)] + g[prec + 1 :]
    return g[: order + 1]


class LaurentTail:
    """z + sum_{m=0}^{N} b_m z^{-m}, truncated after z^{-N}.

    Internally the tail is held as P(x) = 1 + b_0 x + b_1 x^2 + ... with
    x = 1/z so that f(z) = z P(1/z); composition and reversion are done on P.
    """

    def __init__(self, coeffs: Sequence):
        self.coeffs = list(coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, m: int):
        return self.coeffs[m]

    def __eq__(self, other):
        return isinstance(other, LaurentTail) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"LaurentTail({self.coeffs!r})"

    def p_series(self) -> list:
        one = self.coeffs[0] ** 0 if self.coeffs else Fraction(1)
        return [one] + list(self.coeffs)

    @classmethod
    def from_p_series(cls, p: Sequence) -> "LaurentTail":
        return cls(list(p[1:]))

    def compose(self, inner: "LaurentTail") -> "LaurentTail":
        """(self o inner)(z), valid through z^-N for N = min of the orders."""
        n = min(self.order, inner.order) + 1
        p_out = self.p_series()
        p_in = inner.p_series()
        # 1/inner(z) = x / P_in(x)
        recip = [p_out[0] * 0] + inverse(p_in, n - 1)
        outer_of = compose(p_out, recip, n)
        return LaurentTail.from_p_series(mul(p_in, outer_of, n))

    def reverse(self) -> "LaurentTail":
        """The Laurent tail g with self(g(w)) = w through the same order."""
        n = self.order + 1
        p = self.p_series()
        # h(y) = y / P(y) is 1/f(1/y); its inverse is 1/g(1/x)
        h = [p[0] * 0] + inverse(p, n)
        r = reversion(h, n + 1)
        # P_g(x) = x / r(x)
        return LaurentTail.from_p_series(inverse(r[1:], n))

    def __call__(self, z: complex) -> complex:
        x = 1 / z
        acc = 0j
        for b in reversed(self.coeffs):
            acc = acc * x + complex(b)
        return z + acc

    def derivative_at(self, z: complex) -> complex:
        x = 1 / z
        acc = 0j
        for m in range(self.order, 0, -1):
            acc = acc * x - m * complex(self.coeffs[m])
        return 1 + acc * x * x

    def truncate(self, order: int) -> "LaurentTail":
        return LaurentTail(self.coeffs[: order + 1])

    def as_strings(self) -> list[list[str]]:
        return [[str(m), str(b)] for m, b in enumerate(self.coeffs)]
