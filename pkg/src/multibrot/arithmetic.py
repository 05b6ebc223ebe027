"""Primitive prime divisors of a^m - 1 and the replay of the arithmetic
argument showing that no z -> h(z) of degree D >= 2 has M_d as filled
Julia set.

The replay takes as hypothesis that the parameter rays at D^k/(d^m-1) and
d D^k/(d^m-1) land together (they would if M_d = K_h) and derives, for each
k, an explicit contradiction from a primitive prime of d^m - 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import BudgetExceededError

TRIAL_LIMIT = 10**6
RHO_BUDGET = 10**7


# ---------------------------------------------------------------------------
# Factorization
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    sieve = bytearray([1]) * (TRIAL_LIMIT + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(TRIAL_LIMIT) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, TRIAL_LIMIT + 1, i)))
    return tuple(i for i, v in enumerate(sieve) if v)


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24 and overwhelmingly reliable beyond."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    s, q = 0, n - 1
    while q % 2 == 0:
        s += 1
        q //= 2
    for a in _MR_BASES:
        x = pow(a, q, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class _Budget:
    def __init__(self, limit: int):
        self.left = limit

    def spend(self, k: int) -> None:
        self.left -= k
        if self.left < 0:
            raise BudgetExceededError("Pollard rho iteration budget exhausted")


def _brent(n: int, seed: int, budget: _Budget) -> int | None:
    """One Pollard-Brent run; returns a nontrivial factor or None."""
    y, c, m = seed % n, (2 * seed + 1) % n, 128
    g = r = q = 1
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            block = min(m, r - k)
            for _ in range(block):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            budget.spend(block)
            g = math.gcd(q, n)
            k += m
        r *= 2
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else None


def _split(n: int, budget: _Budget, out: dict) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split(r, budget, out)
        _split(r, budget, out)
        return
    seed = 1
    while True:
        f = _brent(n, seed, budget)
        if f:
            _split(f, budget, out)
            _split(n // f, budget, out)
            return
        seed += 1


def factorize(n: int, budget: int = RHO_BUDGET) -> dict[int, int]:
    """Prime factorization {p: e}: trial division to 10^6, then Pollard-Brent."""
    if n < 1:
        raise ValueError("factorize needs a positive integer")
    out: dict[int, int] = {}
    for p in _small_primes():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1:
        rest: dict[int, int] = {}
        _split(n, _Budget(budget), rest)
        for p, e in rest.items():
            out[p] = out.get(p, 0) + e
    return dict(sorted(out.items()))


def divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def _mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def cyclotomic_value(m: int, a: int) -> int:
    """Phi_m(a) = prod_{j | m} (a^j - 1)^mu(m/j), computed exactly."""
    num, den = 1, 1
    for j in divisors(m):
        mu = _mobius(m // j)
        if mu == 1:
            num *= a**j - 1
        elif mu == -1:
            den *= a**j - 1
    value, rem = divmod(num, den)
    assert rem == 0
    return value


def multiplicative_order(a: int, p: int) -> int:
    """Order of a modulo p (p prime, p not dividing a)."""
    if a % p == 0:
        raise ValueError("a is not a unit mod p")
    order = p - 1
    for q in factorize(p - 1):
        while order % q == 0 and pow(a, order // q, p) == 1:
            order //= q
    return order


def _prime_support(n: int) -> list[int]:
    return list(factorize(n)) if n > 1 else []


def _strip(value: int, primes) -> int:
    for q in primes:
        while value % q == 0:
            value //= q
    return value


def _strip_gcd(value: int, other: int) -> int:
    """Remove from value every prime that also divides ``other``."""
    g = math.gcd(value, other)
    while g > 1:
        value //= g
        g = math.gcd(value, g)
    return value


def primitive_cofactor(a: int, m: int, avoid: int = 1) -> int:
    """Product of the primitive prime powers of a^m - 1 coprime to ``avoid``.

    Every prime of Phi_m(a) is primitive unless it divides m, so stripping the
    primes of m (and of ``avoid``) needs no factorization of Phi_m(a).
    """
    value = cyclotomic_value(m, a)
    value = _strip(value, _prime_support(m))
    return _strip_gcd(value, avoid)


def has_primitive_divisor(a: int, m: int) -> bool:
    return primitive_cofactor(a, m) > 1


@dataclass
class PrimitiveDivisorReport:
    a: int
    m: int
    primitive_primes: list[int]
    factorization: dict[int, int]

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "m": self.m,
            "value": str(self.a**self.m - 1),
            "primitive_primes": [str(p) for p in self.primitive_primes],
            "factorization": [[str(p), e] for p, e in self.factorization.items()],
        }


def factor_power_minus_one(a: int, m: int, budget: int = RHO_BUDGET) -> dict[int, int]:
    """Factor a^m - 1 through its cyclotomic pieces Phi_k(a), k | m."""
    out: dict[int, int] = {}
    for k in divisors(m):
        piece = cyclotomic_value(k, a)
        if piece > 1:
            for p, e in factorize(piece, budget).items():
                out[p] = out.get(p, 0) + e
    return dict(sorted(out.items()))


def primitive_prime_divisors(a: int, m: int, budget: int = RHO_BUDGET) -> PrimitiveDivisorReport:
    if a < 2 or m < 1:
        raise ValueError("need a >= 2 and m >= 1")
    fac = factor_power_minus_one(a, m, budget)
    prim = [p for p in fac if a % p and multiplicative_order(a, p) == m]
    return PrimitiveDivisorReport(a, m, prim, fac)


def bang_bound(a: int, cap: int) -> int:
    """Least M such that a^m - 1 has a primitive prime for every M < m <= cap.

    Exceptions are classically confined to m <= 6, so ``cap`` must reach 6
    for the answer to mean anything.
    """
    if cap < 6:
        raise BudgetExceededError(f"cap {cap} < 6 cannot clear the classical exceptions")
    worst = 0
    for m in range(1, cap + 1):
        if not has_primitive_divisor(a, m):
            worst = m
    return worst


def m_of_k(d: int, D: int, k: int) -> int:
    """The unique m with d^m - 1 <= D^k (d^2 - 1) < d^(m+1) - 1."""
    if d < 2 or D < 2 or k < 0:
        raise ValueError("need d, D >= 2 and k >= 0")
    target = D**k * (d * d - 1)
    m = 0
    power = 1
    while power * d - 1 <= target:
        power *= d
        m += 1
    return m


# ---------------------------------------------------------------------------
# Replay of the contradiction
# ---------------------------------------------------------------------------


@dataclass
class ReplayRecord:
    k: int
    m: int
    prime: int | None
    congruence_solutions: list[tuple[int, int]]
    survivors_mod_p: list[tuple[int, int]]
    wake_inequality: bool
    excluded_values: list[str]
    witness: str
    contradiction: bool

    @property
    def coprime_witness(self) -> bool:
        return self.prime is not None or not self.witness.startswith("no coprime")

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "m": self.m,
            "p": None if self.prime is None else str(self.prime),
            "congruence_solutions": [list(x) for x in self.congruence_solutions],
            "survivors_mod_p": [list(x) for x in self.survivors_mod_p],
            "wake_inequality": self.wake_inequality,
            "excluded_values": self.excluded_values,
            "witness": self.witness,
            "coprime_witness": self.coprime_witness,
            "contradiction": self.contradiction,
        }


@dataclass
class ReplayReport:
    d: int
    D: int
    k_min: int
    k_max: int
    bang_M: int
    least_K: int | None
    records: list[ReplayRecord] = field(default_factory=list)

    @property
    def all_contradict(self) -> bool:
        return all(r.contradiction for r in self.records)

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "D": self.D,
            "k_range": [self.k_min, self.k_max],
            "M": self.bang_M,
            "K": self.least_K,
            "records": [r.to_dict() for r in self.records],
        }


def coprime_bang_bound(d: int, D: int, cap: int) -> int:
    """Least M > 2 such that for M <= m <= cap, d^m - 1 has a primitive prime
    not dividing D."""
    M = 3
    for m in range(3, cap + 1):
        if primitive_cofactor(d, m, D) == 1:
            M = m + 1
    return M


def _smallest_prime(n: int, budget: int) -> int | None:
    try:
        return min(factorize(n, budget))
    except BudgetExceededError:
        return None


def replay_record(d: int, D: int, k: int, budget: int = RHO_BUDGET) -> ReplayRecord:
    m = m_of_k(d, D, k)
    modulus = d**m - 1
    Dk = D**k
    cof = primitive_cofactor(d, m, D)
    p = _smallest_prime(cof, budget) if cof > 1 else None

    # (n, r) with n | m, 0 <= r < m/n and D^k (1 - d^(rn+1)) = 0 mod d^m - 1
    solutions = []
    survivors = []
    for n in divisors(m):
        for r in range(m // n):
            e = r * n + 1
            if Dk * (1 - d**e) % modulus == 0:
                solutions.append((n, r))
            # modulo a primitive prime: d^e = 1 mod p forces m | e
            if cof > 1 and e % m == 0:
                survivors.append((n, r))
    theta = Fraction(Dk, modulus)
    wake = Fraction(1, d * d - 1) <= theta <= Fraction(d, d * d - 1)
    excluded = [Fraction(modulus, d * d - 1), Fraction(d * modulus, d * d - 1)]
    equals_excluded = any(Dk == x for x in excluded)

    if cof == 1:
        # no coprime primitive prime: fall back to the congruence modulo the
        # full d^m - 1, which is exact but not guaranteed to isolate n = 1
        survivors = list(solutions)
        witness = "no coprime witness; exact congruence mod d^m-1"
        contradiction = survivors == [(1, m - 1)] and wake and not equals_excluded
    elif equals_excluded:
        witness = "D^k equals an excluded value"
        contradiction = False
    elif m > 2:
        # a primitive prime for m > 2 does not divide d^2 - 1 either
        witness = "p divides d^m-1 but not D(d^2-1)" if p else "primitive cofactor coprime to D(d^2-1)"
        contradiction = survivors == [(1, m - 1)] and wake
    else:
        witness = "exact comparison"
        contradiction = survivors == [(1, m - 1)] and wake
    return ReplayRecord(
        k, m, p, solutions, survivors, wake, [str(x) for x in excluded], witness, contradiction
    )


def replay_theorem(d: int, D: int, k_min: int, k_max: int, budget: int = RHO_BUDGET) -> ReplayReport:
    if d < 2 or D < 2:
        raise ValueError("need d, D >= 2")
    if k_min < 0 or k_max < k_min:
        raise ValueError("need 0 <= k_min <= k_max")
    cap = max(m_of_k(d, D, k_max), 6)
    M = coprime_bang_bound(d, D, cap)
    ms = {k: m_of_k(d, D, k) for k in range(0, k_max + 1)}
    least_K = next((K for K in range(k_max + 1) if all(ms[k] >= M for k in range(K, k_max + 1))), None)
    report = ReplayReport(d, D, k_min, k_max, M, least_K)
    for k in range(k_min, k_max + 1):
        report.records.append(replay_record(d, D, k, budget))
    return report
