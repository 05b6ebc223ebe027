from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from multibrot.arithmetic import (
    bang_bound,
    cyclotomic_value,
    factor_power_minus_one,
    factorize,
    has_primitive_divisor,
    is_prime,
    m_of_k,
    multiplicative_order,
    primitive_prime_divisors,
    replay_record,
    replay_theorem,
)
from multibrot.errors import BudgetExceededError


@given(st.integers(1, 10**15))
def test_factorize_matches_sympy(n):
    assert factorize(n) == sympy.factorint(n)


@pytest.mark.parametrize("n", [2**61 - 1, (2**31 - 1) * (2**61 - 1), 10**18 + 9, 600851475143, 2**64 - 1])
def test_factorize_large(n):
    assert factorize(n) == sympy.factorint(n)


def test_factorize_guards():
    with pytest.raises(ValueError):
        factorize(0)
    with pytest.raises(BudgetExceededError):
        factorize((2**61 - 1) * (2**89 - 1), budget=10)


@given(st.integers(2, 10**6))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


@given(st.integers(1, 40), st.integers(2, 12))
def test_cyclotomic_values(m, a):
    x = sympy.Symbol("x")
    assert cyclotomic_value(m, a) == sympy.cyclotomic_poly(m, x).subs(x, a)


@given(st.integers(2, 30), st.integers(1, 30))
def test_power_minus_one_factorization(a, m):
    assert factor_power_minus_one(a, m) == sympy.factorint(a**m - 1)


def test_primitive_prime_examples():
    assert primitive_prime_divisors(2, 6).primitive_primes == []
    assert primitive_prime_divisors(2, 5).primitive_primes == [31]
    assert primitive_prime_divisors(2, 9).primitive_primes == [73]
    assert primitive_prime_divisors(2, 1).primitive_primes == []
    assert primitive_prime_divisors(3, 2).primitive_primes == []
    assert primitive_prime_divisors(10, 6).primitive_primes == [7, 13]


@given(st.integers(2, 12), st.integers(1, 24))
def test_primitive_primes_by_order(a, m):
    report = primitive_prime_divisors(a, m)
    brute = [p for p in sorted(sympy.factorint(a**m - 1)) if all((a**j - 1) % p for j in range(1, m))]
    assert report.primitive_primes == brute
    assert has_primitive_divisor(a, m) == bool(brute)
    for p in report.primitive_primes:
        assert multiplicative_order(a, p) == m == sympy.n_order(a, p)


def test_bang_examples():
    assert bang_bound(2, 50) == 6
    assert bang_bound(3, 50) == 2
    assert bang_bound(7, 40) == 2  # 7^2 - 1 = 48 has no primitive prime
    assert bang_bound(5, 40) == 0
    with pytest.raises(BudgetExceededError):
        bang_bound(2, 5)


def test_m_of_k():
    assert m_of_k(2, 3, 5) == 9
    assert m_of_k(2, 2, 0) == 2
    for d in range(2, 6):
        for D in range(2, 6):
            for k in range(12):
                m = m_of_k(d, D, k)
                assert d**m - 1 <= D**k * (d * d - 1) < d ** (m + 1) - 1
    with pytest.raises(ValueError):
        m_of_k(1, 2, 3)


@given(st.integers(2, 6), st.integers(2, 6), st.integers(0, 30))
def test_m_of_k_monotone(d, D, k):
    assert m_of_k(d, D, k + 1) >= m_of_k(d, D, k)


def test_replay_example():
    rec = replay_record(2, 3, 5)
    assert (rec.m, rec.prime) == (9, 73)
    assert rec.contradiction and rec.wake_inequality
    assert rec.survivors_mod_p == [(1, 8)]
    theta = Fraction(3**5, 2**9 - 1)
    assert Fraction(1, 3) <= theta <= Fraction(2, 3)


def test_replay_equal_degrees():
    report = replay_theorem(2, 2, 2, 10)
    assert report.all_contradict
    assert [r.k for r in report.records] == list(range(2, 11))


@given(st.integers(2, 5), st.integers(2, 5), st.integers(1, 12))
def test_replay_records_are_consistent(d, D, k):
    rec = replay_record(d, D, k)
    modulus = d**rec.m - 1
    # the congruence solutions are exactly those that hold in integers
    for n, r in rec.congruence_solutions:
        assert D**k * (1 - d ** (r * n + 1)) % modulus == 0
    if rec.prime is not None:
        assert multiplicative_order(d, rec.prime) == rec.m
        assert D % rec.prime
        if rec.m > 2:
            assert (d * d - 1) % rec.prime
        # modulo p only e = rn + 1 divisible by m survives
        assert all((r * n + 1) % rec.m == 0 for n, r in rec.survivors_mod_p)


@given(st.integers(2, 6), st.integers(2, 6))
def test_replay_order_law(d, D):
    # if a prime p has order m modulo d then d^e = 1 mod p exactly when m | e
    report = replay_theorem(d, D, 1, 8)
    for rec in report.records:
        if rec.prime is None:
            continue
        for e in range(1, 3 * rec.m):
            assert (pow(d, e, rec.prime) == 1) == (e % rec.m == 0)


def test_replay_guards():
    with pytest.raises(ValueError):
        replay_theorem(2, 3, 5, 4)
    with pytest.raises(ValueError):
        replay_theorem(1, 3, 0, 4)


def test_replay_bound_and_least_k():
    report = replay_theorem(2, 3, 1, 20)
    assert report.least_K is not None
    for k in range(report.least_K, 21):
        assert m_of_k(2, 3, k) >= report.bang_M
    late = [r for r in report.records if r.k >= report.least_K]
    assert late and all(r.contradiction for r in late)
    # k = 3 gives m = 6, the classical exception for base 2
    early = {r.k: r for r in report.records}[3]
    assert early.m == 6 and early.prime is None and not early.contradiction
