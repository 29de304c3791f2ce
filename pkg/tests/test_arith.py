import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ectorsion.arith import (
    RatPoly,
    as_rational,
    bernoulli,
    cubic_integer_roots,
    factorize,
    homogenize_eval,
    icbrt,
    icbrt_ceil,
    integer_roots,
    iroot,
    is_prime,
    is_square,
    mobius,
    mobius_table,
    poly_gcd,
    primes_below,
    valuation,
    zeta,
)


@given(st.integers(-(10**40), 10**40))
def test_icbrt_is_floor(n):
    r = icbrt(n)
    assert r**3 <= n < (r + 1) ** 3


@given(st.integers(-(10**30), 10**30))
def test_icbrt_ceil(n):
    r = icbrt_ceil(n)
    assert (r - 1) ** 3 < n <= r**3


@given(st.integers(0, 10**60), st.integers(1, 13))
def test_iroot_is_floor(n, k):
    r = iroot(n, k)
    assert r**k <= n < (r + 1) ** k


def test_iroot_rejects_negative():
    with pytest.raises(ValueError):
        iroot(-1, 2)


@given(st.integers(0, 10**20))
def test_is_square(n):
    assert is_square(n) == (math.isqrt(n) ** 2 == n)
    assert is_square(n * n)


def test_primes_below_and_is_prime():
    ps = primes_below(1000)
    assert len(ps) == 168
    assert all(is_prime(p) for p in ps)
    assert [n for n in range(1000) if is_prime(n)] == list(ps)
    assert is_prime(2**61 - 1) and not is_prime(2**61 + 1)


@given(st.integers(1, 10**12))
def test_factorize_round_trip(n):
    f = factorize(n)
    assert math.prod(p**e for p, e in f.items()) == n
    assert all(is_prime(p) for p in f)


def test_factorize_large_semiprime():
    p, q = 1_000_000_007, 998_244_353
    assert factorize(p * q * 12) == {2: 2, 3: 1, p: 1, q: 1}


def test_mobius_values():
    assert [mobius(n) for n in range(1, 13)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]
    tab = mobius_table(500)
    assert all(tab[n] == mobius(n) for n in range(1, 501))
    # sum_{d | n} mu(d) = [n == 1]
    for n in range(1, 200):
        assert sum(tab[d] for d in range(1, n + 1) if n % d == 0) == (n == 1)


def test_bernoulli():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(10) == Fraction(5, 66)
    assert bernoulli(12) == Fraction(-691, 2730)
    assert bernoulli(7) == 0


@pytest.mark.parametrize("s", [2, 3, 4, 5, 6, 7, 10, 12])
def test_zeta_against_mpmath(s):
    assert zeta(s) == pytest.approx(float(mpmath.zeta(s)), rel=1e-14)


def test_zeta_rejects_bad_argument():
    with pytest.raises(ValueError):
        zeta(1)


def test_valuation():
    assert valuation(Fraction(12, 5), 2) == 2
    assert valuation(Fraction(12, 5), 5) == -1
    with pytest.raises(ValueError):
        valuation(0, 3)


def test_as_rational():
    assert as_rational("-2/27") == Fraction(-2, 27)
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_ratpoly_arithmetic():
    f = RatPoly([1, 1])  # 1 + t
    g = RatPoly([-1, 1])  # -1 + t
    assert f * g == RatPoly([-1, 0, 1])
    assert (f * g).divmod(f) == (g, RatPoly([]))
    assert poly_gcd(f * f * g, f * RatPoly([3, 0, 1])) == f
    assert f(Fraction(1, 2)) == Fraction(3, 2)
    assert homogenize_eval(RatPoly([1, 2, 3]), 2, 5, 2) == 1 * 25 + 2 * 2 * 5 + 3 * 4


def _expand_monic(roots, extra=()):
    """Coefficients, high degree first, of prod (x - r) times the monic factor ``extra``."""
    cs = [1]
    for r in roots:
        cs = [a - r * b for a, b in zip(cs + [0], [0] + cs)]
    if extra:
        out = [0] * (len(cs) + len(extra) - 1)
        for i, a in enumerate(cs):
            for j, b in enumerate(extra):
                out[i + j] += a * b
        cs = out
    return cs


@given(st.lists(st.integers(-500, 500), min_size=3, max_size=3))
def test_cubic_integer_roots_split(roots):
    _, a, b, c = _expand_monic(roots)
    assert cubic_integer_roots(a, b, c) == sorted(set(roots))


@given(st.integers(-500, 500), st.integers(1, 10**6))
def test_cubic_integer_roots_one_real_factor(r, k):
    # (x - r)(x^2 + k) has exactly one integer root
    _, a, b, c = _expand_monic([r], [1, 0, k])
    assert cubic_integer_roots(a, b, c) == [r]


@given(st.lists(st.integers(-(10**6), 10**6), min_size=1, max_size=6, unique=True), st.integers(1, 50))
def test_integer_roots_recovers_planted_roots(roots, lead):
    # lead * prod (x - r) * (x^2 + 3), low degree first
    p = [lead]
    for r in roots:
        p = [(p[k - 1] if k else 0) - r * (p[k] if k < len(p) else 0) for k in range(len(p) + 1)]
    q = [0] * (len(p) + 2)
    for k, a in enumerate(p):
        q[k] += 3 * a
        q[k + 2] += a
    assert integer_roots(q) == sorted(roots)


def test_integer_roots_brute_force_small():
    for cs in ([6, -5, 1], [0, 0, 1, 1], [-8, 0, 0, 1], [5, 0, 1], [2, 3, 1, 0, 0]):
        want = sorted({x for x in range(-100, 101) if sum(c * x**k for k, c in enumerate(cs)) == 0})
        got = integer_roots(cs)
        assert got == want


def test_integer_roots_zero_polynomial():
    with pytest.raises(ValueError):
        integer_roots([0, 0])
