"""Exact integer and rational helpers shared by the rest of the package.

Rationals are plain :class:`fractions.Fraction` values, which are always kept
in lowest terms with a positive denominator.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

Rational = Fraction


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-2/27"`` to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass an int, Fraction or string")
    return Fraction(x)


# ---------------------------------------------------------------------------
# integer roots and primes


def icbrt(n: int) -> int:
    """Floor of the real cube root of ``n`` (works for negative ``n``)."""
    if n < 0:
        return -icbrt_ceil(-n)
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + 2) // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            break
        x = y
    while x * x * x > n:
        x -= 1
    while (x + 1) ** 3 <= n:
        x += 1
    return x


def icbrt_ceil(n: int) -> int:
    r = icbrt(n) if n >= 0 else -icbrt(-n)
    return r if r * r * r >= n else r + 1


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a non-negative integer."""
    if n < 0:
        raise ValueError("iroot needs n >= 0")
    if n < 2 or k == 1:
        return n
    x = 1 << (-(-n.bit_length() // k))
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


@lru_cache(maxsize=None)
def primes_below(n: int) -> tuple[int, ...]:
    """All primes ``p < n`` by a plain sieve."""
    if n < 3:
        return ()
    sieve = bytearray([1]) * n
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n - 1) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n, p)))
    return tuple(i for i in range(n) if sieve[i])


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n % p == 0:
            return n == p
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int, trial_limit: int = 10_000) -> dict[int, int]:
    """Prime factorization of ``|n|`` by trial division, finished with Pollard rho."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    for p in primes_below(trial_limit):
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.extend((d, m // d))
    return out


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
        c += 1


# ---------------------------------------------------------------------------
# multiplicative functions


def mobius(n: int) -> int:
    """Möbius function of a positive integer."""
    if n < 1:
        raise ValueError(f"mobius is defined for n >= 1, got {n}")
    sign = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            sign = -sign
        p += 1 if p == 2 else 2
    if n > 1:
        sign = -sign
    return sign


def mobius_table(n: int) -> list[int]:
    """``mu[0..n]`` by a linear sieve; ``mu[0]`` is set to 0."""
    mu = [1] * (n + 1)
    if n >= 0:
        mu[0] = 0
    is_comp = bytearray(n + 1)
    primes: list[int] = []
    for i in range(2, n + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            if i * p > n:
                break
            is_comp[i * p] = 1
            if i % p == 0:
                mu[i * p] = 0
                break
            mu[i * p] = -mu[i]
    return mu


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with the B_1 = -1/2 convention."""
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    b = a[0]
    return -b if n == 1 else b


def zeta(s: int) -> float:
    """Riemann zeta at an integer ``s >= 2``.

    Even arguments use the exact Bernoulli closed form.  Odd arguments fall back
    to a partial sum with an Euler-Maclaurin tail, good to ~1e-15.
    """
    if not isinstance(s, int) or s < 2:
        raise ValueError(f"zeta needs an integer s >= 2, got {s!r}")
    if s % 2 == 0:
        b = bernoulli(s)
        coeff = abs(b) * Fraction(2 ** (s - 1), math.factorial(s))
        return float(coeff) * math.pi**s
    n = 50
    head = math.fsum(k ** (-s) for k in range(1, n))
    tail = (
        n ** (1 - s) / (s - 1)
        + 0.5 * n ** (-s)
        + s * n ** (-s - 1) / 12
        - s * (s + 1) * (s + 2) * n ** (-s - 3) / 720
        + s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * n ** (-s - 5) / 30240
    )
    return head + tail


def zeta_partial_with_tail(s: int, terms: int) -> tuple[float, float]:
    """Partial sum of ``n^-s`` for ``n <= terms`` and the integral tail bound."""
    head = math.fsum(k ** (-float(s)) for k in range(terms, 0, -1))
    return head, terms ** (1 - s) / (s - 1)


# ---------------------------------------------------------------------------
# valuations


def valuation(x, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = as_rational(x)
    if x == 0:
        raise ValueError("valuation of 0 is infinite")
    if p < 2:
        raise ValueError(f"{p} is not a prime")
    return _int_val(x.numerator, p) - _int_val(x.denominator, p)


def _int_val(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# polynomials


class RatPoly:
    """Polynomial with Fraction coefficients, stored low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def from_strings(cls, items: Sequence[str]) -> "RatPoly":
        return cls(Fraction(s) for s in items)

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, t) -> Fraction:
        return poly_eval(self, t)

    def __eq__(self, other) -> bool:
        return isinstance(other, RatPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RatPoly([{', '.join(str(c) for c in self.coeffs)}])"

    def __add__(self, other: "RatPoly") -> "RatPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RatPoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "RatPoly":
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + (-other)

    def __mul__(self, other) -> "RatPoly":
        if not isinstance(other, RatPoly):
            k = as_rational(other)
            return RatPoly(c * k for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return RatPoly(out)

    __rmul__ = __mul__

    def divmod(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        lead = other.coeffs[-1]
        while len(rem) >= len(other.coeffs) and rem:
            shift = len(rem) - len(other.coeffs)
            k = rem[-1] / lead
            q[shift] = k
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= k * c
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return RatPoly(q), RatPoly(rem)

    def monic(self) -> "RatPoly":
        return self * (1 / self.coeffs[-1]) if self.coeffs else self

    def denominator_lcm(self) -> int:
        return math.lcm(1, *(c.denominator for c in self.coeffs))


def poly_eval(f: RatPoly, t) -> Fraction:
    """Exact value of ``f(t)`` by Horner's rule."""
    t = as_rational(t)
    acc = Fraction(0)
    for c in reversed(f.coeffs):
        acc = acc * t + c
    return acc


def poly_gcd(f: RatPoly, g: RatPoly) -> RatPoly:
    """Monic gcd over Q (zero if both inputs are zero)."""
    while not g.is_zero():
        f, g = g, f.divmod(g)[1]
    return f.monic()


def homogenize_eval(f: RatPoly, a: int, b: int, weight: int) -> Fraction:
    """``b**weight * f(a/b)`` computed without division when ``weight >= deg f``."""
    acc = Fraction(0)
    for k, c in enumerate(f.coeffs):
        acc += c * a**k * b ** (weight - k)
    return acc


# ---------------------------------------------------------------------------
# integer roots of integer polynomials


def cubic_integer_roots(a: int, b: int, c: int) -> list[int]:
    """Sorted distinct integer roots of ``x^3 + a x^2 + b x + c``.

    The cubic is split at its critical points into monotone pieces and each
    piece is searched by integer bisection, so the answer is exact.
    """
    f = lambda x: ((x + a) * x + b) * x + c  # noqa: E731
    bound = 1 + max(abs(a), abs(b), abs(c))
    found: set[int] = set()
    pieces: list[tuple[int, int]] = []
    disc = a * a - 3 * b  # critical points: (-a +- sqrt(disc)) / 3
    if disc > 0:
        s = math.isqrt(disc)
        windows = [
            ((-a - s - 1) // 3 - 1, (-a - s) // 3 + 2),
            ((-a + s) // 3 - 1, (-a + s + 1) // 3 + 2),
        ]
        for lo, hi in windows:
            for x in range(lo, hi + 1):
                if f(x) == 0:
                    found.add(x)
        pieces = [(-bound, windows[0][0]), (windows[0][1], windows[1][0]), (windows[1][1], bound)]
    else:
        pieces = [(-bound, bound)]
    for lo, hi in pieces:
        if lo > hi:
            continue
        flo, fhi = f(lo), f(hi)
        if flo == 0:
            found.add(lo)
        if fhi == 0:
            found.add(hi)
        if flo == 0 or fhi == 0 or (flo < 0) == (fhi < 0):
            continue
        inc = fhi > flo
        while hi - lo > 1:
            mid = (lo + hi) // 2
            fm = f(mid)
            if fm == 0:
                found.add(mid)
                break
            if (fm < 0) == inc:
                lo = mid
            else:
                hi = mid
    return sorted(found)


def int_poly_eval(coeffs: Sequence[int], x: int) -> int:
    """Exact Horner evaluation of a low-degree-first integer polynomial."""
    acc = 0
    for a in reversed(coeffs):
        acc = acc * x + a
    return acc


def _roots_mod(coeffs: Sequence[int], q: int):
    import numpy as np

    xs = np.arange(q, dtype=np.int64)
    acc = np.zeros(q, dtype=np.int64)
    for a in reversed(coeffs):
        acc = (acc * xs + a % q) % q
    return [int(r) for r in np.flatnonzero(acc == 0)]


def integer_roots(coeffs: Sequence[int]) -> list[int]:
    """All integer roots of an integer polynomial (low degree first).

    Roots are found modulo a small prime ``q`` at which each of them is simple,
    Hensel-lifted past twice the Cauchy bound and confirmed by exact
    evaluation.  Repeated integer roots are not supported; every caller here
    passes a squarefree polynomial.
    """
    cs = [int(a) for a in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        raise ValueError("the zero polynomial has every integer as a root")
    found: list[int] = []
    if cs[0] == 0:
        found.append(0)
        while cs[0] == 0:
            cs.pop(0)
    if len(cs) <= 1:
        return found
    g = 0
    for a in cs:
        g = math.gcd(g, a)
    cs = [a // g for a in cs]
    d = len(cs) - 1
    lead = cs[-1]
    bound = 1 + max(abs(a) for a in cs[:-1]) // abs(lead) + 1
    deriv = [k * cs[k] for k in range(1, d + 1)]
    for q in _lift_primes():
        if lead % q == 0:
            continue
        roots = _roots_mod(cs, q)
        if any(int_poly_eval(deriv, r) % q == 0 for r in roots):
            continue
        for r in roots:
            M = q
            while M <= 2 * bound:
                M2 = M * M
                r = (r - int_poly_eval(cs, r) * pow(int_poly_eval(deriv, r), -1, M2)) % M2
                M = M2
            x = r if r <= M // 2 else r - M
            if int_poly_eval(cs, x) == 0:
                found.append(x)
        return sorted(found)
    raise ArithmeticError("no prime separating the roots was found")


def _lift_primes():
    return (p for p in primes_below(60_000) if p >= 101)
