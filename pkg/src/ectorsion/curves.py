"""Weierstrass models, naive height and the twelfth-power-free normalization.

Heights are compared strictly everywhere in this package: a curve is counted
at level ``X`` when ``max(|A|^3, B^2) < X``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import as_rational, iroot, primes_below


class SingularCurveError(ValueError):
    """Raised when a Weierstrass equation has vanishing discriminant."""


def disc_core(A: int, B: int) -> int:
    """``4A^3 + 27B^2``; the discriminant is ``-16`` times this."""
    return 4 * A * A * A + 27 * B * B


def height(A: int, B: int) -> int:
    return max(abs(A) ** 3, B * B)


@dataclass(frozen=True, order=True)
class ShortCurve:
    """``y^2 = x^3 + A x + B`` with integer, nonsingular coefficients."""

    A: int
    B: int

    def __post_init__(self):
        if disc_core(self.A, self.B) == 0:
            raise SingularCurveError(f"singular curve ({self.A}, {self.B})")

    @property
    def height(self) -> int:
        return height(self.A, self.B)

    @property
    def disc_core(self) -> int:
        return disc_core(self.A, self.B)

    def minimal(self) -> "ShortCurve":
        return ShortCurve(*minimal_reduce(self.A, self.B))

    def is_minimal(self) -> bool:
        return is_minimal(self.A, self.B)

    def to_text(self) -> str:
        return f"{self.A} {self.B}"

    @classmethod
    def from_text(cls, line: str) -> "ShortCurve":
        a, b = line.split()
        return cls(int(a), int(b))

    def to_json(self) -> dict:
        return {"A": str(self.A), "B": str(self.B)}

    @classmethod
    def from_json(cls, obj) -> "ShortCurve":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(int(obj["A"]), int(obj["B"]))


@dataclass(frozen=True)
class LongCurve:
    """``y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`` over Q."""

    a1: Fraction = Fraction(0)
    a2: Fraction = Fraction(0)
    a3: Fraction = Fraction(0)
    a4: Fraction = Fraction(0)
    a6: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    def c_invariants(self) -> tuple[Fraction, Fraction]:
        return c_invariants(self.a1, self.a2, self.a3, self.a4, self.a6)


def c_invariants(a1, a2, a3, a4, a6):
    """``(c4, c6)`` of a long Weierstrass model.

    Written with ring operations only, so the coefficients may be rationals or
    polynomials in a family parameter.
    """
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2 * b2 * b2) + 36 * b2 * b4 - 216 * b6
    return c4, c6


def long_to_short(c: LongCurve) -> tuple[Fraction, Fraction]:
    """Short model ``(A, B) = (-27 c4, -54 c6)`` isomorphic to ``c``.

    This is the usual ``(-c4/48, -c6/864)`` scaled by ``u = 6``, which keeps
    integral input integral.
    """
    c4, c6 = c.c_invariants()
    A, B = -27 * c4, -54 * c6
    if 4 * A**3 + 27 * B**2 == 0:
        raise SingularCurveError(f"singular long model {c}")
    return A, B


def clear_denominators(A, B) -> tuple[int, int]:
    """Smallest positive ``w`` with ``w^4 A, w^6 B`` integral, applied."""
    A, B = as_rational(A), as_rational(B)
    w = 1
    for den, e in ((A.denominator, 4), (B.denominator, 6)):
        # w must absorb den: for each p^k || den need p^ceil(k/e) | w
        n = den
        p = 2
        while n > 1:
            if p * p > n:
                p = n
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            if k:
                need = -(-k // e)
                have = 0
                ww = w
                while ww % p == 0:
                    ww //= p
                    have += 1
                if need > have:
                    w *= p ** (need - have)
            p += 1
    A2, B2 = A * w**4, B * w**6
    assert A2.denominator == 1 and B2.denominator == 1
    return int(A2), int(B2)


def _twelfth_free_divisor(A: int, B: int) -> int:
    """Largest ``d > 0`` with ``d^4 | A`` and ``d^6 | B``."""
    g = math.gcd(A, B)
    if g == 0:
        raise SingularCurveError("(0, 0) is singular")
    # p^4 | A and p^6 | B imply p^4 | g; A == 0 or B == 0 makes g the other one
    d = 1
    limit = iroot(abs(g), 4)
    n = abs(g)
    for p in _trial_primes(limit):
        if p > limit:
            break
        if n % p:
            continue
        va = _val(A, p)
        vb = _val(B, p)
        k = min(va // 4, vb // 6)
        if k:
            d *= p**k
        while n % p == 0:
            n //= p
        limit = min(limit, iroot(n, 4)) if n > 1 else 0
    return d


def _trial_primes(limit: int):
    if limit < 2:
        return
    if limit < 100_000:
        yield from primes_below(limit + 1)
        return
    yield from primes_below(100_000)
    p = 100_001
    while p <= limit:
        yield p
        p += 2


def _val(n: int, p: int) -> int:
    if n == 0:
        return 1 << 30
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def minimal_reduce(A: int, B: int) -> tuple[int, int]:
    """Divide out ``(d^4, d^6)`` for the largest possible ``d``.

    Only primes with ``p^4 | gcd(A, B)`` matter, so trial division stops at the
    fourth root of the gcd; no full factorization is ever needed.
    """
    if disc_core(A, B) == 0:
        raise SingularCurveError(f"singular curve ({A}, {B})")
    d = _twelfth_free_divisor(A, B)
    if d == 1:
        return A, B
    return A // d**4, B // d**6


def is_minimal(A: int, B: int) -> bool:
    if A == 0 and B == 0:
        return False
    return _twelfth_free_divisor(A, B) == 1
