"""Rational torsion of short Weierstrass curves.

:func:`torsion_subgroup` is the production path: mod-p point counts give an
order bound, then points of each admissible prime-power order are located as
integer roots of division polynomials and checked by exact addition.
:func:`nagell_lutz_oracle` is a deliberately independent slow path used by the
tests.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from .arith import (
    cubic_integer_roots,
    factorize,
    integer_roots,
    iroot,
    is_square,
    primes_below,
)
from .curves import ShortCurve, SingularCurveError, disc_core, height

# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True, order=True)
class TorsionGroup:
    """``Z/n`` (``two=False``) or ``Z/2 x Z/n`` (``two=True``)."""

    two: bool
    n: int

    def __post_init__(self):
        ok = self.n in (2, 4, 6, 8) if self.two else (1 <= self.n <= 10 or self.n == 12)
        if not ok:
            raise ValueError(f"not a Mazur group: two={self.two} n={self.n}")

    @classmethod
    def cyclic(cls, n: int) -> "TorsionGroup":
        return cls(False, n)

    @classmethod
    def product2(cls, n: int) -> "TorsionGroup":
        return cls(True, n)

    @classmethod
    def parse(cls, label: str) -> "TorsionGroup":
        s = label.replace(" ", "").replace("×", "x").replace("Z/", "").replace("ZZ", "")
        s = s.lower()
        if s in ("0", "1", "trivial"):
            return cls(False, 1)
        if "x" in s:
            a, b = s.split("x")
            if a != "2":
                raise ValueError(f"cannot parse group {label!r}")
            return cls(True, int(b))
        return cls(False, int(s))

    @property
    def order(self) -> int:
        return 2 * self.n if self.two else self.n

    @property
    def label(self) -> str:
        if self.two:
            return f"Z/2xZ/{self.n}"
        return "0" if self.n == 1 else f"Z/{self.n}"

    def __str__(self) -> str:
        return self.label

    def contains(self, other: "TorsionGroup") -> bool:
        """True if ``other`` is isomorphic to a subgroup of ``self``."""
        if other.two:
            return self.two and self.n % other.n == 0
        return self.n % other.n == 0

    def injection_count(self) -> int:
        """Number of injective homomorphisms from this group into ``(Q/Z)^2``."""
        k = self.n * self.n
        for p in _prime_divisors(self.n):
            k = k * (p * p - 1) // (p * p)
        return 2 * k if self.two else k


def _prime_divisors(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, p))]


MAZUR_GROUPS: tuple[TorsionGroup, ...] = tuple(
    [TorsionGroup.cyclic(n) for n in (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12)]
    + [TorsionGroup.product2(n) for n in (2, 4, 6, 8)]
)

D_G: dict[TorsionGroup, Fraction] = {
    TorsionGroup.cyclic(1): Fraction(6, 5),
    TorsionGroup.cyclic(2): Fraction(2),
    TorsionGroup.cyclic(3): Fraction(3),
    TorsionGroup.cyclic(4): Fraction(4),
    TorsionGroup.cyclic(5): Fraction(6),
    TorsionGroup.cyclic(6): Fraction(6),
    TorsionGroup.cyclic(7): Fraction(12),
    TorsionGroup.cyclic(8): Fraction(12),
    TorsionGroup.cyclic(9): Fraction(18),
    TorsionGroup.cyclic(10): Fraction(18),
    TorsionGroup.cyclic(12): Fraction(24),
    TorsionGroup.product2(2): Fraction(3),
    TorsionGroup.product2(4): Fraction(6),
    TorsionGroup.product2(6): Fraction(12),
    TorsionGroup.product2(8): Fraction(24),
}

TRIVIAL = TorsionGroup.cyclic(1)
_MAZUR_ORDERS = frozenset(g.order for g in MAZUR_GROUPS)


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class CurvePoint:
    """Affine point ``(x, y)``; ``x is None`` encodes the point at infinity."""

    x: Optional[Fraction] = None
    y: Optional[Fraction] = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self) -> str:
        return "O" if self.is_infinity else f"({self.x}, {self.y})"


INFINITY = CurvePoint()


def point(x, y) -> CurvePoint:
    return CurvePoint(Fraction(x), Fraction(y))


def on_curve(c: ShortCurve, P: CurvePoint) -> bool:
    if P.is_infinity:
        return True
    return P.y * P.y == P.x**3 + c.A * P.x + c.B


def add(c: ShortCurve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    if P.x == Q.x:
        if P.y == -Q.y:
            return INFINITY
        lam = (3 * P.x * P.x + c.A) / (2 * P.y)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam * lam - P.x - Q.x
    return CurvePoint(x3, lam * (P.x - x3) - P.y)


def neg(P: CurvePoint) -> CurvePoint:
    return P if P.is_infinity else CurvePoint(P.x, -P.y)


def mul(c: ShortCurve, n: int, P: CurvePoint) -> CurvePoint:
    if n < 0:
        return mul(c, -n, neg(P))
    R, Q = INFINITY, P
    while n:
        if n & 1:
            R = add(c, R, Q)
        Q = add(c, Q, Q)
        n >>= 1
    return R


def point_order(c: ShortCurve, P: CurvePoint) -> Optional[int]:
    """Least ``n <= 12`` with ``nP = O``, or ``None`` if there is none.

    By Mazur no rational torsion point has order above 12.  On an integral
    model every multiple of a torsion point is integral, so a non-integral
    multiple ends the search early.
    """
    if not on_curve(c, P):
        raise ValueError(f"{P} is not on y^2 = x^3 + {c.A}x + {c.B}")
    Q = P
    for n in range(1, 13):
        if Q.is_infinity:
            return n
        if Q.x.denominator != 1 or Q.y.denominator != 1:
            return None
        Q = add(c, Q, P)
    return None


# ---------------------------------------------------------------------------
# two- and three-torsion


def two_torsion_roots(c: ShortCurve) -> list[int]:
    return cubic_integer_roots(0, c.A, c.B)


def two_torsion_group(c: ShortCurve) -> TorsionGroup:
    """Trivial, ``Z/2`` or ``Z/2 x Z/2`` from the integer roots of the cubic."""
    k = len(two_torsion_roots(c))
    if k == 0:
        return TRIVIAL
    if k == 1:
        return TorsionGroup.cyclic(2)
    return TorsionGroup.product2(2)


def three_torsion_witness(c: ShortCurve) -> Optional[tuple[int, int]]:
    """Integers ``(a, b)`` with ``A = 6ab + 27a^4`` and ``B = b^2 - 27a^6``.

    For ``a != 0`` the value of ``b`` is forced, so a scan over
    ``|a| <= H^(1/12) + 1`` is complete.  ``a = 0`` needs ``A = 0`` and a square
    ``B``.  The witness point ``(3a^2, 9a^3 + b)`` is checked to have order 3.
    """
    A, B = c.A, c.B
    amax = iroot(height(A, B), 12) + 2
    for k in range(1, amax + 1):
        for a in (k, -k):
            num = A - 27 * a**4
            if num % (6 * a):
                continue
            b = num // (6 * a)
            if B == b * b - 27 * a**6:
                _check_three(c, a, b)
                return a, b
    if A == 0 and is_square(B):
        b = math.isqrt(B)
        _check_three(c, 0, b)
        return 0, b
    return None


def _check_three(c: ShortCurve, a: int, b: int) -> None:
    P = point(3 * a * a, 9 * a**3 + b)
    if point_order(c, P) != 3:
        raise AssertionError(f"witness {(a, b)} on {c} does not give a 3-torsion point")


# ---------------------------------------------------------------------------
# mod-p point counts


@lru_cache(maxsize=None)
def point_count_table(p: int) -> np.ndarray:
    """``T[a, b] = #E(F_p)`` for ``y^2 = x^3 + a x + b`` (p odd).

    Entries for singular ``(a, b)`` are meaningless; callers mask them.
    """
    sq = np.zeros(p, dtype=np.int64)
    ys = np.arange(p, dtype=np.int64)
    np.add.at(sq, ys * ys % p, 1)
    x = np.arange(p, dtype=np.int64)
    x3 = x * x * x % p
    b = np.arange(p, dtype=np.int64)
    table = np.empty((p, p), dtype=np.int64)
    for a in range(p):
        vals = (x3 + a * x)[None, :] + b[:, None]
        table[a] = 1 + sq[vals % p].sum(axis=1)
    table.setflags(write=False)
    return table


BOUND_PRIMES: tuple[int, ...] = tuple(p for p in primes_below(200) if p >= 5)


def torsion_order_bound(c: ShortCurve, min_primes: int = 8) -> int:
    """gcd of ``#E(F_p)`` over good primes ``p >= 5``; a multiple of ``#E(Q)_tors``.

    Uses at least ``min_primes`` good primes and keeps going while the gcd is
    not a possible torsion order.
    """
    D = disc_core(c.A, c.B)
    if D == 0:
        raise SingularCurveError(f"singular curve {c}")
    g = 0
    used = 0
    for p in BOUND_PRIMES:
        if D % p == 0:
            continue
        g = math.gcd(g, int(point_count_table(p)[c.A % p, c.B % p]))
        used += 1
        if used >= min_primes and (g in _MAZUR_ORDERS or g == 1):
            break
    return g


# ---------------------------------------------------------------------------
# division polynomials (exact integer coefficients, low degree first)


def _pmul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _psub(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _pcube(a: list[int]) -> list[int]:
    return _pmul(a, _pmul(a, a))


def division_polys(A: int, B: int, upto: int) -> list[list[int]]:
    """x-only division polynomials ``f_0..f_upto`` of ``x^3 + A x + B``.

    ``f_n = psi_n`` for odd ``n`` and ``psi_n / (2y)`` for even ``n``; both
    vanish exactly at x-coordinates of non-2-torsion points killed by ``n``.
    """
    F2 = _pmul([4 * B, 4 * A, 0, 4], [4 * B, 4 * A, 0, 4])
    f = [
        [0],
        [1],
        [1],
        [-A * A, 12 * B, 6 * A, 0, 3],
        [-2 * (8 * B * B + A**3), -8 * A * B, -10 * A * A, 40 * B, 10 * A, 0, 2],
    ]
    for n in range(5, upto + 1):
        m = n // 2
        if n % 2:
            t1 = _pmul(f[m + 2], _pcube(f[m]))
            t2 = _pmul(f[m - 1], _pcube(f[m + 1]))
            if m % 2 == 0:
                t1 = _pmul(F2, t1)
            else:
                t2 = _pmul(F2, t2)
            f.append(_psub(t1, t2))
        else:
            inner = _psub(
                _pmul(f[m + 2], _pmul(f[m - 1], f[m - 1])),
                _pmul(f[m - 2], _pmul(f[m + 1], f[m + 1])),
            )
            f.append(_pmul(f[m], inner))
    return f[: upto + 1]


def division_poly_x_roots(c: ShortCurve, n: int) -> list[int]:
    """Integer roots of the n-th x-only division polynomial (``n >= 3``)."""
    return integer_roots(division_polys(c.A, c.B, max(n, 4))[n])


def _points_with_x(c: ShortCurve, xs: Iterable[int]) -> list[CurvePoint]:
    out = []
    for x in xs:
        r = x**3 + c.A * x + c.B
        if r > 0 and is_square(r):
            y = math.isqrt(r)
            out.append(point(x, y))
            out.append(point(x, -y))
    return out


def _probe(c: ShortCurve, n: int) -> set[CurvePoint]:
    """All non-2-torsion points ``P`` with ``nP = O``."""
    found = set()
    for P in _points_with_x(c, division_poly_x_roots(c, n)):
        k = point_order(c, P)
        if k is not None and n % k == 0:
            found.add(P)
    return found


def torsion_points(c: ShortCurve, bound: Optional[int] = None) -> set[CurvePoint]:
    """Every rational torsion point of ``c`` (including ``O``).

    Each Sylow subgroup is found separately: odd primes ``q`` with ``q | bound``
    are probed with the q-th (then 9th) division polynomial, the 2-part from the
    cubic's roots and the 4th/8th division polynomials.  Mazur's list prunes
    probes that cannot succeed.
    """
    if bound is None:
        bound = torsion_order_bound(c)
    two = [point(r, 0) for r in two_torsion_roots(c)]
    n2 = len(two) + 1  # size of E[2](Q)
    pts: set[CurvePoint] = {INFINITY, *two}
    if bound == 1:
        return pts

    # 2-part
    if n2 > 1 and bound % (2 * n2) == 0:
        four = _probe(c, 4)
        pts |= four
        if four and bound % (4 * n2) == 0:
            pts |= _probe(c, 8)

    # odd part; admissible odd orders depend on the 2-part
    two_part = len(pts)
    if two_part >= 8:
        odd_allowed: tuple[int, ...] = ()
    elif two_part == 4:
        odd_allowed = (3,)
    elif two_part == 2:
        odd_allowed = (3, 5)
    else:
        odd_allowed = (3, 5, 7)
    for q in odd_allowed:
        if bound % q:
            continue
        found = _probe(c, q)
        if found and q == 3 and two_part == 1 and bound % 9 == 0:
            found |= _probe(c, 9)
        if found:
            # combine with the 2-part: every sum of a 2-power point and a q-point
            pts = {add(c, P, Q) for P in pts for Q in found | {INFINITY}}
            break  # at most one odd prime can occur (Mazur)
    return pts


def group_from_points(pts: set[CurvePoint], n2: int) -> TorsionGroup:
    size = len(pts)
    if n2 == 4:
        if size % 2:
            raise AssertionError(f"inconsistent torsion set of size {size}")
        return TorsionGroup.product2(size // 2)
    return TorsionGroup.cyclic(size)


def torsion_subgroup(c: ShortCurve, bound: Optional[int] = None) -> TorsionGroup:
    """The isomorphism type of ``E(Q)_tors``."""
    if disc_core(c.A, c.B) == 0:
        raise SingularCurveError(f"singular curve {c}")
    if bound is None:
        bound = torsion_order_bound(c)
    if bound == 1:
        return TRIVIAL
    pts = torsion_points(c, bound)
    n2 = sum(1 for P in pts if P.is_infinity or P.y == 0)
    G = group_from_points(pts, n2)
    if bound % G.order:
        raise AssertionError(f"{c}: torsion order {G.order} does not divide bound {bound}")
    return G


# ---------------------------------------------------------------------------
# independent oracle


class OracleTimeout(RuntimeError):
    """The oracle could not factor the discriminant within its time budget."""


def nagell_lutz_oracle(c: ShortCurve, time_budget: float = 10.0) -> set[CurvePoint]:
    """All torsion points by the Nagell-Lutz criterion.

    Candidates are integral points with ``y = 0`` or ``y^2 | 16 |4A^3 + 27B^2|``;
    a candidate is kept when repeated addition returns to ``O`` within 12 steps.
    """
    D = 16 * abs(disc_core(c.A, c.B))
    if D == 0:
        raise SingularCurveError(f"singular curve {c}")
    start = time.monotonic()
    fac = factorize(D)
    if time.monotonic() - start > time_budget:
        raise OracleTimeout(f"factoring {D} exceeded {time_budget}s")
    ys = [1]
    for p, e in fac.items():
        ys = [y * p**k for y in ys for k in range(e // 2 + 1)]
    pts = {INFINITY}
    for y in [0, *ys]:
        for x in cubic_integer_roots(0, c.A, c.B - y * y):
            for P in {point(x, y), point(x, -y)}:
                if point_order(c, P) is not None:
                    pts.add(P)
    return pts


def group_from_oracle(c: ShortCurve) -> TorsionGroup:
    pts = nagell_lutz_oracle(c)
    n2 = sum(1 for P in pts if P.is_infinity or P.y == 0)
    return group_from_points(pts, n2)
