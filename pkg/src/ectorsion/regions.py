"""Lattice points in the regions R_1, R_2, R_3 and the constants c_1, c_2, c_3.

``T_1`` is the identity, ``T_2(a, b) = (a, b^3 + ab)`` parametrizes curves
with a rational 2-torsion point and ``T_3(a, b) = (6ab + 27a^4, b^2 - 27a^6)``
those with a rational 3-torsion point.  ``R_i(X)`` is the set of ``(a, b)``
whose image has height ``< X``; membership is always decided with integers.

Breakpoints.  The two outer breakpoints of the piecewise description of
``R_3^+`` sit where ``27 a^4 = 1``, i.e. ``alpha = -+1/sqrt(3)``.  Using
``-+sqrt(3)`` instead puts ``beta_2`` below ``beta_1``; both choices give the
same area because only ``|beta_2| = |beta_5|`` enters.  :func:`betas` takes
the convention as an argument and defaults to the consistent one.
"""

from __future__ import annotations

import math
from decimal import Decimal, localcontext
from fractions import Fraction
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterator, Optional

import numpy as np

from .arith import icbrt, iroot, mobius_table, primes_below, zeta
from .curves import disc_core, height, minimal_reduce

D = {1: (6, 5), 2: (2, 1), 3: (3, 1)}  # d_i as (num, den)
E = {1: 2, 2: 3, 3: 4}

C1_PRINTED = 3.9960
C2_PRINTED = 3.1969
C3_PRINTED = 1.5221
ALPHA_PRINTED = {0: -2.01637, 1: -1.22259, 3: 0.08711, 4: 0.08011}
I_PLUS_PRINTED = 0.33383
I_MINUS_PRINTED = 0.32030


class BetaOrderError(ArithmeticError):
    """The beta breakpoints are not strictly increasing."""


class SieveMismatch(AssertionError):
    """The Moebius and direct counts disagree."""


def d_value(i: int) -> float:
    p, q = D[i]
    return p / q


# ---------------------------------------------------------------------------
# algebraic constants


def bisect_root(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-15) -> float:
    flo = f(lo)
    if flo == 0:
        return lo
    if (flo < 0) == (f(hi) < 0):
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def alpha_pm() -> tuple[float, float]:
    """Real roots of ``x^3 + x - 1`` and ``x^3 - x - 1``."""
    plus = bisect_root(lambda x: x**3 + x - 1, 0.0, 1.0)
    minus = bisect_root(lambda x: x**3 - x - 1, 1.0, 2.0)
    return plus, minus


def _real_roots(f: Callable[[float], float], lo: float, hi: float, steps: int = 4000) -> list[float]:
    xs = np.linspace(lo, hi, steps + 1)
    roots = []
    prev = f(xs[0])
    for k in range(1, len(xs)):
        cur = f(xs[k])
        if prev == 0:
            roots.append(float(xs[k - 1]))
        elif (prev < 0) != (cur < 0) and cur != 0:
            roots.append(bisect_root(f, float(xs[k - 1]), float(xs[k])))
        prev = cur
    return roots


def quartic_roots() -> tuple[float, float, float, float]:
    """``(alpha_4, alpha_1, alpha_3, alpha_0)``: positive/negative roots of ``3x^4 +- 6x^2 + 12x - 1``."""
    fp = lambda x: 3 * x**4 + 6 * x**2 + 12 * x - 1  # noqa: E731
    fm = lambda x: 3 * x**4 - 6 * x**2 + 12 * x - 1  # noqa: E731
    out = []
    for f in (fp, fm):
        # every root lies within the Cauchy bound 1 + 12/3
        rs = _real_roots(f, -5.0, 5.0)
        if len(rs) != 2 or not (rs[0] < 0 < rs[1]):
            raise ArithmeticError(f"expected one negative and one positive root, got {rs}")
        out.append((rs[1], rs[0]))
    (a4, a1), (a3, a0) = out
    return a4, a1, a3, a0


def alphas(convention: str = "corrected") -> list[float]:
    a4, a1, a3, a0 = quartic_roots()
    if convention == "corrected":
        outer = 1 / math.sqrt(3)
    elif convention == "printed":
        outer = math.sqrt(3)
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return [a0, a1, -outer, a3, a4, outer]


def raw_betas(convention: str = "corrected") -> list[float]:
    """``sgn(alpha_i) sqrt(|alpha_i|/3)`` with ``beta_3`` negative, unchecked."""
    bs = [math.copysign(math.sqrt(abs(x) / 3), x) for x in alphas(convention)]
    bs[3] = -abs(bs[3])
    return bs


def betas(convention: str = "corrected") -> list[float]:
    """Breakpoints ``beta_0 < ... < beta_5``; raises if they are out of order."""
    bs = raw_betas(convention)
    for k in range(5):
        if not bs[k] < bs[k + 1]:
            raise BetaOrderError(f"beta_{k} = {bs[k]:.6f} is not below beta_{k + 1} = {bs[k + 1]:.6f}")
    return bs


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float = 1e-12, depth: int = 60) -> float:
    """Adaptive Simpson rule with Richardson correction."""

    def simpson(fa, fm, fb, lo, hi):
        return (hi - lo) / 6 * (fa + 4 * fm + fb)

    def rec(lo, hi, fa, fm, fb, whole, eps, level):
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, lo, mid)
        right = simpson(fm, frm, fb, mid, hi)
        delta = left + right - whole
        if level <= 0 or abs(delta) <= 15 * eps:
            return left + right + delta / 15
        return rec(lo, mid, fa, flm, fm, left, eps / 2, level - 1) + rec(mid, hi, fm, frm, fb, right, eps / 2, level - 1)

    fa, fb, fm = f(a), f(b), f(0.5 * (a + b))
    return rec(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, depth)


def integral_I(sign: int, convention: str = "corrected") -> float:
    """``I_+`` (sign=+1) or ``I_-`` (sign=-1)."""
    bs = betas(convention) if convention == "corrected" else raw_betas(convention)
    if sign > 0:
        return adaptive_simpson(lambda a: math.sqrt(1 + 27 * a**6), bs[3], bs[4], 1e-12)

    def g(a):
        r = -1 + 27 * a**6
        if r < -1e-12:
            raise ArithmeticError(f"negative radicand {r} at a={a}")
        return math.sqrt(max(r, 0.0))

    return adaptive_simpson(g, bs[0], bs[1], 1e-12)


def area3_plus(convention: str = "corrected") -> float:
    b = betas(convention) if convention == "corrected" else raw_betas(convention)
    Ip, Im = integral_I(1, convention), integral_I(-1, convention)
    lg = math.log((b[0] * b[1] * b[5]) / (b[2] * b[3] * b[4])) / 6
    quart = 9 / 8 * (b[0] ** 4 + b[2] ** 4 + b[4] ** 4 - b[1] ** 4 - b[3] ** 4 - b[5] ** 4)
    return Ip - Im + lg + quart


def area(i: int) -> float:
    """Area of ``R_i(1)``."""
    if i == 1:
        return 4.0
    if i == 2:
        ap, am = alpha_pm()
        return 2 * math.log(am / ap) + 4 / 3 * (ap + am)
    if i == 3:
        return 2 * area3_plus()
    raise ValueError(f"no region R_{i}")


def zeta_arg(i: int) -> int:
    p, q = D[i]
    return 12 * q // p


def c_constant(i: int) -> float:
    return area(i) / zeta(zeta_arg(i))


@dataclass
class ConstantsReport:
    alpha_plus: float
    alpha_minus: float
    alpha: list
    beta: list
    beta_printed_convention: list
    beta_printed_convention_increasing: bool
    I_plus: float
    I_minus: float
    area1: float
    area2: float
    area3_plus: float
    area3: float
    zeta4: float
    zeta6: float
    zeta10: float
    c1: float
    c2: float
    c3: float
    c2_printed: float = C2_PRINTED
    c3_printed: float = C3_PRINTED
    c1_printed: float = C1_PRINTED
    flags: dict = field(default_factory=dict)
    z3_sign: Optional[dict] = None

    def to_json(self) -> dict:
        return asdict(self)


def constants_report(with_families: bool = True) -> ConstantsReport:
    ap, am = alpha_pm()
    bs = betas()
    raw = raw_betas("printed")
    inc = all(raw[k] < raw[k + 1] for k in range(5))
    a2, a3p = area(2), area3_plus()
    z4, z6, z10 = zeta(4), zeta(6), zeta(10)
    c1, c2, c3 = 4 / z10, a2 / z6, 2 * a3p / z4
    flags = {
        "c1": _flag(c1, C1_PRINTED, 5e-5),
        "c2": _flag(c2, C2_PRINTED, 5e-4),
        "c3": _flag(c3, C3_PRINTED, 5e-4),
        "beta_order_printed_alphas": "ordered" if inc else "beta_1 > beta_2 with alpha_2 = -sqrt(3)",
    }
    z3 = None
    if with_families:
        from .families import z3_sign_adjudication

        adj = z3_sign_adjudication()
        z3 = {"winner": adj["winner"], "plus_passed": adj["+"]["passed"], "minus_passed": adj["-"]["passed"]}
    return ConstantsReport(
        alpha_plus=ap,
        alpha_minus=am,
        alpha=alphas(),
        beta=bs,
        beta_printed_convention=raw,
        beta_printed_convention_increasing=inc,
        I_plus=integral_I(1),
        I_minus=integral_I(-1),
        area1=area(1),
        area2=a2,
        area3_plus=a3p,
        area3=2 * a3p,
        zeta4=z4,
        zeta6=z6,
        zeta10=z10,
        c1=c1,
        c2=c2,
        c3=c3,
        flags=flags,
        z3_sign=z3,
    )


def _flag(value: float, printed: float, tol: float) -> str:
    return "consistent" if abs(value - printed) <= tol else "formula/printed mismatch"


# ---------------------------------------------------------------------------
# maps and exact membership


def T_map(i: int, a: int, b: int) -> tuple[int, int]:
    if i == 1:
        return a, b
    if i == 2:
        return a, b**3 + a * b
    if i == 3:
        return 6 * a * b + 27 * a**4, b * b - 27 * a**6
    raise ValueError(f"no map T_{i}")


def _caps(X: int) -> tuple[int, int]:
    """Largest ``|A|`` and ``|B|`` with ``|A|^3 < X`` and ``B^2 < X``."""
    if X < 1:
        return -1, -1
    return icbrt(X - 1), math.isqrt(X - 1)


def in_region(i: int, X: int, a: int, b: int) -> bool:
    A, B = T_map(i, a, b)
    return abs(A) ** 3 < X and B * B < X


# ---------------------------------------------------------------------------
# enumeration


def _isqrt_ceil(n: int) -> int:
    if n <= 0:
        return 0
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def _floordiv(p: int, q: int) -> int:
    return p // q


def _ceildiv(p: int, q: int) -> int:
    return -((-p) // q)


def _rows(i: int, X: int) -> Iterator[tuple[int, int, int, int]]:
    """Exact row descriptions ``(fixed, lo, hi, skip)``.

    For ``i = 1, 3`` the fixed coordinate is ``a`` and ``b`` runs over
    ``[lo, hi]``; for ``i = 2`` the fixed coordinate is ``b`` and ``a`` runs.
    For ``i = 3`` values with ``b^2 < skip`` are excluded.
    """
    cA, cB = _caps(X)
    if cA < 0:
        return
    if i == 1:
        for a in range(-cA, cA + 1):
            yield a, -cB, cB, 0
        return
    if i == 2:
        yield 0, -cA, cA, 0
        for sgn in (1, -1):
            b = sgn
            while True:
                b3 = b**3
                if b > 0:
                    lo, hi = _ceildiv(-cB - b3, b), _floordiv(cB - b3, b)
                else:
                    lo, hi = _ceildiv(cB - b3, b), _floordiv(-cB - b3, b)
                lo, hi = max(lo, -cA), min(hi, cA)
                if lo <= hi:
                    yield b, lo, hi, 0
                elif abs(b) ** 3 > cB + cA * abs(b):
                    break
                b += sgn
        return
    if i == 3:
        r = math.isqrt(cB)
        yield 0, -r, r, 0
        bound = int(0.83 * float(X) ** (1 / 12)) + 2
        for sgn in (1, -1):
            a = sgn
            while True:
                a4, a6 = 27 * a**4, 27 * a**6
                top = math.isqrt(cB + a6)
                if a > 0:
                    lo, hi = _ceildiv(-cA - a4, 6 * a), _floordiv(cA - a4, 6 * a)
                else:
                    lo, hi = _ceildiv(cA - a4, 6 * a), _floordiv(-cA - a4, 6 * a)
                lo, hi = max(lo, -top), min(hi, top)
                skip = a6 - cB
                empty = lo > hi or (max(abs(lo), abs(hi)) ** 2 < skip)
                if not empty:
                    yield a, lo, hi, skip
                elif abs(a) > bound:
                    break
                a += sgn
        return
    raise ValueError(f"no region R_{i}")


def _wide(X: int) -> bool:
    """True when ``4A^3 + 27B^2`` might not fit in int64."""
    return 31 * X >= 2**62


def region_stripes(i: int, X: int) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]:
    """Chunks ``(a, b, A, B)`` of region points with nonzero discriminant."""
    dtype = object if _wide(X) else np.int64
    for fixed, lo, hi, skip in _rows(i, X):
        run = np.arange(lo, hi + 1, dtype=np.int64).astype(dtype)
        if i == 2:
            a, b = run, np.full(run.shape, fixed, dtype=dtype)
        else:
            a, b = np.full(run.shape, fixed, dtype=dtype), run
        if i == 3 and skip > 0:
            keep = b * b >= skip
            a, b = a[keep], b[keep]
        if i == 1:
            A, B = a, b
        elif i == 2:
            A, B = a, b * b * b + a * b
        else:
            A, B = 6 * a * b + 27 * a**4, b * b - 27 * a**6
        nz = 4 * A * A * A + 27 * B * B != 0
        if not nz.all():
            a, b, A, B = a[nz], b[nz], A[nz], B[nz]
        if len(a):
            yield a, b, A, B


def enumerate_region(i: int, X: int) -> Iterator[tuple[int, int]]:
    """Every integer point of ``R_i(X)`` off the discriminant locus."""
    for a, b, _, _ in region_stripes(i, X):
        for x, y in zip(a.tolist(), b.tolist()):
            yield int(x), int(y)


def _box_count(X: int) -> int:
    """Points of ``R_1(X)`` with nonzero discriminant, in closed form."""
    cA, cB = _caps(X)
    if cA < 0:
        return 0
    total = (2 * cA + 1) * (2 * cB + 1)
    # 4a^3 + 27b^2 = 0 exactly at (-3k^2, +-2k^3), height 27 k^6
    k = 0
    while 27 * (k + 1) ** 6 < X:
        k += 1
    return total - (1 + 2 * k)


def lattice_count(i: int, X: int) -> int:
    if i == 1:
        return _box_count(X)
    return sum(len(a) for a, _, _, _ in region_stripes(i, X))


def _image_heights(i: int, X: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Distinct images ``(A, B)`` with their heights, plus the lattice count."""
    cA, cB = _caps(X)
    As, Bs, n = [], [], 0
    for _, _, A, B in region_stripes(i, X):
        As.append(A)
        Bs.append(B)
        n += len(A)
    if not As:
        z = np.zeros(0, dtype=np.int64)
        return z, z, z, 0
    A = np.concatenate(As)
    B = np.concatenate(Bs)
    if A.dtype == object:
        pairs = sorted(set(zip(A.tolist(), B.tolist())))
        A = np.array([p[0] for p in pairs], dtype=object)
        B = np.array([p[1] for p in pairs], dtype=object)
    else:
        key = (A + cA) * (2 * cB + 1) + (B + cB)
        _, idx = np.unique(key, return_index=True)
        A, B = A[idx], B[idx]
    H = np.maximum(np.abs(A) ** 3, B * B)
    return A, B, H, n


def equation_count(i: int, X: int) -> tuple[int, int]:
    """``(lattice, distinct)``: region points and their distinct images."""
    if i == 1:
        n = _box_count(X)
        return n, n
    A, _, _, n = _image_heights(i, X)
    return n, len(A)


def _level(X: int, d: int) -> int:
    """Smallest ``Y`` with ``h < Y  <=>  d^12 h < X`` for integer ``h``."""
    return (X - 1) // d**12 + 1


def _minimal_mask(A: np.ndarray, B: np.ndarray, X: int) -> np.ndarray:
    ok = np.ones(len(A), dtype=bool)
    for p in primes_below(iroot(max(X - 1, 1), 12) + 1):
        ok &= ~((A % p**4 == 0) & (B % p**6 == 0))
    return ok


def _direct_box(X: int) -> int:
    total = 0
    for _, _, A, B in region_stripes(1, X):
        total += int(_minimal_mask(A, B, X).sum())
    return total


@dataclass
class SieveResult:
    i: int
    X: int
    lattice: int
    distinct: int
    mobius: int
    direct: int

    @property
    def sieved(self) -> int:
        return self.mobius


def sieved_count(i: int, X: int, check: bool = True) -> SieveResult:
    """Minimal curves of height ``< X`` in the image of ``T_i``, two ways.

    The Moebius sum over distinct images at levels ``X / d^12`` must equal the
    direct count of distinct images that are already minimal.
    """
    if X < 1:
        raise ValueError("X must be at least 1")
    K = iroot(X - 1, 12) if X > 1 else 0
    mu = mobius_table(max(K, 1))
    if i == 1:
        lattice = distinct = _box_count(X)
        mob = sum(mu[d] * _box_count(_level(X, d)) for d in range(1, K + 1) if mu[d])
        direct = _direct_box(X) if check else mob
    else:
        A, B, H, lattice = _image_heights(i, X)
        distinct = len(A)
        Hs = np.sort(H)
        mob = 0
        for d in range(1, K + 1):
            if mu[d]:
                mob += mu[d] * int(np.searchsorted(Hs, _level(X, d), side="left"))
        direct = int(_minimal_mask(A, B, X).sum()) if len(A) else 0
    if check and mob != direct:
        w = scaling_closure_violations(i, X, limit=1)
        raise SieveMismatch(f"R_{i}, X={X}: moebius {mob} != direct {direct}; first witness {w[:1]}")
    return SieveResult(i, X, lattice, distinct, mob, direct)


def scaling_closure_violations(i: int, X: int, limit: Optional[int] = None) -> list[tuple[int, int]]:
    """Images whose minimal model is not itself an image (the sieve needs none)."""
    if i == 1:
        return []
    A, B, _, _ = _image_heights(i, X)
    pairs = set(zip(A.tolist(), B.tolist()))
    bad = []
    for a, b in sorted(pairs):
        m = minimal_reduce(a, b)
        if m != (a, b) and m not in pairs:
            bad.append((a, b))
            if limit and len(bad) >= limit:
                break
    return bad


def empirical_constant(i: int, X: int, check: bool = True) -> float:
    res = sieved_count(i, X, check)
    return res.mobius / float(X) ** (1 / d_value(i))


def lipschitz_ratio(i: int, X: int) -> float:
    """``|lattice - area X^{1/d}| / X^{1/e}``."""
    return abs(lattice_count(i, X) - area(i) * float(X) ** (1 / d_value(i))) / float(X) ** (1 / E[i])


# ---------------------------------------------------------------------------
# piecewise description of R_3^+


def _root(n: int, k: int):
    """``n^(1/k)`` as an exact Fraction when it is rational, else a 60-digit Decimal."""
    r = iroot(n, k)
    if r**k == n:
        return Fraction(r)
    with localcontext() as ctx:
        ctx.prec = 60
        return Decimal(n) ** (Decimal(1) / Decimal(k))


def _sqrt_nonneg(x):
    if x <= 0:
        return Fraction(0)
    if isinstance(x, Fraction):
        p, q = x.numerator, x.denominator
        rp, rq = math.isqrt(p), math.isqrt(q)
        if rp * rp == p and rq * rq == q:
            return Fraction(rp, rq)
        x = Decimal(p) / Decimal(q)
    return x.sqrt()


def piecewise_R3_contains(X: int, a: int, b: int, bs: list[float]) -> Optional[int]:
    """Index of the piece containing the integer point ``(a, b)``, ``b >= 0``, or ``None``.

    The bottom edge ``g = 0`` is taken as ``b >= 0``.
    """
    with localcontext() as ctx:
        ctx.prec = 60
        x12 = _root(X, 12)
        x12d = Decimal(x12.numerator) / Decimal(x12.denominator) if isinstance(x12, Fraction) else x12
        for k in range(5):
            if not (Decimal(bs[k]) * x12d < a < Decimal(bs[k + 1]) * x12d):
                continue
            x3, x2 = _root(X, 3), _root(X, 2)

            def A(s):
                return (s * x3 - 27 * a**4) / (6 * a)

            def Bf(s):
                return _sqrt_nonneg(s * x2 + 27 * a**6)

            if k == 0:
                inside = Bf(-1) < b < A(-1)
            elif k == 1:
                inside = A(1) < b < A(-1)
            elif k == 2:
                inside = 0 <= b < A(-1)
            elif k == 3:
                inside = 0 <= b < Bf(1)
            else:
                inside = 0 <= b < A(1)
            return k if inside else None
    return None


def piecewise_R3_check(X: int, sample: int, seed: int = 0, convention: str = "corrected"):
    """Compare the piecewise description with exact membership on random points.

    Returns ``(True, None)`` or ``(False, (a, b, piece, exact))`` for the first
    counterexample.  Points are integers with ``b >= 0`` in the bounding box.
    """
    bs = betas(convention) if convention == "corrected" else raw_betas(convention)
    rng = np.random.default_rng(seed)
    amax = int(0.9 * float(X) ** (1 / 12)) + 2
    bmax = int(2 * math.sqrt(7) * float(X) ** 0.25) + 2
    for _ in range(sample):
        a = int(rng.integers(-amax, amax + 1))
        b = int(rng.integers(0, bmax + 1))
        exact = in_region(3, X, a, b)
        piece = piecewise_R3_contains(X, a, b, bs)
        if exact != (piece is not None):
            return False, (a, b, piece, exact)
    return True, None
