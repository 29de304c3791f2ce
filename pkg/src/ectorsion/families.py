"""One-parameter families ``y^2 = x^3 + f(t) x + g(t)`` with a torsion structure.

A family is specialized at ``(t, u)`` as ``(u^4 f(t), u^6 g(t))``, or
``(u^2 f(t), u^3 g(t))`` for weight ``(2, 3)``.  Counting sweeps use the
canonical parameters ``t = a / b^m``, ``u = b^n``.

Three families are built in (``Z/3``, ``Z/4``, ``Z/2 x Z/2``); the other
groups come from ``data/kubert_families.json``, which is validated on load.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .arith import RatPoly, as_rational, factorize, iroot, mobius_table, poly_gcd
from .curves import (
    ShortCurve,
    SingularCurveError,
    c_invariants,
    clear_denominators,
    disc_core,
    height,
    minimal_reduce,
)
from .torsion import TorsionGroup, torsion_subgroup

# (r, s, n, m) per group
DEGREE_TABLE: dict[str, tuple[int, int, int, int]] = {
    "Z/3": (1, 2, 1, 3),
    "Z/4": (2, 3, 1, 2),
    "Z/5": (4, 6, 1, 1),
    "Z/6": (4, 6, 1, 1),
    "Z/7": (8, 12, 2, 1),
    "Z/8": (8, 12, 2, 1),
    "Z/9": (12, 18, 3, 1),
    "Z/10": (12, 18, 3, 1),
    "Z/12": (16, 24, 4, 1),
    "Z/2xZ/4": (4, 6, 1, 1),
    "Z/2xZ/6": (8, 12, 2, 1),
    "Z/2xZ/8": (16, 24, 4, 1),
}

DEFAULT_FAMILY_FILE = "kubert_families.json"


class SingularSpecialization(SingularCurveError):
    """The chosen parameter lies on the discriminant locus of the family."""


class FamilyFileError(ValueError):
    """The family file is missing or cannot be parsed."""


class FamilyValidationError(ValueError):
    """One or more families broke an invariant; ``failures`` lists them."""

    def __init__(self, failures: list[tuple[str, str, str]]):
        self.failures = failures
        lines = [f"{g}: {inv}: {detail}" for g, inv, detail in failures]
        super().__init__("family validation failed:\n  " + "\n  ".join(lines))


@dataclass(frozen=True)
class ParamPoint:
    """``t = a / b^m`` with ``b > 0`` and ``gcd(a, b^m)`` free of m-th powers."""

    a: int
    b: int


@dataclass(frozen=True)
class FamilySpec:
    group: TorsionGroup
    f: RatPoly
    g: RatPoly
    weight: tuple[int, int]
    r: int
    s: int
    n: int
    m: int
    ell: Optional[int]
    source: str = "builtin"
    _scale: int = field(default=1, compare=False, repr=False)

    @classmethod
    def build(cls, group, f: RatPoly, g: RatPoly, weight=(4, 6), source: str = "builtin") -> "FamilySpec":
        """Derive the degree data and check the structural invariants."""
        if isinstance(group, str):
            group = TorsionGroup.parse(group)
        weight = tuple(weight)
        if weight not in ((4, 6), (2, 3)):
            raise FamilyValidationError([(group.label, "weight", f"unsupported weight {weight}")])
        if f.is_zero() or g.is_zero():
            raise FamilyValidationError([(group.label, "nonzero", "f and g must both be nonzero")])
        if poly_gcd(f, g).degree > 0:
            raise FamilyValidationError([(group.label, "coprime", f"gcd(f, g) = {poly_gcd(f, g)}")])
        r, s = f.degree, g.degree
        ratio = max(Fraction(r, weight[0]), Fraction(s, weight[1]))
        n, m = ratio.numerator, ratio.denominator
        if n == 0:
            raise FamilyValidationError([(group.label, "degree", "f and g are both constant")])
        if n != 1 and m != 1:
            raise FamilyValidationError([(group.label, "n=1 or m=1", f"n/m = {n}/{m}")])
        ell = None
        if group.order > 4:
            k = group.injection_count()
            if k % 24:
                raise FamilyValidationError([(group.label, "degree law", f"k = {k} not divisible by 24")])
            ell = k // 24
            if (r, s) != (4 * ell, 6 * ell):
                raise FamilyValidationError(
                    [(group.label, "degree law", f"(deg f, deg g) = ({r}, {s}), expected ({4 * ell}, {6 * ell})")]
                )
        scale = _integral_scale(f, g)
        return cls(group, f, g, weight, r, s, n, m, ell, source, scale)

    @property
    def expected_exponent(self) -> Fraction:
        """Growth exponent of the family count: ``(m+1)/12n``, or ``(m+1)/6n`` at weight (2, 3)."""
        if self.weight == (4, 6):
            return Fraction(self.m + 1, 12 * self.n)
        return Fraction(self.m + 1, 6 * self.n)

    def integer_coefficients(self) -> tuple[list[int], list[int]]:
        """``(w^4 f, w^6 g)`` with the smallest ``w`` making every coefficient integral."""
        w = self._scale
        F = [int(c * w**4) for c in self.f.coeffs]
        G = [int(c * w**6) for c in self.g.coeffs]
        return F, G

    def to_json(self) -> dict:
        return {
            "group": self.group.label,
            "weight": list(self.weight),
            "f": [str(c) for c in self.f.coeffs],
            "g": [str(c) for c in self.g.coeffs],
        }


def _integral_scale(f: RatPoly, g: RatPoly) -> int:
    """Smallest ``w > 0`` with ``w^4 f`` and ``w^6 g`` integral."""
    w = 1
    den = math.lcm(f.denominator_lcm(), g.denominator_lcm())
    for p in factorize(den) if den > 1 else {}:
        need = 0
        for c in f.coeffs:
            need = max(need, -(-_pval(c.denominator, p) // 4))
        for c in g.coeffs:
            need = max(need, -(-_pval(c.denominator, p) // 6))
        w *= p**need
    return w


def _pval(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# specialization


def specialize(spec: FamilySpec, t, u=1) -> ShortCurve:
    """Minimal model of the fibre at ``(t, u)``.

    Denominators are cleared with an isomorphism ``(w^4, w^6)``; the curve is
    then reduced to its twelfth-power-free model.
    """
    t, u = as_rational(t), as_rational(u)
    if u == 0:
        raise ValueError("u must be nonzero")
    i, j = spec.weight
    A = u**i * spec.f(t)
    B = u**j * spec.g(t)
    if 4 * A**3 + 27 * B**2 == 0:
        raise SingularSpecialization(f"{spec.group.label} is singular at t={t}")
    A, B = clear_denominators(A, B)
    return ShortCurve(*minimal_reduce(A, B))


def param_normalize(m: int, t) -> ParamPoint:
    """The unique ``(a, b)``, ``b > 0``, with ``t = a/b^m`` and ``gcd(a, b^m)`` m-th-power-free."""
    if m < 1:
        raise ValueError("m must be positive")
    t = as_rational(t)
    if t == 0:
        raise ValueError("t must be nonzero")
    b = 1
    q = t.denominator
    if q > 1:
        for p, e in factorize(q).items():
            b *= p ** (-(-e // m))
    a = t * b**m
    assert a.denominator == 1
    return ParamPoint(int(a), b)


def _homog(coeffs: Sequence[int], a: int, b: int, m: int, weight: int) -> int:
    """``b^weight * F(a / b^m)`` for integer ``F`` with ``m * deg F <= weight``."""
    acc = 0
    for k, c in enumerate(coeffs):
        if c:
            acc += c * a**k * b ** (weight - m * k)
    return acc


def is_canonical(a: int, b: int, m: int) -> bool:
    g = math.gcd(a, b**m)
    if m == 1:
        return g == 1
    # gcd(a, b^m) must not be divisible by p^m for any p | b
    bb = b
    p = 2
    while bb > 1:
        if p * p > bb:
            p = bb
        if bb % p == 0:
            if g % p**m == 0:
                return False
            while bb % p == 0:
                bb //= p
        p += 1
    return True


def family_curve(spec: FamilySpec, a: int, b: int) -> Optional[tuple[int, int]]:
    """Minimal ``(A, B)`` for the sweep point ``t = a/b^m``, ``u = b^n``; ``None`` if singular."""
    F, G = spec.integer_coefficients()
    i, j = spec.weight
    A = _homog(F, a, b, spec.m, i * spec.n)
    B = _homog(G, a, b, spec.m, j * spec.n)
    if disc_core(A, B) == 0:
        return None
    return minimal_reduce(A, B)


def _row_coeffs(coeffs: Sequence[int], b: int, m: int, weight: int) -> list[int]:
    """Coefficients of ``a -> b^weight F(a / b^m)`` as a polynomial in ``a``."""
    return [c * b ** (weight - m * k) for k, c in enumerate(coeffs)]


def _horner(cs: list[int], a: int) -> int:
    acc = 0
    for c in reversed(cs):
        acc = acc * a + c
    return acc


def enumerate_family(spec: FamilySpec, X: int, start: Optional[tuple[int, int]] = None) -> set[ShortCurve]:
    """Distinct minimal curves of height ``< X`` reached by the canonical sweep.

    The box ``|a| <= Ka``, ``1 <= b <= Kb`` doubles on both axes until a whole
    new shell adds nothing.  The result is a lower bound for the number of
    curves in the family: twists outside ``u = b^n`` are not visited.
    """
    if X < 1:
        raise ValueError("X must be at least 1")
    F, G = spec.integer_coefficients()
    i, j = spec.weight
    n, m = spec.n, spec.m
    wa, wb = i * n, j * n
    if start is None:
        Ka = max(2, iroot(X, 12 * n) ** m)
        Kb = max(2, iroot(X, 12 * n))
    else:
        Ka, Kb = start
    found: set[ShortCurve] = set()
    rows: dict[int, tuple] = {}

    def row(b: int):
        r = rows.get(b)
        if r is None:
            bad = [p**m for p in factorize(b)] if (m > 1 and b > 1) else []
            r = (_row_coeffs(F, b, m, wa), _row_coeffs(G, b, m, wb), b**m, bad)
            rows[b] = r
        return r

    def visit_row(b: int, a_values) -> int:
        Fb, Gb, bm, bad = row(b)
        added = 0
        for a in a_values:
            if m == 1:
                if math.gcd(a, b) != 1:
                    continue
            elif bad:
                g = math.gcd(a, bm)
                if any(g % q == 0 for q in bad):
                    continue
            A = _horner(Fb, a)
            B = _horner(Gb, a)
            h = max(B * B, abs(A) ** 3)
            if h >= X:
                # reducing by d^12 needs d^4 | gcd(A, B), so the height drops by at most gcd^3
                g = math.gcd(A, B)
                if g < 16 or h >= X * g**3:
                    continue
            if 4 * A**3 + 27 * B * B == 0:
                continue
            A, B = minimal_reduce(A, B)
            if B * B >= X or abs(A) ** 3 >= X:
                continue
            c = ShortCurve(A, B)
            if c not in found:
                found.add(c)
                added += 1
        return added

    for b in range(1, Kb + 1):
        visit_row(b, range(-Ka, Ka + 1))
    while True:
        Ka2, Kb2 = 2 * Ka, 2 * Kb
        new = 0
        for b in range(1, Kb2 + 1):
            if b <= Kb:
                new += visit_row(b, range(-Ka2, -Ka))
                new += visit_row(b, range(Ka + 1, Ka2 + 1))
            else:
                new += visit_row(b, range(-Ka2, Ka2 + 1))
        Ka, Kb = Ka2, Kb2
        if new == 0:
            return found


def fit_exponent(counts: Iterable[tuple]) -> float:
    """Least-squares slope of ``log N`` against ``log X``."""
    pts = [(float(X), float(N)) for X, N in counts]
    if len(pts) < 3:
        raise ValueError("need at least three (X, N) points")
    for k, (X, N) in enumerate(pts):
        if N <= 0 or X <= 0:
            raise ValueError(f"nonpositive value at point {k}: ({X}, {N})")
        if k and X <= pts[k - 1][0]:
            raise ValueError("X must be strictly increasing")
    xs = [math.log(X) for X, _ in pts]
    ys = [math.log(N) for _, N in pts]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / sxx


def exceptional_cubic_count(X: int) -> int:
    """Number of minimal curves ``(0, b^2)``, ``b != 0``, of height ``< X``.

    ``(0, b^2)`` has height ``b^4`` and is minimal iff ``b`` is cube-free; the
    count is ``sum mu(k) floor(M / k^3)`` with ``M`` the largest admissible ``b``.
    """
    if X <= 1:
        return 0
    M = iroot(X - 1, 4)
    K = iroot(M, 3)
    mu = mobius_table(K)
    return sum(mu[k] * (M // k**3) for k in range(1, K + 1))


# ---------------------------------------------------------------------------
# validation


def _random_params(rng: random.Random) -> tuple[Fraction, Fraction]:
    t = Fraction(rng.randint(-40, 40), rng.randint(1, 12))
    u = Fraction(rng.choice((-1, 1)) * rng.randint(1, 6), rng.randint(1, 4))
    return t, u


def containment_failures(spec: FamilySpec, samples: int = 50, seed: int = 0) -> list[tuple[Fraction, Fraction, ShortCurve, TorsionGroup]]:
    """Specializations whose torsion does not contain ``spec.group``.

    ``samples`` nonsingular parameters are drawn; singular draws are skipped.
    """
    rng = random.Random(seed)
    bad = []
    done = 0
    tries = 0
    while done < samples:
        tries += 1
        if tries > 20 * samples + 100:
            raise RuntimeError(f"{spec.group.label}: too many singular specializations")
        t, u = _random_params(rng)
        try:
            c = specialize(spec, t, u)
        except SingularSpecialization:
            continue
        done += 1
        T = torsion_subgroup(c)
        if not T.contains(spec.group):
            bad.append((t, u, c, T))
    return bad


def validate_family(spec: FamilySpec, samples: int = 50, seed: int = 0) -> list[tuple[str, str, str]]:
    """Degree-table and containment checks; returns ``(group, invariant, detail)`` failures."""
    out = []
    label = spec.group.label
    want = DEGREE_TABLE.get(label)
    if want is not None and spec.weight == (4, 6):
        got = (spec.r, spec.s, spec.n, spec.m)
        if got != want:
            out.append((label, "table (r,s,n,m)", f"got {got}, expected {want}"))
    bad = containment_failures(spec, samples, seed)
    if bad:
        t, u, c, T = bad[0]
        out.append((label, "containment", f"{len(bad)}/{samples} fail; t={t} u={u} gives {c.to_text()} with {T}"))
    return out


def _spec_from_row(row: dict, source: str) -> FamilySpec:
    group = TorsionGroup.parse(row["group"])
    f = RatPoly.from_strings(row["f"])
    g = RatPoly.from_strings(row["g"])
    return FamilySpec.build(group, f, g, tuple(row.get("weight", (4, 6))), source=source)


def load_families(path=None, samples: int = 50, seed: int = 0) -> list[FamilySpec]:
    """Read and validate a family file (the bundled Kubert data by default)."""
    try:
        if path is None:
            text = resources.files("ectorsion").joinpath("data", DEFAULT_FAMILY_FILE).read_text()
            source = DEFAULT_FAMILY_FILE
        else:
            text = Path(path).read_text()
            source = str(path)
        rows = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise FamilyFileError(f"cannot read family file {path!r}: {exc}") from exc
    if not isinstance(rows, list):
        raise FamilyFileError("family file must hold a JSON array")
    specs = []
    failures: list[tuple[str, str, str]] = []
    for k, row in enumerate(rows):
        try:
            spec = _spec_from_row(row, source)
        except FamilyValidationError as exc:
            failures.extend(exc.failures)
            continue
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            failures.append((str(row.get("group", f"row {k}")) if isinstance(row, dict) else f"row {k}", "parse", str(exc)))
            continue
        errs = validate_family(spec, samples, seed)
        if errs:
            failures.extend(errs)
        else:
            specs.append(spec)
    if failures:
        raise FamilyValidationError(failures)
    return specs


# ---------------------------------------------------------------------------
# builtin families


def _z4_polys() -> tuple[RatPoly, RatPoly]:
    t = RatPoly([0, 1])
    one = RatPoly([1])
    zero = RatPoly()
    c4, c6 = c_invariants(one, -t, -t, zero, zero)
    return -27 * c4, -54 * c6


Z3_F = RatPoly([Fraction(-1, 3), 2])
Z3_G = {
    "+": RatPoly([Fraction(2, 27), Fraction(2, 3), 1]),
    "-": RatPoly([Fraction(2, 27), Fraction(-2, 3), 1]),
}
Z2Z2_F = RatPoly([Fraction(-1, 3), Fraction(1, 3), Fraction(-1, 3)])
Z2Z2_G = RatPoly([Fraction(-2, 27), Fraction(3, 27), Fraction(3, 27), Fraction(-2, 27)])


@lru_cache(maxsize=None)
def z3_sign_adjudication(samples: int = 50, seed: int = 0) -> dict:
    """Which sign of the linear term of ``g`` gives a genuine ``Z/3`` family."""
    result = {}
    for sign, g in Z3_G.items():
        spec = FamilySpec.build("Z/3", Z3_F, g)
        bad = containment_failures(spec, samples, seed)
        result[sign] = {"passed": not bad, "failures": len(bad), "samples": samples}
    winners = [s for s, r in result.items() if r["passed"]]
    result["winner"] = winners[0] if len(winners) == 1 else None
    return result


@lru_cache(maxsize=None)
def builtin_families(samples: int = 50) -> tuple[FamilySpec, ...]:
    """The ``Z/3``, ``Z/4`` and ``Z/2 x Z/2`` families, each self-tested."""
    adj = z3_sign_adjudication(samples)
    if adj["winner"] is None:
        raise FamilyValidationError([("Z/3", "sign adjudication", f"no unique passing sign: {adj}")])
    z3 = FamilySpec.build("Z/3", Z3_F, Z3_G[adj["winner"]])
    f4, g4 = _z4_polys()
    z4 = FamilySpec.build("Z/4", f4, g4)
    z22 = FamilySpec.build("Z/2xZ/2", Z2Z2_F, Z2Z2_G, (2, 3))
    failures = []
    for spec in (z3, z4, z22):
        failures.extend(validate_family(spec, samples))
    if failures:
        raise FamilyValidationError(failures)
    return (z3, z4, z22)


def all_families(path=None, samples: int = 50) -> dict[str, FamilySpec]:
    """Builtins plus loaded families keyed by group label; builtins win on overlap."""
    out = {s.group.label: s for s in load_families(path, samples)}
    out.update({s.group.label: s for s in builtin_families(samples)})
    return out
