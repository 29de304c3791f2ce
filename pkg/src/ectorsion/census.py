"""Exhaustive census of minimal curves ``y^2 = x^3 + Ax + B`` of height ``< X``.

Every curve is classified once.  Most curves are ruled trivial by a gcd of
``#E(F_p)`` over a few good primes, looked up in precomputed tables; only the
survivors get an exact torsion computation.  Each curve is then bucketed into
the first checkpoint above its height and the buckets are accumulated.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .arith import icbrt, iroot, primes_below
from .curves import ShortCurve
from .families import fit_exponent
from .torsion import BOUND_PRIMES, D_G, MAZUR_GROUPS, TorsionGroup, point_count_table, torsion_subgroup

FILTER_PRIMES: tuple[int, ...] = BOUND_PRIMES[:16]
_INDEX = {G: k for k, G in enumerate(MAZUR_GROUPS)}
# CONTAINS[h, g] is True when group h has a subgroup isomorphic to group g
CONTAINS = np.array([[H.contains(G) for G in MAZUR_GROUPS] for H in MAZUR_GROUPS], dtype=bool)


def _caps(X: int) -> tuple[int, int]:
    """Largest ``|A|`` and ``|B|`` with ``|A|^3 < X`` and ``B^2 < X``."""
    if X <= 0:
        return -1, -1
    return icbrt(X - 1), math.isqrt(X - 1)


def _wide(X: int) -> bool:
    # |A|^3 and B^2 stay below X; int64 is safe while X fits with headroom
    return X >= 2**62


def _rows(X: int, a_lo: int, a_hi: int) -> Iterator[tuple[int, np.ndarray]]:
    """For each ``A`` in ``[a_lo, a_hi]``, the ``B`` values of minimal nonsingular curves."""
    cA, cB = _caps(X)
    if cA < 0:
        return
    dtype = object if _wide(X) else np.int64
    Bs = np.arange(-cB, cB + 1, dtype=np.int64).astype(dtype)
    small = primes_below(iroot(max(X - 1, 1), 12) + 1)
    for A in range(max(a_lo, -cA), min(a_hi, cA) + 1):
        keep = np.ones(len(Bs), dtype=bool)
        for p in small:
            if A % p**4 == 0:
                keep &= Bs % p**6 != 0
        if A <= 0:
            # 4A^3 + 27B^2 = 0 at A = -3k^2, B = +-2k^3
            k = math.isqrt(-A // 3)
            if 3 * k * k == -A:
                keep &= (Bs != 2 * k**3) & (Bs != -2 * k**3)
        yield A, Bs[keep]


def enumerate_minimal(X: int) -> Iterator[ShortCurve]:
    """All minimal nonsingular curves of height ``< X``, each once, ordered by ``(A, B)``."""
    cA, _ = _caps(X)
    for A, Bs in _rows(X, -cA, cA):
        for B in Bs.tolist():
            yield ShortCurve(A, int(B))


def count_minimal(X: int) -> int:
    cA, _ = _caps(X)
    return sum(len(Bs) for _, Bs in _rows(X, -cA, cA))


def order_bounds(A: int, Bs: np.ndarray) -> np.ndarray:
    """Per-curve gcd of ``#E(F_p)`` over the good primes in :data:`FILTER_PRIMES`.

    A zero entry means every filter prime was bad for that curve.
    """
    g = np.zeros(len(Bs), dtype=np.int64)
    for p in FILTER_PRIMES:
        a = A % p
        b = (Bs % p).astype(np.int64)
        disc = (4 * a**3 + 27 * b * b) % p
        counts = point_count_table(p)[a][b]
        g = np.gcd(g, np.where(disc != 0, counts, 0))
    return g


@dataclass
class _Partial:
    counts: np.ndarray  # [checkpoint bucket, group]
    exemplars: dict[int, tuple[int, int, int]] = field(default_factory=dict)  # group -> (height, A, B)

    def merge(self, other: "_Partial") -> "_Partial":
        ex = dict(self.exemplars)
        for k, v in other.exemplars.items():
            if k not in ex or v < ex[k]:
                ex[k] = v
        return _Partial(self.counts + other.counts, ex)


def _stripe(X: int, checkpoints: tuple[int, ...], a_lo: int, a_hi: int) -> _Partial:
    cps = np.array(checkpoints, dtype=object if _wide(X) else np.int64)
    ng = len(MAZUR_GROUPS)
    counts = np.zeros((len(checkpoints), ng), dtype=np.int64)
    exemplars: dict[int, tuple[int, int, int]] = {}
    trivial = _INDEX[MAZUR_GROUPS[0]]
    for A, Bs in _rows(X, a_lo, a_hi):
        if not len(Bs):
            continue
        H = np.maximum(Bs * Bs, abs(A) ** 3)
        bucket = np.searchsorted(cps, H, side="right")
        bound = order_bounds(A, Bs)
        flat = bound == 1
        counts[:, trivial] += np.bincount(bucket[flat].astype(np.int64), minlength=len(checkpoints))[: len(checkpoints)]
        for k in np.flatnonzero(~flat).tolist():
            B = int(Bs[k])
            c = ShortCurve(A, B)
            b = int(bound[k])
            G = torsion_subgroup(c, b if b else None)
            gi = _INDEX[G]
            j = int(bucket[k])
            if j < len(checkpoints):
                counts[j, gi] += 1
            key = (int(H[k]), A, B)
            if gi not in exemplars or key < exemplars[gi]:
                exemplars[gi] = key
        if flat.any():
            k = int(np.argmin(np.where(flat, H, H.max() + 1)))
            key = (int(H[k]), A, int(Bs[k]))
            if trivial not in exemplars or key < exemplars[trivial]:
                exemplars[trivial] = key
    return _Partial(counts, exemplars)


def _stripe_job(args):
    return _stripe(*args)


@dataclass
class CensusTable:
    checkpoints: list[int]
    exact: np.ndarray  # [checkpoint, group], cumulative
    contains: np.ndarray  # [checkpoint, group]
    exemplars: dict[TorsionGroup, ShortCurve] = field(default_factory=dict)

    def exact_count(self, X: int, G: TorsionGroup | str) -> int:
        return int(self.exact[self.checkpoints.index(X), _INDEX[_group(G)]])

    def contains_count(self, X: int, G: TorsionGroup | str) -> int:
        return int(self.contains[self.checkpoints.index(X), _INDEX[_group(G)]])

    def total(self, X: int) -> int:
        return int(self.exact[self.checkpoints.index(X)].sum())

    def rows(self) -> list[dict]:
        out = []
        for i, X in enumerate(self.checkpoints):
            for j, G in enumerate(MAZUR_GROUPS):
                out.append(
                    {
                        "X": X,
                        "group": G.label,
                        "exact_count": int(self.exact[i, j]),
                        "contains_count": int(self.contains[i, j]),
                    }
                )
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["X", "group", "exact_count", "contains_count"], lineterminator="\n")
        w.writeheader()
        w.writerows(self.rows())
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "checkpoints": list(self.checkpoints),
            "rows": self.rows(),
            "exemplars": {G.label: c.to_json() for G, c in self.exemplars.items()},
        }

    def check(self) -> list[str]:
        """Violations of the table's internal invariants (empty when consistent)."""
        bad = []
        if (self.exact > self.contains).any():
            bad.append("exact count above contains count")
        if len(self.checkpoints) > 1 and (np.diff(self.contains, axis=0) < 0).any():
            bad.append("contains counts not monotone")
        if not np.array_equal(self.contains, self.exact @ CONTAINS.astype(np.int64)):
            bad.append("contains counts are not sums of exact counts over supergroups")
        return bad


def _group(G: TorsionGroup | str) -> TorsionGroup:
    return TorsionGroup.parse(G) if isinstance(G, str) else G


def default_checkpoints(X: int) -> list[int]:
    cps = [10**k for k in range(1, 40) if 10**k < X]
    return cps + [X]


def run_census(X: int, checkpoints: Optional[Sequence[int]] = None, threads: int = 1, stripes: Optional[int] = None) -> CensusTable:
    """Exact and contains counts per Mazur group at each checkpoint ``<= X``."""
    if X < 1:
        raise ValueError("X must be at least 1")
    cps = sorted(set(checkpoints)) if checkpoints else default_checkpoints(X)
    if cps[0] < 1 or cps[-1] > X:
        raise ValueError("checkpoints must lie in [1, X]")
    cps_t = tuple(int(c) for c in cps)
    cA, _ = _caps(cps_t[-1])
    n = stripes or max(1, 4 * threads)
    edges = np.linspace(-cA, cA + 1, n + 1).round().astype(int).tolist() if cA >= 0 else [0, 0]
    jobs = [(cps_t[-1], cps_t, lo, hi - 1) for lo, hi in zip(edges, edges[1:]) if hi > lo]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_stripe_job, jobs))
    else:
        parts = [_stripe_job(j) for j in jobs]
    total = _Partial(np.zeros((len(cps_t), len(MAZUR_GROUPS)), dtype=np.int64))
    for p in parts:
        total = total.merge(p)
    exact = np.cumsum(total.counts, axis=0)
    contains = exact @ CONTAINS.astype(np.int64)
    exemplars = {MAZUR_GROUPS[k]: ShortCurve(A, B) for k, (_, A, B) in sorted(total.exemplars.items())}
    return CensusTable(list(cps_t), exact, contains, exemplars)


@dataclass
class SlopeEntry:
    group: TorsionGroup
    reference: Fraction
    slope: Optional[float]
    exact_slope: Optional[float]
    status: str  # "ok" or "insufficient data"

    @property
    def deviation(self) -> Optional[float]:
        return None if self.slope is None else abs(self.slope - float(self.reference))


def _fit(xs: list[int], ys: list[int], lo: int) -> Optional[float]:
    pts = [(x, y) for x, y in zip(xs, ys) if x >= lo and y > 0]
    if len(pts) < 3:
        return None
    return fit_exponent(pts)


def slope_report(table: CensusTable, min_height: int = 1) -> dict[TorsionGroup, SlopeEntry]:
    """Fitted growth exponent of ``N'_G`` per group, against ``1/d(G)``."""
    out = {}
    for j, G in enumerate(MAZUR_GROUPS):
        ref = 1 / D_G[G]
        s = _fit(table.checkpoints, table.contains[:, j].tolist(), min_height)
        e = _fit(table.checkpoints, table.exact[:, j].tolist(), min_height)
        out[G] = SlopeEntry(G, ref, s, e, "ok" if s is not None else "insufficient data")
    return out


def parse_table_csv(text: str) -> CensusTable:
    """Inverse of :meth:`CensusTable.to_csv` (exemplars are not stored in CSV)."""
    rows = list(csv.DictReader(io.StringIO(text)))
    cps = sorted({int(r["X"]) for r in rows})
    exact = np.zeros((len(cps), len(MAZUR_GROUPS)), dtype=np.int64)
    contains = np.zeros_like(exact)
    for r in rows:
        i = cps.index(int(r["X"]))
        j = _INDEX[TorsionGroup.parse(r["group"])]
        exact[i, j] = int(r["exact_count"])
        contains[i, j] = int(r["contains_count"])
    return CensusTable(cps, exact, contains)


def write_json(table: CensusTable, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(table.to_json(), fh, indent=1)
        fh.write("\n")
