"""Counting elliptic curves over Q by naive height and torsion subgroup."""

from .curves import LongCurve, ShortCurve, SingularCurveError, disc_core, height, is_minimal, minimal_reduce
from .torsion import D_G, MAZUR_GROUPS, TorsionGroup, torsion_subgroup

__version__ = "0.1.0"

__all__ = [
    "D_G",
    "LongCurve",
    "MAZUR_GROUPS",
    "ShortCurve",
    "SingularCurveError",
    "TorsionGroup",
    "disc_core",
    "height",
    "is_minimal",
    "minimal_reduce",
    "torsion_subgroup",
]
