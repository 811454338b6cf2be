"""Orthogonal and symplectic bundles on an elliptic curve.

The curve is the abstract group ``R^2 / Z^2`` with rational coordinates.  A
topologically trivial orthogonal bundle is S-equivalent to a sum of line
bundles ``L_i + L_i^{-1}`` plus 2-torsion pieces fixed by the rank and ``w2``,
so a point of the moduli space is a multiset ``{L_1, ..., L_k}`` taken up to
inversions (and, for ``SO_{2l}^+``, only even numbers of them).
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import TypeMismatch, UnsupportedRank

GROUPS = ("SO", "O", "Sp")


@dataclass(frozen=True, order=True)
class EllipticPoint:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        x, y = Fraction(self.x), Fraction(self.y)
        object.__setattr__(self, "x", x - (x.numerator // x.denominator))
        object.__setattr__(self, "y", y - (y.numerator // y.denominator))

    def __neg__(self) -> "EllipticPoint":
        return EllipticPoint(-self.x, -self.y)

    def __add__(self, other: "EllipticPoint") -> "EllipticPoint":
        return EllipticPoint(self.x + other.x, self.y + other.y)

    def is_two_torsion(self) -> bool:
        return self == -self

    def to_json(self) -> list:
        return [[self.x.numerator, self.x.denominator], [self.y.numerator, self.y.denominator]]

    @classmethod
    def from_json(cls, doc) -> "EllipticPoint":
        (xn, xd), (yn, yd) = doc
        return cls(Fraction(int(xn), int(xd)), Fraction(int(yn), int(yd)))


ZERO = EllipticPoint(0, 0)
TWO_TORSION = (
    EllipticPoint(Fraction(1, 2), 0),
    EllipticPoint(0, Fraction(1, 2)),
    EllipticPoint(Fraction(1, 2), Fraction(1, 2)),
)


@dataclass(frozen=True)
class ModuliSpace:
    kind: str  # "ProjectiveSpace" or "WeylQuotient"
    n: int

    @property
    def dimension(self) -> int:
        return self.n

    def __str__(self) -> str:
        if self.kind == "ProjectiveSpace":
            return f"P^{self.n}"
        return f"X^{self.n}/((Z/2)^{self.n - 1} x| S_{self.n})"

    def to_json(self) -> dict:
        return {"type": self.kind, "n": self.n, "label": str(self)}


def _validate(group: str, rank: int, w2: int) -> None:
    if group not in GROUPS:
        raise UnsupportedRank(f"unknown group {group!r}")
    if w2 not in (1, -1):
        raise UnsupportedRank("w2 must be +1 or -1")
    if group == "Sp":
        if rank < 2 or rank % 2:
            raise UnsupportedRank(f"Sp needs an even rank >= 2, got {rank}")
    elif rank < 3:
        raise UnsupportedRank(f"{group} needs rank >= 3, got {rank}")


def point_count(group: str, rank: int, w2: int) -> int:
    """Number of line bundles ``L_i`` in the decomposition."""
    _validate(group, rank, w2)
    if group == "Sp":
        return rank // 2
    l = rank // 2
    if rank % 2:
        return l if w2 == 1 else l - 1
    return l if w2 == 1 else l - 2


def _weyl_case(group: str, rank: int, w2: int) -> bool:
    """Only ``SO_{2l}^+`` lacks a 2-torsion summand to correct determinants."""
    return group == "SO" and rank % 2 == 0 and w2 == 1


def moduli_description(group: str, rank: int, w2: int = 1) -> ModuliSpace:
    """For ``O`` this is the component with trivial determinant."""
    if group == "Sp":
        w2 = 1
    k = point_count(group, rank, w2)
    if _weyl_case(group, rank, w2):
        return ModuliSpace("WeylQuotient", k)
    return ModuliSpace("ProjectiveSpace", k)


@dataclass(frozen=True)
class EllipticBundleSpec:
    group: str
    rank: int
    w2: int
    points: tuple[EllipticPoint, ...]

    def __post_init__(self):
        w2 = 1 if self.group == "Sp" else self.w2
        object.__setattr__(self, "w2", w2)
        pts = tuple(p if isinstance(p, EllipticPoint) else EllipticPoint(*p) for p in self.points)
        object.__setattr__(self, "points", pts)
        want = point_count(self.group, self.rank, w2)
        if len(pts) != want:
            raise UnsupportedRank(
                f"{self.group}_{self.rank} with w2={w2} takes {want} points, got {len(pts)}"
            )

    @property
    def key(self) -> tuple:
        return (self.group, self.rank, self.w2)

    def with_points(self, points: Iterable[EllipticPoint]) -> "EllipticBundleSpec":
        return EllipticBundleSpec(self.group, self.rank, self.w2, tuple(points))

    def to_json(self) -> dict:
        return {"group": self.group, "rank": self.rank, "w2": self.w2,
                "points": [p.to_json() for p in self.points]}


def _even_sign_vectors(n: int):
    for signs in itertools.product((1, -1), repeat=n):
        if signs.count(-1) % 2 == 0:
            yield signs


def _apply_signs(points: Sequence[EllipticPoint], signs) -> tuple:
    return tuple(p if s == 1 else -p for p, s in zip(points, signs))


def canonical_points(spec: EllipticBundleSpec) -> tuple[EllipticPoint, ...]:
    pts = spec.points
    if not _weyl_case(spec.group, spec.rank, spec.w2):
        return tuple(sorted(min(p, -p) for p in pts))
    if not pts:
        return ()
    # permutations are absorbed by sorting, so only the sign part is enumerated
    return min(tuple(sorted(_apply_signs(pts, s))) for s in _even_sign_vectors(len(pts)))


def canonical_form(spec: EllipticBundleSpec) -> EllipticBundleSpec:
    return spec.with_points(canonical_points(spec))


def equivalent(a: EllipticBundleSpec, b: EllipticBundleSpec) -> bool:
    if a.key != b.key:
        raise TypeMismatch(f"cannot compare {a.key} with {b.key}")
    return canonical_points(a) == canonical_points(b)


def forgetful_fiber_elliptic(spec: EllipticBundleSpec) -> int:
    """Size of the fibre of ``M_SO -> M_O`` through ``spec`` (1 or 2)."""
    if spec.group != "SO" or not _weyl_case(spec.group, spec.rank, spec.w2):
        return 1
    if not spec.points:
        return 1
    flipped = spec.with_points((-spec.points[0],) + spec.points[1:])
    return 2 if canonical_points(flipped) != canonical_points(spec) else 1


def acting_group(spec: EllipticBundleSpec) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Elements ``(signs, permutation)`` of the group acting on the point tuple."""
    n = len(spec.points)
    if _weyl_case(spec.group, spec.rank, spec.w2):
        signs = list(_even_sign_vectors(n))
    else:
        signs = list(itertools.product((1, -1), repeat=n))
    return [(s, p) for s in signs for p in itertools.permutations(range(n))]


def act_on(spec: EllipticBundleSpec, element) -> EllipticBundleSpec:
    signs, perm = element
    pts = _apply_signs(spec.points, signs)
    return spec.with_points(pts[i] for i in perm)


def random_point(rng: random.Random, max_den: int = 12) -> EllipticPoint:
    dx, dy = rng.randint(1, max_den), rng.randint(1, max_den)
    return EllipticPoint(Fraction(rng.randrange(dx), dx), Fraction(rng.randrange(dy), dy))


def random_spec(group: str, rank: int, w2: int, rng: random.Random,
                max_den: int = 12) -> EllipticBundleSpec:
    k = point_count(group, rank, w2)
    return EllipticBundleSpec(group, rank, w2, tuple(random_point(rng, max_den) for _ in range(k)))


def parse_points(text: str) -> tuple[EllipticPoint, ...]:
    """Parse ``"[[1,4],[0,1]],[[1,2],[1,2]]"`` (or a bracketed list of such)."""
    text = text.strip()
    if not text:
        return ()
    doc = json.loads("[" + text + "]")
    if len(doc) == 1 and _is_point_list(doc[0]):
        doc = doc[0]
    if not all(_is_point(p) for p in doc):
        raise ValueError("points must be pairs of [numerator, denominator] pairs")
    return tuple(EllipticPoint.from_json(p) for p in doc)


def _is_point(p) -> bool:
    return (isinstance(p, list) and len(p) == 2
            and all(isinstance(c, list) and len(c) == 2 and all(isinstance(v, int) for v in c)
                    for c in p))


def _is_point_list(doc) -> bool:
    return isinstance(doc, list) and all(_is_point(p) for p in doc) and not _is_point(doc)


def classify(group: str, rank: int, w2: int, points: Sequence[EllipticPoint]) -> dict:
    spec = EllipticBundleSpec(group, rank, w2, tuple(points))
    return {
        "canonical_points": [p.to_json() for p in canonical_points(spec)],
        "moduli_space": moduli_description(group, rank, spec.w2).to_json(),
        "fiber_count": forgetful_fiber_elliptic(spec),
    }
