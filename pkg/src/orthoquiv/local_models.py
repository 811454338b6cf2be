"""Dimension bookkeeping and the smooth/singular classification of local models.

Everything here is arithmetic on :class:`DecompositionData`; no matrices are
built.  The asym dimensions are computed from closed formulas, independently
of the coordinate model in :mod:`orthoquiv.groups` (tests compare the two).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import comb

from .errors import GenusTooSmall, InvalidDecomposition
from .groups import GL, O, SP, GroupBlock, GroupSpec, h1_values
from .quiver import ORTHOGONAL, PLAIN, SYMPLECTIC, DecompositionData, arrow_count

SMOOTH_RS = "SmoothRegularlyStable"
SMOOTH_EXC = "SmoothExceptional"
SINGULAR = "Singular"
NOT_CLASSIFIED = "NotClassified"

PFAFFIAN_NOTE = (
    "even-rank SO isotropy: polarized pfaffians are extra invariants beyond "
    "traces along cycles and are not generated here"
)


def _so(m: int) -> int:
    return m * (m - 1) // 2


def _s2(m: int) -> int:
    return m * (m + 1) // 2


@dataclass(frozen=True)
class BlockDims:
    """One row of the per-block table: ``(i, j)`` are summand indices."""

    i: int
    j: int
    ext1: int
    asym: int
    h1_sym: int | None = None
    h1_alt: int | None = None

    def to_json(self) -> dict:
        doc = {"i": self.i, "j": self.j, "ext1": self.ext1, "asym": self.asym}
        if self.h1_sym is not None:
            doc["h1_sym"] = self.h1_sym
            doc["h1_alt"] = self.h1_alt
        return doc


@dataclass(frozen=True)
class ExtDims:
    ext1_dim: int
    ext1_asym_dim: int
    blocks: tuple[BlockDims, ...]

    def __iter__(self):
        return iter((self.ext1_dim, self.ext1_asym_dim, self.blocks))

    @property
    def asym(self) -> int:
        return self.ext1_asym_dim


def _summand_ext1(s, t, genus: int, same: bool) -> int:
    """``dim Ext^1(E_s, E_t)`` between isotypic components."""
    fs = 2 if s.kind == "dual_pair" else 1
    ft = 2 if t.kind == "dual_pair" else 1
    if same:
        # inside one component: d_ii on each vertex plus the u <-> u* arrows
        n = fs * arrow_count(s.rank, s.rank, genus, True) * s.multiplicity ** 2
        if fs == 2:
            n += 2 * arrow_count(s.rank, s.rank, genus, False) * s.multiplicity ** 2
        return n
    return fs * ft * arrow_count(s.rank, t.rank, genus, False) * s.multiplicity * t.multiplicity


def _diagonal_asym(s, genus: int, ambient: str) -> tuple[int, int, int]:
    h1s, h1a = h1_values(s.rank, genus, s.h0_sym, s.h0_alt)
    m = s.multiplicity
    if s.kind == PLAIN:
        return _summand_ext1(s, s, genus, True), h1s, h1a
    if s.kind == "dual_pair":
        gl_part = arrow_count(s.rank, s.rank, genus, True) * m * m
        if ambient == ORTHOGONAL:
            sq = h1s * _so(m) + h1a * _s2(m)
        else:
            sq = h1s * _s2(m) + h1a * _so(m)
        return gl_part + 2 * sq, h1s, h1a
    # F self-dual: V orthogonal when the parities of F and E agree
    v_orthogonal = (s.kind == ambient)
    lie, other = (_so(m), _s2(m)) if v_orthogonal else (_s2(m), _so(m))
    n_plus = h1s if s.kind == ORTHOGONAL else h1a
    n_minus = h1a if s.kind == ORTHOGONAL else h1s
    return n_plus * lie + n_minus * other, h1s, h1a


def ext_dims(d: DecompositionData) -> ExtDims:
    if d.genus < 2:
        raise GenusTooSmall(f"genus {d.genus} < 2")
    blocks = []
    total = asym = 0
    for i, s in enumerate(d.summands):
        e = _summand_ext1(s, s, d.genus, True)
        a, h1s, h1a = _diagonal_asym(s, d.genus, d.ambient)
        blocks.append(BlockDims(i, i, e, a, h1s, h1a))
        total += e
        asym += a
    for i, s in enumerate(d.summands):
        for j in range(i + 1, len(d.summands)):
            t = d.summands[j]
            e = _summand_ext1(s, t, d.genus, False)
            # both orders appear in Ext^1(E, E); a plain pair is unconstrained
            a = 2 * e if d.is_plain else e
            blocks.append(BlockDims(i, j, 2 * e, a))
            total += 2 * e
            asym += a
    return ExtDims(total, asym, tuple(blocks))


def aut_group(d: DecompositionData, oriented: bool = False) -> GroupSpec:
    blocks = []
    for i, s in enumerate(d.summands, start=1):
        m = s.multiplicity
        if s.kind == "dual_pair":
            blocks.append(GroupBlock(GL, m, f"u{i}", f"u{i}*"))
        elif s.kind == PLAIN:
            blocks.append(GroupBlock(GL, m, f"r{i}"))
        elif s.kind == d.ambient:
            blocks.append(GroupBlock(O, m, f"s{i}"))
        else:
            blocks.append(GroupBlock(SP, m, f"t{i}"))
    reach = None
    if oriented:
        # g in Aut with det(g) = -1 exists iff some O(V_i) meets det -1 on E,
        # i.e. some orthogonal factor F_i has odd rank
        reach = any(s.kind == ORTHOGONAL and s.kind == d.ambient and s.rank % 2
                    for s in d.summands)
    return GroupSpec(tuple(blocks), oriented=oriented, det_minus_one_reachable=reach)


def orientation_fibers(d: DecompositionData) -> int:
    """Number of SO-structures over the orthogonal bundle ``d`` (1 or 2)."""
    for s in d.summands:
        if s.kind == ORTHOGONAL and s.rank % 2:
            return 1
    return 2


def hyperbolic_multiplicity(dim_h1: int) -> int:
    if dim_h1 < 1:
        raise ValueError("dim_h1 must be at least 1")
    return comb(2 * (dim_h1 - 1), dim_h1 - 1)


def hyperbolic_dimension(d: DecompositionData) -> int | None:
    """``h^1`` of the square of ``F*`` that the hyperbolic point ``F + F*`` sees.

    For an orthogonal bundle this is ``h^1(Lambda^2 F*)``; for a symplectic one
    ``h^1(S^2 F*)``.  Only defined for a single dual pair of multiplicity 1.
    """
    if len(d.summands) != 1 or d.summands[0].kind != "dual_pair":
        return None
    s = d.summands[0]
    if s.multiplicity != 1:
        return None
    h1s, h1a = h1_values(s.rank, d.genus, s.h0_sym, s.h0_alt)
    return h1a if d.ambient == ORTHOGONAL else h1s


@dataclass(frozen=True)
class Verdict:
    smoothness: str
    notes: tuple[str, ...] = ()
    multiplicity: int | None = None


def _shape(d: DecompositionData):
    return sorted((s.kind, s.rank, s.multiplicity) for s in d.summands)


def classify_smoothness(d: DecompositionData, group: str = "SO") -> Verdict:
    if d.genus < 2:
        raise GenusTooSmall(f"genus {d.genus} < 2")
    if group not in ("SO", "O", "Sp"):
        raise InvalidDecomposition(f"unknown group {group!r}")
    if d.is_plain:
        return Verdict(NOT_CLASSIFIED, ("plain summands describe a GL-type point",))
    if group == "Sp":
        if d.ambient != SYMPLECTIC:
            d = replace(d, ambient=SYMPLECTIC)
        return _classify_sp(d)
    if d.ambient != ORTHOGONAL:
        raise InvalidDecomposition("SO/O classification needs an orthogonal bundle")
    return _classify_so(d, group)


def _classify_so(d: DecompositionData, group: str) -> Verdict:
    g, r = d.genus, d.total_rank
    shape = _shape(d)
    if r < 3:
        return Verdict(NOT_CLASSIFIED, ("rank below 3 is outside the classification",))
    exceptional_range = g == 2 and r in (3, 4)

    if shape == [(ORTHOGONAL, r, 1)]:
        return Verdict(SMOOTH_RS, ("stable with automorphism group the center",))
    if _two_odd_summands(d, group):
        return Verdict(SMOOTH_RS, ("two distinct stable summands of odd rank: "
                                   "SO automorphisms are central",))

    hyp = hyperbolic_dimension(d)
    if hyp is not None:
        mult = hyperbolic_multiplicity(hyp) if hyp >= 1 else 1
        note = f"hyperbolic point F + F* with h1 = {hyp}: multiplicity {mult}"
        if mult > 1:
            return Verdict(SINGULAR, (note,), mult)
        return Verdict(NOT_CLASSIFIED, (note + "; outside the listed shapes",), mult)

    if len(shape) == 1 and shape[0][0] == SYMPLECTIC and shape[0][2] == 2:
        if g == 2 and shape[0][1] == 2:
            return Verdict(SMOOTH_EXC, ("Sp_2 acts coregularly on the local model",))
        return Verdict(SINGULAR, ("symplectic double: the Sp_2 action is not coregular",))

    if shape == sorted([(ORTHOGONAL, 1, 1), ("dual_pair", 1, 1)]):
        if g == 2:
            return Verdict(SMOOTH_EXC, ("rank 3, O + L + L^-1: Ext1(O, L) is a line",))
        return Verdict(SINGULAR, ("rank 3, O + L + L^-1: Ext1(O, L) has dimension at least 2",))

    if shape == [(ORTHOGONAL, 1, 3)]:
        if g == 2:
            return Verdict(SMOOTH_EXC, ("trivial rank 3 bundle: two copies of the adjoint "
                                        "representation of SO_3 are coregular",))
        return Verdict(SINGULAR, ("trivial rank 3 bundle is not regularly stable",))

    if len(shape) == 2 and all(k == ORTHOGONAL and m == 1 for k, _, m in shape):
        e12 = shape[0][1] * shape[1][1] * (g - 1)
        return Verdict(SINGULAR, (f"E1 + E2 with dim Ext1(E1, E2) = {e12} >= 2: "
                                  "the mu_2 quotient is not smooth",))

    if exceptional_range:
        return Verdict(NOT_CLASSIFIED, ("genus 2, rank 3 or 4: outside the listed shapes",))
    return Verdict(SINGULAR, ("not regularly stable, and the smooth locus is exactly "
                              "the regularly stable locus here",))


def _two_odd_summands(d: DecompositionData, group: str) -> bool:
    if group != "SO" or d.total_rank % 2 or len(d.summands) != 2:
        return False
    return all(s.kind == ORTHOGONAL and s.multiplicity == 1 and s.rank % 2 for s in d.summands)


def _classify_sp(d: DecompositionData) -> Verdict:
    shape = _shape(d)
    if len(shape) == 1 and shape[0][0] == SYMPLECTIC and shape[0][2] == 1:
        return Verdict(SMOOTH_RS, ("stable with automorphism group the center",))
    return Verdict(SINGULAR, ("not regularly stable; the smooth locus is the regularly stable locus",))


@dataclass(frozen=True)
class LocalModelReport:
    ext1_dim: int
    ext1_asym_dim: int
    aut_group: GroupSpec
    orientation_fibers: int
    smoothness: str
    multiplicity: int | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "ext1_dim": self.ext1_dim,
            "ext1_asym_dim": self.ext1_asym_dim,
            "aut_group": self.aut_group.to_json(),
            "orientation_fibers": self.orientation_fibers,
            "smoothness": self.smoothness,
            "multiplicity": self.multiplicity,
            "notes": list(self.notes),
        }


def local_model_report(d: DecompositionData, group: str = "SO",
                       oriented: bool = False) -> LocalModelReport:
    if group == "Sp" and d.ambient != SYMPLECTIC:
        d = replace(d, ambient=SYMPLECTIC)
    dims = ext_dims(d)
    verdict = classify_smoothness(d, group)
    notes = list(verdict.notes)
    mult = None
    hyp = hyperbolic_dimension(d)
    if hyp is not None:
        mult = hyperbolic_multiplicity(hyp) if hyp >= 1 else 1
        if hyp == 0:
            notes.append("h1 of the square of F* vanishes: the G_m action on the "
                         "asym model is trivial")
    if group == "SO" and any(s.kind == ORTHOGONAL and s.multiplicity >= 2
                             and s.multiplicity % 2 == 0 for s in d.summands):
        notes.append(PFAFFIAN_NOTE)
    fibers = orientation_fibers(d) if d.ambient == ORTHOGONAL else 1
    return LocalModelReport(
        ext1_dim=dims.ext1_dim,
        ext1_asym_dim=dims.ext1_asym_dim,
        aut_group=aut_group(d, oriented),
        orientation_fibers=fibers,
        smoothness=verdict.smoothness,
        multiplicity=mult,
        notes=tuple(notes),
    )
