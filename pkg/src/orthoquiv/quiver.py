"""Quivers, dimension vectors, doubling, cycles, and the local-model quiver.

A quiver here always knows the symmetry type of each vertex.  The local-model
quiver of a polystable orthogonal (or symplectic) bundle has one vertex per
isotypic summand; a summand of the form ``F + F*`` contributes a pair of
partner vertices ``u``/``u*``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    DuplicateArrowId,
    GenusTooSmall,
    InvalidDecomposition,
    NotComposable,
    QuiverError,
    UnknownVertex,
    UnknownVertexKind,
    UnpairedDualVertex,
)

PLAIN = "plain"
ORTHOGONAL = "orthogonal"
SYMPLECTIC = "symplectic"
DUAL_LEFT = "dual_pair_left"
DUAL_RIGHT = "dual_pair_right"

VERTEX_KINDS = (PLAIN, ORTHOGONAL, SYMPLECTIC, DUAL_LEFT, DUAL_RIGHT)
SUMMAND_KINDS = (ORTHOGONAL, SYMPLECTIC, "dual_pair", PLAIN)


@dataclass(frozen=True)
class Arrow:
    id: int
    src: str
    dst: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    kinds: Mapping[str, str]
    arrows: tuple[Arrow, ...]
    partners: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "kinds", dict(self.kinds))
        object.__setattr__(self, "partners", dict(self.partners))
        object.__setattr__(self, "_by_id", {a.id: a for a in self.arrows})

    def arrow(self, arrow_id: int) -> Arrow:
        return self._by_id[arrow_id]

    @property
    def arrow_ids(self) -> tuple[int, ...]:
        return tuple(a.id for a in self.arrows)

    def kind(self, v: str) -> str:
        return self.kinds[v]

    def sigma(self, v: str) -> str:
        """Partner of a dual-pair vertex; every other vertex is its own partner."""
        return self.partners.get(v, v)

    def out_arrows(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.src == v]

    def arrows_between(self, v: str, w: str) -> list[Arrow]:
        return [a for a in self.arrows if a.src == v and a.dst == w]

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v, "kind": self.kinds[v]} for v in self.vertices],
            "arrows": [{"id": a.id, "src": a.src, "dst": a.dst} for a in self.arrows],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "Quiver":
        try:
            vertices = [v["id"] for v in doc["vertices"]]
            kinds = {v["id"]: v["kind"] for v in doc["vertices"]}
            arrows = [(a["id"], a["src"], a["dst"]) for a in doc["arrows"]]
            partners = doc.get("partners")
        except (KeyError, TypeError) as exc:
            raise QuiverError(f"malformed quiver document: {exc}") from exc
        return build_quiver(vertices, kinds, arrows, partners=partners)


def _pair_dual_vertices(vertices, kinds) -> dict[str, str]:
    """Pair the k-th left vertex with the k-th right vertex, in vertex order."""
    lefts = [v for v in vertices if kinds[v] == DUAL_LEFT]
    rights = [v for v in vertices if kinds[v] == DUAL_RIGHT]
    if len(lefts) != len(rights):
        raise UnpairedDualVertex(
            f"{len(lefts)} dual_pair_left vs {len(rights)} dual_pair_right vertices"
        )
    partners = {}
    for left, right in zip(lefts, rights):
        partners[left] = right
        partners[right] = left
    return partners


def build_quiver(
    vertices: Sequence[str],
    kinds: Mapping[str, str] | Sequence[str],
    arrows: Iterable[tuple[int, str, str] | Arrow],
    partners: Mapping[str, str] | None = None,
) -> Quiver:
    """Validate and build a :class:`Quiver`.

    ``kinds`` may be a mapping or a sequence parallel to ``vertices``.  Dual
    partners are taken from ``partners`` when given, otherwise matched by
    order of appearance.
    """
    vertices = tuple(str(v) for v in vertices)
    if len(set(vertices)) != len(vertices):
        raise QuiverError("duplicate vertex identifiers")
    if not isinstance(kinds, Mapping):
        kinds = list(kinds)
        if len(kinds) != len(vertices):
            raise QuiverError("kinds must match vertices in length")
        kinds = dict(zip(vertices, kinds))
    kinds = {str(k): v for k, v in kinds.items()}
    for v in vertices:
        if v not in kinds:
            raise UnknownVertexKind(f"no kind given for vertex {v!r}")
        if kinds[v] not in VERTEX_KINDS:
            raise UnknownVertexKind(f"vertex {v!r}: unknown kind {kinds[v]!r}")
    for v in kinds:
        if v not in vertices:
            raise UnknownVertex(f"kind given for undeclared vertex {v!r}")

    seen: set[int] = set()
    arrow_list = []
    vset = set(vertices)
    for a in arrows:
        if not isinstance(a, Arrow):
            a = Arrow(int(a[0]), str(a[1]), str(a[2]))
        if a.id in seen:
            raise DuplicateArrowId(f"arrow id {a.id} used twice")
        seen.add(a.id)
        for end in (a.src, a.dst):
            if end not in vset:
                raise UnknownVertex(f"arrow {a.id} references undeclared vertex {end!r}")
        arrow_list.append(a)

    if partners is None:
        partners = _pair_dual_vertices(vertices, kinds)
    else:
        partners = {str(k): str(v) for k, v in partners.items()}
        for v in vertices:
            if kinds[v] in (DUAL_LEFT, DUAL_RIGHT):
                p = partners.get(v)
                want = DUAL_RIGHT if kinds[v] == DUAL_LEFT else DUAL_LEFT
                if p is None or p not in vset or kinds[p] != want or partners.get(p) != v:
                    raise UnpairedDualVertex(f"vertex {v!r} has no valid dual partner")
        for v, p in partners.items():
            if v not in vset or kinds[v] not in (DUAL_LEFT, DUAL_RIGHT, PLAIN):
                raise UnpairedDualVertex(f"partner entry for non-dual vertex {v!r}")
    return Quiver(vertices, kinds, tuple(arrow_list), partners)


# --------------------------------------------------------------------------
# dimension vectors


@dataclass(frozen=True)
class DimensionVector:
    entries: Mapping[str, int]

    def __post_init__(self):
        ent = {str(k): int(v) for k, v in dict(self.entries).items()}
        for k, v in ent.items():
            if v < 0:
                raise ValueError(f"negative dimension at vertex {k!r}")
        object.__setattr__(self, "entries", ent)

    def __getitem__(self, v: str) -> int:
        return self.entries.get(v, 0)

    def total(self) -> int:
        return sum(self.entries.values())

    def is_admissible(self, q: "Quiver | DoubledQuiver") -> bool:
        q = q.base if isinstance(q, DoubledQuiver) else q
        for v in q.vertices:
            k = q.kind(v)
            if k == SYMPLECTIC and self[v] % 2:
                return False
            if k in (DUAL_LEFT, DUAL_RIGHT) and self[v] != self[q.sigma(v)]:
                return False
        return True

    def to_json(self) -> dict:
        return dict(sorted(self.entries.items()))


# --------------------------------------------------------------------------
# doubling


@dataclass(frozen=True)
class DoubledQuiver:
    """``base`` plus a starred arrow for every base arrow.

    The starred arrow of ``a: v -> w`` runs ``sigma(w) -> sigma(v)`` and has id
    ``a.id + offset``.  Plain vertices acquire a formal partner ``v*`` so that
    the adjoint of a map landing in a plain vertex has somewhere to live.
    """

    base: Quiver
    quiver: Quiver
    sigma: Mapping[str, str]
    pairing: Mapping[int, int]
    sign: Mapping[int, int]
    offset: int

    def __post_init__(self):
        for name in ("sigma", "pairing", "sign"):
            object.__setattr__(self, name, dict(getattr(self, name)))

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    @property
    def arrows(self) -> tuple[Arrow, ...]:
        return self.quiver.arrows

    @property
    def added_arrows(self) -> tuple[Arrow, ...]:
        return tuple(a for a in self.quiver.arrows if self.sign[a.id] < 0)

    def arrow(self, arrow_id: int) -> Arrow:
        return self.quiver.arrow(arrow_id)

    def kind(self, v: str) -> str:
        return self.quiver.kind(v)

    def star(self, arrow_id: int) -> int:
        return self.pairing[arrow_id]

    def is_base(self, arrow_id: int) -> bool:
        return self.sign[arrow_id] > 0


def plain_partner(v: str) -> str:
    return v + "*"


def double(q: Quiver) -> DoubledQuiver:
    sigma = {v: q.sigma(v) for v in q.vertices}
    vertices = list(q.vertices)
    kinds = dict(q.kinds)
    for v in q.vertices:
        if q.kind(v) == PLAIN:
            p = plain_partner(v)
            if p in kinds:
                raise QuiverError(f"cannot add partner {p!r}: name already used")
            vertices.append(p)
            kinds[p] = PLAIN
            sigma[v], sigma[p] = p, v
    offset = max((a.id for a in q.arrows), default=-1) + 1
    arrows = list(q.arrows)
    pairing: dict[int, int] = {}
    sign: dict[int, int] = {}
    for a in q.arrows:
        star = Arrow(a.id + offset, sigma[a.dst], sigma[a.src])
        arrows.append(star)
        pairing[a.id], pairing[star.id] = star.id, a.id
        sign[a.id], sign[star.id] = 1, -1
    partners = {v: w for v, w in sigma.items() if v != w}
    full = Quiver(tuple(vertices), kinds, tuple(arrows), partners)
    return DoubledQuiver(q, full, sigma, pairing, sign, offset)


# --------------------------------------------------------------------------
# cycles


def canonical_rotation(word: Sequence[int]) -> tuple[int, ...]:
    w = tuple(word)
    if not w:
        return w
    return min(w[i:] + w[:i] for i in range(len(w)))


@dataclass(frozen=True, order=True)
class Cycle:
    word: tuple[int, ...]

    def __post_init__(self):
        if not self.word:
            raise ValueError("a cycle is a nonempty word")
        object.__setattr__(self, "word", canonical_rotation(self.word))

    def __len__(self) -> int:
        return len(self.word)

    def sort_key(self):
        return (len(self.word), self.word)

    def label(self, names: Mapping[int, str] | None = None) -> str:
        if names is None:
            return "-".join(str(a) for a in self.word)
        return "".join(names[a] for a in self.word)


def check_closed(q: Quiver, word: Sequence[int]) -> None:
    for k, aid in enumerate(word):
        nxt = word[(k + 1) % len(word)]
        if q.arrow(aid).dst != q.arrow(nxt).src:
            raise NotComposable(f"arrow {aid} does not compose with {nxt}")


def enumerate_cycles(q: "DoubledQuiver | Quiver", max_len: int) -> list[Cycle]:
    """All closed words of length <= ``max_len`` up to rotation.

    Sorted by length, then by word.  A word is produced only from its
    lexicographically smallest arrow onwards, so each necklace arises from
    exactly the rotations starting at its minimal letter; the canonical check
    keeps one.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    quiver = q.quiver if isinstance(q, DoubledQuiver) else q
    out_by_vertex: dict[str, list[Arrow]] = {v: [] for v in quiver.vertices}
    for a in sorted(quiver.arrows, key=lambda a: a.id):
        out_by_vertex[a.src].append(a)
    found: list[Cycle] = []

    def extend(start: Arrow, word: list[int], here: str):
        if here == start.src:
            w = tuple(word)
            if canonical_rotation(w) == w:
                found.append(Cycle(w))
        if len(word) == max_len:
            return
        for a in out_by_vertex[here]:
            if a.id < start.id:
                continue
            word.append(a.id)
            extend(start, word, a.dst)
            word.pop()

    for first in sorted(quiver.arrows, key=lambda a: a.id):
        extend(first, [first.id], first.dst)
    found.sort(key=Cycle.sort_key)
    return found


# --------------------------------------------------------------------------
# decomposition data


_DEFAULT_H0 = {ORTHOGONAL: (1, 0), SYMPLECTIC: (0, 1), "dual_pair": (0, 0), PLAIN: (0, 0)}


@dataclass(frozen=True)
class Summand:
    kind: str
    rank: int
    multiplicity: int = 1
    h0_sym: int | None = None
    h0_alt: int | None = None

    def __post_init__(self):
        if self.kind not in SUMMAND_KINDS:
            raise InvalidDecomposition(f"unknown summand kind {self.kind!r}")
        if int(self.rank) < 1 or int(self.multiplicity) < 1:
            raise InvalidDecomposition("rank and multiplicity must be positive")
        sym, alt = _DEFAULT_H0[self.kind]
        object.__setattr__(self, "rank", int(self.rank))
        object.__setattr__(self, "multiplicity", int(self.multiplicity))
        object.__setattr__(self, "h0_sym", sym if self.h0_sym is None else int(self.h0_sym))
        object.__setattr__(self, "h0_alt", alt if self.h0_alt is None else int(self.h0_alt))
        if self.h0_sym < 0 or self.h0_alt < 0:
            raise InvalidDecomposition("h0 corrections must be nonnegative")

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "rank": self.rank,
            "multiplicity": self.multiplicity,
            "h0_sym": self.h0_sym,
            "h0_alt": self.h0_alt,
        }


@dataclass(frozen=True)
class DecompositionData:
    """A polystable bundle as a list of isotypic summands ``F_i (x) V_i``.

    ``ambient`` is ``"orthogonal"`` for orthogonal bundles and ``"symplectic"``
    for symplectic ones; the summand kinds always refer to the stable factor
    ``F_i`` itself.
    """

    genus: int
    summands: tuple[Summand, ...]
    orientation_label: int | None = None
    ambient: str = ORTHOGONAL

    def __post_init__(self):
        summands = tuple(
            s if isinstance(s, Summand) else Summand(**s) for s in self.summands
        )
        object.__setattr__(self, "summands", summands)
        object.__setattr__(self, "genus", int(self.genus))
        if self.genus < 1:
            raise InvalidDecomposition("genus must be at least 1")
        if not summands:
            raise InvalidDecomposition("at least one summand is required")
        if self.ambient not in (ORTHOGONAL, SYMPLECTIC):
            raise InvalidDecomposition(f"unknown ambient type {self.ambient!r}")
        if self.orientation_label not in (None, 1, -1):
            raise InvalidDecomposition("orientation_label must be +1, -1 or absent")
        for i, s in enumerate(summands):
            if s.kind in (ORTHOGONAL, SYMPLECTIC) and s.kind != self.ambient and s.multiplicity % 2:
                raise InvalidDecomposition(
                    f"summand {i}: a {s.kind} factor in a {self.ambient} bundle needs a "
                    f"symplectic multiplicity space, so an even multiplicity"
                )
        kinds = {s.kind for s in summands}
        if PLAIN in kinds and kinds != {PLAIN}:
            raise InvalidDecomposition("plain summands cannot be mixed with self-dual ones")

    @property
    def total_rank(self) -> int:
        """Rank of the bundle ``E`` (a dual pair counts twice)."""
        return sum(s.rank * s.multiplicity * (2 if s.kind == "dual_pair" else 1)
                   for s in self.summands)

    @property
    def is_plain(self) -> bool:
        return all(s.kind == PLAIN for s in self.summands)

    def to_json(self) -> dict:
        doc = {"genus": self.genus, "summands": [s.to_json() for s in self.summands]}
        if self.orientation_label is not None:
            doc["orientation_label"] = self.orientation_label
        if self.ambient != ORTHOGONAL:
            doc["ambient"] = self.ambient
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, doc: Mapping) -> "DecompositionData":
        if not isinstance(doc, Mapping):
            raise InvalidDecomposition("decomposition document must be an object")
        try:
            summands = tuple(Summand(**dict(s)) for s in doc["summands"])
            return cls(
                genus=doc["genus"],
                summands=summands,
                orientation_label=doc.get("orientation_label"),
                ambient=doc.get("ambient", ORTHOGONAL),
            )
        except KeyError as exc:
            raise InvalidDecomposition(f"missing field {exc}") from exc
        except TypeError as exc:
            raise InvalidDecomposition(f"malformed summand: {exc}") from exc


@dataclass(frozen=True)
class VertexInfo:
    """Which summand a vertex came from and with what symmetry."""

    summand: int
    kind: str
    rank: int


def vertex_kind_for(summand_kind: str, ambient: str) -> str:
    """Symmetry of the multiplicity space ``V`` of a self-dual summand.

    The form on ``E`` is the tensor product of the forms on ``F`` and ``V``,
    so ``V`` is orthogonal when the two parities agree and symplectic when
    they differ.
    """
    if summand_kind not in (ORTHOGONAL, SYMPLECTIC):
        raise ValueError(summand_kind)
    return ORTHOGONAL if (summand_kind == ambient) else SYMPLECTIC


def local_model_vertices(d: DecompositionData) -> list[tuple[str, VertexInfo]]:
    out = []
    for i, s in enumerate(d.summands, start=1):
        if s.kind == "dual_pair":
            out.append((f"u{i}", VertexInfo(i - 1, DUAL_LEFT, s.rank)))
            out.append((f"u{i}*", VertexInfo(i - 1, DUAL_RIGHT, s.rank)))
        elif s.kind == PLAIN:
            out.append((f"r{i}", VertexInfo(i - 1, PLAIN, s.rank)))
        else:
            vk = vertex_kind_for(s.kind, d.ambient)
            tag = "s" if vk == ORTHOGONAL else "t"
            out.append((f"{tag}{i}", VertexInfo(i - 1, vk, s.rank)))
    return out


def arrow_count(rank_i: int, rank_j: int, genus: int, same: bool) -> int:
    """``dim Ext^1(F_i, F_j)`` for stable degree-0 bundles."""
    return rank_i * rank_j * (genus - 1) + (1 if same else 0)


def from_decomposition(d: DecompositionData):
    """The local-model quiver, its dimension vector and the isotropy group."""
    from .groups import GroupSpec, group_for_quiver

    if d.genus < 2:
        raise GenusTooSmall(f"genus {d.genus} < 2; use the elliptic module for genus 1")
    verts = local_model_vertices(d)
    names = [v for v, _ in verts]
    kinds = {v: info.kind for v, info in verts}
    partners = {}
    for v, info in verts:
        if info.kind == DUAL_LEFT:
            partners[v] = v + "*"
            partners[v + "*"] = v
    arrows = []
    next_id = 0
    for v, iv in verts:
        for w, iw in verts:
            n = arrow_count(iv.rank, iw.rank, d.genus, v == w)
            for _ in range(n):
                arrows.append(Arrow(next_id, v, w))
                next_id += 1
    q = build_quiver(names, kinds, arrows, partners=partners)
    alpha = DimensionVector({v: d.summands[info.summand].multiplicity for v, info in verts})
    spec: GroupSpec = group_for_quiver(q, alpha)
    return q, alpha, spec


def vertex_info(d: DecompositionData) -> dict[str, VertexInfo]:
    return dict(local_model_vertices(d))
