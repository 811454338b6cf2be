"""Structured groups, representations, the conjugation action and adjoints.

Vertex forms.  Each vertex ``v`` of a doubled quiver carries a matrix ``C_v``
so that ``x^T C_v y`` pairs ``V_v`` with ``V_sigma(v)``:

    orthogonal   I
    symplectic   J = [[0, I], [-I, 0]]
    u / u*       I / eps * I      (eps = +1 orthogonal bundle, -1 symplectic)
    r / r*       I / I

The adjoint of ``f: V_v -> V_w`` is ``C_v^{-1} f^T C_w : V_sigma(w) -> V_sigma(v)``.
A group element is compatible with the forms when
``g_v^T C_v g_sigma(v) = C_v`` for every vertex; for partner vertices this
says the partner acts by the transpose-inverse.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import exact as ex
from .errors import InconsistentH0, MissingForm, ShapeMismatch, SingularCayley, GenusTooSmall
from .quiver import (
    DUAL_LEFT,
    DUAL_RIGHT,
    ORTHOGONAL,
    PLAIN,
    SYMPLECTIC,
    DecompositionData,
    DimensionVector,
    DoubledQuiver,
    Quiver,
    double,
    from_decomposition,
    plain_partner,
    vertex_info,
)

GL, O, SP = "GL", "O", "Sp"


# --------------------------------------------------------------------------
# group specs and elements


@dataclass(frozen=True)
class GroupBlock:
    kind: str
    size: int
    vertex: str | None = None
    dual: str | None = None

    def to_json(self) -> dict:
        doc = {"kind": self.kind, "size": self.size}
        if self.vertex is not None:
            doc["vertex"] = self.vertex
        if self.dual is not None:
            doc["dual"] = self.dual
        return doc


@dataclass(frozen=True)
class GroupSpec:
    blocks: tuple[GroupBlock, ...]
    oriented: bool = False
    det_minus_one_reachable: bool | None = None

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))

    def to_json(self) -> dict:
        doc = {"blocks": [b.to_json() for b in self.blocks]}
        if self.oriented:
            doc["oriented"] = True
            doc["det_minus_one_reachable"] = bool(self.det_minus_one_reachable)
        return doc

    def label(self) -> str:
        return " x ".join(f"{b.kind}_{b.size}" for b in self.blocks) or "trivial"


def group_for_quiver(q: Quiver | DoubledQuiver, alpha: DimensionVector) -> GroupSpec:
    """The product of classical groups that preserves the vertex forms."""
    base = q.base if isinstance(q, DoubledQuiver) else q
    blocks = []
    for v in base.vertices:
        k = base.kind(v)
        n = alpha[v]
        if k == ORTHOGONAL:
            blocks.append(GroupBlock(O, n, v))
        elif k == SYMPLECTIC:
            blocks.append(GroupBlock(SP, n, v))
        elif k == DUAL_LEFT:
            blocks.append(GroupBlock(GL, n, v, base.sigma(v)))
        elif k == PLAIN:
            blocks.append(GroupBlock(GL, n, v, plain_partner(v)))
    return GroupSpec(tuple(blocks))


def gl_group(q: Quiver | DoubledQuiver, alpha: DimensionVector) -> GroupSpec:
    """``GL(alpha)``: an independent general linear group at every base vertex."""
    base = q.base if isinstance(q, DoubledQuiver) else q
    return GroupSpec(tuple(GroupBlock(GL, alpha[v], v) for v in base.vertices))


@dataclass(frozen=True)
class GroupElement:
    spec: GroupSpec
    matrices: tuple

    def __post_init__(self):
        if len(self.matrices) != len(self.spec.blocks):
            raise ShapeMismatch("one matrix per block is required")
        vm: dict[str, tuple] = {}
        for b, g in zip(self.spec.blocks, self.matrices):
            if len(g) != b.size:
                raise ShapeMismatch(f"block {b.kind}_{b.size} got a {len(g)}x{len(g)} matrix")
            if b.vertex is None:
                continue
            ginv = ex.inverse(g) if b.size else ()
            vm[b.vertex] = (g, ginv)
            if b.dual is not None:
                vm[b.dual] = (ex.transpose(ginv), ex.transpose(g))
        object.__setattr__(self, "_vertex", vm)

    def at(self, v: str):
        """``(g_v, g_v^{-1})``."""
        return self._vertex[v]

    def covers(self, v: str) -> bool:
        return v in self._vertex

    def compose(self, other: "GroupElement") -> "GroupElement":
        if other.spec.blocks != self.spec.blocks:
            raise ShapeMismatch("elements of different groups")
        return GroupElement(
            self.spec, tuple(ex.matmul(a, b) for a, b in zip(self.matrices, other.matrices))
        )

    def satisfies_relations(self) -> bool:
        for b, g in zip(self.spec.blocks, self.matrices):
            if not block_relation_holds(b.kind, g):
                return False
        return True


def identity_element(spec: GroupSpec) -> GroupElement:
    return GroupElement(spec, tuple(ex.identity(b.size) for b in spec.blocks))


def block_relation_holds(kind: str, g) -> bool:
    n = len(g)
    if n == 0:
        return True
    if kind == O:
        return ex.matmul(ex.transpose(g), g) == ex.identity(n)
    if kind == SP:
        j = ex.standard_j(n)
        return ex.matmul_chain(ex.transpose(g), j, g) == j
    return ex.det(g) != 0


def cayley(a) -> tuple:
    """``(I - A)^{-1} (I + A)``; raises :class:`SingularCayley` if ``I - A`` is singular."""
    n = len(a)
    eye = ex.identity(n)
    try:
        inv = ex.inverse(ex.sub(eye, a))
    except ZeroDivisionError as exc:
        raise SingularCayley("I - A is singular") from exc
    return ex.matmul(inv, ex.add(eye, a))


def _random_antisymmetric(rng: random.Random, n: int, num: int, den: int):
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = ex.random_rational(rng, num, den)
            m[i][j], m[j][i] = x, -x
    return ex.as_matrix(m)


def _random_symmetric(rng: random.Random, n: int, num: int, den: int):
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            x = ex.random_rational(rng, num, den)
            m[i][j] = m[j][i] = x
    return ex.as_matrix(m)


def sample_block(kind: str, n: int, rng: random.Random, num: int = 3, den: int = 2,
                 max_tries: int = 64):
    if n == 0:
        return ()
    for _ in range(max_tries):
        try:
            if kind == O:
                g = cayley(_random_antisymmetric(rng, n, num, den))
                if rng.random() < 0.5:
                    g = ex.matmul(ex.diag([-1] + [1] * (n - 1)), g)
                return g
            if kind == SP:
                h = ex.matmul(ex.standard_j(n), _random_symmetric(rng, n, num, den))
                return cayley(h)
            g = ex.as_matrix([[ex.random_rational(rng, num, den) for _ in range(n)]
                              for _ in range(n)])
            if ex.det(g) != 0:
                return g
        except SingularCayley:
            pass
    raise SingularCayley(f"no invertible {kind}_{n} sample after {max_tries} tries")


def sample_group_element(spec: GroupSpec, seed: int, num: int = 3, den: int = 2) -> GroupElement:
    mats = []
    for i, b in enumerate(spec.blocks):
        rng = ex.make_rng(seed, "block", i)
        mats.append(sample_block(b.kind, b.size, rng, num, den))
    return GroupElement(spec, tuple(mats))


# --------------------------------------------------------------------------
# representations


def _shape_ok(m, rows: int, cols: int) -> bool:
    return len(m) == rows and all(len(r) == cols for r in m)


@dataclass(frozen=True)
class Representation:
    quiver: Quiver | DoubledQuiver
    alpha: DimensionVector
    matrices: Mapping[int, tuple]

    def __post_init__(self):
        mats = {int(k): ex.as_matrix(v) for k, v in dict(self.matrices).items()}
        q = self.q
        for a in q.arrows:
            if a.id not in mats:
                raise ShapeMismatch(f"no matrix for arrow {a.id}")
            rows, cols = self.alpha[a.dst], self.alpha[a.src]
            if not _shape_ok(mats[a.id], rows, cols):
                raise ShapeMismatch(
                    f"arrow {a.id}: expected {rows}x{cols}, got "
                    f"{len(mats[a.id])}x{len(mats[a.id][0]) if mats[a.id] else '?'}"
                )
        extra = set(mats) - set(q.arrow_ids)
        if extra:
            raise ShapeMismatch(f"matrices given for unknown arrows {sorted(extra)}")
        object.__setattr__(self, "matrices", mats)

    @property
    def q(self) -> Quiver:
        return self.quiver.quiver if isinstance(self.quiver, DoubledQuiver) else self.quiver

    def __getitem__(self, arrow_id: int):
        return self.matrices[arrow_id]

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha.to_json(),
            "matrices": {
                str(k): [[Fraction(x).numerator, Fraction(x).denominator] for row in m for x in row]
                for k, m in sorted(self.matrices.items())
            },
        }

    @classmethod
    def from_json(cls, quiver, doc: Mapping) -> "Representation":
        try:
            alpha = DimensionVector(doc["alpha"])
            q = quiver.quiver if isinstance(quiver, DoubledQuiver) else quiver
            mats = {}
            for k, flat in doc["matrices"].items():
                a = q.arrow(int(k))
                rows, cols = alpha[a.dst], alpha[a.src]
                if len(flat) != rows * cols:
                    raise ShapeMismatch(f"arrow {k}: {len(flat)} entries for {rows}x{cols}")
                vals = [Fraction(int(n), int(d)) for n, d in flat]
                mats[int(k)] = tuple(tuple(vals[i * cols:(i + 1) * cols]) for i in range(rows))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, ShapeMismatch):
                raise
            raise ShapeMismatch(f"malformed representation document: {exc}") from exc
        return cls(quiver, alpha, mats)

    def restrict(self, base: Quiver) -> "Representation":
        return Representation(base, self.alpha, {a.id: self.matrices[a.id] for a in base.arrows})


def doubled_alpha(dq: DoubledQuiver, alpha: DimensionVector) -> DimensionVector:
    ent = dict(alpha.entries)
    for v in dq.vertices:
        if v not in ent:
            ent[v] = alpha[dq.sigma[v]]
    return DimensionVector(ent)


def zero_representation(q, alpha: DimensionVector) -> Representation:
    qq = q.quiver if isinstance(q, DoubledQuiver) else q
    return Representation(q, alpha, {a.id: ex.zeros(alpha[a.dst], alpha[a.src]) for a in qq.arrows})


def random_representation(q, alpha: DimensionVector, seed: int, num: int = 5,
                          den: int = 1) -> Representation:
    qq = q.quiver if isinstance(q, DoubledQuiver) else q
    mats = {}
    for a in qq.arrows:
        rng = ex.make_rng(seed, "arrow", a.id)
        mats[a.id] = ex.as_matrix(
            [[ex.random_rational(rng, num, den) for _ in range(alpha[a.src])]
             for _ in range(alpha[a.dst])]
        )
    return Representation(q, alpha, mats)


def act(g: GroupElement, r: Representation) -> Representation:
    """``f_a -> g_{t(a)} f_a g_{s(a)}^{-1}``."""
    out = {}
    for a in r.q.arrows:
        for v in (a.src, a.dst):
            if not g.covers(v) and r.alpha[v]:
                raise ShapeMismatch(f"group element does not act on vertex {v!r}")
        f = r.matrices[a.id]
        if not r.alpha[a.src] or not r.alpha[a.dst]:
            out[a.id] = f
            continue
        gt, _ = g.at(a.dst)
        _, gs_inv = g.at(a.src)
        if len(gt) != r.alpha[a.dst] or len(gs_inv) != r.alpha[a.src]:
            raise ShapeMismatch(f"block size does not match alpha at arrow {a.id}")
        out[a.id] = ex.matmul(ex.matmul(gt, f), gs_inv)
    return Representation(r.quiver, r.alpha, out)


# --------------------------------------------------------------------------
# forms and adjoints


@dataclass(frozen=True)
class VertexForm:
    """``C_v`` per vertex, plus the symmetry sign ``eps_v`` with ``C_sigma(v) = eps_v C_v^T``."""

    forms: Mapping[str, tuple]
    eps: Mapping[str, int] = field(default_factory=dict)

    def __getitem__(self, v: str):
        return self.forms[v]

    def __contains__(self, v: str) -> bool:
        return v in self.forms


def standard_forms(q: Quiver | DoubledQuiver, alpha: DimensionVector,
                   ambient_sign: int = 1) -> VertexForm:
    base = q.base if isinstance(q, DoubledQuiver) else q
    forms, eps = {}, {}
    for v in base.vertices:
        k, n = base.kind(v), alpha[v]
        if k == ORTHOGONAL:
            forms[v], eps[v] = ex.identity(n), 1
        elif k == SYMPLECTIC:
            forms[v], eps[v] = ex.standard_j(n), -1
        elif k == DUAL_LEFT:
            forms[v], eps[v] = ex.identity(n), ambient_sign
        elif k == DUAL_RIGHT:
            forms[v], eps[v] = ex.scale(ambient_sign, ex.identity(n)), ambient_sign
        elif k == PLAIN:
            forms[v], eps[v] = ex.identity(n), 1
            forms[plain_partner(v)], eps[plain_partner(v)] = ex.identity(n), 1
    return VertexForm(forms, eps)


def check_forms(forms: VertexForm, q: Quiver | DoubledQuiver, alpha: DimensionVector) -> None:
    base = q.base if isinstance(q, DoubledQuiver) else q
    for v in base.vertices:
        if base.kind(v) == PLAIN:
            continue
        if v not in forms:
            raise MissingForm(f"no form at vertex {v!r}")
        c = forms[v]
        if len(c) != alpha[v]:
            raise ShapeMismatch(f"form at {v!r} has wrong size")
        if base.kind(v) == ORTHOGONAL and c != ex.transpose(c, len(c)):
            raise MissingForm(f"form at {v!r} is not symmetric")
        if base.kind(v) == SYMPLECTIC and c != ex.scale(-1, ex.transpose(c, len(c))):
            raise MissingForm(f"form at {v!r} is not antisymmetric")
        if alpha[v] and ex.det(c) == 0:
            raise MissingForm(f"form at {v!r} is degenerate")


def _form(forms: VertexForm, v: str, n: int):
    if v in forms:
        return forms[v]
    return ex.identity(n)


def adjoint(f, c_src, c_dst, rows_src: int):
    """``C_src^{-1} f^T C_dst`` for ``f: V_src -> V_dst``."""
    if not rows_src:
        return ()
    ft = ex.transpose(f, rows_src)
    if not ft or not ft[0]:
        return ft
    return ex.matmul(ex.matmul(ex.inverse(c_src), ft), c_dst)


class _InverseCache:
    def __init__(self, forms: VertexForm):
        self.forms = forms
        self.cache: dict[str, tuple] = {}

    def inv(self, v: str, n: int):
        if v not in self.cache:
            self.cache[v] = ex.inverse(_form(self.forms, v, n)) if n else ()
        return self.cache[v]


def arrow_adjoint(f, src: str, dst: str, alpha: DimensionVector, forms: VertexForm,
                  cache: _InverseCache | None = None):
    ns, nd = alpha[src], alpha[dst]
    if not ns:
        return ()
    if not nd:
        return tuple(() for _ in range(ns))
    cache = cache or _InverseCache(forms)
    ft = ex.transpose(f, ns)
    return ex.matmul(ex.matmul(cache.inv(src, ns), ft), _form(forms, dst, nd))


def adjoint_extend(r: Representation, forms: VertexForm | None = None,
                   dq: DoubledQuiver | None = None, ambient_sign: int = 1) -> Representation:
    """Extend a base representation to the doubled quiver by ``f_{a*} = f_a^dagger``."""
    base = r.quiver.base if isinstance(r.quiver, DoubledQuiver) else r.quiver
    dq = dq or double(base)
    alpha = doubled_alpha(dq, r.alpha)
    if forms is None:
        forms = standard_forms(base, alpha, ambient_sign)
    check_forms(forms, base, alpha)
    cache = _InverseCache(forms)
    mats = {}
    for a in base.arrows:
        f = r.matrices[a.id]
        mats[a.id] = f
        mats[dq.star(a.id)] = arrow_adjoint(f, a.src, a.dst, alpha, forms, cache)
    return Representation(dq, alpha, mats)


def pair_sign(forms: VertexForm, src: str, dst: str) -> int:
    """``(f^dagger)^dagger = pair_sign * f``."""
    return forms.eps.get(src, 1) * forms.eps.get(dst, 1)


# --------------------------------------------------------------------------
# the antisymmetric model of Ext^1


def h1_values(rank: int, genus: int, h0_sym: int, h0_alt: int) -> tuple[int, int]:
    """``(h^1(S^2 F*), h^1(Lambda^2 F*))`` by Riemann-Roch in degree 0."""
    return (h0_sym + rank * (rank + 1) // 2 * (genus - 1),
            h0_alt + rank * (rank - 1) // 2 * (genus - 1))


def check_h0(d: DecompositionData) -> None:
    for i, s in enumerate(d.summands):
        total = s.h0_sym + s.h0_alt
        want = 1 if s.kind in (ORTHOGONAL, SYMPLECTIC) else 0
        if total != want:
            raise InconsistentH0(
                f"summand {i}: h0_sym + h0_alt = {total}, expected {want} for a "
                f"simple {s.kind} bundle"
            )


@dataclass(frozen=True)
class ArrowPair:
    """A coordinate block of the antisymmetric model.

    ``free`` carries an arbitrary matrix; ``bound`` is determined by
    ``f_bound = -tau * f_free^dagger``.  When ``free == bound`` the arrow is
    self-paired and the relation cuts out a (-tau)-eigenspace of the adjoint.
    """

    free: int
    bound: int
    tau: int


@dataclass(frozen=True)
class AsymModel:
    decomposition: DecompositionData
    quiver: Quiver
    alpha: DimensionVector
    group: GroupSpec
    forms: VertexForm
    pairs: tuple[ArrowPair, ...]
    doubled: DoubledQuiver
    unconstrained: tuple[int, ...] = ()

    @property
    def ambient_sign(self) -> int:
        return 1 if self.decomposition.ambient == ORTHOGONAL else -1


def _mirror(q: Quiver, arrow_index: dict, a) -> int:
    v, w, k = arrow_index[a.id]
    key = (q.sigma(w), q.sigma(v))
    return q.arrows_between(*key)[k].id


def build_asym_model(d: DecompositionData) -> AsymModel:
    if d.genus < 2:
        raise GenusTooSmall(f"genus {d.genus} < 2")
    check_h0(d)
    q, alpha, spec = from_decomposition(d)
    info = vertex_info(d)
    sign = 1 if d.ambient == ORTHOGONAL else -1
    forms = standard_forms(q, alpha, sign)
    arrow_index = {}
    for v in q.vertices:
        for w in q.vertices:
            for k, a in enumerate(q.arrows_between(v, w)):
                arrow_index[a.id] = (v, w, k)
    pairs = []
    done = set()
    if d.is_plain:
        # a GL-type point: no form on E, so nothing is cut out
        return AsymModel(d, q, alpha, spec, forms, (), double(q), q.arrow_ids)
    for a in q.arrows:
        if a.id in done:
            continue
        m = _mirror(q, arrow_index, a)
        if m != a.id:
            pairs.append(ArrowPair(min(a.id, m), max(a.id, m), 1))
            done.update((a.id, m))
            continue
        v, w, k = arrow_index[a.id]
        s = d.summands[info[v].summand]
        h1s, h1a = h1_values(s.rank, d.genus, s.h0_sym, s.h0_alt)
        if s.kind == ORTHOGONAL:
            n_plus = h1s
        elif s.kind == SYMPLECTIC:
            n_plus = h1a
        else:
            n_plus = h1s
        pairs.append(ArrowPair(a.id, a.id, 1 if k < n_plus else -1))
        done.add(a.id)
    return AsymModel(d, q, alpha, spec, forms, tuple(pairs), double(q))


def _asym_matrices(model: AsymModel, rng: random.Random, num: int, den: int) -> dict:
    q, alpha, forms = model.quiver, model.alpha, model.forms
    cache = _InverseCache(forms)
    mats = {}
    for aid in model.unconstrained:
        a = q.arrow(aid)
        mats[aid] = ex.as_matrix([[ex.random_rational(rng, num, den) for _ in range(alpha[a.src])]
                                  for _ in range(alpha[a.dst])])
    for p in model.pairs:
        a = q.arrow(p.free)
        x = ex.as_matrix([[ex.random_rational(rng, num, den) for _ in range(alpha[a.src])]
                          for _ in range(alpha[a.dst])])
        xd = arrow_adjoint(x, a.src, a.dst, alpha, forms, cache)
        if p.free == p.bound:
            mats[a.id] = ex.sub(x, ex.scale(p.tau, xd)) if x and x[0] else x
        else:
            mats[p.free] = x
            mats[p.bound] = ex.scale(-p.tau, xd) if xd and xd[0] else xd
    return mats


def asym_point(d: DecompositionData | AsymModel, seed: int, num: int = 9,
               den: int = 1) -> Representation:
    """A random point of the antisymmetric model, as a representation of ``Q_E``."""
    model = d if isinstance(d, AsymModel) else build_asym_model(d)
    rng = ex.make_rng(seed, "asym")
    return Representation(model.quiver, model.alpha, _asym_matrices(model, rng, num, den))


def asym_subspace_sample(d: DecompositionData | AsymModel, seed: int, num: int = 9,
                         den: int = 1) -> Representation:
    """A random point of ``Ext^1_asym``, adjoint-extended to the doubled quiver.

    The base arrows carry the point itself; each starred arrow carries the
    adjoint of its base arrow, which is what the structured trace invariants
    read.
    """
    model = d if isinstance(d, AsymModel) else build_asym_model(d)
    x = asym_point(model, seed, num, den)
    return adjoint_extend(x, model.forms, model.doubled)


def asym_violations(model: AsymModel, r: Representation) -> list[int]:
    """Arrow ids whose matrices break the pairing relation (empty means member)."""
    q, alpha, forms = model.quiver, model.alpha, model.forms
    cache = _InverseCache(forms)
    bad = []
    for p in model.pairs:
        a = q.arrow(p.free)
        fd = arrow_adjoint(r[p.free], a.src, a.dst, alpha, forms, cache)
        want = ex.scale(-p.tau, fd) if fd and fd[0] else fd
        if ex.as_matrix(r[p.bound]) != ex.as_matrix(want):
            bad.append(p.bound)
    return bad


def is_asym_member(model: AsymModel, r: Representation) -> bool:
    return not asym_violations(model, r)


def asym_constraint_dimension(model: AsymModel) -> int:
    """Dimension of the model as the kernel of its defining linear equations.

    Built from the relations alone: one unknown per matrix entry of every
    arrow, one equation per entry of every bound arrow.
    """
    q, alpha, forms = model.quiver, model.alpha, model.forms
    offsets, nvars = {}, 0
    for a in q.arrows:
        offsets[a.id] = nvars
        nvars += alpha[a.dst] * alpha[a.src]
    if nvars == 0:
        return 0
    cache = _InverseCache(forms)
    rows = []
    for p in model.pairs:
        a = q.arrow(p.free)
        nr, nc = alpha[a.dst], alpha[a.src]
        if not nr or not nc:
            continue
        # f_bound + tau * f_free^dagger = 0, entry by entry; bound is nc x nr.
        # Coefficients of the free part come from pushing basis matrices through
        # the adjoint.
        eq = [[0] * nvars for _ in range(nc * nr)]
        for s in range(nc):
            for t in range(nr):
                eq[s * nr + t][offsets[p.bound] + s * nr + t] += 1
        for i in range(nr):
            for j in range(nc):
                e = [[0] * nc for _ in range(nr)]
                e[i][j] = 1
                ed = arrow_adjoint(ex.as_matrix(e), a.src, a.dst, alpha, forms, cache)
                for s in range(nc):
                    for t in range(nr):
                        if ed[s][t]:
                            eq[s * nr + t][offsets[p.free] + i * nc + j] += p.tau * ed[s][t]
        rows.extend(eq)
    return nvars - ex.rank(rows)


def random_asym_group_element(model: AsymModel, seed: int) -> GroupElement:
    return sample_group_element(model.group, seed)
