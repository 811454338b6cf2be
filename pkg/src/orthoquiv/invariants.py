"""Trace-along-cycle invariants and the checks built on them.

A :class:`TraceInvariant` on a base quiver is a ``GL(alpha)`` invariant.  On a
doubled quiver it is read on a base representation through its adjoint
extension, which makes it an invariant of the structured group only.

Evaluation goes through :mod:`orthoquiv.kernels`: every matrix is written over
a single integer denominator and all words of a family share prefix products.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Callable, Iterable, Sequence

from . import exact as ex
from . import kernels
from .errors import InsufficientSamples, ShapeMismatch
from .groups import (
    AsymModel,
    GroupElement,
    GroupSpec,
    Representation,
    VertexForm,
    act,
    adjoint_extend,
    asym_subspace_sample,
    build_asym_model,
    doubled_alpha,
    random_representation,
    sample_group_element,
    standard_forms,
)
from .quiver import Cycle, DecompositionData, DimensionVector, DoubledQuiver, Quiver, enumerate_cycles

log = logging.getLogger(__name__)

PROBE_CAP = 24
PROBE_BOUND = 50


@dataclass(frozen=True)
class TraceInvariant:
    cycle: Cycle
    quiver: Quiver | DoubledQuiver = field(compare=False, repr=False)
    alpha: DimensionVector = field(compare=False, repr=False)
    ambient_sign: int = field(default=1, compare=False, repr=False)

    @property
    def degree(self) -> int:
        return len(self.cycle)

    @property
    def structured(self) -> bool:
        return isinstance(self.quiver, DoubledQuiver)

    @property
    def id(self) -> str:
        return self.cycle.label()

    def evaluate(self, r: Representation):
        return evaluate(self, r)


@dataclass(frozen=True)
class EntryProbe:
    """A single matrix coordinate; not invariant in general (negative control)."""

    arrow: int
    row: int
    col: int
    quiver: Quiver | DoubledQuiver = field(compare=False, repr=False)
    ambient_sign: int = field(default=1, compare=False, repr=False)

    @property
    def id(self) -> str:
        return f"entry({self.arrow},{self.row},{self.col})"

    @property
    def structured(self) -> bool:
        return isinstance(self.quiver, DoubledQuiver)

    def evaluate(self, r: Representation):
        r = _lift(self, r)
        return r[self.arrow][self.row][self.col]


def _lift(t, r: Representation) -> Representation:
    """Read a base representation through its adjoint extension when needed."""
    if t.structured and not isinstance(r.quiver, DoubledQuiver):
        return adjoint_extend(r, dq=t.quiver, ambient_sign=t.ambient_sign)
    return r


# --------------------------------------------------------------------------
# evaluation


class _Packed:
    """Integer matrices and denominators of a representation, indexed densely."""

    def __init__(self, r: Representation, backend: ex.Backend = ex.EXACT):
        self.index = {}
        self.exact = backend.exact
        self.mats = []
        self.dens = []
        self.alpha = r.alpha
        self.q = r.q
        for k, a in enumerate(r.q.arrows):
            self.index[a.id] = k
            m = r[a.id]
            if self.exact:
                ints, den = ex.common_denominator(m)
            else:
                ints, den = [[float(x) for x in row] for row in m], 1
            self.mats.append(ints)
            self.dens.append(den)

    def dead(self, word: Sequence[int]) -> bool:
        q = self.q
        return any(not self.alpha[q.arrow(a).src] for a in word)


def evaluate_words(words: Sequence[Sequence[int]], r: Representation,
                   backend: ex.Backend = ex.EXACT, check: bool = True) -> list:
    """``tr(f_{a_l} ... f_{a_1})`` for each word ``(a_1, ..., a_l)``."""
    for w in (words if check else ()):
        for k, aid in enumerate(w):
            nxt = w[(k + 1) % len(w)]
            if r.q.arrow(aid).dst != r.q.arrow(nxt).src:
                raise ShapeMismatch(f"word {tuple(w)} is not a closed path")
    packed = _Packed(r, backend)
    live = [i for i, w in enumerate(words) if not packed.dead(w)]
    idx_words = [tuple(packed.index[a] for a in words[i]) for i in live]
    raw = kernels.eval_words(idx_words, packed.mats) if idx_words else []
    out = [0] * len(words)
    for i, val, w in zip(live, raw, idx_words):
        if packed.exact:
            den = prod(packed.dens[a] for a in w)
            out[i] = Fraction(val, den) if den != 1 else val
        else:
            out[i] = val
    return [ex._norm(v) if isinstance(v, Fraction) else v for v in out]


def evaluate(t: TraceInvariant, r: Representation, backend: ex.Backend = ex.EXACT):
    r = _lift(t, r)
    if r.q is not (t.quiver.quiver if t.structured else t.quiver):
        if set(r.q.arrow_ids) != set((t.quiver.quiver if t.structured else t.quiver).arrow_ids):
            raise ShapeMismatch("representation lives on a different quiver")
    return evaluate_words([t.cycle.word], r, backend)[0]


def evaluate_family(funcs: Sequence, r: Representation, backend: ex.Backend = ex.EXACT) -> list:
    """Values of many functions at one point, batching the trace invariants."""
    traces = [i for i, f in enumerate(funcs) if isinstance(f, TraceInvariant)]
    out = [None] * len(funcs)
    if traces:
        lifted = _lift(funcs[traces[0]], r)
        vals = evaluate_words([funcs[i].cycle.word for i in traces], lifted, backend, check=False)
        for i, v in zip(traces, vals):
            out[i] = v
    for i, f in enumerate(funcs):
        if out[i] is None:
            out[i] = f.evaluate(r)
    return out


# --------------------------------------------------------------------------
# generation


def default_max_len(alpha: DimensionVector) -> int:
    return max(1, alpha.total() ** 2)


def _probe_points(quiver, alpha: DimensionVector, n: int, seed: int) -> list[Representation]:
    base = quiver.base if isinstance(quiver, DoubledQuiver) else quiver
    return [random_representation(base, alpha, ex.derive_seed(seed, "probe", i), PROBE_BOUND)
            for i in range(n)]


def generate_invariants(q: DoubledQuiver | Quiver, alpha: DimensionVector,
                        max_len: int | None = None, prune: bool = True, seed: int = 0,
                        ambient_sign: int = 1) -> list[TraceInvariant]:
    """One invariant per cycle, with evaluation-equal duplicates removed.

    Cycles through a zero-dimensional vertex are dropped (they are the zero
    function).  With ``prune``, cycles whose values agree on a random probe set
    are merged, keeping the smallest cycle in (length, word) order; this is
    how ``tr(w) = tr(w^dagger)`` coincidences disappear.
    """
    if max_len is None:
        max_len = default_max_len(alpha)
    if isinstance(q, DoubledQuiver):
        alpha = doubled_alpha(q, alpha)
    qq = q.quiver if isinstance(q, DoubledQuiver) else q
    cycles = [c for c in enumerate_cycles(q, max_len)
              if all(alpha[qq.arrow(a).src] for a in c.word)]
    invs = [TraceInvariant(c, q, alpha, ambient_sign) for c in cycles]
    if not prune or len(invs) < 2:
        return invs
    n_probe = min(2 * len(invs), PROBE_CAP)
    columns = _value_columns(invs, _probe_points(q, alpha, n_probe, seed))
    seen: dict[tuple, int] = {}
    kept = []
    for t, col in zip(invs, columns):
        key = tuple(col)
        if key in seen:
            continue
        seen[key] = 1
        kept.append(t)
    return kept


def _value_columns(funcs: Sequence, points: Sequence[Representation]) -> list[list]:
    rows = [evaluate_family(funcs, p) for p in points]
    return [[row[j] for row in rows] for j in range(len(funcs))]


# --------------------------------------------------------------------------
# invariance


@dataclass(frozen=True)
class InvarianceReport:
    invariant: str
    samples: int
    max_deviation: float
    all_equal: bool
    passed: bool
    backend: str = "exact"

    def to_json(self) -> dict:
        return {
            "invariant": self.invariant,
            "samples": self.samples,
            "max_deviation": self.max_deviation,
            "all_equal": self.all_equal,
            "pass": self.passed,
            "backend": self.backend,
        }


def check_invariance_family(funcs: Sequence, spec: GroupSpec, n_samples: int = 50,
                            seed: int = 0, n_reps: int = 10,
                            backend: ex.Backend = ex.EXACT) -> list[InvarianceReport]:
    """Compare each function before and after ``n_samples`` group elements on
    ``n_reps`` random base representations."""
    if not funcs:
        return []
    q0 = funcs[0].quiver
    base = q0.base if isinstance(q0, DoubledQuiver) else q0
    alpha = funcs[0].alpha if hasattr(funcs[0], "alpha") else None
    if alpha is None:
        raise ShapeMismatch("need a dimension vector to sample representations")
    base_alpha = DimensionVector({v: alpha[v] for v in base.vertices})
    elements = [sample_group_element(spec, ex.derive_seed(seed, "g", j)) for j in range(n_samples)]
    dev = [0.0] * len(funcs)
    equal = [True] * len(funcs)
    for i in range(n_reps):
        r = random_representation(base, base_alpha, ex.derive_seed(seed, "rep", i))
        ref = evaluate_family(funcs, r, backend)
        for g in elements:
            vals = evaluate_family(funcs, act(g, r), backend)
            for k, (a, b) in enumerate(zip(ref, vals)):
                if not backend.equal(a, b):
                    equal[k] = False
                dev[k] = max(dev[k], backend.deviation(a, b))
    return [
        InvarianceReport(f.id, n_reps * n_samples, dev[k], equal[k], equal[k], backend.name)
        for k, f in enumerate(funcs)
    ]


def check_invariance(t, spec: GroupSpec, n_samples: int = 50, seed: int = 0,
                     n_reps: int = 10, backend: ex.Backend = ex.EXACT) -> InvarianceReport:
    if isinstance(t, EntryProbe):
        # a probe carries no alpha of its own; borrow one from the quiver's spec
        t = _ProbeWithAlpha(t, DimensionVector({b.vertex: b.size for b in spec.blocks
                                                if b.vertex is not None}))
    return check_invariance_family([t], spec, n_samples, seed, n_reps, backend)[0]


@dataclass(frozen=True)
class _ProbeWithAlpha:
    probe: EntryProbe
    alpha: DimensionVector

    @property
    def quiver(self):
        return self.probe.quiver

    @property
    def id(self) -> str:
        return self.probe.id

    def evaluate(self, r):
        return self.probe.evaluate(r)


# --------------------------------------------------------------------------
# separation


@dataclass(frozen=True)
class SeparationResult:
    equal: bool
    invariant: TraceInvariant | None = None
    values: tuple = ()

    def to_json(self) -> dict:
        doc = {"equal": self.equal}
        if self.invariant is not None:
            doc["invariant"] = self.invariant.id
            doc["values"] = [str(v) for v in self.values]
        return doc


def separation_check(r1: Representation, r2: Representation,
                     invariants: Sequence[TraceInvariant]) -> SeparationResult:
    if r1.alpha.entries != r2.alpha.entries or set(r1.q.arrow_ids) != set(r2.q.arrow_ids):
        raise ShapeMismatch("representations must share quiver and dimension vector")
    v1 = evaluate_family(list(invariants), r1)
    v2 = evaluate_family(list(invariants), r2)
    for t, a, b in zip(invariants, v1, v2):
        if a != b:
            return SeparationResult(False, t, (a, b))
    return SeparationResult(True)


# --------------------------------------------------------------------------
# restriction surjectivity


@dataclass(frozen=True)
class DegreeRow:
    degree: int
    contained: bool
    rank_ambient: int
    rank_joint: int
    samples: int
    candidates: int = field(default=0, compare=False)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "contained": self.contained,
            "rank_ambient": self.rank_ambient,
            "rank_joint": self.rank_joint,
            "samples": self.samples,
        }


@dataclass(frozen=True)
class SurjectivityReport:
    rows: tuple[DegreeRow, ...]
    generators_gl: int
    generators_structured: int

    @property
    def contained(self) -> bool:
        return all(r.contained for r in self.rows)

    def to_json(self) -> dict:
        return {
            "contained": self.contained,
            "degrees": [r.to_json() for r in self.rows],
            "generators": {"gl": self.generators_gl, "structured": self.generators_structured},
        }


def _reduce_generators(cols: list[list], keep: Callable[[int], bool] | None = None):
    """Indices of columns that are nonzero and not proportional to an earlier one."""
    chosen: list[int] = []
    normal: dict[tuple, int] = {}
    for j, col in enumerate(cols):
        pivot = next((x for x in col if x != 0), None)
        if pivot is None:
            continue
        key = tuple(Fraction(x) / pivot for x in col)
        if key in normal:
            continue
        normal[key] = j
        chosen.append(j)
    return chosen, normal


def _multisets_of_degree(degrees: Sequence[int], k: int):
    """Index multisets (sorted tuples) whose degrees add up to exactly ``k``."""
    order = sorted(range(len(degrees)), key=lambda i: (degrees[i], i))

    def rec(start: int, remaining: int, acc: list[int]):
        if remaining == 0:
            yield tuple(acc)
            return
        for pos in range(start, len(order)):
            i = order[pos]
            dg = degrees[i]
            if dg > remaining:
                break
            acc.append(i)
            yield from rec(pos, remaining - dg, acc)
            acc.pop()

    yield from rec(0, k, [])


def restriction_surjectivity_check(d: DecompositionData | AsymModel, degree_bound: int = 4,
                                   n_points: int | None = None, seed: int = 0,
                                   probe_points: int = 32,
                                   sampler: str = "asym") -> SurjectivityReport:
    """Is every structured invariant, restricted to the asym model, a
    polynomial in restricted ``GL`` cycle traces?  Tested degree by degree.

    Family (i): traces along cycles of ``Q_E``.  Family (ii): traces along
    cycles of the doubled quiver.  Both are evaluated on random points of the
    asym model.  Within each family, generators that vanish or are
    proportional to an earlier one on a probe set are dropped.  For each
    degree ``k`` the products of family (i) generators of total degree ``k``
    span the ambient space; the containment holds iff appending the degree
    ``k`` products of family (ii) leaves the rank unchanged.

    ``sampler="generic"`` draws unconstrained points of ``R(Q_E, alpha)``
    instead; the structured traces are then not ``GL`` invariants and the
    check is expected to fail.  It exists as a negative control.
    """
    if sampler not in ("asym", "generic"):
        raise ValueError(f"unknown sampler {sampler!r}")
    model = d if isinstance(d, AsymModel) else build_asym_model(d)
    q, dq = model.quiver, model.doubled
    sign = model.ambient_sign
    gl_cycles = [c for c in enumerate_cycles(q, degree_bound)
                 if all(model.alpha[q.arrow(a).src] for a in c.word)]
    alpha2 = doubled_alpha(dq, model.alpha)
    st_cycles = [c for c in enumerate_cycles(dq, degree_bound)
                 if all(alpha2[dq.arrow(a).src] for a in c.word)]

    gl_words = [c.word for c in gl_cycles]
    st_words = [c.word for c in st_cycles]

    def draw(key: str, i: int) -> Representation:
        sd = ex.derive_seed(seed, key, i)
        if sampler == "asym":
            return asym_subspace_sample(model, sd)
        x = random_representation(q, model.alpha, sd, 9)
        return adjoint_extend(x, model.forms, dq)

    def point(i: int) -> Representation:
        return draw("point", i)

    def gens_at(p: Representation) -> tuple[list, list]:
        base = p.restrict(q)
        return (evaluate_words(gl_words, base, check=False),
                evaluate_words(st_words, p, check=False))

    probes = [gens_at(draw("probe", i)) for i in range(probe_points)]
    n_gl = len(gl_cycles)
    gl_idx, _ = _reduce_generators([[pr[0][j] for pr in probes] for j in range(n_gl)])
    st_idx, _ = _reduce_generators([[pr[1][j] for pr in probes] for j in range(len(st_cycles))])
    gl_deg = [len(gl_cycles[j]) for j in gl_idx]
    st_deg = [len(st_cycles[j]) for j in st_idx]
    log.info("surjectivity: %d GL and %d structured generators after pruning",
             len(gl_idx), len(st_idx))

    rows = []
    cache: dict[int, tuple[list, list]] = {}
    for k in range(1, degree_bound + 1):
        ambient = list(_multisets_of_degree(gl_deg, k))
        extra = list(_multisets_of_degree(st_deg, k))
        candidates = len(ambient) + len(extra)
        if candidates == 0:
            rows.append(DegreeRow(k, True, 0, 0, 0, 0))
            continue
        want = 3 * candidates
        if n_points is not None:
            if n_points < candidates:
                raise InsufficientSamples(
                    f"degree {k}: {n_points} points for {candidates} candidate functions"
                )
            want = n_points
        matrix = []
        for i in range(want):
            if i not in cache:
                cache[i] = gens_at(point(i))
            g_all, s_all = cache[i]
            gv = [g_all[j] for j in gl_idx]
            sv = [s_all[j] for j in st_idx]
            matrix.append([prod((gv[t] for t in ms), start=1) for ms in ambient]
                          + [prod((sv[t] for t in ms), start=1) for ms in extra])
        r_a, r_j = ex.rank_split(matrix, len(ambient))
        rows.append(DegreeRow(k, r_a == r_j, r_a, r_j, want, candidates))
    return SurjectivityReport(tuple(rows), len(gl_idx), len(st_idx))


# --------------------------------------------------------------------------
# finite groups and the Reynolds oracle


def sign_group(spec: GroupSpec) -> list[GroupElement]:
    """All of ``{+-1}^n`` for a spec made of ``O_1`` blocks."""
    for b in spec.blocks:
        if b.kind != "O" or b.size != 1:
            raise ShapeMismatch("sign_group needs O_1 blocks only")
    out = []
    for signs in itertools.product((1, -1), repeat=len(spec.blocks)):
        out.append(GroupElement(spec, tuple(((s,),) for s in signs)))
    return out


def signed_permutations(n: int) -> list[tuple]:
    """The hyperoctahedral group: ``2^n n!`` signed permutation matrices in ``O_n``."""
    out = []
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            out.append(tuple(tuple(signs[i] if perm[i] == j else 0 for j in range(n))
                             for i in range(n)))
    return out


def signed_permutation_group(spec: GroupSpec) -> list[GroupElement]:
    for b in spec.blocks:
        if b.kind != "O":
            raise ShapeMismatch("signed permutations need O blocks")
    per_block = [signed_permutations(b.size) if b.size else [()] for b in spec.blocks]
    return [GroupElement(spec, tuple(ms)) for ms in itertools.product(*per_block)]


def spot_check_closure(elements: Sequence[GroupElement], trials: int = 16, seed: int = 0) -> bool:
    if not elements:
        return False
    keys = {e.matrices for e in elements}
    rng = ex.make_rng(seed, "closure")
    for _ in range(trials):
        a, b = rng.choice(elements), rng.choice(elements)
        if a.compose(b).matrices not in keys:
            return False
    return True


def reynolds_oracle(group: Sequence[GroupElement], f, points: Sequence[Representation],
                    check_closure: bool = True) -> list:
    """Exact group average ``|G|^-1 sum_g f(g . x)`` at each point."""
    return [row[0] for row in reynolds_family(group, [f], points, check_closure)]


def reynolds_family(group: Sequence[GroupElement], funcs: Sequence, points: Sequence[Representation],
                    check_closure: bool = True) -> list[list]:
    """Averages of several functions; row ``i`` holds their values at ``points[i]``."""
    if check_closure and not spot_check_closure(group):
        raise ValueError("element list is not closed under products")
    evals = [f.evaluate if hasattr(f, "evaluate") else f for f in funcs]
    n = len(group)
    out = []
    for x in points:
        totals = [Fraction(0)] * len(evals)
        for g in group:
            y = act(g, x)
            for k, fn in enumerate(evals):
                totals[k] += Fraction(fn(y))
        out.append([ex._norm(t / n) for t in totals])
    return out


@dataclass(frozen=True)
class Monomial:
    """``prod_a f_a[0][0]^{e_a}`` on a quiver with one-dimensional vertices."""

    exponents: tuple[tuple[int, int], ...]

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exponents)

    def evaluate(self, r: Representation):
        return prod((r[a][0][0] ** e for a, e in self.exponents), start=1)


def monomials(arrow_ids: Sequence[int], degree: int) -> list[Monomial]:
    out = []
    for combo in itertools.combinations_with_replacement(sorted(arrow_ids), degree):
        counts: dict[int, int] = {}
        for a in combo:
            counts[a] = counts.get(a, 0) + 1
        out.append(Monomial(tuple(sorted(counts.items()))))
    return out


def span_rank(columns_fn: Sequence[Callable], points: Sequence[Representation]) -> int:
    rows = [[fn(p) for fn in columns_fn] for p in points]
    return ex.rank(rows)
