"""Independent reference computations.

None of these import the code paths they check; they re-derive the expected
values by brute force on small inputs.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb


def brute_force_necklaces(arrows: dict[int, tuple[str, str]], max_len: int) -> set[frozenset]:
    """Closed words of length <= max_len, each returned as its set of rotations."""
    ids = sorted(arrows)
    found = set()
    for n in range(1, max_len + 1):
        for word in itertools.product(ids, repeat=n):
            ok = all(arrows[word[k]][1] == arrows[word[(k + 1) % n]][0] for k in range(n))
            if ok:
                found.add(frozenset(word[i:] + word[:i] for i in range(n)))
    return found


def one_vertex_necklace_count(k: int, max_len: int) -> int:
    """Words over k letters up to rotation, lengths 1..max_len, by orbit listing."""
    total = 0
    for n in range(1, max_len + 1):
        seen = set()
        for word in itertools.product(range(k), repeat=n):
            seen.add(min(word[i:] + word[:i] for i in range(n)))
        total += len(seen)
    return total


def segre_hilbert_function(d: int, k: int) -> int:
    """Dimension of the degree-k part of k[x_i y_j], counted on explicit monomials.

    Degree-k monomials are built as k-fold products of the generators
    ``x_i y_j`` and deduplicated as exponent vectors.
    """
    gens = []
    for i in range(d):
        for j in range(d):
            e = [0] * (2 * d)
            e[i] += 1
            e[d + j] += 1
            gens.append(tuple(e))
    layer = {tuple([0] * (2 * d))}
    for _ in range(k):
        layer = {tuple(a + b for a, b in zip(m, g)) for m in layer for g in gens}
    return len(layer)


def segre_multiplicity(d: int) -> int:
    """Normalized leading coefficient of the Hilbert polynomial.

    The cone has dimension ``2d - 1``, so the Hilbert polynomial has degree
    ``n = 2d - 2`` and its n-th finite difference equals the multiplicity.
    """
    n = 2 * d - 2
    values = [segre_hilbert_function(d, k) for k in range(n + 1)]
    for _ in range(n):
        values = [b - a for a, b in zip(values, values[1:])]
    return values[0]


def burnside_even_sign_orbits(l: int, points: list, neg) -> int:
    """Orbit count of (Z/2)^{l-1} x| S_l on points^l, by Burnside's lemma."""
    group = []
    for signs in itertools.product((1, -1), repeat=l):
        if signs.count(-1) % 2:
            continue
        for perm in itertools.permutations(range(l)):
            group.append((signs, perm))
    fixed_total = 0
    for signs, perm in group:
        for t in itertools.product(points, repeat=l):
            image = tuple((t[perm[i]] if signs[i] == 1 else neg(t[perm[i]])) for i in range(l))
            if image == t:
                fixed_total += 1
    assert fixed_total % len(group) == 0
    return fixed_total // len(group)


def torsion_points(n: int) -> list:
    """All n-torsion points of R^2/Z^2 as pairs of Fractions in [0, 1)."""
    return [(Fraction(a, n), Fraction(b, n)) for a in range(n) for b in range(n)]


def neg_point(p):
    return tuple((-c) % 1 for c in p)


def asym_dim_from_squares(kind: str, rank: int, mult: int, genus: int, ambient: str = "orthogonal",
                     h0_sym: int | None = None, h0_alt: int | None = None) -> int:
    """Diagonal asym dimension of one summand from S^2 and Lambda^2 of F (x) V."""
    defaults = {"orthogonal": (1, 0), "symplectic": (0, 1), "dual_pair": (0, 0)}[kind]
    hs = defaults[0] if h0_sym is None else h0_sym
    ha = defaults[1] if h0_alt is None else h0_alt
    h1s = hs + comb(rank + 1, 2) * (genus - 1)
    h1a = ha + comb(rank, 2) * (genus - 1)
    lam, sym = comb(mult, 2), comb(mult + 1, 2)
    if kind == "dual_pair":
        gl = (rank * rank * (genus - 1) + 1) * mult * mult
        if ambient == "orthogonal":
            return gl + 2 * (h1s * lam + h1a * sym)
        return gl + 2 * (h1s * sym + h1a * lam)
    if ambient == "orthogonal":
        # so(V) pairs with S^2 F* when F is orthogonal; sp(V) = S^2 V with Lambda^2 F*
        return h1s * lam + h1a * sym if kind == "orthogonal" else h1a * sym + h1s * lam
    return h1s * sym + h1a * lam if kind == "orthogonal" else h1a * lam + h1s * sym
