"""Exact rational matrices, seeded randomness, and the two scalar backends.

Matrices are tuples of row tuples whose entries are ``int`` or
``fractions.Fraction``.  Nothing here is clever; it is the arithmetic the rest
of the package is written against.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import kernels

Matrix = tuple  # tuple[tuple[Fraction | int, ...], ...]


# --------------------------------------------------------------------------
# seeds


def derive_seed(seed: int, *keys) -> int:
    """Counter-based child seed: a 64-bit hash of ``(seed, *keys)``.

    Independent of call order, so parallel or reordered work draws the same
    numbers.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(seed) & (2**64 - 1)).encode())
    for k in keys:
        h.update(b"\x1f")
        h.update(repr(k).encode())
    return int.from_bytes(h.digest(), "little")


def make_rng(seed: int, *keys) -> random.Random:
    return random.Random(derive_seed(seed, *keys))


def random_rational(rng: random.Random, num_bound: int = 4, den_bound: int = 1):
    num = rng.randint(-num_bound, num_bound)
    if den_bound <= 1:
        return num
    return Fraction(num, rng.randint(1, den_bound))


# --------------------------------------------------------------------------
# matrices


def zeros(rows: int, cols: int) -> Matrix:
    return tuple((0,) * cols for _ in range(rows))


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def standard_j(n: int) -> Matrix:
    """``[[0, I], [-I, 0]]`` of size ``n`` (``n`` even)."""
    if n % 2:
        raise ValueError(f"symplectic form needs even size, got {n}")
    h = n // 2
    return tuple(
        tuple(
            1 if (j == i + h) else (-1 if (i >= h and j == i - h) else 0)
            for j in range(n)
        )
        for i in range(n)
    )


def diag(entries: Sequence) -> Matrix:
    n = len(entries)
    return tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n))


def shape(m: Matrix, cols_if_empty: int = 0) -> tuple[int, int]:
    return (len(m), len(m[0]) if m else cols_if_empty)


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(_norm(x) for x in r) for r in rows)


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def transpose(m: Matrix, rows_if_empty: int = 0) -> Matrix:
    if not m:
        return tuple(() for _ in range(rows_if_empty))
    return tuple(zip(*m)) if m[0] else ()


def matmul(a: Matrix, b: Matrix, cols: int | None = None) -> Matrix:
    inner = len(b)
    ncols = len(b[0]) if b else (cols or 0)
    out = []
    for row in a:
        acc = [0] * ncols
        for k in range(inner):
            rk = row[k]
            if rk:
                bk = b[k]
                for j in range(ncols):
                    acc[j] += rk * bk[j]
        out.append(tuple(_norm(x) for x in acc))
    return tuple(out)


def matmul_chain(*ms: Matrix) -> Matrix:
    out = ms[0]
    for m in ms[1:]:
        out = matmul(out, m)
    return out


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(_norm(x + y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(_norm(x - y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(c, a: Matrix) -> Matrix:
    return tuple(tuple(_norm(c * x) for x in r) for r in a)


def trace(a: Matrix):
    return _norm(sum((a[i][i] for i in range(len(a))), 0))


def is_zero(a: Matrix) -> bool:
    return all(x == 0 for r in a for x in r)


def inverse(a: Matrix) -> Matrix:
    """Gauss-Jordan inverse over Q.  Raises ``ZeroDivisionError`` if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(tuple(_norm(x) for x in row[n:]) for row in m)


def det(a: Matrix):
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    d = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            d = -d
        p = m[col][col]
        d *= p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return _norm(d)


def common_denominator(a: Matrix) -> tuple[list[list[int]], int]:
    """Write ``a`` as ``ints / den`` with a single positive ``den``."""
    den = 1
    for row in a:
        for x in row:
            if isinstance(x, Fraction):
                den = den * x.denominator // math.gcd(den, x.denominator)
    if den == 1:
        return [[int(x) for x in row] for row in a], 1
    return [[int(x * den) for x in row] for row in a], den


def integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    """Scale each row by the lcm of its denominators (rank-preserving)."""
    out = []
    for row in rows:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = den * x.denominator // math.gcd(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def rank(rows: Sequence[Sequence]) -> int:
    """Exact rank of a rational matrix given as rows."""
    if not rows or not rows[0]:
        return 0
    return kernels.int_rank(integer_rows(rows))


def rank_split(rows: Sequence[Sequence], split: int) -> tuple[int, int]:
    """Exact ``(rank of the first split columns, rank of all columns)``."""
    if not rows or not rows[0]:
        return 0, 0
    return kernels.int_rank_split(integer_rows(rows), split)


# --------------------------------------------------------------------------
# scalar backends


@dataclass(frozen=True)
class Backend:
    """Exact rationals, or float64 with a comparison tolerance."""

    name: str = "exact"
    tol: float = 1e-9

    @property
    def exact(self) -> bool:
        return self.name == "exact"

    def coerce_matrix(self, m: Matrix) -> Matrix:
        if self.exact:
            return m
        return tuple(tuple(float(x) for x in r) for r in m)

    def deviation(self, a, b) -> float:
        if self.exact:
            return 0.0 if a == b else float("inf")
        return abs(float(a) - float(b))

    def equal(self, a, b) -> bool:
        if self.exact:
            return a == b
        return abs(float(a) - float(b)) <= self.tol * max(1.0, abs(float(a)), abs(float(b)))


EXACT = Backend("exact")


def get_backend(name: str = "exact", tol: float = 1e-9) -> Backend:
    if name not in ("exact", "float"):
        raise ValueError(f"unknown backend {name!r}")
    return Backend(name, tol)
