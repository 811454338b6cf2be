"""Pure-Python hot kernels.

Reference implementation of the routines in ``_ckernels.pyx``.  Both modules
expose the same three functions with identical semantics; ``kernels`` picks
one at import time.

Matrices are lists of row lists.  Entries may be any numbers supporting
``+`` and ``*`` (ints for the exact path, floats for the float backend).
"""


def eval_words(words, mats):
    """Trace of the ordered product along every word.

    ``words[i]`` is a tuple of letters ``(a1, ..., al)`` indexing ``mats``;
    the value returned for it is ``tr(M[al] ... M[a1])``.  Shared prefixes
    are multiplied once.
    """
    cache = {}
    out = []
    for w in words:
        n = len(w)
        if n == 0:
            raise ValueError("empty word")
        if n == 1:
            m = mats[w[0]]
            out.append(sum(m[i][i] for i in range(len(m))))
            continue
        prefix = _prefix_product(w[:-1], mats, cache)
        last = mats[w[-1]]
        rows = len(last)
        total = 0
        for i in range(rows):
            li = last[i]
            for j in range(len(li)):
                lij = li[j]
                if lij:
                    total += lij * prefix[j][i]
        out.append(total)
    return out


def _prefix_product(p, mats, cache):
    hit = cache.get(p)
    if hit is not None:
        return hit
    if len(p) == 1:
        res = mats[p[0]]
    else:
        res = _matmul(mats[p[-1]], _prefix_product(p[:-1], mats, cache))
    cache[p] = res
    return res


def _matmul(a, b):
    inner = len(b)
    cols = len(b[0])
    out = []
    for row in a:
        acc = [0] * cols
        for k in range(inner):
            rk = row[k]
            if rk:
                bk = b[k]
                for j in range(cols):
                    acc[j] += rk * bk[j]
        out.append(acc)
    return out


def int_rank(rows):
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    return int_rank_split(rows, len(rows[0]) if rows else 0)[1]


def int_rank_split(rows, split):
    """Return ``(rank of columns [0, split), rank of all columns)``.

    Elimination runs column by column, so the pivots found in the first
    ``split`` columns span the leading block.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rank = 0
    leading = 0
    prev = 1
    for col in range(ncols):
        if rank == nrows:
            break
        piv = -1
        for r in range(rank, nrows):
            if m[r][col] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            m[piv], m[rank] = m[rank], m[piv]
        prow = m[rank]
        p = prow[col]
        for r in range(rank + 1, nrows):
            row = m[r]
            a = row[col]
            if a:
                for c in range(col + 1, ncols):
                    row[c] = (p * row[c] - a * prow[c]) // prev
            elif p != prev:
                for c in range(col + 1, ncols):
                    row[c] = (p * row[c]) // prev
            row[col] = 0
        prev = p
        rank += 1
        if col < split:
            leading += 1
    return leading, rank
