# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot kernels; semantics identical to ``_pykernels``.

Entries stay Python objects (exact ints, or floats on the float backend), so
the gain comes from typed index loops and list access, not from machine
arithmetic.
"""


cdef list _matmul(list a, list b):
    cdef Py_ssize_t inner = len(b)
    cdef Py_ssize_t cols = len(<list>b[0])
    cdef Py_ssize_t i, j, k
    cdef list out = []
    cdef list row, acc, bk
    cdef object rk
    for i in range(len(a)):
        row = <list>a[i]
        acc = [0] * cols
        for k in range(inner):
            rk = row[k]
            if rk:
                bk = <list>b[k]
                for j in range(cols):
                    acc[j] = acc[j] + rk * bk[j]
        out.append(acc)
    return out


cdef list _prefix(tuple p, list mats, dict cache):
    cdef object hit = cache.get(p)
    if hit is not None:
        return <list>hit
    cdef list res
    if len(p) == 1:
        res = <list>mats[p[0]]
    else:
        res = _matmul(<list>mats[p[len(p) - 1]], _prefix(p[:len(p) - 1], mats, cache))
    cache[p] = res
    return res


def eval_words(words, list mats):
    cdef dict cache = {}
    cdef list out = []
    cdef tuple w
    cdef list last, prefix, li
    cdef Py_ssize_t n, i, j
    cdef object total, lij
    for w in words:
        n = len(w)
        if n == 0:
            raise ValueError("empty word")
        if n == 1:
            last = <list>mats[w[0]]
            total = 0
            for i in range(len(last)):
                total = total + (<list>last[i])[i]
            out.append(total)
            continue
        prefix = _prefix(w[:n - 1], mats, cache)
        last = <list>mats[w[n - 1]]
        total = 0
        for i in range(len(last)):
            li = <list>last[i]
            for j in range(len(li)):
                lij = li[j]
                if lij:
                    total = total + lij * (<list>prefix[j])[i]
        out.append(total)
    return out


def int_rank(rows):
    return int_rank_split(rows, len(rows[0]) if rows else 0)[1]


def int_rank_split(rows, Py_ssize_t split):
    cdef list m = [list(row0) for row0 in rows]
    cdef Py_ssize_t nrows = len(m)
    cdef Py_ssize_t ncols = len(<list>m[0]) if nrows else 0
    cdef Py_ssize_t rank = 0, leading = 0, col, r, c, piv
    cdef object prev = 1, p, a
    cdef list prow, row
    for col in range(ncols):
        if rank == nrows:
            break
        piv = -1
        for r in range(rank, nrows):
            if (<list>m[r])[col] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            m[piv], m[rank] = m[rank], m[piv]
        prow = <list>m[rank]
        p = prow[col]
        for r in range(rank + 1, nrows):
            row = <list>m[r]
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
