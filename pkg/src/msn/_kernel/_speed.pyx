# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled exact pivoting kernels.

Mirrors msn._kernel.pure line for line: entries are arbitrary-precision
Python ints, so the wins come from C-level loop management rather than
machine arithmetic.  Outputs are bitwise identical to the pure backend.
"""

from math import gcd

OPTIMAL = 0
UNBOUNDED = 1


cdef list _row_primitive(list row):
    cdef Py_ssize_t i, n = len(row)
    g = 0
    for i in range(n):
        g = gcd(g, row[i])
        if g == 1:
            break
    if g > 1:
        return [v // g for v in row]
    return row[:]


def echelon_int(rows):
    """Reduced integer row echelon form; see the pure backend docstring."""
    cdef list mat = [list(r) for r in rows]
    cdef Py_ssize_t m = len(mat)
    cdef Py_ssize_t n = len(<list>mat[0]) if m else 0
    cdef Py_ssize_t rank = 0
    cdef Py_ssize_t col, i, j, piv
    cdef list pivcols = []
    cdef list prow, row, newrow
    for col in range(n):
        piv = -1
        for i in range(rank, m):
            if (<list>mat[i])[col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        prow = _row_primitive(<list>mat[rank])
        if prow[col] < 0:
            prow = [-v for v in prow]
        mat[rank] = prow
        a = prow[col]
        for i in range(m):
            if i == rank:
                continue
            row = <list>mat[i]
            b = row[col]
            if b == 0:
                continue
            newrow = [0] * n
            for j in range(n):
                newrow[j] = a * row[j] - b * prow[j]
            mat[i] = _row_primitive(newrow)
        pivcols.append(col)
        rank += 1
        if rank == m:
            break
    return rank, pivcols, mat[:rank]


def pivot(tab, den, basis, r, jc):
    """One integer pivot on entry (r, jc); returns the new denominator."""
    cdef list tabl = <list>tab
    cdef Py_ssize_t ri = r, jci = jc
    cdef Py_ssize_t i, j, nrows = len(tabl)
    cdef list prow = <list>tabl[ri]
    cdef list row, newrow
    cdef Py_ssize_t width = len(prow)
    piv = prow[jci]
    for i in range(nrows):
        if i == ri:
            continue
        row = <list>tabl[i]
        f = row[jci]
        if f == 0:
            if piv != den:
                newrow = [0] * width
                for j in range(width):
                    newrow[j] = row[j] * piv // den
                tabl[i] = newrow
            continue
        newrow = [0] * width
        for j in range(width):
            newrow[j] = (piv * row[j] - f * prow[j]) // den
        tabl[i] = newrow
    basis[ri] = jci
    return piv


def bland_min(tab, den, basis, nbody, obj):
    """Simplex pivots to optimality; see the pure backend docstring."""
    cdef list tabl = <list>tab
    cdef list basisl = <list>basis
    cdef Py_ssize_t nbodyi = nbody, obji = obj
    cdef Py_ssize_t ncols = len(<list>tabl[0])
    cdef Py_ssize_t rhs = ncols - 1
    cdef Py_ssize_t degenerate_streak = 0
    cdef Py_ssize_t threshold = 10 + nbodyi
    cdef Py_ssize_t j, i, jc, r
    cdef list objrow, rowi
    while True:
        objrow = <list>tabl[obji]
        jc = -1
        if degenerate_streak <= threshold:
            best = 0
            for j in range(rhs):
                v = objrow[j]
                if v < best:
                    best = v
                    jc = j
        else:
            for j in range(rhs):
                if objrow[j] < 0:
                    jc = j
                    break
        if jc < 0:
            return OPTIMAL, den
        r = -1
        rnum = 0
        rden = 0
        for i in range(nbodyi):
            rowi = <list>tabl[i]
            a = rowi[jc]
            if a <= 0:
                continue
            b = rowi[rhs]
            if r < 0 or b * rden < rnum * a or (b * rden == rnum * a and basisl[i] < basisl[r]):
                r = i
                rnum = b
                rden = a
        if r < 0:
            return UNBOUNDED, den
        if rnum == 0:
            degenerate_streak += 1
        else:
            degenerate_streak = 0
        den = pivot(tabl, den, basisl, r, jc)
