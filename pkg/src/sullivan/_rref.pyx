# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer Gauss-Jordan kernel; same contract as ``_rref_py``.

Rows are packed densely into 64-bit machine integers over the columns that
actually occur.  Every multiply and subtract is overflow-checked; on the
first overflow the whole input is handed to the big-integer fallback, so the
result is always exact and identical to the pure-Python kernel.
"""

from libc.stdlib cimport calloc, free
from libc.string cimport memset

from . import _rref_py

ctypedef long long i64

cdef extern from *:
    """
    static int _mul_ovf(long long a, long long b, long long *r) { return __builtin_mul_overflow(a, b, r); }
    static int _sub_ovf(long long a, long long b, long long *r) { return __builtin_sub_overflow(a, b, r); }
    """
    int _mul_ovf(i64 a, i64 b, i64 *r) nogil
    int _sub_ovf(i64 a, i64 b, i64 *r) nogil


cdef inline i64 _gcd(i64 a, i64 b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef bint _primitive(i64 *row, Py_ssize_t n) nogil:
    """Divide by the content, making the leading entry positive. False if the row is zero."""
    cdef i64 g = 0
    cdef Py_ssize_t c, lead = -1
    for c in range(n):
        if row[c]:
            if lead < 0:
                lead = c
            g = _gcd(g, row[c])
            if g == 1:
                break
    if lead < 0:
        return False
    if row[lead] < 0:
        g = -g
    if g != 1:
        for c in range(lead, n):
            row[c] = row[c] // g
    return True


cdef bint _eliminate(i64 *target, Py_ssize_t col, i64 *prow, Py_ssize_t n) nogil:
    """target := p*target - t*prow, killing target[col]. False on overflow."""
    cdef i64 p = prow[col]
    cdef i64 t = target[col]
    cdef i64 g = _gcd(p, t)
    cdef i64 a, b
    cdef Py_ssize_t c
    p = p // g
    t = t // g
    target[col] = 0
    if p != 1:
        for c in range(n):
            if target[c] and _mul_ovf(target[c], p, &target[c]):
                return False
    for c in range(n):
        if c == col or not prow[c]:
            continue
        if _mul_ovf(t, prow[c], &a):
            return False
        if _sub_ovf(target[c], a, &b):
            return False
        target[c] = b
    return True


def rref_int(list rows):
    """Return ``(reduced_rows, pivots)`` for a list of sparse integer rows."""
    cdef list labels = sorted({c for r in rows for c, v in r.items() if v})
    cdef Py_ssize_t n = len(labels)
    cdef Py_ssize_t cap = min(len(rows), n)
    if n == 0:
        return [], []
    cdef dict pos = {c: i for i, c in enumerate(labels)}
    cdef i64 *ech = <i64 *>calloc(cap * n, sizeof(i64))
    cdef i64 *work = <i64 *>calloc(n, sizeof(i64))
    cdef Py_ssize_t *row_of = <Py_ssize_t *>calloc(n, sizeof(Py_ssize_t))
    cdef Py_ssize_t rank = 0, c, k, piv
    cdef bint ok = True
    cdef i64 *other
    if ech == NULL or work == NULL or row_of == NULL:
        free(ech); free(work); free(row_of)
        raise MemoryError()
    try:
        for c in range(n):
            row_of[c] = -1
        for src in rows:
            memset(work, 0, n * sizeof(i64))
            try:
                for key, v in src.items():
                    if v:
                        work[pos[key]] = v
            except OverflowError:
                ok = False
                break
            for c in range(n):
                if work[c] and row_of[c] >= 0:
                    if not _eliminate(work, c, ech + row_of[c] * n, n):
                        ok = False
                        break
            if not ok:
                break
            if not _primitive(work, n):
                continue
            piv = 0
            while not work[piv]:
                piv += 1
            for k in range(rank):
                other = ech + k * n
                if other[piv]:
                    if not _eliminate(other, piv, work, n):
                        ok = False
                        break
                    _primitive(other, n)
            if not ok:
                break
            for c in range(n):
                ech[rank * n + c] = work[c]
            row_of[piv] = rank
            rank += 1
        if not ok:
            return _rref_py.rref_int(rows)
        out, pivots = [], []
        for c in range(n):
            if row_of[c] >= 0:
                other = ech + row_of[c] * n
                out.append({labels[k]: other[k] for k in range(n) if other[k]})
                pivots.append(labels[c])
        return out, pivots
    finally:
        free(ech)
        free(work)
        free(row_of)
