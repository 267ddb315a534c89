# cython: boundscheck=False, wraparound=False
"""C kernel for the edit-distance inner loop.

Same contract as autopk.similarity._pykernels; selected at import by
autopk.similarity.kernels when compiled.
"""

from libc.stdlib cimport free, malloc


def levenshtein_distance(str a, str b):
    """Unit-cost edit distance (insert, delete, substitute)."""
    cdef Py_ssize_t la = len(a)
    cdef Py_ssize_t lb = len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    if lb > la:
        a, b = b, a
        la, lb = lb, la
    cdef Py_ssize_t *row = <Py_ssize_t *> malloc((lb + 1) * sizeof(Py_ssize_t))
    if row == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j, cur, above, diag
    cdef Py_UCS4 ca
    try:
        for j in range(lb + 1):
            row[j] = j
        for i in range(1, la + 1):
            diag = row[0]
            row[0] = i
            ca = a[i - 1]
            for j in range(1, lb + 1):
                above = row[j]
                if ca == <Py_UCS4> b[j - 1]:
                    cur = diag
                else:
                    cur = diag + 1
                if above + 1 < cur:
                    cur = above + 1
                if row[j - 1] + 1 < cur:
                    cur = row[j - 1] + 1
                row[j] = cur
                diag = above
        return row[lb]
    finally:
        free(row)
