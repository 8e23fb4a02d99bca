# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot loops: sparse antisymmetric bilinear forms on exponent
vectors and Laurent-polynomial products over big-integer coefficients.

Must stay signature-compatible with ``_kernels_py``.
"""

from libc.stdlib cimport malloc, free


cdef class BilinearForm:
    cdef long *rows
    cdef long *cols
    cdef long *vals
    cdef Py_ssize_t nnz
    cdef readonly Py_ssize_t dim

    def __cinit__(self, matrix):
        cdef Py_ssize_t i, j, k = 0
        entries = []
        for i, row in enumerate(matrix):
            for j, w in enumerate(row):
                if w:
                    entries.append((i, j, w))
        self.dim = len(matrix)
        self.nnz = len(entries)
        n = max(self.nnz, 1)
        self.rows = <long *> malloc(n * sizeof(long))
        self.cols = <long *> malloc(n * sizeof(long))
        self.vals = <long *> malloc(n * sizeof(long))
        if not self.rows or not self.cols or not self.vals:
            raise MemoryError()
        for i, j, w in entries:
            self.rows[k] = i
            self.cols[k] = j
            self.vals[k] = w
            k += 1

    def __dealloc__(self):
        free(self.rows)
        free(self.cols)
        free(self.vals)

    cpdef long pair(self, tuple a, tuple b):
        cdef Py_ssize_t t
        cdef long total = 0
        cdef long x, y
        for t in range(self.nnz):
            x = a[self.rows[t]]
            if x == 0:
                continue
            y = b[self.cols[t]]
            if y == 0:
                continue
            total += self.vals[t] * x * y
        return total

    cpdef long lower_half(self, tuple a):
        # sum over i<j of Q_ij a_i a_j
        cdef Py_ssize_t t
        cdef long total = 0
        cdef long x, y
        for t in range(self.nnz):
            if self.rows[t] >= self.cols[t]:
                continue
            x = a[self.rows[t]]
            if x == 0:
                continue
            y = a[self.cols[t]]
            total += self.vals[t] * x * y
        return total


cpdef dict laurent_mul(dict a, dict b, long shift=0):
    cdef dict out = {}
    cdef long ea, eb, e
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb + shift
            c = out.get(e, 0) + ca * cb
            if c:
                out[e] = c
            elif e in out:
                del out[e]
    return out


cpdef dict torus_mul(BilinearForm form, list left, list right):
    cdef dict out = {}
    cdef dict acc
    cdef long s, e
    cdef tuple ea, eb, key
    cdef Py_ssize_t i, d = form.dim
    for ea, ca in left:
        for eb, cb in right:
            s = form.pair(ea, eb)
            key = tuple([ea[i] + eb[i] for i in range(d)])
            acc = out.get(key)
            if acc is None:
                acc = {}
                out[key] = acc
            for e1, c1 in (<dict> ca).items():
                for e2, c2 in (<dict> cb).items():
                    e = e1 + e2 + s
                    c = acc.get(e, 0) + c1 * c2
                    if c:
                        acc[e] = c
                    elif e in acc:
                        del acc[e]
    return {k: v for k, v in out.items() if v}
