# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled tensor kernels; same signatures and semantics as _pykernels."""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef inline Py_ssize_t _size(int d, int depth):
    if d == 1:
        return depth + 1
    return (<Py_ssize_t>d ** (depth + 1) - 1) // (d - 1)


cdef void _offsets(int d, int depth, Py_ssize_t *off) noexcept nogil:
    cdef int k
    cdef Py_ssize_t p = 1
    off[0] = 0
    for k in range(depth + 1):
        off[k + 1] = off[k] + p
        p *= d


cdef void _mul_one(const double *a, const double *b, double *c,
                   int d, int depth, const Py_ssize_t *off) noexcept nogil:
    cdef int k, i, j
    cdef Py_ssize_t p, q, nb, base, na
    cdef double ai
    for k in range(depth + 1):
        for p in range(off[k + 1] - off[k]):
            c[off[k] + p] = 0.0
        for i in range(k + 1):
            j = k - i
            na = off[i + 1] - off[i]
            nb = off[j + 1] - off[j]
            for p in range(na):
                ai = a[off[i] + p]
                if ai == 0.0:
                    continue
                base = off[k] + p * nb
                for q in range(nb):
                    c[base + q] += ai * b[off[j] + q]


def mul(a, b, int d, int depth):
    cdef cnp.ndarray[double, ndim=2, mode="c"] A = np.ascontiguousarray(
        np.asarray(a, dtype=np.float64).reshape(-1, _size(d, depth)))
    cdef cnp.ndarray[double, ndim=2, mode="c"] B = np.ascontiguousarray(
        np.asarray(b, dtype=np.float64).reshape(-1, _size(d, depth)))
    cdef Py_ssize_t ma = A.shape[0], mb = B.shape[0]
    cdef Py_ssize_t m = ma if ma > mb else mb
    if (ma != m and ma != 1) or (mb != m and mb != 1):
        raise ValueError("batch sizes do not broadcast")
    cdef Py_ssize_t size = _size(d, depth)
    cdef cnp.ndarray[double, ndim=2, mode="c"] C = np.empty((m, size))
    cdef Py_ssize_t *off = <Py_ssize_t *> malloc((depth + 2) * sizeof(Py_ssize_t))
    cdef Py_ssize_t r, sa = 0 if ma == 1 else size, sb = 0 if mb == 1 else size
    cdef double *pa = &A[0, 0]
    cdef double *pb = &B[0, 0]
    cdef double *pc = &C[0, 0]
    _offsets(d, depth, off)
    with nogil:
        for r in range(m):
            _mul_one(pa + r * sa, pb + r * sb, pc + r * size, d, depth, off)
    free(off)
    return C


cdef void _exp_one(const double *v, double *out, int d, int depth,
                   const Py_ssize_t *off) noexcept nogil:
    cdef int k, i
    cdef Py_ssize_t p, n
    cdef double x
    out[0] = 1.0
    for k in range(1, depth + 1):
        n = off[k] - off[k - 1]
        for p in range(n):
            x = out[off[k - 1] + p] / k
            for i in range(d):
                out[off[k] + p * d + i] = x * v[i]


def exp_increments(v, int d, int depth):
    cdef cnp.ndarray[double, ndim=2, mode="c"] V = np.ascontiguousarray(
        np.asarray(v, dtype=np.float64).reshape(-1, d))
    cdef Py_ssize_t m = V.shape[0], size = _size(d, depth), r
    cdef cnp.ndarray[double, ndim=2, mode="c"] out = np.empty((m, size))
    if m == 0:
        return out
    cdef Py_ssize_t *off = <Py_ssize_t *> malloc((depth + 2) * sizeof(Py_ssize_t))
    cdef double *pv = &V[0, 0]
    cdef double *po = &out[0, 0]
    _offsets(d, depth, off)
    with nogil:
        for r in range(m):
            _exp_one(pv + r * d, po + r * size, d, depth, off)
    free(off)
    return out


cdef void _mul_exp_inplace(double *a, const double *v, double *r, double *s,
                           int d, int depth, const Py_ssize_t *off) noexcept nogil:
    # a <- a (x) exp(v); r and s are scratch buffers of length d**depth
    cdef int k, i, l
    cdef Py_ssize_t p, n
    cdef double x
    cdef double *tmp
    for k in range(depth, 0, -1):
        for l in range(d):
            r[l] = a[0] * v[l] / k
        n = d
        for i in range(1, k):
            for p in range(n):
                x = (r[p] + a[off[i] + p]) / (k - i)
                for l in range(d):
                    s[p * d + l] = x * v[l]
            n *= d
            tmp = r
            r = s
            s = tmp
        for p in range(n):
            a[off[k] + p] += r[p]


def chen_prefix(v, int d, int depth):
    cdef cnp.ndarray[double, ndim=2, mode="c"] V = np.ascontiguousarray(
        np.asarray(v, dtype=np.float64).reshape(-1, d))
    cdef Py_ssize_t m = V.shape[0], size = _size(d, depth), row, p
    cdef cnp.ndarray[double, ndim=2, mode="c"] out = np.zeros((m + 1, size))
    cdef Py_ssize_t top
    cdef Py_ssize_t *off = <Py_ssize_t *> malloc((depth + 2) * sizeof(Py_ssize_t))
    _offsets(d, depth, off)
    top = off[depth + 1] - off[depth]
    cdef double *r = <double *> malloc((top + 1) * sizeof(double))
    cdef double *s = <double *> malloc((top + 1) * sizeof(double))
    cdef double *po = &out[0, 0]
    cdef double *pv
    cdef bint nonzero
    po[0] = 1.0
    with nogil:
        for row in range(m):
            for p in range(size):
                po[(row + 1) * size + p] = po[row * size + p]
            pv = &V[row, 0]
            nonzero = False
            for p in range(d):
                if pv[p] != 0.0:
                    nonzero = True
            if nonzero:
                _mul_exp_inplace(po + (row + 1) * size, pv, r, s, d, depth, off)
    free(r)
    free(s)
    free(off)
    return out
