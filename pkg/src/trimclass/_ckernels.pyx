# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Mirrors ``_pykernels`` exactly, including tie-breaks."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline void _plane(const double[:, ::1] X, int m, int i, int j, int k,
                        double* a, double* b) noexcept nogil:
    cdef double u0, u1, u2, v0, v1, v2
    if m == 1:
        a[0] = 1.0
        b[0] = -X[i, 0]
    elif m == 2:
        a[0] = -(X[j, 1] - X[i, 1])
        a[1] = X[j, 0] - X[i, 0]
        b[0] = -(a[0] * X[i, 0] + a[1] * X[i, 1])
    else:
        u0 = X[j, 0] - X[i, 0]; u1 = X[j, 1] - X[i, 1]; u2 = X[j, 2] - X[i, 2]
        v0 = X[k, 0] - X[i, 0]; v1 = X[k, 1] - X[i, 1]; v2 = X[k, 2] - X[i, 2]
        a[0] = u1 * v2 - u2 * v1
        a[1] = u2 * v0 - u0 * v2
        a[2] = u0 * v1 - u1 * v0
        b[0] = -(a[0] * X[i, 0] + a[1] * X[i, 1] + a[2] * X[i, 2])


cdef inline int _count(const double[:, ::1] X, const signed char[::1] y, int m,
                       int i, int j, int k, double* a, double b, int best,
                       int* errp_out, int* errm_out) noexcept nogil:
    """Count errors of both orientations off the defining points.

    Returns 0 if the scan was abandoned because neither orientation can beat
    ``best``.
    """
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t t
    cdef int errp = 0, errm = 0
    cdef double v
    cdef int pp, pm
    for t in range(n):
        if t == i or t == j or t == k:
            continue
        v = b
        v += a[0] * X[t, 0]
        if m > 1:
            v += a[1] * X[t, 1]
        if m > 2:
            v += a[2] * X[t, 2]
        pp = 1 if v >= 0.0 else 0
        pm = 1 if -v >= 0.0 else 0
        if pp != y[t]:
            errp += 1
        if pm != y[t]:
            errm += 1
        if errp >= best and errm >= best:
            return 0
    errp_out[0] = errp
    errm_out[0] = errm
    return 1


def best_hyperplane(const double[:, ::1] X, const signed char[::1] y, int m, int init_best):
    """Scan hyperplanes through every m-subset of rows in lexicographic order.

    Defining points are assumed assignable to their correct side, so they
    never count as errors. Returns ``(err, (i, j, k), orientation)`` for the
    first subset whose error is strictly below ``init_best``, or
    ``(init_best, None, 0)`` when no subset improves on it.
    """
    cdef int n = X.shape[0]
    cdef double a[3]
    cdef double b = 0.0
    cdef int i, j, k
    cdef int best = init_best
    cdef int bi = -1, bj = -1, bk = -1, borient = 0
    cdef int errp = 0, errm = 0
    if m < 1 or m > 3:
        raise ValueError("kernel supports 1 <= m <= 3")
    if X.shape[1] < m:
        raise ValueError("X has fewer columns than m")
    if y.shape[0] != n:
        raise ValueError("label length mismatch")
    with nogil:
        if m == 1:
            for i in range(n):
                _plane(X, 1, i, -1, -1, a, &b)
                if _count(X, y, 1, i, -1, -1, a, b, best, &errp, &errm):
                    if errp <= errm and errp < best:
                        best = errp; bi = i; borient = 1
                    elif errm < errp and errm < best:
                        best = errm; bi = i; borient = -1
        elif m == 2:
            for i in range(n):
                for j in range(i + 1, n):
                    _plane(X, 2, i, j, -1, a, &b)
                    if a[0] == 0.0 and a[1] == 0.0:
                        continue
                    if _count(X, y, 2, i, j, -1, a, b, best, &errp, &errm):
                        if errp <= errm and errp < best:
                            best = errp; bi = i; bj = j; borient = 1
                        elif errm < errp and errm < best:
                            best = errm; bi = i; bj = j; borient = -1
        else:
            for i in range(n):
                for j in range(i + 1, n):
                    for k in range(j + 1, n):
                        _plane(X, 3, i, j, k, a, &b)
                        if a[0] == 0.0 and a[1] == 0.0 and a[2] == 0.0:
                            continue
                        if _count(X, y, 3, i, j, k, a, b, best, &errp, &errm):
                            if errp <= errm and errp < best:
                                best = errp; bi = i; bj = j; bk = k; borient = 1
                            elif errm < errp and errm < best:
                                best = errm; bi = i; bj = j; bk = k; borient = -1
    if bi < 0:
        return init_best, None, 0
    idx = (bi, bj, bk)[:m]
    return best, idx, borient
