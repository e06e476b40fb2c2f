# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled commutator kernels; same contract as ``_kernels_py``.

Complex arithmetic is spelled out on separate real and imaginary planes so the
compiler never falls back to the slow C99 complex multiply.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef double _self_commutator(const double[:, ::1] xr, const double[:, ::1] xi,
                             double[:, ::1] gr, double[:, ::1] gi) noexcept nogil:
    # G = N^* N - N N^* is hermitian: fill the upper triangle and mirror it
    cdef Py_ssize_t m = xr.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double ar, ai, f = 0.0
    for i in range(m):
        for j in range(i, m):
            ar = 0.0
            ai = 0.0
            for k in range(m):
                # conj(N[k,i]) * N[k,j]
                ar += xr[k, i] * xr[k, j] + xi[k, i] * xi[k, j]
                ai += xr[k, i] * xi[k, j] - xi[k, i] * xr[k, j]
                # - N[i,k] * conj(N[j,k])
                ar -= xr[i, k] * xr[j, k] + xi[i, k] * xi[j, k]
                ai -= xi[i, k] * xr[j, k] - xr[i, k] * xi[j, k]
            if i == j:
                gr[i, i] = ar
                gi[i, i] = 0.0
                f += ar * ar
            else:
                gr[i, j] = ar
                gi[i, j] = ai
                gr[j, i] = ar
                gi[j, i] = -ai
                f += 2.0 * (ar * ar + ai * ai)
    return f


cdef _planes(N):
    A = np.asarray(N, dtype=np.complex128)
    return np.ascontiguousarray(A.real), np.ascontiguousarray(A.imag)


def commutator_value(N):
    xr_a, xi_a = _planes(N)
    cdef Py_ssize_t m = xr_a.shape[0]
    gr_a = np.empty((m, m))
    gi_a = np.empty((m, m))
    cdef const double[:, ::1] xr = xr_a
    cdef const double[:, ::1] xi = xi_a
    cdef double[:, ::1] gr = gr_a
    cdef double[:, ::1] gi = gi_a
    cdef double f
    with nogil:
        f = _self_commutator(xr, xi, gr, gi)
    return f


def commutator_objective(N):
    xr_a, xi_a = _planes(N)
    cdef Py_ssize_t m = xr_a.shape[0]
    gr_a = np.empty((m, m))
    gi_a = np.empty((m, m))
    grad = np.empty((m, m), dtype=np.complex128)
    cdef const double[:, ::1] xr = xr_a
    cdef const double[:, ::1] xi = xi_a
    cdef double[:, ::1] gr = gr_a
    cdef double[:, ::1] gi = gi_a
    cdef double[:, :, ::1] out = grad.view(np.float64).reshape(m, m, 2)
    cdef Py_ssize_t i, j, k
    cdef double ar, ai, f
    with nogil:
        f = _self_commutator(xr, xi, gr, gi)
        # grad = 4 (N G - G N)
        for i in range(m):
            for j in range(m):
                ar = 0.0
                ai = 0.0
                for k in range(m):
                    ar += xr[i, k] * gr[k, j] - xi[i, k] * gi[k, j]
                    ai += xr[i, k] * gi[k, j] + xi[i, k] * gr[k, j]
                    ar -= gr[i, k] * xr[k, j] - gi[i, k] * xi[k, j]
                    ai -= gr[i, k] * xi[k, j] + gi[i, k] * xr[k, j]
                out[i, j, 0] = 4.0 * ar
                out[i, j, 1] = 4.0 * ai
    return f, grad
