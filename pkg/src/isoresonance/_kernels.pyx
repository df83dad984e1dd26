# cython: language_level=3
"""Compiled hot loops: Sturm-sequence bisection and one-sided Jacobi SVD."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt, hypot

cnp.import_array()


cdef inline Py_ssize_t _count(const double* d, const double* e2, Py_ssize_t n,
                              double x, double pivmin) nogil:
    cdef Py_ssize_t i, c = 0
    cdef double q = d[0] - x
    if fabs(q) < pivmin:
        q = -pivmin
    if q < 0:
        c += 1
    for i in range(1, n):
        q = d[i] - x - e2[i - 1] / q
        if fabs(q) < pivmin:
            q = -pivmin
        if q < 0:
            c += 1
    return c


def sturm_count(double[::1] d, double[::1] e, shifts):
    """Number of eigenvalues strictly below each shift."""
    cdef Py_ssize_t n = d.shape[0]
    cdef double[::1] e2 = np.ascontiguousarray(np.square(e), dtype=np.float64)
    cdef double[::1] s = np.ascontiguousarray(np.atleast_1d(shifts), dtype=np.float64)
    cdef cnp.int64_t[::1] out = np.empty(s.shape[0], dtype=np.int64)
    cdef double pivmin = _pivmin(d, e)
    cdef Py_ssize_t k
    with nogil:
        for k in range(s.shape[0]):
            out[k] = _count(&d[0], &e2[0], n, s[k], pivmin)
    return np.asarray(out)


cdef double _pivmin(double[::1] d, double[::1] e):
    cdef double m = 1.0
    cdef Py_ssize_t i
    for i in range(e.shape[0]):
        if e[i] * e[i] > m:
            m = e[i] * e[i]
    return 1e-300 * m if m > 1.0 else 1e-300


def bisect_eigenvalues(double[::1] d, double[::1] e, Py_ssize_t il, Py_ssize_t iu,
                       double lo, double hi, double abstol):
    """Eigenvalues with ascending indices il..iu-1 of the tridiagonal matrix.

    ``lo`` and ``hi`` must bracket all requested eigenvalues.
    """
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t m = iu - il
    cdef double[::1] e2 = np.ascontiguousarray(np.square(e), dtype=np.float64)
    cdef double pivmin = _pivmin(d, e)
    cdef double[::1] lower = np.full(m, lo)
    cdef double[::1] upper = np.full(m, hi)
    cdef double[::1] out = np.empty(m)
    cdef Py_ssize_t k, j, c
    cdef double a, b, mid, tol
    with nogil:
        for k in range(m):
            a = lower[k]
            b = upper[k]
            while True:
                tol = abstol + 4.4e-16 * (fabs(a) if fabs(a) > fabs(b) else fabs(b))
                if b - a <= tol:
                    break
                mid = 0.5 * (a + b)
                if mid <= a or mid >= b:
                    break
                c = _count(&d[0], &e2[0], n, mid, pivmin)
                # share the bracket information with the remaining targets
                for j in range(k, m):
                    if c > il + j:
                        if mid < upper[j]:
                            upper[j] = mid
                    else:
                        if mid > lower[j]:
                            lower[j] = mid
                a = lower[k]
                b = upper[k]
            out[k] = 0.5 * (a + b)
    return np.asarray(out)


def jacobi_singular_values(A, double tol=1e-15, int max_sweeps=60):
    """Singular values of a complex matrix by cyclic one-sided Jacobi.

    Returns ``(values, sweeps)`` with values in descending order.
    """
    cdef double complex[::1, :] G = np.array(A, dtype=np.complex128, order="F", copy=True)
    cdef Py_ssize_t m = G.shape[0], n = G.shape[1]
    cdef Py_ssize_t p, q, i, sweep = 0
    cdef double alpha, beta, gabs, zeta, t, c, s, off
    cdef double complex gamma, ph, gp, gq
    cdef bint rotated = True
    with nogil:
        while rotated and sweep < max_sweeps:
            rotated = False
            sweep += 1
            for p in range(n - 1):
                for q in range(p + 1, n):
                    alpha = 0.0
                    beta = 0.0
                    gamma = 0.0
                    for i in range(m):
                        gp = G[i, p]
                        gq = G[i, q]
                        alpha = alpha + gp.real * gp.real + gp.imag * gp.imag
                        beta = beta + gq.real * gq.real + gq.imag * gq.imag
                        gamma = gamma + gp.conjugate() * gq
                    gabs = hypot(gamma.real, gamma.imag)
                    if gabs == 0.0 or gabs <= tol * sqrt(alpha * beta):
                        continue
                    rotated = True
                    ph = gamma / gabs
                    zeta = (beta - alpha) / (2.0 * gabs)
                    if zeta >= 0:
                        t = 1.0 / (zeta + sqrt(1.0 + zeta * zeta))
                    else:
                        t = -1.0 / (-zeta + sqrt(1.0 + zeta * zeta))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = c * t
                    for i in range(m):
                        gp = G[i, p]
                        gq = G[i, q] * ph.conjugate()
                        G[i, p] = c * gp - s * gq
                        G[i, q] = s * gp + c * gq
    vals = np.sqrt(np.sum(np.abs(np.asarray(G)) ** 2, axis=0))
    return np.sort(vals)[::-1], sweep
