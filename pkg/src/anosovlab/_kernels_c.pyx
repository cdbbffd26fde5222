# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: twisted-product accumulation and torus orbit sums.

Semantics mirror `anosovlab._kernels_py`; see that module for the
reference implementation and the shared conventions (canonical term
order, pruning, mod-1 stepping).
"""

from libc.math cimport cos, sin, fmod, sqrt
from libcpp.vector cimport vector

import numpy as np

cdef extern from "<algorithm>" namespace "std" nogil:
    void stable_sort[Iter, Compare](Iter first, Iter last, Compare comp)

cdef double TWO_PI = 6.283185307179586


cdef struct Term:
    long long n1
    long long n2
    double re
    double im


cdef bint term_less(const Term& a, const Term& b) noexcept nogil:
    if a.n1 != b.n1:
        return a.n1 < b.n1
    return a.n2 < b.n2


cdef _emit(vector[Term]& terms, double prune_tol):
    # Sort by lattice index (stable, so collisions accumulate in
    # insertion order), sum runs, drop coefficients at or below tol.
    cdef Py_ssize_t n = terms.size()
    if n == 0:
        return (np.empty((0, 2), dtype=np.int64), np.empty(0, dtype=np.complex128))
    stable_sort(terms.begin(), terms.end(), term_less)

    out_nu = np.empty((n, 2), dtype=np.int64)
    out_c = np.empty(n, dtype=np.complex128)
    cdef long long[:, ::1] vnu = out_nu
    cdef double complex[::1] vc = out_c

    cdef Py_ssize_t i = 0, m = 0
    cdef long long cur1, cur2
    cdef double sre, sim
    while i < n:
        cur1 = terms[i].n1
        cur2 = terms[i].n2
        sre = 0.0
        sim = 0.0
        while i < n and terms[i].n1 == cur1 and terms[i].n2 == cur2:
            sre += terms[i].re
            sim += terms[i].im
            i += 1
        if sqrt(sre * sre + sim * sim) > prune_tol:
            vnu[m, 0] = cur1
            vnu[m, 1] = cur2
            vc[m] = sre + 1j * sim
            m += 1
    return (out_nu[:m].copy(), out_c[:m].copy())


def weyl_product(const long long[:, ::1] nu_a, const double complex[::1] ca,
                 const long long[:, ::1] nu_b, const double complex[::1] cb,
                 double gamma, double prune_tol):
    """All-pairs twisted product; returns canonical (nu, coeff) arrays."""
    cdef Py_ssize_t na = nu_a.shape[0], nb = nu_b.shape[0]
    cdef vector[Term] terms
    terms.reserve(na * nb)
    cdef Py_ssize_t i, j
    cdef long long a1, a2, b1, b2, kap
    cdef double are, aim, bre, bim, ph, pre, pim, cre, cim
    cdef Term t
    for i in range(na):
        a1 = nu_a[i, 0]
        a2 = nu_a[i, 1]
        are = ca[i].real
        aim = ca[i].imag
        for j in range(nb):
            b1 = nu_b[j, 0]
            b2 = nu_b[j, 1]
            kap = a1 * b2 - a2 * b1
            ph = gamma * <double> kap
            pre = cos(ph)
            pim = sin(ph)
            bre = cb[j].real
            bim = cb[j].imag
            cre = are * bre - aim * bim
            cim = are * bim + aim * bre
            t.n1 = a1 + b1
            t.n2 = a2 + b2
            t.re = cre * pre - cim * pim
            t.im = cre * pim + cim * pre
            terms.push_back(t)
    return _emit(terms, prune_tol)


def combine_terms(const long long[:, ::1] nu, const double complex[::1] c, double prune_tol):
    """Canonicalize a raw term list: sort, merge duplicates, prune."""
    cdef Py_ssize_t n = nu.shape[0]
    cdef vector[Term] terms
    terms.reserve(n)
    cdef Py_ssize_t i
    cdef Term t
    for i in range(n):
        t.n1 = nu[i, 0]
        t.n2 = nu[i, 1]
        t.re = c[i].real
        t.im = c[i].imag
        terms.push_back(t)
    return _emit(terms, prune_tol)


def birkhoff_sum(long long a, long long b, long long c, long long d,
                 double x, double y, long long n1, long long n2,
                 long long nsteps):
    """Average exp(2*pi*i*(n1*x + n2*y)) along the mod-1 orbit of (x, y)."""
    cdef double da = <double> a, db = <double> b
    cdef double dc = <double> c, dd = <double> d
    cdef double f1 = <double> n1, f2 = <double> n2
    cdef double acc_re = 0.0, acc_im = 0.0
    cdef double ph, u1, u2, u, v1, v2, v
    cdef long long step
    for step in range(nsteps):
        u1 = f1 * x
        u2 = f2 * y
        ph = TWO_PI * (u1 + u2)
        acc_re += cos(ph)
        acc_im += sin(ph)
        u1 = da * x
        u2 = db * y
        u = fmod(u1 + u2, 1.0)
        if u < 0.0:
            u += 1.0
        if u >= 1.0:
            u -= 1.0
        v1 = dc * x
        v2 = dd * y
        v = fmod(v1 + v2, 1.0)
        if v < 0.0:
            v += 1.0
        if v >= 1.0:
            v -= 1.0
        x = u
        y = v
    return complex(acc_re / nsteps, acc_im / nsteps)
