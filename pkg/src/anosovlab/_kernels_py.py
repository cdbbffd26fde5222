"""Pure-Python reference kernels (numpy-vectorized where possible).

This is the fallback backend used when the compiled extension is not
available. Both backends share the same contracts:

* term lists are pairs ``(nu, coeff)`` with ``nu`` an ``(n, 2)`` int64
  array and ``coeff`` an ``(n,)`` complex128 array;
* canonical form is lexicographic order on ``(nu1, nu2)`` with distinct
  indices and every ``|coeff| > prune_tol``;
* colliding terms are summed in insertion order (stable sort), so the
  two backends agree to rounding.
"""

import math

import numpy as np

TWO_PI = 2.0 * math.pi


def combine_terms(nu, coeff, prune_tol):
    """Canonicalize a raw term list: sort, merge duplicates, prune."""
    if len(coeff) == 0:
        return np.empty((0, 2), dtype=np.int64), np.empty(0, dtype=np.complex128)
    order = np.lexsort((nu[:, 1], nu[:, 0]))
    nu_s = nu[order]
    c_s = coeff[order]
    new_run = np.empty(len(c_s), dtype=bool)
    new_run[0] = True
    new_run[1:] = (nu_s[1:] != nu_s[:-1]).any(axis=1)
    starts = np.flatnonzero(new_run)
    total = np.add.reduceat(c_s, starts)
    keep = np.abs(total) > prune_tol
    return np.ascontiguousarray(nu_s[starts[keep]]), np.ascontiguousarray(total[keep])


def weyl_product(nu_a, ca, nu_b, cb, gamma, prune_tol):
    """All-pairs twisted product; returns canonical (nu, coeff) arrays."""
    if len(ca) == 0 or len(cb) == 0:
        return np.empty((0, 2), dtype=np.int64), np.empty(0, dtype=np.complex128)
    nu = (nu_a[:, None, :] + nu_b[None, :, :]).reshape(-1, 2)
    kappa = np.outer(nu_a[:, 0], nu_b[:, 1]) - np.outer(nu_a[:, 1], nu_b[:, 0])
    coeff = (ca[:, None] * cb[None, :]) * np.exp(1j * (gamma * kappa))
    return combine_terms(nu, coeff.reshape(-1), prune_tol)


def birkhoff_sum(a, b, c, d, x, y, n1, n2, nsteps):
    """Average exp(2*pi*i*(n1*x + n2*y)) along the mod-1 orbit of (x, y)."""
    fmod = math.fmod
    cos = math.cos
    sin = math.sin
    acc_re = 0.0
    acc_im = 0.0
    for _ in range(nsteps):
        ph = TWO_PI * (n1 * x + n2 * y)
        acc_re += cos(ph)
        acc_im += sin(ph)
        u = fmod(a * x + b * y, 1.0)
        if u < 0.0:
            u += 1.0
        if u >= 1.0:
            u -= 1.0
        v = fmod(c * x + d * y, 1.0)
        if v < 0.0:
            v += 1.0
        if v >= 1.0:
            v -= 1.0
        x = u
        y = v
    return complex(acc_re / nsteps, acc_im / nsteps)
