# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: Lucas binomials and row reduction over F_p."""

import numpy as np
cimport numpy as cnp

ctypedef long long i64


cdef inline i64 _powmod(i64 base, i64 exp, i64 mod) nogil:
    cdef i64 result = 1
    base %= mod
    while exp > 0:
        if exp & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        exp >>= 1
    return result


cdef inline i64 _small_binom(i64 n, i64 k, i64 p) nogil:
    # n < p, so numerator and denominator are units mod p
    cdef i64 num = 1, den = 1, j
    if k < 0 or k > n:
        return 0
    if k > n - k:
        k = n - k
    for j in range(k):
        num = (num * ((n - j) % p)) % p
        den = (den * ((j + 1) % p)) % p
    return (num * _powmod(den, p - 2, p)) % p


def binom_mod_p(i64 n, i64 k, i64 p):
    cdef i64 result = 1, ni, ki
    if k < 0 or n < 0 or k > n:
        return 0
    while k > 0:
        ni = n % p
        ki = k % p
        if ki > ni:
            return 0
        result = (result * _small_binom(ni, ki, p)) % p
        n //= p
        k //= p
    return result


def rref_mod_p(matrix, i64 p):
    """Return ``(rows, pivots)``: the nonzero rows of the reduced row echelon
    form of ``matrix`` over F_p and their pivot columns."""
    cdef cnp.ndarray[i64, ndim=2] arr = np.array(matrix, dtype=np.int64, copy=True) % p
    cdef i64[:, ::1] m = arr
    cdef Py_ssize_t nrows = m.shape[0], ncols = m.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, sel
    cdef i64 inv, f, t
    pivots = []
    for c in range(ncols):
        if r >= nrows:
            break
        sel = -1
        for i in range(r, nrows):
            if m[i, c] != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != r:
            for j in range(ncols):
                t = m[r, j]
                m[r, j] = m[sel, j]
                m[sel, j] = t
        inv = _powmod(m[r, c], p - 2, p)
        if inv != 1:
            for j in range(c, ncols):
                m[r, j] = (m[r, j] * inv) % p
        for i in range(nrows):
            if i == r:
                continue
            f = m[i, c]
            if f == 0:
                continue
            for j in range(c, ncols):
                if m[r, j] != 0:
                    m[i, j] = (m[i, j] - f * m[r, j]) % p
                    if m[i, j] < 0:
                        m[i, j] += p
        pivots.append(c)
        r += 1
    return arr[:r].copy(), pivots
