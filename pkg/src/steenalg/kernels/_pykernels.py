"""Pure-Python fallbacks for the compiled kernels.

Same signatures and results as ``_ckernels``; selected automatically when
the extension is not built, or on request via ``STEENALG_KERNELS=python``.
"""

from math import comb

import numpy as np


def binom_mod_p(n: int, k: int, p: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    result = 1
    while k:
        ni, ki = n % p, k % p
        if ki > ni:
            return 0
        result = result * comb(ni, ki) % p
        n //= p
        k //= p
    return result


def rref_mod_p(matrix, p: int):
    m = np.array(matrix, dtype=np.int64, copy=True) % p
    if m.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    nrows, ncols = m.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        sel = r + int(nz[0])
        if sel != r:
            m[[r, sel]] = m[[sel, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = m[r] * inv % p
        col = m[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            m[rows] = (m[rows] - np.outer(col[rows], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r].copy(), pivots
