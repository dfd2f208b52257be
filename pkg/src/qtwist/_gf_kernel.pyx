# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(p) elimination kernel.

Primes are bounded by 2^20, so products of residues fit comfortably in a
64-bit integer.  The pure-Python twin lives in ``_gf_kernel_py``.
"""

from cpython cimport array
import array


cdef long long _inv_mod(long long a, long long p):
    # extended Euclid; a is nonzero mod p
    cdef long long g = a, x = 1, g1 = p, x1 = 0, q, t
    while g1:
        q = g / g1
        t = g - q * g1; g = g1; g1 = t
        t = x - q * x1; x = x1; x1 = t
    x %= p
    if x < 0:
        x += p
    return x


def rref_mod_p(mat, Py_ssize_t nrows, Py_ssize_t ncols, long long p):
    """Row-reduce ``mat`` (flat list of length nrows*ncols) mod p in place.

    Returns (rank, pivot column list).  Entries must already lie in [0, p).
    """
    cdef array.array buf = array.array('q', mat)
    cdef long long[::1] m = buf
    cdef Py_ssize_t r = 0, c, i, j, pivot, base, row
    cdef long long inv, factor, v
    piv_cols = []
    for c in range(ncols):
        pivot = -1
        for i in range(r, nrows):
            if m[i * ncols + c]:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != r:
            base = pivot * ncols
            row = r * ncols
            for j in range(c, ncols):
                v = m[base + j]; m[base + j] = m[row + j]; m[row + j] = v
        base = r * ncols
        inv = _inv_mod(m[base + c], p)
        for j in range(c, ncols):
            m[base + j] = m[base + j] * inv % p
        for i in range(nrows):
            if i == r:
                continue
            row = i * ncols
            factor = m[row + c]
            if factor:
                for j in range(c, ncols):
                    m[row + j] = (m[row + j] - factor * m[base + j]) % p
                    if m[row + j] < 0:
                        m[row + j] += p
        piv_cols.append(c)
        r += 1
        if r == nrows:
            break
    mat[:] = buf.tolist()
    return r, piv_cols
