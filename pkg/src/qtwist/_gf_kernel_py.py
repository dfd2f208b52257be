"""Pure-Python twin of the compiled GF(p) elimination kernel.

Same contract as ``_gf_kernel.rref_mod_p``: reduce a dense integer matrix
to reduced row echelon form modulo a prime.
"""


def rref_mod_p(mat, nrows, ncols, p):
    """Row-reduce ``mat`` (flat list of length nrows*ncols) mod p in place.

    Returns (rank, pivot column list).  Entries must already lie in [0, p).
    """
    piv_cols = []
    r = 0
    for c in range(ncols):
        pivot = -1
        for i in range(r, nrows):
            if mat[i * ncols + c]:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != r:
            pr, pp = pivot * ncols, r * ncols
            for j in range(c, ncols):
                mat[pr + j], mat[pp + j] = mat[pp + j], mat[pr + j]
        inv = pow(mat[r * ncols + c], p - 2, p)
        base = r * ncols
        for j in range(c, ncols):
            mat[base + j] = mat[base + j] * inv % p
        for i in range(nrows):
            if i == r:
                continue
            factor = mat[i * ncols + c]
            if factor:
                row = i * ncols
                for j in range(c, ncols):
                    mat[row + j] = (mat[row + j] - factor * mat[base + j]) % p
        piv_cols.append(c)
        r += 1
        if r == nrows:
            break
    return r, piv_cols
