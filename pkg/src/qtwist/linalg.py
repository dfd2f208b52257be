"""Exact rank / kernel / solve over the supported fields.

Matrices are lists of sparse rows (dicts column -> nonzero FieldElement).
Prime-field matrices are densified and routed through the elimination
kernel, compiled if the extension built, pure Python otherwise; set
``QTWIST_PURE=1`` to force the fallback.  Everything else runs through a
generic sparse Gauss-Jordan, with a fraction-free Bareiss rank available
as an independent route for function fields.
"""

import os

from . import polys
from .fields import FUNCTION, PRIME, FieldElement

if os.environ.get("QTWIST_PURE"):
    from . import _gf_kernel_py as _gf_backend

    COMPILED = False
else:
    try:
        from . import _gf_kernel as _gf_backend

        COMPILED = True
    except ImportError:
        from . import _gf_kernel_py as _gf_backend

        COMPILED = False


def backend_name():
    return "compiled" if COMPILED else "pure-python"


class ShapeError(ValueError):
    pass


# -- sparse row helpers -----------------------------------------------------


def vec_add(a, b):
    out = dict(a)
    for k, v in b.items():
        s = out.get(k)
        s = v if s is None else s + v
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


def vec_scale(a, c):
    if c.is_zero():
        return {}
    return {k: v * c for k, v in a.items()}


def vec_sub(a, b):
    return vec_add(a, {k: -v for k, v in b.items()})


def rows_from_dense(field, dense):
    rows = []
    for dr in dense:
        row = {}
        for j, v in enumerate(dr):
            if not isinstance(v, FieldElement):
                v = field.from_int(v) if isinstance(v, int) else field.parse(v)
            if not v.is_zero():
                row[j] = v
        rows.append(row)
    return rows


def _check_rect(dense):
    if dense and any(len(r) != len(dense[0]) for r in dense):
        raise ShapeError("ragged matrix")


# -- generic sparse RREF ----------------------------------------------------


def _rref_generic(field, rows, ncols):
    """Gauss-Jordan on sparse rows; returns (pivcols, reduced rows)."""
    work = [dict(r) for r in rows]
    piv_cols = []
    piv_rows = []
    remaining = list(range(len(work)))
    for c in range(ncols):
        best = None
        for i in remaining:
            if c in work[i]:
                # cheapest pivot first: fewest nonzeros, then smallest entry
                key = (len(work[i]), _entry_weight(work[i][c]))
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            continue
        i = best[1]
        remaining.remove(i)
        inv = work[i][c].inverse()
        work[i] = {k: v * inv for k, v in work[i].items()}
        for j in list(remaining) + piv_rows:
            if c in work[j]:
                work[j] = vec_sub(work[j], vec_scale(work[i], work[j][c]))
        piv_cols.append(c)
        piv_rows.append(i)
    reduced = [work[i] for i in piv_rows]
    return piv_cols, reduced


def _entry_weight(v):
    if v.field.kind == FUNCTION:
        return len(v.data[0]) + len(v.data[1])
    return 0


# -- prime-field fast path --------------------------------------------------


def _rref_prime(field, rows, ncols):
    p = field.p
    nrows = len(rows)
    flat = [0] * (nrows * ncols)
    for i, row in enumerate(rows):
        base = i * ncols
        for j, v in row.items():
            flat[base + j] = v.data
    rank, piv_cols = _gf_backend.rref_mod_p(flat, nrows, ncols, p)
    reduced = []
    for i in range(rank):
        base = i * ncols
        row = {}
        for j in range(ncols):
            if flat[base + j]:
                row[j] = FieldElement(field, flat[base + j])
        reduced.append(row)
    return piv_cols, reduced


def rref(field, rows, ncols):
    if field.kind == PRIME:
        return _rref_prime(field, rows, ncols)
    return _rref_generic(field, rows, ncols)


# -- public operations ------------------------------------------------------


def mat_rank(field, rows, ncols=None, dense=None):
    """Rank of a matrix given as sparse rows (or via ``dense``)."""
    if dense is not None:
        _check_rect(dense)
        rows = rows_from_dense(field, dense)
        ncols = len(dense[0]) if dense else 0
    return len(rref(field, rows, ncols)[0])


def kernel_basis(field, rows, ncols):
    """Basis of the right kernel {x : A x = 0}, as dense vectors."""
    piv_cols, reduced = rref(field, rows, ncols)
    piv_set = set(piv_cols)
    basis = []
    zero = field.zero()
    for free in range(ncols):
        if free in piv_set:
            continue
        vec = [zero] * ncols
        vec[free] = field.one()
        for i, c in enumerate(piv_cols):
            entry = reduced[i].get(free)
            if entry is not None:
                vec[c] = -entry
        basis.append(vec)
    return basis


def solve(field, rows, ncols, rhs):
    """Some solution of A x = rhs, or None.  ``rhs`` is a sparse dict or list."""
    if not isinstance(rhs, dict):
        rhs = {i: v for i, v in enumerate(rhs) if not v.is_zero()}
    aug = []
    for i, row in enumerate(rows):
        r = dict(row)
        if i in rhs:
            r[ncols] = rhs[i]
        aug.append(r)
    piv_cols, reduced = rref(field, aug, ncols + 1)
    if ncols in piv_cols:
        return None
    zero = field.zero()
    x = [zero] * ncols
    for i, c in enumerate(piv_cols):
        entry = reduced[i].get(ncols)
        if entry is not None:
            x[c] = entry
    return x


def solve_columns(field, columns, target):
    """Coefficients expressing ``target`` in terms of ``columns``, or None.

    Columns and target are sparse dicts over an arbitrary (hashable) index
    set; handy for membership-in-span questions.
    """
    index = {}
    for col in columns:
        for k in col:
            index.setdefault(k, len(index))
    for k in target:
        index.setdefault(k, len(index))
    rows = [{} for _ in range(len(index))]
    for j, col in enumerate(columns):
        for k, v in col.items():
            rows[index[k]][j] = v
    rhs = {index[k]: v for k, v in target.items()}
    return solve(field, rows, len(columns), rhs)


class Echelon:
    """Incremental row echelon over sparse vectors with hashable indices.

    Supports fast membership queries and span extension; pivot choice is the
    minimal index of the reduced vector, so behaviour is deterministic.
    """

    def __init__(self, field):
        self.field = field
        self.rows = {}  # pivot index -> normalized sparse row

    def reduce(self, vec):
        v = dict(vec)
        for k in sorted(self.rows):
            c = v.get(k)
            if c is None or c.is_zero():
                continue
            row = self.rows[k]
            for k2, c2 in row.items():
                s = v.get(k2)
                s = -(c * c2) if s is None else s - c * c2
                if s.is_zero():
                    v.pop(k2, None)
                else:
                    v[k2] = s
        return v

    def add(self, vec):
        """Insert vec into the span; returns True if the rank grew."""
        v = self.reduce(vec)
        if not v:
            return False
        piv = min(v)
        inv = v[piv].inverse()
        v = {k: c * inv for k, c in v.items()}
        for row in self.rows.values():
            c = row.get(piv)
            if c is not None:
                for k2, c2 in v.items():
                    s = row.get(k2)
                    s = -(c * c2) if s is None else s - c * c2
                    if s.is_zero():
                        row.pop(k2, None)
                    else:
                        row[k2] = s
        self.rows[piv] = v
        return True

    def contains(self, vec):
        return not self.reduce(vec)

    @property
    def rank(self):
        return len(self.rows)


# -- fraction-free route ----------------------------------------------------


def bareiss_rank(field, rows, ncols):
    """Rank by fraction-free elimination after clearing denominators.

    Over function fields this works on polynomial entries with exact
    divisions only; over Q it runs on integers.  Serves as the independent
    cross-check against the Gauss-Jordan route.
    """
    if field.kind == PRIME:
        return mat_rank(field, rows, ncols)
    mat = []
    for row in rows:
        if field.kind == FUNCTION:
            den = polys.pconst(1, field.nvars, field.p)
            for v in row.values():
                den = polys.pmul(den, v.data[1], field.p)
            dense = [polys.pzero()] * ncols
            for j, v in row.items():
                dense[j] = polys.pmul(v.data[0], polys.pdivexact(den, v.data[1], field.p), field.p)
        else:
            den = 1
            for v in row.values():
                den *= v.data.denominator
            dense = [0] * ncols
            for j, v in row.items():
                dense[j] = v.data.numerator * (den // v.data.denominator)
        mat.append(dense)

    if field.kind == FUNCTION:
        is_zero, mul, div = polys.pis_zero, lambda a, b: polys.pmul(a, b, field.p), \
            lambda a, b: polys.pdivexact(a, b, field.p)
        sub = lambda a, b: polys.psub(a, b, field.p)
        one = polys.pconst(1, field.nvars, field.p)
    else:
        is_zero, mul, div, sub = lambda a: a == 0, lambda a, b: a * b, \
            lambda a, b: a // b, lambda a, b: a - b
        one = 1

    rank = 0
    prev = one
    nrows = len(mat)
    for c in range(ncols):
        pivot = -1
        for i in range(rank, nrows):
            if not is_zero(mat[i][c]):
                pivot = i
                break
        if pivot < 0:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        piv = mat[rank][c]
        for i in range(rank + 1, nrows):
            for j in range(c + 1, ncols):
                mat[i][j] = div(sub(mul(piv, mat[i][j]), mul(mat[i][c], mat[rank][j])), prev)
            mat[i][c] = polys.pzero() if field.kind == FUNCTION else 0
        prev = piv
        rank += 1
        if rank == nrows:
            break
    return rank
