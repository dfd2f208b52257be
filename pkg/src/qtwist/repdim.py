"""Finite-generation criterion, complexity, clique number, representation
dimension bounds, and global dimension of endomorphism algebras.

The Fg verdict for a quantum complete intersection reduces to finiteness of
the multiplicative orders of the commutators; the representation-dimension
bounds combine the clique lower bound c+1 with the 2n-h / 2n-h+1 upper
bound (capped at the coarse 2n).  Global dimension is computed as the
projective dimension of A/rad A by iterated covers inside free modules.
"""

from dataclasses import dataclass, field as dc_field
from math import inf

from . import linalg
from .fields import multiplicative_order


class RepdimError(ValueError):
    pass


@dataclass
class FgReport:
    fg: bool
    witnesses: list  # (i, j, order) with 1-based indices; order is int or inf
    rationale: str

    def to_json(self):
        return {"fg": self.fg,
                "witnesses": [{"i": i, "j": j,
                               "order": "infinite" if o == inf else o}
                              for (i, j, o) in self.witnesses]}


def fg_check(spec):
    """Fg holds iff every commutator q_ij is a root of unity."""
    witnesses = []
    fg = True
    for i in range(spec.n):
        for j in range(i + 1, spec.n):
            order = multiplicative_order(spec.q_unit(i, j))
            witnesses.append((i + 1, j + 1, order))
            if order == inf:
                fg = False
    rationale = ("all commutators are roots of unity" if fg
                 else "some commutator has infinite multiplicative order")
    return FgReport(fg, witnesses, rationale)


@dataclass
class ComplexityEstimate:
    value: int
    status: str = "estimate"


def complexity_estimate(betti):
    """Window-based polynomial-growth degree of a Betti sequence.

    The least t with an eventually-zero t-th iterated difference, trying
    strides 1..4 to tolerate quasi-polynomial behaviour.  Never a certified
    value: the definition quantifies over all large degrees.
    """
    seq = list(betti)
    if len(seq) < 6:
        raise RepdimError("need at least 6 Betti numbers")
    best = None
    for stride in range(1, 5):
        window = seq
        d = 0
        while len(window) >= 2:
            if all(x == 0 for x in window):
                best = d if best is None else min(best, d)
                break
            window = [window[k + stride] - window[k]
                      for k in range(len(window) - stride)]
            d += 1
    if best is None:
        raise RepdimError("no polynomial growth visible in the window")
    return ComplexityEstimate(best)


def qci_complexity(spec):
    """Exact complexity of k over a QCI: the Betti numbers are convolutions
    of n constant-one sequences regardless of the commutators."""
    return spec.n


def clique_c(spec, guard=20):
    """Largest subset of variables whose pairwise commutators all have
    finite order (singletons qualify vacuously)."""
    n = spec.n
    if n > guard:
        raise RepdimError(f"clique enumeration guard exceeded (n = {n} > {guard})")
    finite = {}
    for i in range(n):
        for j in range(i + 1, n):
            finite[(i, j)] = multiplicative_order(spec.q_unit(i, j)) != inf
    best = 1 if n >= 1 else 0

    def extend(current, candidates):
        nonlocal best
        best = max(best, len(current))
        for k, v in enumerate(candidates):
            if len(current) + len(candidates) - k <= best:
                break
            if all(finite[(min(u, v), max(u, v))] for u in current):
                extend(current + [v], candidates[k + 1:])

    extend([], list(range(n)))
    return best


@dataclass
class RepdimBounds:
    n: int
    c: int
    h: int
    lower: int
    upper: int
    coarse_upper: int

    def to_json(self):
        return {"n": self.n, "c": self.c, "h": self.h,
                "lower": self.lower, "upper": self.upper,
                "coarse_upper": self.coarse_upper}


def repdim_bounds(spec):
    """lower = c+1; upper = min(2n, 2n-h if h <= n/2 else 2n-h+1)."""
    n = spec.n
    c = clique_c(spec)
    h = sum(1 for a in spec.exponents if a == 2)
    refined = 2 * n - h if 2 * h <= n else 2 * n - h + 1
    return RepdimBounds(n, c, h, c + 1, min(2 * n, refined), 2 * n)


# ---------------------------------------------------------------------------
# global dimension


@dataclass(frozen=True)
class Gldim:
    value: int | None = None
    at_least: int | None = None

    def __str__(self):
        return str(self.value) if self.value is not None else f">= {self.at_least}"


def radical_basis(A):
    """Basis of rad A, as sparse algebra elements.

    Connected graded: the positive-degree span (any characteristic).
    Otherwise: the radical of the trace form B(x, y) = tr(L_{xy}), which is
    the Jacobson radical in characteristic 0.
    """
    field = A.field
    if A.connected:
        return [{u: field.one()} for u in A.positive_indices()]
    if field.characteristic != 0:
        raise RepdimError("radical computation unsupported: characteristic p "
                          "and not connected graded")
    rows = []
    for u in range(A.dim):
        row = {}
        for v in range(A.dim):
            tr = _trace_left_mult(A, A.basis_product(u, v))
            if not tr.is_zero():
                row[v] = tr
        rows.append(row)
    kernel = linalg.kernel_basis(field, rows, A.dim)
    return [{v: c for v, c in enumerate(vec) if not c.is_zero()} for vec in kernel]


def _trace_left_mult(A, z):
    total = A.field.zero()
    for b in range(A.dim):
        img = A.mul(z, {b: A.field.one()})
        c = img.get(b)
        if c is not None:
            total = total + c
    return total


def _free_action(A, rank, x, vec):
    """x . vec for x a sparse algebra element and vec in A^rank (flat dicts)."""
    out = {}
    for flat, c in vec.items():
        slot, u = divmod(flat, A.dim)
        for w, cw in A.mul(x, {u: c}).items():
            k = slot * A.dim + w
            acc = out.get(k)
            acc = cw if acc is None else acc + cw
            if acc.is_zero():
                out.pop(k, None)
            else:
                out[k] = acc
    return out


def _minimal_generators(A, rad, vectors):
    """Vectors completing rad . span(vectors) to span(vectors), greedily."""
    span = linalg.Echelon(A.field)
    for vec in vectors:
        for r in rad:
            img = _free_action(A, None, r, vec)
            if img:
                span.add(img)
    gens = []
    for vec in vectors:
        if span.add(vec):
            gens.append(vec)
    return gens


def _cover_kernel(A, gens):
    """Kernel of A^{len(gens)} -> span(gens), plus the image columns."""
    field = A.field
    columns = []
    for slot, g in enumerate(gens):
        for u in range(A.dim):
            columns.append(_free_action(A, None, {u: field.one()}, g))
    support = {}
    for col in columns:
        for k in col:
            support.setdefault(k, len(support))
    rows = [{} for _ in range(len(support))]
    for j, col in enumerate(columns):
        for k, c in col.items():
            rows[support[k]][j] = c
    kernel = linalg.kernel_basis(field, rows, len(columns))
    return [{j: c for j, c in enumerate(vec) if not c.is_zero()} for vec in kernel]


def cover_splits(A, k_vectors, gens=None):
    """Does the covering surjection A^g -> K split?  (K projective iff yes.)

    K is a submodule of a free module, given by spanning vectors; the cover
    sends the generator of slot i to gens[i].  The section sigma is solved
    for as a plain linear system: pi o sigma = id plus A-linearity of sigma.
    """
    field = A.field
    rad = radical_basis(A)
    if gens is None:
        gens = _minimal_generators(A, rad, k_vectors)
    if not gens:
        return True  # K = 0
    basis = []
    ech = linalg.Echelon(field)
    for g in k_vectors:
        if ech.add(g):
            basis.append(g)

    def coords(vec):
        sol = linalg.solve_columns(field, basis, vec)
        if sol is None:
            raise RepdimError("vector escaped the submodule")
        return sol

    n_p = len(gens) * A.dim
    n_k = len(basis)
    one = field.one()
    pi_cols = []
    for slot in range(len(gens)):
        for u in range(A.dim):
            pi_cols.append(_free_action(A, None, {u: one}, gens[slot]))
    # unknowns s[kb][pf], flattened kb * n_p + pf
    rows = {}

    def accum(row_key, col, c):
        row = rows.setdefault(row_key, {})
        s = row.get(col)
        s = c if s is None else s + c
        if s.is_zero():
            row.pop(col, None)
        else:
            row[col] = s

    rhs = {}
    for kb, kvec in enumerate(basis):
        # pi(sigma(kb)) = kb
        for pf in range(n_p):
            for amb, c in pi_cols[pf].items():
                accum(("pi", kb, amb), kb * n_p + pf, c)
        for amb, c in kvec.items():
            rhs[("pi", kb, amb)] = c
        # sigma(e_v . kb) = e_v . sigma(kb)
        for v in range(A.dim):
            moved = _free_action(A, None, {v: one}, kvec)
            lam = coords(moved)
            for kb2, c in enumerate(lam):
                if c.is_zero():
                    continue
                for pf in range(n_p):
                    accum(("lin", v, kb, pf), kb2 * n_p + pf, c)
            for pf in range(n_p):
                slot, u = divmod(pf, A.dim)
                for w, cw in A.mul({v: one}, {u: one}).items():
                    accum(("lin", v, kb, slot * A.dim + w), kb * n_p + pf, -cw)
    row_index = {}
    for key in rows:
        row_index.setdefault(key, len(row_index))
    mat = [{} for _ in range(len(row_index))]
    vec = {}
    for key, row in rows.items():
        mat[row_index[key]] = row
    for key, c in rhs.items():
        if key in row_index:
            vec[row_index[key]] = c
        elif not c.is_zero():
            return False  # equation with empty left side
    return linalg.solve(field, mat, n_k * n_p, vec) is not None


def is_projective(A, k_vectors):
    return cover_splits(A, k_vectors)


def gldim(A, trunc=10):
    """pd_A(A / rad A) by iterated covers inside free modules.

    Each syzygy is covered by lifting a basis of its top; covers are checked
    minimal (kernel inside rad . P), which makes "kernel = 0" the faithful
    splitting criterion for projectivity.  Returns an exact value or the
    lower bound marker when trunc steps do not suffice.
    """
    rad = radical_basis(A)
    if not rad:
        return Gldim(value=0)
    # the cover of A/rad A is the regular module (A basic); K_0 = rad A
    kernel = [dict(r) for r in rad]
    prev_rank = 1
    pd = 1
    while pd <= trunc:
        gens = _minimal_generators(A, rad, kernel)
        next_kernel = _cover_kernel(A, gens)
        _assert_minimal_cover(A, rad, gens, next_kernel)
        if not next_kernel:
            return Gldim(value=pd)
        kernel = next_kernel
        prev_rank = len(gens)
        pd += 1
    return Gldim(at_least=trunc + 1)


def _assert_minimal_cover(A, rad, gens, kernel):
    """Kernel inside rad . P; holds whenever all simples are one-dimensional."""
    if not kernel:
        return
    span = linalg.Echelon(A.field)
    for slot in range(len(gens)):
        for r in rad:
            vec = {slot * A.dim + u: c for u, c in r.items()}
            span.add(vec)
    for vec in kernel:
        if not span.contains(vec):
            raise RepdimError("cover is not minimal: a simple module is not "
                              "one-dimensional; gldim route unsupported here")
