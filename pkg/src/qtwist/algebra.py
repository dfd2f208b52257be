"""Finite-dimensional graded algebras and modules via structure constants.

Everything is totally explicit: an algebra is an ordered homogeneous basis
plus sparse structure constants, a module likewise with action constants.
Elements are sparse dicts {basis index: coefficient}.  Twisted tensor
products of algebras, modules and bimodules implement the defining scalar
rules; quantum complete intersections get a closed-form constructor.
"""

from dataclasses import dataclass, field as dc_field

from .fields import FieldDescriptor, FieldElement, UnitDescriptor
from .twist import Twist, dadd, dconcat, dzero


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class TensorInfo:
    left: "GradedAlgebra"
    right: "GradedAlgebra"
    twist: Twist


class GradedAlgebra:
    """Z^m-graded algebra given by homogeneous basis + structure constants."""

    def __init__(self, field, labels, degrees, mult, unit, rank, check=True):
        self.field = field
        self.labels = list(labels)
        self.degrees = [tuple(d) for d in degrees]
        self.mult = mult  # dict (u, v) -> dict w -> FieldElement, no zero entries
        self.unit = unit
        self.rank = rank
        self.qci = None     # set by qci_construct
        self.tensor = None  # set by twisted_tensor_algebra
        self.env_of = None  # set by enveloping
        if check:
            self._check_basic()

    # -- validation ---------------------------------------------------------

    def _check_basic(self):
        if len(self.labels) != len(self.degrees):
            raise AlgebraError("label/degree length mismatch")
        for d in self.degrees:
            if len(d) != self.rank:
                raise AlgebraError("degree length does not match grading rank")
        for (u, v), terms in self.mult.items():
            d = dadd(self.degrees[u], self.degrees[v])
            for w, c in terms.items():
                if c.is_zero():
                    raise AlgebraError("stored zero structure constant")
                if self.degrees[w] != d:
                    raise AlgebraError(
                        f"inhomogeneous product {self.labels[u]} * {self.labels[v]}")
        e = self.unit
        for u in range(self.dim):
            if self.basis_product(e, u) != {u: self.field.one()}:
                raise AlgebraError("left unit law fails")
            if self.basis_product(u, e) != {u: self.field.one()}:
                raise AlgebraError("right unit law fails")

    def check_associativity(self):
        """(e_u e_v) e_w == e_u (e_v e_w) for all basis triples."""
        for u in range(self.dim):
            for v in range(self.dim):
                uv = self.basis_product(u, v)
                for w in range(self.dim):
                    left = self.mul(uv, {w: self.field.one()})
                    right = self.mul({u: self.field.one()}, self.basis_product(v, w))
                    if left != right:
                        raise AlgebraError(
                            f"associativity fails at ({self.labels[u]}, "
                            f"{self.labels[v]}, {self.labels[w]})")
        return True

    # -- basic structure ----------------------------------------------------

    @property
    def dim(self):
        return len(self.labels)

    @property
    def connected(self):
        """Degree-0 part is spanned by the unit (and the grading is positive)."""
        for i, d in enumerate(self.degrees):
            if i == self.unit:
                if any(x != 0 for x in d):
                    return False
            elif all(x == 0 for x in d) or any(x < 0 for x in d):
                return False
        return True

    def positive_indices(self):
        return [i for i in range(self.dim) if i != self.unit]

    def one_elem(self):
        return {self.unit: self.field.one()}

    def basis_elem(self, u):
        return {u: self.field.one()}

    def basis_product(self, u, v):
        return self.mult.get((u, v), {})

    def mul(self, x, y):
        out = {}
        for u, cu in x.items():
            for v, cv in y.items():
                terms = self.mult.get((u, v))
                if not terms:
                    continue
                c = cu * cv
                if c.is_zero():
                    continue
                for w, cw in terms.items():
                    s = out.get(w)
                    s = c * cw if s is None else s + c * cw
                    if s.is_zero():
                        out.pop(w, None)
                    else:
                        out[w] = s
        return out

    def elem_degree(self, x):
        """Degree of a homogeneous element (None for 0)."""
        degs = {self.degrees[u] for u in x}
        if not degs:
            return None
        if len(degs) > 1:
            raise AlgebraError("element is not homogeneous")
        return degs.pop()

    def elem_str(self, x):
        if not x:
            return "0"
        parts = []
        for u in sorted(x):
            c = str(x[u])
            lbl = self.labels[u]
            if lbl == "1":
                parts.append(c)
            elif c == "1":
                parts.append(lbl)
            else:
                parts.append(f"({c})*{lbl}")
        return " + ".join(parts)

    def index_of(self, label):
        return self.labels.index(label)

    def dump(self):
        """Canonical JSON-ready description (stable ordering throughout)."""
        return {
            "field": str(self.field),
            "grading_rank": self.rank,
            "unit": self.unit,
            "basis": [{"label": l, "degree": list(d)}
                      for l, d in zip(self.labels, self.degrees)],
            "mult": [
                {"u": u, "v": v,
                 "terms": [{"w": w, "coeff": str(terms[w])} for w in sorted(terms)]}
                for (u, v), terms in sorted(self.mult.items())
            ],
        }


class GradedModule:
    """Graded left module over a GradedAlgebra, by action constants."""

    def __init__(self, algebra, labels, degrees, action, check=True):
        self.algebra = algebra
        self.labels = list(labels)
        self.degrees = [tuple(d) for d in degrees]
        self.action = action  # dict (u, b) -> dict b' -> coeff
        if check:
            self._check_basic()

    def _check_basic(self):
        A = self.algebra
        for d in self.degrees:
            if len(d) != A.rank:
                raise AlgebraError("module degree length mismatch")
        for (u, b), terms in self.action.items():
            d = dadd(A.degrees[u], self.degrees[b])
            for b2, c in terms.items():
                if c.is_zero():
                    raise AlgebraError("stored zero action constant")
                if self.degrees[b2] != d:
                    raise AlgebraError("inhomogeneous action constant")
        for b in range(self.dim):
            if self.basis_act(A.unit, b) != {b: A.field.one()}:
                raise AlgebraError("unit does not act as identity")

    def check_associative_action(self):
        A = self.algebra
        for u in range(A.dim):
            for v in range(A.dim):
                uv = A.basis_product(u, v)
                for b in range(self.dim):
                    left = self.act(uv, {b: A.field.one()})
                    right = self.act({u: A.field.one()},
                                     self.act({v: A.field.one()}, {b: A.field.one()}))
                    if left != right:
                        raise AlgebraError(
                            f"action associativity fails at ({A.labels[u]}, "
                            f"{A.labels[v]}, {self.labels[b]})")
        return True

    @property
    def dim(self):
        return len(self.labels)

    @property
    def field(self):
        return self.algebra.field

    def basis_act(self, u, b):
        return self.action.get((u, b), {})

    def act(self, x, m):
        out = {}
        for u, cu in x.items():
            for b, cb in m.items():
                terms = self.action.get((u, b))
                if not terms:
                    continue
                c = cu * cb
                if c.is_zero():
                    continue
                for b2, c2 in terms.items():
                    s = out.get(b2)
                    s = c * c2 if s is None else s + c * c2
                    if s.is_zero():
                        out.pop(b2, None)
                    else:
                        out[b2] = s
        return out

    def elem_degree(self, m):
        degs = {self.degrees[b] for b in m}
        if not degs:
            return None
        if len(degs) > 1:
            raise AlgebraError("module element is not homogeneous")
        return degs.pop()

    def elem_str(self, m):
        if not m:
            return "0"
        return " + ".join(
            f"({m[b]})*{self.labels[b]}" if str(m[b]) != "1" else self.labels[b]
            for b in sorted(m))


# ---------------------------------------------------------------------------
# quantum complete intersections


@dataclass(frozen=True)
class QciSpec:
    """Parameters n, a_1..a_n, and commutators q_ij (i<j) in discrete form."""

    field: FieldDescriptor
    exponents: tuple
    q: tuple = ()  # tuple of ((i, j), UnitDescriptor) with 0-based i < j

    def __post_init__(self):
        if len(self.exponents) < 1:
            raise AlgebraError("need n >= 1")
        if any(a < 2 for a in self.exponents):
            raise AlgebraError("exponents must be >= 2")
        qmap = {}
        for (i, j), u in dict(self.q).items():
            if not (0 <= i < j < self.n):
                raise AlgebraError(f"bad commutator index ({i}, {j})")
            if not isinstance(u, UnitDescriptor):
                raise AlgebraError("commutators must be UnitDescriptors")
            u.validate(self.field)
            qmap[(i, j)] = u
        object.__setattr__(self, "q", tuple(sorted(qmap.items())))

    @property
    def n(self):
        return len(self.exponents)

    def q_unit(self, i, j):
        assert i < j
        return dict(self.q).get((i, j), UnitDescriptor.one())

    def q_value(self, i, j):
        return self.q_unit(i, j).eval(self.field)


def qci_construct(spec):
    """k<x_1..x_n>/(x_i^{a_i}, x_j x_i - q_ij x_i x_j) on its monomial basis.

    Basis is all x^d with 0 <= d_i < a_i in lexicographic order; the product
    x^d * x^e is q-scaled by prod_{i<j} q_ij^{e_i d_j} and truncates to zero
    when any exponent overflows.
    """
    import itertools

    field = spec.field
    n = spec.n
    exps = list(itertools.product(*[range(a) for a in spec.exponents]))
    index = {e: i for i, e in enumerate(exps)}
    labels = [_monomial_label(e) for e in exps]
    mult = {}
    for u, d in enumerate(exps):
        for v, e in enumerate(exps):
            if any(di + ei >= a for di, ei, a in zip(d, e, spec.exponents)):
                continue
            unit = UnitDescriptor.one()
            for i in range(n):
                if e[i] == 0:
                    continue
                for j in range(i + 1, n):
                    if d[j]:
                        unit = unit * spec.q_unit(i, j) ** (e[i] * d[j])
            c = unit.eval(field)
            if not c.is_zero():
                mult[(u, v)] = {index[dadd(d, e)]: c}
    A = GradedAlgebra(field, labels, [tuple(e) for e in exps], mult,
                      unit=index[dzero(n)], rank=n)
    A.qci = spec
    return A


def _monomial_label(e):
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(f"x{i + 1}")
        elif k > 1:
            parts.append(f"x{i + 1}^{k}")
    return "*".join(parts) if parts else "1"


# ---------------------------------------------------------------------------
# constructions


def twisted_tensor_algebra(A, B, t):
    """(l @ g) * (l' @ g') = t(|l'|, |g|) ll' @ gg' on the pair basis."""
    if (t.m, t.n) != (A.rank, B.rank):
        raise AlgebraError("twist dimensions do not match grading ranks")
    if t.field != A.field or A.field != B.field:
        raise AlgebraError("field mismatch in tensor product")
    dimB = B.dim
    labels = []
    degrees = []
    for u in range(A.dim):
        for v in range(B.dim):
            labels.append(f"{A.labels[u]}⊗{B.labels[v]}")
            degrees.append(dconcat(A.degrees[u], B.degrees[v]))
    mult = {}
    one = A.field.one()
    for u in range(A.dim):
        for v in range(B.dim):
            for u2 in range(A.dim):
                left = A.basis_product(u, u2)
                if not left:
                    continue
                for v2 in range(B.dim):
                    right = B.basis_product(v, v2)
                    if not right:
                        continue
                    scalar = t.eval(A.degrees[u2], B.degrees[v])
                    if scalar.is_zero():
                        continue
                    terms = {}
                    for w, cw in left.items():
                        for z, cz in right.items():
                            c = scalar * cw * cz
                            if not c.is_zero():
                                terms[w * dimB + z] = c
                    if terms:
                        mult[(u * dimB + v, u2 * dimB + v2)] = terms
    T = GradedAlgebra(A.field, labels, degrees, mult,
                      unit=A.unit * dimB + B.unit, rank=A.rank + B.rank)
    T.tensor = TensorInfo(A, B, t)
    return T


def opposite(A):
    mult = {}
    for (u, v), terms in A.mult.items():
        mult[(v, u)] = dict(terms)
    op = GradedAlgebra(A.field, [f"op({l})" for l in A.labels], A.degrees, mult,
                       unit=A.unit, rank=A.rank)
    return op


def enveloping(A):
    """A (x) A^op, graded over the same Z^m by summing the two degrees.

    The summed grading is what makes A itself a graded module over the
    enveloping algebra.
    """
    op = opposite(A)
    dimA = A.dim
    labels = []
    degrees = []
    for u in range(dimA):
        for v in range(dimA):
            labels.append(f"{A.labels[u]}⊗{op.labels[v]}")
            degrees.append(dadd(A.degrees[u], A.degrees[v]))
    mult = {}
    for u in range(dimA):
        for u2 in range(dimA):
            left = A.basis_product(u, u2)
            if not left:
                continue
            for v in range(dimA):
                for v2 in range(dimA):
                    right = op.basis_product(v, v2)
                    if not right:
                        continue
                    terms = {}
                    for w, cw in left.items():
                        for z, cz in right.items():
                            c = cw * cz
                            if not c.is_zero():
                                terms[w * dimA + z] = c
                    if terms:
                        mult[(u * dimA + v, u2 * dimA + v2)] = terms
    E = GradedAlgebra(A.field, labels, degrees, mult,
                      unit=A.unit * dimA + A.unit, rank=A.rank)
    E.env_of = A
    return E


def simple_module(A):
    """The trivial simple k over a connected graded algebra."""
    if not A.connected:
        raise AlgebraError("simple module needs a connected graded algebra")
    return GradedModule(A, ["k"], [dzero(A.rank)],
                        {(A.unit, 0): {0: A.field.one()}})


def regular_module(A):
    action = {}
    for (u, v), terms in A.mult.items():
        action[(u, v)] = dict(terms)
    return GradedModule(A, list(A.labels), list(A.degrees), action)


def bimodule_regular(E):
    """The algebra A as a graded module over its enveloping algebra E."""
    A = E.env_of
    if A is None:
        raise AlgebraError("bimodule_regular expects an enveloping algebra")
    dimA = A.dim
    action = {}
    one = A.field.one()
    for u in range(dimA):
        for v in range(dimA):
            for b in range(dimA):
                out = A.mul(A.mul({u: one}, {b: one}), {v: one})
                if out:
                    action[(u * dimA + v, b)] = out
    return GradedModule(E, list(A.labels), list(A.degrees), action)


def direct_sum_module(M, N):
    if M.algebra is not N.algebra:
        raise AlgebraError("direct sum needs modules over one algebra")
    labels = [f"{l}.0" for l in M.labels] + [f"{l}.1" for l in N.labels]
    degrees = list(M.degrees) + list(N.degrees)
    off = M.dim
    action = {}
    for (u, b), terms in M.action.items():
        action[(u, b)] = dict(terms)
    for (u, b), terms in N.action.items():
        action[(u, b + off)] = {b2 + off: c for b2, c in terms.items()}
    return GradedModule(M.algebra, labels, degrees, action)


def module_tensor(T, M, N):
    """M (x)^t N over the twisted tensor algebra T = A (x)^t B.

    Action rule: (l @ g) . (m @ n) = t(|m|, |g|) lm @ gn.
    """
    info = T.tensor
    if info is None:
        raise AlgebraError("module_tensor needs a twisted tensor algebra")
    A, B, t = info.left, info.right, info.twist
    if M.algebra is not A or N.algebra is not B:
        raise AlgebraError("modules do not match the tensor factors")
    dimN = N.dim
    labels = []
    degrees = []
    for mb in range(M.dim):
        for nb in range(N.dim):
            labels.append(f"{M.labels[mb]}⊗{N.labels[nb]}")
            degrees.append(dconcat(M.degrees[mb], N.degrees[nb]))
    action = {}
    for (u, mb), mterms in M.action.items():
        for (v, nb), nterms in N.action.items():
            scalar = t.eval(M.degrees[mb], B.degrees[v])
            terms = {}
            for m2, cm in mterms.items():
                for n2, cn in nterms.items():
                    c = scalar * cm * cn
                    if not c.is_zero():
                        terms[m2 * dimN + n2] = c
            if terms:
                action[(u * B.dim + v, mb * dimN + nb)] = terms
    return GradedModule(T, labels, degrees, action)


def bimodule_tensor(TE, X, Y):
    """X (x)^t Y as a module over the enveloping algebra TE of A (x)^t B.

    Action rule, for x in the A-side bimodule and y in the B-side one:
    (l @ g)(x @ y)(l' @ g') = t(|x|, |g|) t(|l'|, |y|) t(|l'|, |g|)
                              l x l' @ g y g'.
    """
    T = TE.env_of
    if T is None or T.tensor is None:
        raise AlgebraError("bimodule_tensor needs the enveloping of a tensor algebra")
    A, B, t = T.tensor.left, T.tensor.right, T.tensor.twist
    EA = X.algebra
    EB = Y.algebra
    if EA.env_of is not A or EB.env_of is not B:
        raise AlgebraError("bimodules do not match the tensor factors")
    dimA, dimB, dimY = A.dim, B.dim, Y.dim
    labels = []
    degrees = []
    for xb in range(X.dim):
        for yb in range(Y.dim):
            labels.append(f"{X.labels[xb]}⊗{Y.labels[yb]}")
            degrees.append(dconcat(X.degrees[xb], Y.degrees[yb]))
    action = {}
    # TE basis index: w * T.dim + w2 with w = u*dimB+v, w2 = u2*dimB+v2
    for xb in range(X.dim):
        degx = X.degrees[xb]
        for yb in range(Y.dim):
            degy = Y.degrees[yb]
            for u in range(dimA):
                for u2 in range(dimA):
                    xout = X.basis_act(u * dimA + u2, xb)
                    if not xout:
                        continue
                    for v in range(dimB):
                        sc1 = t.eval(degx, B.degrees[v])
                        sc3 = t.eval(A.degrees[u2], B.degrees[v])
                        for v2 in range(dimB):
                            yout = Y.basis_act(v * dimB + v2, yb)
                            if not yout:
                                continue
                            scalar = sc1 * t.eval(A.degrees[u2], degy) * sc3
                            terms = {}
                            for x2, cx in xout.items():
                                for y2, cy in yout.items():
                                    c = scalar * cx * cy
                                    if not c.is_zero():
                                        terms[x2 * dimY + y2] = c
                            if terms:
                                w = u * dimB + v
                                w2 = u2 * dimB + v2
                                action[(w * T.dim + w2, xb * dimY + yb)] = terms
    return GradedModule(TE, labels, degrees, action)


def shift(M, a):
    """M<a>: same action, every basis degree increased by a."""
    a = tuple(a)
    if len(a) != M.algebra.rank:
        raise AlgebraError("shift degree length mismatch")
    return GradedModule(M.algebra, list(M.labels),
                        [dadd(d, a) for d in M.degrees], M.action, check=False)


# ---------------------------------------------------------------------------
# graded Hom


def graded_hom(M, N):
    """Table {degree a: basis of grHom(M, N<a>)}.

    A hom of degree a maps M_d into N_{d-a}; each graded piece is computed
    by solving the linear system "commutes with every basis element".
    Homs are sparse matrices {mb: {nb: coeff}} acting on the right of row
    vectors, so composition is matrix multiplication.
    """
    from . import linalg

    if M.algebra is not N.algebra:
        raise AlgebraError("graded_hom needs modules over one algebra")
    A = M.algebra
    field = A.field
    candidates = sorted({tuple(x - y for x, y in zip(M.degrees[mb], N.degrees[nb]))
                         for mb in range(M.dim) for nb in range(N.dim)})
    table = {}
    for a in candidates:
        unknowns = [(mb, nb) for mb in range(M.dim) for nb in range(N.dim)
                    if tuple(x - y for x, y in zip(M.degrees[mb], N.degrees[nb])) == a]
        if not unknowns:
            continue
        col = {pair: i for i, pair in enumerate(unknowns)}
        cols_by_source = {}
        for (mb, nb), j in col.items():
            cols_by_source.setdefault(mb, []).append((nb, j))
        rows = []
        for u in range(A.dim):
            for mb in range(M.dim):
                # phi(e_u . m_b) - e_u . phi(m_b) = 0, one row per target index
                per_target = {}
                for m2, c in M.basis_act(u, mb).items():
                    for nb, j in cols_by_source.get(m2, ()):
                        row = per_target.setdefault(nb, {})
                        row[j] = row.get(j, field.zero()) + c
                for nb, j in cols_by_source.get(mb, ()):
                    for n2, c in N.basis_act(u, nb).items():
                        row = per_target.setdefault(n2, {})
                        row[j] = row.get(j, field.zero()) - c
                for row in per_target.values():
                    row = {j: c for j, c in row.items() if not c.is_zero()}
                    if row:
                        rows.append(row)
        basis = linalg.kernel_basis(field, rows, len(unknowns))
        homs = []
        for vec in basis:
            mat = {}
            for (mb, nb), j in col.items():
                if not vec[j].is_zero():
                    mat.setdefault(mb, {})[nb] = vec[j]
            homs.append(mat)
        if homs:
            table[a] = homs
    return table


def hom_apply(mat, m):
    out = {}
    for mb, c in m.items():
        for nb, w in mat.get(mb, {}).items():
            s = out.get(nb)
            s = c * w if s is None else s + c * w
            if s.is_zero():
                out.pop(nb, None)
            else:
                out[nb] = s
    return out


def hom_compose(f, g):
    """Apply f, then g (modules are right modules over their endo rings)."""
    out = {}
    for mb, row in f.items():
        acc = {}
        for nb, c in row.items():
            for pb, w in g.get(nb, {}).items():
                s = acc.get(pb)
                s = c * w if s is None else s + c * w
                if s.is_zero():
                    acc.pop(pb, None)
                else:
                    acc[pb] = s
        if acc:
            out[mb] = acc
    return out


def hom_dims(table):
    return {a: len(h) for a, h in sorted(table.items())}


def endomorphism_algebra(M):
    """Hom_A(M, M) = sum of its graded pieces, as a graded algebra.

    The product is "apply first factor, then second", matching the
    right-module convention for endomorphism rings.
    """
    from . import linalg

    table = graded_hom(M, M)
    field = M.algebra.field

    def flatten(mat):
        return {(mb, nb): c for mb, row in mat.items() for nb, c in row.items()}

    # re-basis the degree-0 piece so the identity is a literal basis vector
    identity = {mb: {mb: field.one()} for mb in range(M.dim)}
    zero_deg = dzero(M.algebra.rank)
    chosen = [identity]
    chosen_flat = [flatten(identity)]
    for mat in table.get(zero_deg, ()):
        f = flatten(mat)
        if linalg.solve_columns(field, chosen_flat, f) is None:
            chosen.append(mat)
            chosen_flat.append(f)
    table = dict(table)
    table[zero_deg] = chosen

    basis = []  # (degree, matrix)
    for a in sorted(table):
        for mat in table[a]:
            basis.append((a, mat))
    labels = [f"f{i}" for i in range(len(basis))]
    degrees = [a for a, _ in basis]

    columns_by_deg = {}
    for i, (a, mat) in enumerate(basis):
        columns_by_deg.setdefault(a, []).append((i, flatten(mat)))

    mult = {}
    for i, (ai, mi) in enumerate(basis):
        for j, (aj, mj) in enumerate(basis):
            prod = hom_compose(mi, mj)
            if not prod:
                continue
            target = dadd(ai, aj)
            cols = columns_by_deg.get(target, [])
            sol = linalg.solve_columns(field, [c for _, c in cols], flatten(prod))
            if sol is None:
                raise AlgebraError("endomorphism product escaped the hom basis")
            terms = {cols[k][0]: c for k, c in enumerate(sol) if not c.is_zero()}
            if terms:
                mult[(i, j)] = terms
    unit_idx = next(i for i, (a, mat) in enumerate(basis)
                    if a == zero_deg and mat == identity)
    return GradedAlgebra(field, labels, degrees, mult, unit=unit_idx,
                         rank=M.algebra.rank)
