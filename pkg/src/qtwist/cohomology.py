"""Ext and Hochschild cohomology from explicit resolutions.

Cochains live on the free generators of a resolution; cohomology is read
off per (homological degree, internal degree) cell.  Yoneda products lift
one cocycle to a chain map through the resolution and compose with the
other; class equality is decided by a "difference = coboundary" solve.
The theorem checkers (Ext Kunneth, Hochschild Kunneth, Ext-ring
presentation) compare independently computed sides and report every
mismatch rather than patching it.
"""

from dataclasses import dataclass, field as dc_field

from . import linalg
from .algebra import (bimodule_regular, bimodule_tensor, enveloping, qci_construct,
                      simple_module, twisted_tensor_algebra)
from .fields import UnitDescriptor
from .resolutions import (Resolution, ResolutionError, minimal_resolution,
                          periodic_bimodule_resolution, periodic_module_resolution,
                          twisted_total_bimodule_resolution, twisted_total_resolution)
from .twist import Twist, dadd, dconcat, dsub, dzero


class CohomologyError(ValueError):
    pass


@dataclass
class ExtTable:
    """Dimensions per (homological degree, internal degree)."""

    dims: dict

    def dim(self, i, a=None):
        if a is not None:
            return self.dims.get((i, tuple(a)), 0)
        return sum(d for (j, _), d in self.dims.items() if j == i)

    def support(self, i):
        return sorted(a for (j, a) in self.dims if j == i and self.dims[(j, a)])

    def totals(self, trunc):
        return [self.dim(i) for i in range(trunc + 1)]

    def rows(self):
        return [{"degree": i, "internal_degree": list(a), "dim": d}
                for (i, a), d in sorted(self.dims.items()) if d]


class CohomologyClass:
    """A cocycle F_i -> N of pure internal degree, with its cached lift."""

    def __init__(self, workspace, i, a, cochain):
        self.workspace = workspace
        self.i = i
        self.a = tuple(a)
        self.cochain = {r: dict(v) for r, v in cochain.items() if v}
        self._lifts = None

    def is_zero_cochain(self):
        return not self.cochain

    def scaled(self, c):
        if c.is_zero():
            return CohomologyClass(self.workspace, self.i, self.a, {})
        return CohomologyClass(self.workspace, self.i, self.a,
                               {r: {b: c * v for b, v in vec.items()}
                                for r, vec in self.cochain.items()})


class ExtWorkspace:
    """Ext_*(M, N) machinery bound to one resolution of M."""

    def __init__(self, resolution, coefficients=None):
        self.res = resolution
        self.N = coefficients if coefficients is not None else resolution.target
        self.field = resolution.algebra.field
        self._n_by_deg = {}
        for b, d in enumerate(self.N.degrees):
            self._n_by_deg.setdefault(d, []).append(b)

    # -- cochain spaces -----------------------------------------------------

    def cochain_basis(self, i, a):
        """Elementary cochains (generator r, target basis mb) at bidegree (i, a)."""
        out = []
        for r, s in enumerate(self.res.gens[i]):
            want = dsub(s, a)
            for b in self._n_by_deg.get(want, ()):
                out.append((r, b))
        return out

    def internal_degrees(self, i):
        degs = set()
        for s in self.res.gens[i]:
            for d in self._n_by_deg:
                degs.add(dsub(s, d))
        return sorted(degs)

    def apply_cochain(self, coch, vec):
        """Value in N of a cochain on an F_i vector (flat sparse dict)."""
        A = self.res.algebra
        out = {}
        for flat, c in vec.items():
            r, u = divmod(flat, A.dim)
            target = coch.get(r)
            if not target:
                continue
            img = self.N.act({u: c}, target)
            for b, cb in img.items():
                acc = out.get(b)
                acc = cb if acc is None else acc + cb
                if acc.is_zero():
                    out.pop(b, None)
                else:
                    out[b] = acc
        return out

    def coboundary(self, coch, i):
        """delta(psi) = psi o d_i for psi a cochain on F_{i-1}."""
        one = self.field.one()
        out = {}
        for rho in range(self.res.rank(i)):
            img = self.res.apply_d(i, {rho * self.res.algebra.dim +
                                       self.res.algebra.unit: one})
            val = self.apply_cochain(coch, img)
            if val:
                out[rho] = val
        return out

    def is_cocycle(self, cls):
        self._require_depth(cls.i)
        if cls.i + 1 >= len(self.res.gens):
            return True
        return not self.coboundary(cls.cochain, cls.i + 1)

    # -- dimensions ---------------------------------------------------------

    def _require_depth(self, i):
        """Cohomology at i needs the differential into degree i+1: either the
        resolution extends past i, or it genuinely terminated (empty top)."""
        if i + 1 < len(self.res.gens):
            return
        if self.res.gens and not self.res.gens[-1]:
            return
        raise CohomologyError(
            f"resolution truncated at {len(self.res.gens) - 1}; cohomology at "
            f"{i} needs one degree more")

    def dims(self, trunc):
        self._require_depth(trunc)
        table = {}
        ranks = {}

        def delta_rank(i, a):
            key = (i, a)
            if key in ranks:
                return ranks[key]
            if i < 0 or i + 1 >= len(self.res.gens):
                ranks[key] = 0
                return 0
            basis = self.cochain_basis(i, a)
            rows = []
            for (r, b) in basis:
                img = self.coboundary({r: {b: self.field.one()}}, i + 1)
                rows.append({(rho, b2): c for rho, vec in img.items()
                             for b2, c in vec.items()})
            rank = _rank_of_rows(self.field, rows)
            ranks[key] = rank
            return rank

        for i in range(trunc + 1):
            for a in self.internal_degrees(i):
                n = len(self.cochain_basis(i, a))
                if n == 0:
                    continue
                d = n - delta_rank(i, a) - delta_rank(i - 1, a)
                if d:
                    table[(i, a)] = d
        return ExtTable(table)

    # -- classes ------------------------------------------------------------

    def zero_class(self, i, a):
        return CohomologyClass(self, i, a, {})

    def dual_class(self, i, gen_index):
        """Cochain sending one free generator to the target's first basis
        vector (the canonical generator when the target is one-dimensional)."""
        if self.N.dim != 1:
            raise CohomologyError("dual classes need a one-dimensional target")
        a = dsub(self.res.gens[i][gen_index], self.N.degrees[0])
        cls = CohomologyClass(self, i, a, {gen_index: {0: self.field.one()}})
        if not self.is_cocycle(cls):
            raise CohomologyError("dual cochain is not a cocycle")
        return cls

    def identity_class(self):
        return CohomologyClass(self, 0, dzero(self.res.algebra.rank),
                               {r: dict(v) for r, v in enumerate(self.res.aug)})

    def classes(self, i, a):
        """A basis of Ext^{i,a} as cohomology classes."""
        a = tuple(a)
        self._require_depth(i)
        basis = self.cochain_basis(i, a)
        if not basis:
            return []
        rows = []
        for (r, b) in basis:
            img = self.coboundary({r: {b: self.field.one()}}, i + 1) \
                if i + 1 < len(self.res.gens) else {}
            rows.append({(rho, b2): c for rho, vec in img.items()
                         for b2, c in vec.items()})
        kernel = _kernel_of_rows_indexed(self.field, rows)
        cob_cols = [self._flat(self.coboundary({r: {b: self.field.one()}}, i), i)
                    for (r, b) in self.cochain_basis(i - 1, a)] if i >= 1 else []
        chosen = []
        span = [c for c in cob_cols if c]
        for vec in kernel:
            coch = {}
            flat = {}
            for j, c in vec.items():
                r, b = basis[j]
                coch.setdefault(r, {})[b] = c
                flat[(r, b)] = c
            if linalg.solve_columns(self.field, span, flat) is None:
                chosen.append(CohomologyClass(self, i, a, coch))
                span.append(flat)
        return chosen

    def _flat(self, coch, i):
        return {(r, b): c for r, vec in coch.items() for b, c in vec.items()}

    def same_class(self, c1, c2):
        """Equality modulo coboundaries."""
        if (c1.i, c1.a) != (c2.i, c2.a):
            return False
        diff = {}
        for r in set(c1.cochain) | set(c2.cochain):
            v = dict(c1.cochain.get(r, {}))
            for b, c in c2.cochain.get(r, {}).items():
                s = v.get(b)
                s = -c if s is None else s - c
                if s.is_zero():
                    v.pop(b, None)
                else:
                    v[b] = s
            if v:
                diff[r] = v
        return self.is_coboundary(diff, c1.i, c1.a)

    def is_coboundary(self, coch, i, a):
        if not coch:
            return True
        if i == 0:
            return False
        cols = [self._flat(self.coboundary({r: {b: self.field.one()}}, i), i)
                for (r, b) in self.cochain_basis(i - 1, a)]
        target = self._flat(coch, i)
        return linalg.solve_columns(self.field, cols, target) is not None

    # -- lifting and products ----------------------------------------------

    def lifts(self, cls, depth):
        """Chain maps lift[m]: F_{i+m} -> F_m covering the cocycle.

        lift[m] is a dict generator -> flat vector of F_m; stages are cached
        on the class and extended on demand.
        """
        if self.N is not self.res.target:
            raise CohomologyError("lifting needs coefficients in the resolved module")
        if cls._lifts is None:
            lift0 = {}
            for rho in range(self.res.rank(cls.i)):
                val = cls.cochain.get(rho)
                if not val:
                    continue
                deg = dsub(self.res.gens[cls.i][rho], cls.a)
                pre = self.res.preimage_aug(val, deg)
                if pre is None:
                    raise ResolutionError("augmentation lift failed")
                lift0[rho] = pre
            cls._lifts = [lift0]
        while len(cls._lifts) <= depth:
            m = len(cls._lifts)
            prev = cls._lifts[m - 1]
            lift_m = {}
            for rho in range(self.res.rank(cls.i + m)):
                img = self.res.apply_d(cls.i + m,
                                       {rho * self.res.algebra.dim +
                                        self.res.algebra.unit: self.field.one()})
                rhs = self._apply_lift(prev, img)
                if not rhs:
                    continue
                deg = dsub(self.res.gens[cls.i + m][rho], cls.a)
                pre = self.res.preimage_d(m, rhs, deg)
                if pre is None:
                    raise ResolutionError(f"chain-map lift failed at stage {m}")
                lift_m[rho] = pre
            cls._lifts.append(lift_m)
        return cls._lifts

    def _apply_lift(self, lift, vec):
        A = self.res.algebra
        out = {}
        for flat, c in vec.items():
            r, u = divmod(flat, A.dim)
            target = lift.get(r)
            if not target:
                continue
            for f2, c2 in target.items():
                r2, u2 = divmod(f2, A.dim)
                for w, cw in A.mul({u: c}, {u2: c2}).items():
                    k = r2 * A.dim + w
                    acc = out.get(k)
                    acc = cw if acc is None else acc + cw
                    if acc.is_zero():
                        out.pop(k, None)
                    else:
                        out[k] = acc
        return out

    def product(self, xi, eta):
        """Yoneda product xi . eta (degrees add in both components).

        Computed as eta's representative composed with xi's chain-map lift;
        this orientation realizes the ring in which y_j y_i = -q_ij y_i y_j
        for the quantum complete intersections.
        """
        if xi.workspace is not self or eta.workspace is not self:
            raise CohomologyError("classes from different workspaces")
        if xi.i + eta.i >= len(self.res.gens):
            raise CohomologyError("product exceeds resolution truncation")
        lift = self.lifts(xi, eta.i)[eta.i]
        cochain = {}
        for rho, vec in lift.items():
            val = self.apply_cochain(eta.cochain, vec)
            if val:
                cochain[rho] = val
        return CohomologyClass(self, xi.i + eta.i, dadd(xi.a, eta.a), cochain)

    def observed_scalar(self, lhs, rhs):
        """c with lhs = c . rhs modulo coboundaries, if one exists."""
        if (lhs.i, lhs.a) != (rhs.i, rhs.a):
            return None
        cols = [self._flat(rhs.cochain, rhs.i)]
        if lhs.i >= 1:
            cols += [self._flat(self.coboundary({r: {b: self.field.one()}}, lhs.i), lhs.i)
                     for (r, b) in self.cochain_basis(lhs.i - 1, lhs.a)]
        sol = linalg.solve_columns(self.field, cols, self._flat(lhs.cochain, lhs.i))
        if sol is None:
            return None
        return sol[0]


def _rank_of_rows(field, rows):
    support = {}
    for row in rows:
        for k in row:
            support.setdefault(k, len(support))
    indexed = [{support[k]: c for k, c in row.items()} for row in rows]
    return linalg.mat_rank(field, indexed, len(support))


def _kernel_of_rows_indexed(field, rows):
    """Right kernel of the linear map sending source j to rows[j]."""
    support = {}
    for row in rows:
        for k in row:
            support.setdefault(k, len(support))
    mat = [{} for _ in range(len(support))]
    for j, row in enumerate(rows):
        for k, c in row.items():
            mat[support[k]][j] = c
    basis = linalg.kernel_basis(field, mat, len(rows))
    return [{j: c for j, c in enumerate(vec) if not c.is_zero()} for vec in basis]


# ---------------------------------------------------------------------------
# resolution choosers


def qci_resolution(A, trunc):
    """Twisted-total resolution of k over a QCI, iterated from the periodic
    resolutions of the k[x_i]/(x_i^{a_i}) factors.

    The iterated twisted tensor algebra has exactly the monomial basis of
    the QCI (checked), so the resolution is rebound to the canonical algebra.
    """
    spec = A.qci
    if spec is None:
        raise CohomologyError("not a QCI algebra")
    if spec.n == 1:
        return periodic_module_resolution(A, trunc)
    from .algebra import QciSpec

    left_q = tuple((key, u) for key, u in spec.q if key[1] < spec.n - 1)
    left_spec = QciSpec(spec.field, spec.exponents[:-1], left_q)
    right_spec = QciSpec(spec.field, (spec.exponents[-1],))
    A_left = qci_construct(left_spec)
    A_right = qci_construct(right_spec)
    t = Twist(spec.field, [[spec.q_unit(i, spec.n - 1)] for i in range(spec.n - 1)])
    P = qci_resolution(A_left, trunc)
    Q = periodic_module_resolution(A_right, trunc)
    total = twisted_total_resolution(P, Q, t)
    T = total.algebra
    if T.mult != A.mult or T.degrees != A.degrees:
        raise CohomologyError("tensor decomposition does not match the QCI")
    return Resolution(A, simple_module(A), total.gens, total.diffs, total.aug)


def module_resolution_for(A, M, trunc):
    if A.qci is not None and M.dim == 1 and M.degrees[0] == dzero(A.rank):
        return qci_resolution(A, trunc)
    return minimal_resolution(A, M, trunc)


def bimodule_resolution_for(A, trunc, method="auto"):
    if method == "auto" and A.qci is not None and A.qci.n == 1:
        return periodic_bimodule_resolution(A, trunc)
    if method == "auto" and A.tensor is not None:
        info = A.tensor
        P = bimodule_resolution_for(info.left, trunc)
        Q = bimodule_resolution_for(info.right, trunc)
        ET = enveloping(A)
        return twisted_total_bimodule_resolution(P, Q, info.twist, env_tensor=ET)
    E = enveloping(A)
    return minimal_resolution(E, bimodule_regular(E), trunc)


# ---------------------------------------------------------------------------
# tables


def ext_table(A, M, N, trunc, resolution=None):
    """Ext^{i,a}_A(M, N) dimensions for i <= trunc."""
    if trunc < 0:
        raise CohomologyError("trunc must be >= 0")
    res = resolution if resolution is not None else module_resolution_for(A, M, trunc + 1)
    return ExtWorkspace(res, N).dims(trunc)


HH_DIM_GUARD = 32


def hochschild_table(A, trunc, dim_guard=HH_DIM_GUARD, override=False,
                     method="auto"):
    """HH^{i,a}(A) = Ext over A^e of A by A.  ``method="minimal"`` forces the
    minimal-resolution route, which is the independent oracle in the
    Hochschild Kunneth comparison."""
    if A.dim > dim_guard and not override:
        raise CohomologyError(
            f"dim {A.dim} exceeds the Hochschild guard {dim_guard}; "
            "pass override=True to proceed")
    res = bimodule_resolution_for(A, trunc + 1, method=method)
    return ExtWorkspace(res).dims(trunc)


# ---------------------------------------------------------------------------
# Kunneth comparisons


@dataclass
class CheckReport:
    name: str
    passed: bool
    details: list = dc_field(default_factory=list)
    failures: list = dc_field(default_factory=list)

    def add(self, ok, message):
        (self.details if ok else self.failures).append(message)
        if not ok:
            self.passed = False


def kunneth_embedding(wsT, total_index, xi, eta, t, left_rank, dim_n):
    """The class of Ext(M) (x) Ext(N) inside Ext of the tensor.

    On the total-complex summand (i, j) the cochain evaluates generator
    (r, r') to (-1)^{ij} t(a_xi, s_Q)^{-1} xi_r (x) eta_{r'}; the sign and
    inverse twist come from the same shift isomorphisms that build the
    total differential, making the embedding a cocycle.
    """
    i, j = xi.i, eta.i
    field = wsT.field
    cochain = {}
    m = i + j
    sign = field.from_int(-1 if (i * j) % 2 == 1 else 1)
    for (ii, r, rp), row in total_index[m].items():
        if ii != i:
            continue
        val_m = xi.cochain.get(r)
        val_n = eta.cochain.get(rp)
        if not val_m or not val_n:
            continue
        s_q = wsT.res.gens[m][row][left_rank:]
        scalar = sign * t.eval(xi.a, s_q).inverse()
        vec = {}
        for mb, cm in val_m.items():
            for nb, cn in val_n.items():
                c = scalar * cm * cn
                if not c.is_zero():
                    vec[mb * dim_n + nb] = c
        if vec:
            cochain[row] = vec
    return CohomologyClass(wsT, m, dconcat(xi.a, eta.a), cochain)


def ext_kunneth_check(A, B, t, M, N, trunc, with_sign=True, max_product_degree=4):
    """Theorem-level comparison Ext(M (x)^t N) vs Ext(M) (x)^t~ Ext(N).

    (a) dimension equality per bidegree, and (b) Yoneda products against the
    t~-twisted componentwise products, including the (-1)^{ij} sign; passing
    ``with_sign=False`` is the negative control that must fail.
    """
    P = module_resolution_for(A, M, trunc + 1)
    Q = module_resolution_for(B, N, trunc + 1)
    T = twisted_tensor_algebra(A, B, t)
    total = twisted_total_resolution(P, Q, t, tensor_algebra=T)
    from .resolutions import _total_generators

    _, total_index = _total_generators(P, Q, trunc + 1)
    wsP = ExtWorkspace(P)
    wsQ = ExtWorkspace(Q)
    wsT = ExtWorkspace(total)
    dimsP = wsP.dims(trunc)
    dimsQ = wsQ.dims(trunc)
    dimsT = wsT.dims(trunc)

    report = CheckReport("kunneth-ext", True)

    # (a) dimensions
    pairs = set(dimsT.dims)
    for m in range(trunc + 1):
        for (i, a), da in dimsP.dims.items():
            for (j, b), db in dimsQ.dims.items():
                if i + j == m:
                    pairs.add((m, dconcat(a, b)))
    for (m, ab) in sorted(pairs):
        a, b = ab[:A.rank], ab[A.rank:]
        rhs = sum(dimsP.dim(i, a) * dimsQ.dim(m - i, b) for i in range(m + 1))
        lhs = dimsT.dim(m, ab)
        report.add(lhs == rhs,
                   f"dim Ext^{m},{ab}: tensor {lhs} vs convolution {rhs}")

    # (b) products on basis classes
    tt = t.tilde()
    dim_n = Q.target.dim

    def embed(xi, eta):
        return kunneth_embedding(wsT, total_index, xi, eta, t, A.rank, dim_n)

    basisP = [(i, a, c) for (i, a) in sorted(dimsP.dims)
              for c in wsP.classes(i, a) if i <= max_product_degree]
    basisQ = [(j, b, c) for (j, b) in sorted(dimsQ.dims)
              for c in wsQ.classes(j, b) if j <= max_product_degree]
    for (i, a, xi) in basisP:
        for (j, b, eta) in basisQ:
            for (i2, a2, xi2) in basisP:
                for (j2, b2, eta2) in basisQ:
                    m = i + j + i2 + j2
                    if m > min(trunc, max_product_degree):
                        continue
                    left = wsT.product(embed(xi, eta), embed(xi2, eta2))
                    if with_sign:
                        scalar = tt.eval((i2,) + tuple(a2), (j,) + tuple(b))
                    else:
                        scalar = t.eval(a2, b)
                    prod_p = wsP.product(xi, xi2)
                    prod_q = wsQ.product(eta, eta2)
                    right = embed(prod_p, prod_q).scaled(scalar)
                    ok = wsT.same_class(left, right)
                    report.add(ok,
                               f"product ({i},{a})x({j},{b}) . ({i2},{a2})x({j2},{b2})"
                               f"{'' if ok else ' MISMATCH'}")
    return report


def hochschild_kunneth_check(A, B, t, trunc, dim_guard=HH_DIM_GUARD):
    """HH^{*,A'}(A) (x) HH^{*,B'}(B) vs HH^{*,A'+B'}(A (x)^t B), dimensions
    per bidegree, with the two sides computed by independent resolutions."""
    from .twist import kernel_sublattice

    if not t.discrete:
        raise CohomologyError("hochschild kunneth needs a discrete twist")
    Aprime = kernel_sublattice(t, "left")
    Bprime = kernel_sublattice(t, "right")
    hhA = hochschild_table(A, trunc, dim_guard=dim_guard)
    hhB = hochschild_table(B, trunc, dim_guard=dim_guard)
    T = twisted_tensor_algebra(A, B, t)
    hhT = hochschild_table(T, trunc, dim_guard=dim_guard, method="minimal")

    report = CheckReport("kunneth-hh", True)
    report.details.append(f"A' basis {list(Aprime.basis)}, B' basis {list(Bprime.basis)}")
    pairs = set()
    for (m, ab) in hhT.dims:
        a, b = ab[:A.rank], ab[A.rank:]
        if Aprime.contains(a) and Bprime.contains(b):
            pairs.add((m, ab))
    for (i, a) in hhA.dims:
        if not Aprime.contains(a):
            continue
        for (j, b) in hhB.dims:
            if i + j <= trunc and Bprime.contains(b):
                pairs.add((i + j, dconcat(a, b)))
    for (m, ab) in sorted(pairs):
        a, b = ab[:A.rank], ab[A.rank:]
        rhs = sum(hhA.dim(i, a) * hhB.dim(m - i, b) for i in range(m + 1))
        lhs = hhT.dim(m, ab)
        report.add(lhs == rhs,
                   f"dim HH^{m},{ab}: tensor {lhs} vs convolution {rhs}")
    return report


def hh_graded_commutativity(A, trunc, dim_guard=HH_DIM_GUARD):
    """xi.eta = (-1)^{ij} eta.xi for sampled Hochschild classes."""
    res = bimodule_resolution_for(A, trunc + 1)
    ws = ExtWorkspace(res)
    dims = ws.dims(trunc)
    classes = [(i, a, c) for (i, a) in sorted(dims.dims)
               for c in ws.classes(i, a)]
    report = CheckReport("hh-graded-commutativity", True)
    for (i, a, xi) in classes:
        for (j, b, eta) in classes:
            if i + j > trunc:
                continue
            left = ws.product(xi, eta)
            sign = ws.field.from_int(-1 if (i * j) % 2 == 1 else 1)
            right = ws.product(eta, xi).scaled(sign)
            report.add(ws.same_class(left, right),
                       f"HH commutativity at ({i},{a}) x ({j},{b})")
    return report


# ---------------------------------------------------------------------------
# Ext-ring presentation of a QCI


@dataclass
class RelationResult:
    family: str
    i: int
    j: int
    printed_scalar: str
    observed_scalar: str
    holds_printed: bool


@dataclass
class ExtringReport:
    spec: object
    passed: bool
    spanning_ok: bool
    relations: list
    notes: list

    def failing(self):
        return [r for r in self.relations if not r.holds_printed]


def extring_presentation_check(spec, trunc):
    """Verify the printed Ext-ring presentation of a QCI, as printed.

    Generators: y_i in bidegree (1, e_i), z_i in (2, a_i e_i), as the dual
    cocycles of the twisted-total resolution of k.  Every relation family is
    tested at class level with the printed scalar; the observed scalar
    (solved from the actual Yoneda products) is reported alongside, so a
    failing family is surfaced with data instead of silently corrected.
    The fourth family is tested both with the right-hand monomial exactly
    as printed (z_i y_j) and with the degree-consistent monomial (y_i z_j).
    """
    if trunc < 4:
        raise CohomologyError("extring check needs trunc >= 4")
    A = qci_construct(spec)
    res = qci_resolution(A, trunc + 1)
    ws = ExtWorkspace(res)
    n = spec.n
    field = spec.field

    def gen_with_degree(hom, deg):
        matches = [r for r, s in enumerate(res.gens[hom]) if s == deg]
        if len(matches) != 1:
            raise CohomologyError(f"expected one generator of degree {deg} in F_{hom}")
        return matches[0]

    def e(i, c=1):
        d = [0] * n
        d[i] = c
        return tuple(d)

    y = [ws.dual_class(1, gen_with_degree(1, e(i))) for i in range(n)]
    z = [ws.dual_class(2, gen_with_degree(2, e(i, spec.exponents[i]))) for i in range(n)]

    relations = []
    notes = []

    def check(family, i, j, lhs, rhs, printed):
        got = ws.same_class(lhs, rhs.scaled(printed))
        obs = ws.observed_scalar(lhs, rhs)
        relations.append(RelationResult(
            family, i + 1, j + 1 if j is not None else 0,
            str(printed), "none" if obs is None else str(obs), got))
        return got

    one = field.one()
    for i in range(n):
        check("y_i z_i = z_i y_i", i, None,
              ws.product(y[i], z[i]), ws.product(z[i], y[i]), one)
        if spec.exponents[i] == 2:
            lhs = ws.product(y[i], y[i])
            got = ws.same_class(lhs, z[i])
            obs = ws.observed_scalar(lhs, z[i])
            relations.append(RelationResult("y_i^2 = z_i (a_i = 2)", i + 1, 0,
                                            "1", str(obs), got))
        else:
            lhs = ws.product(y[i], y[i])
            got = lhs.is_zero_cochain() or ws.is_coboundary(lhs.cochain, lhs.i, lhs.a)
            relations.append(RelationResult("y_i^2 = 0 (a_i != 2)", i + 1, 0,
                                            "0", "0" if got else "nonzero", got))
    minus_one = field.from_int(-1)
    for i in range(n):
        for j in range(i + 1, n):
            q = spec.q_value(i, j)
            check("y_j y_i = -q_ij y_i y_j", i, j,
                  ws.product(y[j], y[i]), ws.product(y[i], y[j]), minus_one * q)
            check("y_j z_i = q_ij^2 z_i y_j", i, j,
                  ws.product(y[j], z[i]), ws.product(z[i], y[j]), q ** 2)
            # as printed: z_j y_i - q_ij^2 z_i y_j (right-hand monomial z_i y_j)
            check("z_j y_i = q_ij^2 z_i y_j [as printed]", i, j,
                  ws.product(z[j], y[i]), ws.product(z[i], y[j]), q ** 2)
            # degree-consistent variant: z_j y_i - q_ij^2 y_i z_j
            check("z_j y_i = q_ij^2 y_i z_j [degree-consistent]", i, j,
                  ws.product(z[j], y[i]), ws.product(y[i], z[j]), q ** 2)
            check("z_j z_i = q_ij^4 z_i z_j", i, j,
                  ws.product(z[j], z[i]), ws.product(z[i], z[j]), q ** 4)

    # spanning: monomial count of the presented ring vs the Ext table
    dims = ws.dims(trunc)
    expected = _presentation_monomial_counts(spec, trunc)
    spanning_ok = True
    for m in range(trunc + 1):
        support = set(dims.support(m)) | {a for (mm, a) in expected if mm == m}
        for a in support:
            want = expected.get((m, a), 0)
            got = dims.dim(m, a)
            if want != got:
                spanning_ok = False
                notes.append(f"spanning mismatch at ({m},{a}): monomials {want}, Ext {got}")

    # the printed z_j y_i relation mixes graded pieces; it is recorded above
    # but only the degree-consistent variant participates in the verdict
    verdict_families = [r for r in relations if "[as printed]" not in r.family]
    passed = spanning_ok and all(r.holds_printed for r in verdict_families)
    return ExtringReport(spec, passed, spanning_ok, relations, notes)


def _presentation_monomial_counts(spec, trunc):
    """Monomials in y_i, z_i (normal form) per (hom degree, internal degree)."""
    n = spec.n
    counts = {(0, dzero(n)): 1}
    for i in range(n):
        a_i = spec.exponents[i]
        factor = {}
        for m in range(trunc + 1):
            deg = [0] * n
            if a_i == 2:
                deg[i] = m  # y^m, with z = y^2
            else:
                eps, d = m % 2, m // 2
                deg[i] = eps + a_i * d  # y^eps z^d
            factor[(m, tuple(deg))] = 1
        counts = _convolve_tables(counts, factor, trunc)
    return counts


def _convolve_tables(t1, t2, trunc):
    out = {}
    for (i, a), c1 in t1.items():
        for (j, b), c2 in t2.items():
            if i + j <= trunc:
                key = (i + j, dadd(a, b))
                out[key] = out.get(key, 0) + c1 * c2
    return out


def yoneda_product(xi, eta):
    return xi.workspace.product(xi, eta)
