"""Graded free resolutions: explicit periodic ones, twisted totals, and a
generic minimal-resolution oracle.

A resolution stores, per homological degree, the generator degrees of a
free module F_i = (+)_r Lambda<s_r> and the differential as a matrix of
algebra elements (row r of d_i lists the image of generator r in F_{i-1}).
The underlying k-basis of F_i is the pairs (generator, algebra basis
element), flat index r * dim(Lambda) + u, which lets every homological
computation run in small slices per internal degree.
"""

from .algebra import (AlgebraError, GradedAlgebra, GradedModule, bimodule_regular,
                      bimodule_tensor, enveloping, module_tensor, simple_module,
                      twisted_tensor_algebra)
from .twist import dadd, dconcat, dsub
from . import linalg


class ResolutionError(ValueError):
    pass


class Resolution:
    def __init__(self, algebra, target, gens, diffs, aug):
        self.algebra = algebra
        self.target = target
        self.gens = gens    # gens[i]: list of internal Degrees
        self.diffs = diffs  # diffs[i] for i >= 1: dict (r, s) -> algebra element
        self.aug = aug      # list over F_0 generators of target-module vectors
        self._slice_cache = {}

    @property
    def length(self):
        return len(self.gens) - 1

    def rank(self, i):
        return len(self.gens[i])

    def betti(self):
        return [self.rank(i) for i in range(len(self.gens))]

    def free_dim(self, i):
        return self.rank(i) * self.algebra.dim

    def basis_degree(self, i, flat):
        r, u = divmod(flat, self.algebra.dim)
        return dadd(self.gens[i][r], self.algebra.degrees[u])

    def internal_degrees(self, i):
        return sorted({self.basis_degree(i, f) for f in range(self.free_dim(i))})

    def slice_indices(self, i, deg):
        key = (i, deg)
        got = self._slice_cache.get(key)
        if got is None:
            got = [f for f in range(self.free_dim(i))
                   if self.basis_degree(i, f) == deg]
            self._slice_cache[key] = got
        return got

    # -- applying maps ------------------------------------------------------

    def apply_d(self, i, vec):
        """Image in F_{i-1} of a vector of F_i (flat sparse dict)."""
        A = self.algebra
        dim = A.dim
        out = {}
        for flat, c in vec.items():
            r, u = divmod(flat, dim)
            for s in range(self.rank(i - 1)):
                entry = self.diffs[i].get((r, s))
                if not entry:
                    continue
                img = A.mul({u: c}, entry)
                for w, cw in img.items():
                    k = s * dim + w
                    acc = out.get(k)
                    acc = cw if acc is None else acc + cw
                    if acc.is_zero():
                        out.pop(k, None)
                    else:
                        out[k] = acc
        return out

    def apply_aug(self, vec):
        A = self.algebra
        M = self.target
        out = {}
        for flat, c in vec.items():
            r, u = divmod(flat, A.dim)
            img = M.act({u: c}, self.aug[r])
            for b, cb in img.items():
                acc = out.get(b)
                acc = cb if acc is None else acc + cb
                if acc.is_zero():
                    out.pop(b, None)
                else:
                    out[b] = acc
        return out

    # -- solving ------------------------------------------------------------

    def preimage_d(self, i, target, deg):
        """Some v in F_i of internal degree ``deg`` with d_i(v) = target."""
        idx = self.slice_indices(i, deg)
        cols = [self.apply_d(i, {f: self.algebra.field.one()}) for f in idx]
        sol = linalg.solve_columns(self.algebra.field, cols, target)
        if sol is None:
            return None
        return {f: c for f, c in zip(idx, sol) if not c.is_zero()}

    def preimage_aug(self, target, deg):
        idx = self.slice_indices(0, deg)
        cols = [self.apply_aug({f: self.algebra.field.one()}) for f in idx]
        sol = linalg.solve_columns(self.algebra.field, cols, target)
        if sol is None:
            return None
        return {f: c for f, c in zip(idx, sol) if not c.is_zero()}

    # -- checks -------------------------------------------------------------

    def check_dd(self):
        """d o d = 0 and aug o d_1 = 0, on every generator."""
        one = self.algebra.field.one()
        for i in range(2, len(self.gens)):
            for r in range(self.rank(i)):
                img = self.apply_d(i, {r * self.algebra.dim + self.algebra.unit: one})
                if self.apply_d(i - 1, img):
                    raise ResolutionError(f"d o d != 0 at homological degree {i}")
        if len(self.gens) > 1:
            for r in range(self.rank(1)):
                img = self.apply_d(1, {r * self.algebra.dim + self.algebra.unit: one})
                if self.apply_aug(img):
                    raise ResolutionError("aug o d_1 != 0")
        return True

    def is_exact(self, upto=None):
        """Exactness of the augmented complex in homological degrees < upto.

        Checked per internal degree: dim F_i = rank d_i + rank d_{i+1}
        (with the augmentation playing d_0), plus surjectivity onto the
        target.  Degrees i with no d_{i+1} available are not checked.
        """
        top = self.length if upto is None else min(upto, self.length)
        field = self.algebra.field
        # surjectivity of the augmentation
        for deg in sorted({d for d in self.target.degrees}):
            mdim = sum(1 for d in self.target.degrees if d == deg)
            rows = [self._aug_row(f) for f in self.slice_indices(0, deg)]
            if linalg.mat_rank(field, rows, self.target.dim) != mdim:
                return False
        for i in range(0, top):
            degs = self.internal_degrees(i)
            for deg in degs:
                n = len(self.slice_indices(i, deg))
                if i == 0:
                    r_out = linalg.mat_rank(
                        field, [self._aug_row(f) for f in self.slice_indices(0, deg)],
                        self.target.dim)
                else:
                    r_out = self._rank_d_slice(i, deg)
                r_in = self._rank_d_slice(i + 1, deg)
                if n != r_out + r_in:
                    return False
        return True

    def _aug_row(self, flat):
        return self.apply_aug({flat: self.algebra.field.one()})

    def _rank_d_slice(self, i, deg):
        if i >= len(self.gens):
            return 0
        src = self.slice_indices(i, deg)
        rows = []
        for f in src:
            img = self.apply_d(i, {f: self.algebra.field.one()})
            rows.append(img)
        # column index space = flat indices of F_{i-1}; rank is well defined
        return linalg.mat_rank(self.algebra.field, rows,
                               self.free_dim(i - 1)) if rows else 0

    def is_minimal(self):
        """Differentials land in rad F: no entry has a unit coefficient."""
        unit = self.algebra.unit
        for i in range(1, len(self.gens)):
            for entry in self.diffs[i].values():
                if unit in entry:
                    return False
        return True

    def dump(self):
        A = self.algebra
        out = {"algebra_dim": A.dim, "grading_rank": A.rank, "betti": self.betti(),
               "degrees": [[list(d) for d in degs] for degs in self.gens],
               "differentials": [], "augmentation": [self.target.elem_str(v)
                                                     for v in self.aug]}
        for i in range(1, len(self.gens)):
            mat = [[A.elem_str(self.diffs[i].get((r, s), {}))
                    for s in range(self.rank(i - 1))] for r in range(self.rank(i))]
            out["differentials"].append(mat)
        return out


def betti(resolution):
    return resolution.betti()


def is_exact(resolution, upto=None):
    return resolution.is_exact(upto)


# ---------------------------------------------------------------------------
# periodic resolutions for k[x]/(x^a)


def _truncated_poly_algebra(A):
    spec = A.qci
    if spec is None or spec.n != 1:
        raise ResolutionError("periodic resolutions need k[x]/(x^a)")
    return spec.exponents[0]


def _periodic_shifts(a, trunc):
    shifts = []
    for i in range(trunc + 1):
        k, r = divmod(i, 2)
        shifts.append((k * a + r,))
    return shifts


def periodic_module_resolution(A, trunc):
    """Minimal resolution of k over k[x]/(x^a): ranks 1, differentials
    alternating x and x^{a-1}, shifts 0, 1, a, a+1, 2a, ...
    """
    a = _truncated_poly_algebra(A)
    if a < 2:
        raise ResolutionError("exponent must be >= 2")
    one = A.field.one()
    x = A.index_of("x1")
    xa1 = A.index_of("x1" if a == 2 else f"x1^{a - 1}")
    gens = [[s] for s in _periodic_shifts(a, trunc)]
    diffs = [None]
    for i in range(1, trunc + 1):
        entry = {x: one} if i % 2 == 1 else {xa1: one}
        diffs.append({(0, 0): entry})
    return Resolution(A, simple_module(A), gens, diffs, aug=[{0: one}])


def periodic_bimodule_resolution(A, trunc):
    """Resolution of k[x]/(x^a) over its enveloping algebra: ranks 1, with
    u -> xu - ux and u -> sum_i x^i u x^{a-1-i} alternating.
    """
    a = _truncated_poly_algebra(A)
    E = enveloping(A)
    one = A.field.one()
    dim = A.dim

    def pair(u, v):
        return u * dim + v

    def xpow(k):
        return A.unit if k == 0 else A.index_of("x1" if k == 1 else f"x1^{k}")

    comm = {pair(xpow(1), A.unit): one, pair(A.unit, xpow(1)): -one}
    norm = {}
    for i in range(a):
        key = pair(xpow(i), xpow(a - 1 - i))
        norm[key] = norm.get(key, A.field.zero()) + one
    norm = {k: v for k, v in norm.items() if not v.is_zero()}
    gens = [[s] for s in _periodic_shifts(a, trunc)]
    diffs = [None]
    for i in range(1, trunc + 1):
        diffs.append({(0, 0): dict(comm) if i % 2 == 1 else dict(norm)})
    target = bimodule_regular(E)
    return Resolution(E, target, gens, diffs, aug=[{A.unit: one}])


# ---------------------------------------------------------------------------
# twisted total complexes


def twisted_total_resolution(P, Q, t, tensor_algebra=None, signed=True):
    """Total complex of P (x)^t Q over the twisted tensor algebra.

    Each summand P_i (x) Q_j is re-expressed as a shifted free module; the
    shift isomorphism is where the twist scalars enter the matrices.  The
    differential is d_P (x) 1 + (-1)^i 1 (x) d_Q (``signed=False`` drops the
    sign -- a negative control that must break d o d = 0).
    """
    A, B = P.algebra, Q.algebra
    T = tensor_algebra if tensor_algebra is not None else twisted_tensor_algebra(A, B, t)
    if T.tensor is None or T.tensor.left is not A or T.tensor.right is not B:
        raise ResolutionError("tensor algebra does not match the factors")
    target = module_tensor(T, P.target, Q.target)
    trunc = min(P.length, Q.length)
    dimB = B.dim

    def lift_left(elem):
        return {u * dimB + B.unit: c for u, c in elem.items()}

    def lift_right(elem):
        return {A.unit * dimB + v: c for v, c in elem.items()}

    gens, index = _total_generators(P, Q, trunc)
    diffs = [None]
    minus_one = A.field.from_int(-1)
    for m in range(1, trunc + 1):
        mat = {}
        for (i, r, rp), row in index[m].items():
            j = m - i
            if i >= 1:
                for s in range(P.rank(i - 1)):
                    entry = P.diffs[i].get((r, s))
                    if entry:
                        col = index[m - 1][(i - 1, s, rp)]
                        mat[(row, col)] = lift_left(entry)
            if j >= 1:
                for sp in range(Q.rank(j - 1)):
                    entry = Q.diffs[j].get((rp, sp))
                    if not entry:
                        continue
                    col = index[m - 1][(i, r, sp)]
                    gamma_deg = dsub(Q.gens[j][rp], Q.gens[j - 1][sp])
                    scalar = t.eval(P.gens[i][r], gamma_deg).inverse()
                    if signed and i % 2 == 1:
                        scalar = scalar * minus_one
                    lifted = lift_right(entry)
                    mat[(row, col)] = {k: scalar * c for k, c in lifted.items()}
        diffs.append(mat)
    aug = _total_augmentation(P, Q, target)
    return Resolution(T, target, gens, diffs, aug)


def twisted_total_bimodule_resolution(P, Q, t, env_tensor=None, signed=True):
    """Bimodule analogue: P over A^e, Q over B^e, total over (A (x)^t B)^e."""
    EA, EB = P.algebra, Q.algebra
    A, B = EA.env_of, EB.env_of
    if A is None or B is None:
        raise ResolutionError("inputs must be bimodule resolutions")
    if env_tensor is not None:
        ET = env_tensor
        T = ET.env_of
    else:
        T = twisted_tensor_algebra(A, B, t)
        ET = enveloping(T)
    target = bimodule_tensor(ET, P.target, Q.target)
    trunc = min(P.length, Q.length)
    dimA, dimB = A.dim, B.dim
    dimT = T.dim

    def lift_left(elem):
        # (u (x) u') in A^e  ->  ((u,1) (x) (u',1)) in (A x B)^e, with the
        # projectivity-lemma twist t(|u'|, s_Q)^{-1} per term
        out = {}
        for idx, c in elem.items():
            u, u2 = divmod(idx, dimA)
            w = u * dimB + B.unit
            w2 = u2 * dimB + B.unit
            out[(w * dimT + w2)] = (c, A.degrees[u2])
        return out

    def lift_right(elem):
        out = {}
        for idx, c in elem.items():
            v, v2 = divmod(idx, dimB)
            w = A.unit * dimB + v
            w2 = A.unit * dimB + v2
            out[(w * dimT + w2)] = (c, B.degrees[v])
        return out

    gens, index = _total_generators(P, Q, trunc)
    diffs = [None]
    minus_one = A.field.from_int(-1)
    for m in range(1, trunc + 1):
        mat = {}
        for (i, r, rp), row in index[m].items():
            j = m - i
            if i >= 1:
                for s in range(P.rank(i - 1)):
                    entry = P.diffs[i].get((r, s))
                    if not entry:
                        continue
                    col = index[m - 1][(i - 1, s, rp)]
                    terms = {}
                    for k, (c, deg_u2) in lift_left(entry).items():
                        scalar = t.eval(deg_u2, Q.gens[j][rp]).inverse()
                        c2 = scalar * c
                        if not c2.is_zero():
                            terms[k] = c2
                    if terms:
                        mat[(row, col)] = terms
            if j >= 1:
                for sp in range(Q.rank(j - 1)):
                    entry = Q.diffs[j].get((rp, sp))
                    if not entry:
                        continue
                    col = index[m - 1][(i, r, sp)]
                    terms = {}
                    for k, (c, deg_v) in lift_right(entry).items():
                        scalar = t.eval(P.gens[i][r], deg_v).inverse()
                        if signed and i % 2 == 1:
                            scalar = scalar * minus_one
                        c2 = scalar * c
                        if not c2.is_zero():
                            terms[k] = c2
                    if terms:
                        mat[(row, col)] = terms
        diffs.append(mat)
    aug = _total_augmentation(P, Q, target)
    return Resolution(ET, target, gens, diffs, aug)


def _total_generators(P, Q, trunc):
    gens = []
    index = []
    for m in range(trunc + 1):
        degs = []
        idx = {}
        for i in range(m + 1):
            j = m - i
            if i > P.length or j > Q.length:
                continue
            for r in range(P.rank(i)):
                for rp in range(Q.rank(j)):
                    idx[(i, r, rp)] = len(degs)
                    degs.append(dconcat(P.gens[i][r], Q.gens[j][rp]))
        gens.append(degs)
        index.append(idx)
    return gens, index


def _total_augmentation(P, Q, target):
    dimN = Q.target.dim
    aug = []
    for r in range(P.rank(0)):
        for rp in range(Q.rank(0)):
            vec = {}
            for mb, cm in P.aug[r].items():
                for nb, cn in Q.aug[rp].items():
                    c = cm * cn
                    if not c.is_zero():
                        vec[mb * dimN + nb] = c
            aug.append(vec)
    return aug


# ---------------------------------------------------------------------------
# minimal resolution oracle


def minimal_resolution(A, M, trunc):
    """Iterated minimal projective covers of M over a connected graded algebra.

    Independent of the twisted-total construction; used as the oracle it is
    checked against.
    """
    if not A.connected:
        raise ResolutionError("oracle requires connected graded")
    field = A.field
    one = field.one()
    positive = A.positive_indices()

    # step 0: generators of M / rad M, as pure module basis vectors
    rad_vecs = []
    for u in positive:
        for b in range(M.dim):
            img = M.basis_act(u, b)
            if img:
                rad_vecs.append((dadd(A.degrees[u], M.degrees[b]), img))
    top = _degree_greedy_complement(field, rad_vecs,
                                    [(M.degrees[b], {b: one}) for b in range(M.dim)])
    gens = [[deg for deg, _ in top]]
    aug = [vec for _, vec in top]
    diffs = [None]

    res = Resolution(A, M, gens, diffs, aug)
    for i in range(trunc):
        kernel = _homogeneous_kernel(res, i)
        if not kernel:
            break
        rad_imgs = []
        for deg, vec in kernel:
            for u in positive:
                img = _free_act(res, i, u, vec)
                if img:
                    rad_imgs.append((dadd(A.degrees[u], deg), img))
        chosen = _degree_greedy_complement(field, rad_imgs, kernel)
        new_degs = []
        mat = {}
        dim = A.dim
        for g, (deg, vec) in enumerate(chosen):
            new_degs.append(deg)
            for flat, c in vec.items():
                r, u = divmod(flat, dim)
                entry = mat.setdefault((g, r), {})
                entry[u] = entry.get(u, field.zero()) + c
        mat = {k: {u: c for u, c in v.items() if not c.is_zero()}
               for k, v in mat.items()}
        mat = {k: v for k, v in mat.items() if v}
        res.gens.append(new_degs)
        res.diffs.append(mat)
    while len(res.gens) <= trunc:
        res.gens.append([])
        res.diffs.append({})
    return res


def _free_act(res, i, u, vec):
    A = res.algebra
    out = {}
    for flat, c in vec.items():
        r, w = divmod(flat, A.dim)
        for w2, c2 in A.mul({u: A.field.one()}, {w: c}).items():
            k = r * A.dim + w2
            acc = out.get(k)
            acc = c2 if acc is None else acc + c2
            if acc.is_zero():
                out.pop(k, None)
            else:
                out[k] = acc
    return out


def _homogeneous_kernel(res, i):
    """Kernel of d_i (or the augmentation when i = 0) as homogeneous vectors."""
    field = res.algebra.field
    out = []
    for deg in res.internal_degrees(i):
        idx = res.slice_indices(i, deg)
        if i == 0:
            rows = [res._aug_row(f) for f in idx]
        else:
            rows = [res.apply_d(i, {f: field.one()}) for f in idx]
        for kv in _kernel_of_rows(field, rows, idx):
            out.append((deg, kv))
    return out


def _kernel_of_rows(field, rows, idx):
    """Right kernel of the map sending slice basis -> images (rows)."""
    # express as columns over an arbitrary target index set
    support = {}
    for row in rows:
        for k in row:
            support.setdefault(k, len(support))
    mat = [{} for _ in range(len(support))]
    for j, row in enumerate(rows):
        for k, c in row.items():
            mat[support[k]][j] = c
    basis = linalg.kernel_basis(field, mat, len(rows))
    out = []
    for vec in basis:
        out.append({idx[j]: c for j, c in enumerate(vec) if not c.is_zero()})
    return out


def _degree_greedy_complement(field, spanned, candidates):
    """Pick candidate vectors extending ``spanned`` to the full span.

    Both inputs are (degree, sparse vector) lists; the choice runs degree by
    degree (increasing total degree) and is deterministic.
    """
    by_deg = {}
    for deg, vec in spanned:
        by_deg.setdefault(tuple(deg), []).append(vec)
    cand_by_deg = {}
    for deg, vec in candidates:
        cand_by_deg.setdefault(tuple(deg), []).append(vec)
    chosen = []
    for deg in sorted(cand_by_deg, key=lambda d: (sum(d), d)):
        base = list(by_deg.get(deg, []))
        for vec in cand_by_deg[deg]:
            if linalg.solve_columns(field, base, vec) is None:
                chosen.append((deg, vec))
                base.append(vec)
    return chosen
