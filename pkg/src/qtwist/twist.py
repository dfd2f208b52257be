"""Degree vectors, twist bicharacters, and integer lattice machinery.

Grading groups are free: every degree lives in some Z^m.  A twist is a
matrix of units evaluated through the bicharacter rule
t(a, b) = prod T[i][j]^(a_i b_j); kernels of a twist are sublattices
computed by integer linear algebra over a Hermite normal form.
"""

from dataclasses import dataclass
from math import gcd, inf

from .fields import FieldElement, UnitDescriptor, sign_unit


def dzero(m):
    return (0,) * m

def dadd(a, b):
    return tuple(x + y for x, y in zip(a, b))

def dsub(a, b):
    return tuple(x - y for x, y in zip(a, b))

def dneg(a):
    return tuple(-x for x in a)

def dconcat(a, b):
    return tuple(a) + tuple(b)


# ---------------------------------------------------------------------------
# integer matrices


def hnf_rows(rows, ncols):
    """Canonical row basis (Hermite normal form) of the lattice the rows span.

    Pivots are positive and entries above each pivot are reduced into
    [0, pivot); zero rows are dropped.  The result is unique for the lattice.
    """
    work = [list(r) for r in rows]
    nrows = len(work)
    pivots = []
    r = 0
    for c in range(ncols):
        # clear column c below row r using gcd row operations
        while True:
            nz = [i for i in range(r, nrows) if work[i][c] != 0]
            if not nz:
                break
            if len(nz) == 1:
                i = nz[0]
                work[r], work[i] = work[i], work[r]
                break
            i, j = nz[0], nz[1]
            a, b = work[i][c], work[j][c]
            if abs(a) > abs(b):
                i, j = j, i
                a, b = b, a
            q = b // a
            work[j] = [x - q * y for x, y in zip(work[j], work[i])]
        if r < nrows and work[r][c] != 0:
            if work[r][c] < 0:
                work[r] = [-x for x in work[r]]
            pivots.append((r, c))
            r += 1
    # reduce entries above the pivots
    for r, c in reversed(pivots):
        for i in range(r):
            q = work[i][c] // work[r][c]
            if q:
                work[i] = [x - q * y for x, y in zip(work[i], work[r])]
    return [tuple(work[i]) for i, _ in pivots]


def integer_kernel(rows, ncols):
    """Basis of {x in Z^ncols : rows . x = 0}, via HNF with tracking."""
    nrows = len(rows)
    # row-reduce [rows^T | I] over Z; zero left parts give kernel vectors
    aug = []
    for i in range(ncols):
        left = [rows[k][i] for k in range(nrows)]
        right = [1 if j == i else 0 for j in range(ncols)]
        aug.append(left + right)
    reduced = _row_echelon_z(aug, nrows)
    kernel = []
    for row in reduced:
        if all(x == 0 for x in row[:nrows]):
            kernel.append(tuple(row[nrows:]))
    return hnf_rows(kernel, ncols)


def _row_echelon_z(work, lead_cols):
    """Integer row echelon over the first ``lead_cols`` columns (full rows kept)."""
    nrows = len(work)
    r = 0
    for c in range(lead_cols):
        while True:
            nz = [i for i in range(r, nrows) if work[i][c] != 0]
            if not nz:
                break
            if len(nz) == 1:
                i = nz[0]
                work[r], work[i] = work[i], work[r]
                break
            i, j = nz[0], nz[1]
            if abs(work[i][c]) > abs(work[j][c]):
                i, j = j, i
            q = work[j][c] // work[i][c]
            work[j] = [x - q * y for x, y in zip(work[j], work[i])]
        if r < nrows and work[r][c] != 0:
            r += 1
    return work


@dataclass(frozen=True)
class Sublattice:
    """Sublattice of Z^ambient given by its canonical HNF row basis."""

    ambient: int
    basis: tuple  # tuple of degree tuples, HNF canonical

    @staticmethod
    def from_generators(gens, ambient):
        return Sublattice(ambient, tuple(hnf_rows(gens, ambient)))

    @staticmethod
    def full(ambient):
        return Sublattice.from_generators([tuple(1 if j == i else 0 for j in range(ambient))
                                           for i in range(ambient)], ambient)

    @property
    def rank(self):
        return len(self.basis)

    def index(self):
        """[Z^ambient : L]: |det| of a square basis, or math.inf."""
        if self.rank < self.ambient:
            return inf
        det = 1
        for i, row in enumerate(self.basis):
            det *= row[_pivot(row)]
        return abs(det)

    def contains(self, vec):
        v = list(vec)
        for row in self.basis:
            c = _pivot(row)
            if v[c] % row[c] != 0:
                continue
            q = v[c] // row[c]
            v = [x - q * y for x, y in zip(v, row)]
        return all(x == 0 for x in v)

    def member_iter(self, coeff_range):
        """All integer combinations of the basis with coefficients in the range."""
        if not self.basis:
            yield dzero(self.ambient)
            return
        import itertools
        for coeffs in itertools.product(coeff_range, repeat=len(self.basis)):
            vec = [0] * self.ambient
            for c, row in zip(coeffs, self.basis):
                for k in range(self.ambient):
                    vec[k] += c * row[k]
            yield tuple(vec)


def _pivot(row):
    for i, x in enumerate(row):
        if x != 0:
            return i
    raise ValueError("zero row in basis")


# ---------------------------------------------------------------------------
# twists


class TwistError(ValueError):
    pass


class Twist:
    """Bicharacter Z^m x Z^n -> k^x given by a matrix of units.

    Entries may be UnitDescriptors (discrete form; required for kernel
    computations) or plain field elements (evaluation only).
    """

    def __init__(self, field, entries, dims=None):
        self.field = field
        self.entries = [list(row) for row in entries]
        if dims is not None:
            self.m, self.n = dims
        else:
            self.m = len(self.entries)
            self.n = len(self.entries[0]) if self.entries else 0
        if len(self.entries) != self.m or any(len(r) != self.n for r in self.entries):
            raise TwistError("twist matrix shape mismatch")
        for row in self.entries:
            for u in row:
                if isinstance(u, UnitDescriptor):
                    u.validate(field)
                elif isinstance(u, FieldElement):
                    if u.is_zero():
                        raise TwistError("twist values must be units")
                else:
                    raise TwistError(f"bad twist entry {u!r}")
        self._cache = {}

    @staticmethod
    def trivial(field, m, n):
        return Twist(field, [[UnitDescriptor.one()] * n for _ in range(m)], dims=(m, n))

    @property
    def discrete(self):
        return all(isinstance(u, UnitDescriptor) for row in self.entries for u in row)

    def eval(self, a, b):
        """t(a, b) = prod T[i][j]^(a_i b_j) as a field element."""
        a = tuple(a)
        b = tuple(b)
        if len(a) != self.m or len(b) != self.n:
            raise TwistError(f"degree length mismatch: {a} x {b} for ({self.m},{self.n})")
        key = (a, b)
        got = self._cache.get(key)
        if got is not None:
            return got
        acc_unit = UnitDescriptor.one()
        acc_val = None
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                e = ai * bj
                if e == 0:
                    continue
                u = self.entries[i][j]
                if isinstance(u, UnitDescriptor):
                    acc_unit = acc_unit * u ** e
                else:
                    term = u ** e
                    acc_val = term if acc_val is None else acc_val * term
        result = acc_unit.eval(self.field)
        if acc_val is not None:
            result = result * acc_val
        self._cache[key] = result
        return result

    def unit_at(self, i, j):
        u = self.entries[i][j]
        if not isinstance(u, UnitDescriptor):
            raise TwistError("kernel requires discrete units")
        return u

    def transpose(self):
        return Twist(self.field, [[self.entries[i][j] for i in range(self.m)]
                                  for j in range(self.n)], dims=(self.n, self.m))

    def tilde(self):
        """Sign-augmented twist on (Z + Z^m) x (Z + Z^n): (-1)^{ij} t(a,b)."""
        s = sign_unit(self.field)
        one = UnitDescriptor.one()
        top = [s] + [one] * self.n
        rows = [top]
        for i in range(self.m):
            rows.append([one] + list(self.entries[i]))
        return Twist(self.field, rows, dims=(self.m + 1, self.n + 1))


def twist_eval(t, a, b):
    return t.eval(a, b)


def tilde_twist(t):
    return t.tilde()


def kernel_sublattice(t, side="left"):
    """A' = {a : t(a, b) = 1 for all b} (or the right-hand analogue).

    Needs the twist in discrete unit form; congruence conditions from the
    roots of unity and linear conditions from the monomial parts are stacked
    and solved as one integer kernel.
    """
    if side == "right":
        return kernel_sublattice(t.transpose(), "left")
    if not t.discrete:
        raise TwistError("kernel requires discrete units")
    m, n = t.m, t.n
    rows = []
    n_slack = 0
    slack_mods = []
    varnames = sorted({v for row in t.entries for u in row for v, _ in u.mono})
    for j in range(n):
        units = [t.unit_at(i, j) for i in range(m)]
        # monomial part: integer equations per variable
        for v in varnames:
            coeffs = [dict(u.mono).get(v, 0) for u in units]
            if any(coeffs):
                rows.append((coeffs, None))
        # root-of-unity part: one congruence mod the lcm of the orders
        L = 1
        for u in units:
            L = L * u.zeta_order // gcd(L, u.zeta_order)
        if L > 1:
            coeffs = [u.zeta_exp * (L // u.zeta_order) for u in units]
            if any(c % L for c in coeffs):
                rows.append((coeffs, L))
                slack_mods.append(L)
                n_slack += 1
    if not rows:
        return Sublattice.full(m)
    # stack into equations over (a, slack) with slack column per congruence
    mat = []
    slack_seen = 0
    for coeffs, L in rows:
        slack = [0] * n_slack
        if L is not None:
            slack[slack_seen] = L
            slack_seen += 1
        mat.append(list(coeffs) + slack)
    kernel = integer_kernel(mat, m + n_slack)
    projected = [row[:m] for row in kernel]
    return Sublattice.from_generators(projected, m)


def lattice_index(L):
    return L.index()
