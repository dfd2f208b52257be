"""Exact scalars: rationals, prime fields GF(p), and rational function fields.

Rational functions are stored as unnormalized fractions of sparse integer
polynomials; equality is decided by cross-multiplication, and true gcd
reduction happens only when printing univariate elements.  Units of the
form (root of unity) x (monomial in the transcendentals) carry a discrete
description alongside their field value, which is what makes kernel
lattices and multiplicative orders computable.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd, inf

from . import polys

RATIONALS = "rationals"
PRIME = "prime-field"
FUNCTION = "rational-functions"

#: powers enumerated when computing orders in GF(p)
ORDER_ENUM_BOUND = 2**20


class FieldError(ValueError):
    pass


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldDescriptor:
    """One of Q, GF(p), or a rational function field over Q or GF(p)."""

    kind: str
    p: int | None = None
    vars: tuple = ()

    def __post_init__(self):
        if self.kind not in (RATIONALS, PRIME, FUNCTION):
            raise FieldError(f"unknown field kind {self.kind!r}")
        if self.kind == RATIONALS:
            if self.p is not None or self.vars:
                raise FieldError("rationals take no parameters")
        elif self.kind == PRIME:
            if self.vars:
                raise FieldError("prime field takes no variables")
            if self.p is None or not _is_prime(self.p):
                raise FieldError(f"{self.p} is not prime")
        else:
            if not self.vars:
                raise FieldError("function field needs at least one variable")
            if len(set(self.vars)) != len(self.vars) or any(not v for v in self.vars):
                raise FieldError("variable names must be distinct and nonempty")
            if self.p is not None and not _is_prime(self.p):
                raise FieldError(f"{self.p} is not prime")

    # -- constructors ------------------------------------------------

    @staticmethod
    def Q():
        return FieldDescriptor(RATIONALS)

    @staticmethod
    def GF(p):
        return FieldDescriptor(PRIME, p=p)

    @staticmethod
    def rational_functions(varnames, p=None):
        return FieldDescriptor(FUNCTION, p=p, vars=tuple(varnames))

    # -- basic data --------------------------------------------------

    @property
    def characteristic(self):
        return self.p if self.p is not None else 0

    @property
    def nvars(self):
        return len(self.vars)

    def zero(self):
        return self._make_int(0)

    def one(self):
        return self._make_int(1)

    def minus_one(self):
        return self._make_int(-1)

    def _make_int(self, n):
        if self.kind == RATIONALS:
            return FieldElement(self, Fraction(n))
        if self.kind == PRIME:
            return FieldElement(self, n % self.p)
        num = polys.pconst(n, self.nvars, self.p)
        return FieldElement(self, (num, polys.pconst(1, self.nvars, self.p)))

    def from_int(self, n):
        return self._make_int(n)

    def var(self, name):
        if self.kind != FUNCTION or name not in self.vars:
            raise FieldError(f"no variable {name!r} in {self}")
        i = self.vars.index(name)
        one = polys.pconst(1, self.nvars, self.p)
        return FieldElement(self, (polys.pvar(i, self.nvars), one))

    def parse(self, text):
        return _parse_element(self, text)

    def primitive_root(self):
        """Least primitive root of GF(p), fixed once per field."""
        if self.kind != PRIME:
            raise FieldError("primitive roots only for prime fields")
        p = self.p
        if p == 2:
            return 1
        factors = _prime_factors(p - 1)
        for g in range(2, p):
            if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
                return g
        raise FieldError("no primitive root found")  # unreachable for prime p

    def __str__(self):
        if self.kind == RATIONALS:
            return "Q"
        if self.kind == PRIME:
            return f"GF({self.p})"
        base = "Q" if self.p is None else f"GF({self.p})"
        return f"{base}({','.join(self.vars)})"


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FieldElement:
    """Immutable scalar in one of the supported exact fields."""

    __slots__ = ("field", "data")

    def __init__(self, field, data):
        self.field = field
        self.data = data

    # -- predicates --------------------------------------------------

    def is_zero(self):
        if self.field.kind == FUNCTION:
            return polys.pis_zero(self.data[0])
        return self.data == 0

    def is_one(self):
        return self == self.field.one()

    def __bool__(self):
        return not self.is_zero()

    # -- arithmetic --------------------------------------------------

    def _check(self, other):
        if not isinstance(other, FieldElement) or other.field != self.field:
            raise FieldError("field mismatch")

    def __add__(self, other):
        self._check(other)
        f = self.field
        if f.kind == FUNCTION:
            a, b = self.data
            c, d = other.data
            num = polys.padd(polys.pmul(a, d, f.p), polys.pmul(c, b, f.p), f.p)
            return _make_frac(f, num, polys.pmul(b, d, f.p))
        if f.kind == PRIME:
            return FieldElement(f, (self.data + other.data) % f.p)
        return FieldElement(f, self.data + other.data)

    def __neg__(self):
        f = self.field
        if f.kind == FUNCTION:
            return FieldElement(f, (polys.pneg(self.data[0], f.p), self.data[1]))
        if f.kind == PRIME:
            return FieldElement(f, (-self.data) % f.p)
        return FieldElement(f, -self.data)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        f = self.field
        if f.kind == FUNCTION:
            a, b = self.data
            c, d = other.data
            return _make_frac(f, polys.pmul(a, c, f.p), polys.pmul(b, d, f.p))
        if f.kind == PRIME:
            return FieldElement(f, (self.data * other.data) % f.p)
        return FieldElement(f, self.data * other.data)

    def inverse(self):
        f = self.field
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if f.kind == FUNCTION:
            a, b = self.data
            return _make_frac(f, b, a)
        if f.kind == PRIME:
            return FieldElement(f, pow(self.data, f.p - 2, f.p))
        return FieldElement(f, 1 / self.data)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison --------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, FieldElement) or other.field != self.field:
            return NotImplemented
        f = self.field
        if f.kind != FUNCTION:
            return self.data == other.data
        a, b = self.data
        c, d = other.data
        # cross-multiplication; no normalization required
        return polys.psub(polys.pmul(a, d, f.p), polys.pmul(c, b, f.p), f.p) == {}

    __hash__ = None  # lazy fractions have no stable hash

    # -- display -----------------------------------------------------

    def __str__(self):
        f = self.field
        if f.kind == RATIONALS:
            return str(self.data)
        if f.kind == PRIME:
            return str(self.data)
        num, den = self.data
        if f.nvars == 1 and not polys.pis_zero(num):
            # univariate: reduce by the true gcd, but only for printing
            g = polys.puni_gcd(num, den)
            if g and g != polys.pconst(1, 1):
                num = polys.pdivexact(num, g, f.p)
                den = polys.pdivexact(den, g, f.p)
        num, cn, _ = _strip_keep_monos(num)
        den, cd, _ = _strip_keep_monos(den)
        q = Fraction(cn, cd) if f.p is None else (cn * pow(cd, f.p - 2, f.p)) % f.p
        ns = polys.pstr(num, f.vars)
        ds = polys.pstr(den, f.vars)
        if ds == "1":
            if q == 1:
                return ns
            if ns == "1":
                return str(q)
            return f"({q})*({ns})" if "/" in str(q) or "-" in str(q)[1:] else f"{q}*({ns})"
        head = "" if q == 1 else f"{q}*"
        return f"{head}({ns})/({ds})"

    def __repr__(self):
        return f"<{self} over {self.field}>"


def _strip_keep_monos(f):
    """Strip integer content only (leave monomial factors in place)."""
    if not f:
        return f, 1, None
    c, _ = polys.pcontent(f)
    if c < 0:
        c = -c
    if f[max(f)] < 0:
        c = -c
    if c == 1:
        return f, 1, None
    return {m: a // c for m, a in f.items()}, c, None


def _make_frac(field, num, den):
    """Build a function-field element, applying only cheap reduction."""
    if polys.pis_zero(den):
        raise ZeroDivisionError("zero denominator")
    if polys.pis_zero(num):
        return FieldElement(field, ({}, polys.pconst(1, field.nvars, field.p)))
    num, cn, mn = polys.pstrip(num)
    den, cd, md = polys.pstrip(den)
    # cancel shared integer content and monomial factors
    g = gcd(cn, cd)
    cn //= g
    cd //= g
    if cd < 0:
        cn, cd = -cn, -cd
    shared = tuple(min(a, b) for a, b in zip(mn, md))
    mn = tuple(a - s for a, s in zip(mn, shared))
    md = tuple(b - s for b, s in zip(md, shared))
    p = field.p
    num = polys.pmul(num, {mn: cn}, p)
    den = polys.pmul(den, {md: cd}, p)
    return FieldElement(field, (num, den))


# ---------------------------------------------------------------------------
# units: zeta_N^e * prod q_v^{m_v}


@dataclass(frozen=True)
class UnitDescriptor:
    """Discrete form of a unit: root of unity times a transcendental monomial."""

    zeta_order: int = 1
    zeta_exp: int = 0
    mono: tuple = ()  # sorted ((varname, exponent), ...), exponents nonzero

    def __post_init__(self):
        if self.zeta_order < 1:
            raise FieldError("zeta_order must be positive")
        object.__setattr__(self, "zeta_exp", self.zeta_exp % self.zeta_order)
        cleaned = tuple(sorted((v, e) for v, e in dict(self.mono).items() if e != 0))
        object.__setattr__(self, "mono", cleaned)

    @staticmethod
    def one():
        return UnitDescriptor(1, 0, ())

    @staticmethod
    def from_value(n):
        """Unit for an integer +-1 (the only rational roots of unity)."""
        if n == 1:
            return UnitDescriptor(1, 0, ())
        if n == -1:
            return UnitDescriptor(2, 1, ())
        raise FieldError("only +-1 convert directly to units")

    @staticmethod
    def monomial(**exps):
        return UnitDescriptor(1, 0, tuple(sorted(exps.items())))

    @staticmethod
    def from_toml(table):
        mono = tuple(sorted((str(k), int(v)) for k, v in dict(table.get("mono", {})).items()))
        return UnitDescriptor(int(table.get("zeta_order", 1)), int(table.get("zeta_exp", 0)), mono)

    def to_toml(self):
        out = {"zeta_order": self.zeta_order, "zeta_exp": self.zeta_exp}
        if self.mono:
            out["mono"] = dict(self.mono)
        return out

    def validate(self, field):
        n = self.zeta_order
        if field.kind == RATIONALS or (field.kind == FUNCTION and field.p is None):
            if n not in (1, 2):
                raise FieldError(f"no primitive {n}th root of unity in characteristic 0 rationals")
        else:
            p = field.p
            if (p - 1) % n != 0:
                raise FieldError(f"zeta_order {n} does not divide p-1 = {p - 1}")
        if self.mono:
            if field.kind != FUNCTION:
                raise FieldError("monomial part needs a function field")
            for v, _ in self.mono:
                if v not in field.vars:
                    raise FieldError(f"unknown variable {v!r} in unit")

    def eval(self, field):
        """The field element this unit denotes; never zero."""
        self.validate(field)
        if field.kind == PRIME or (field.kind == FUNCTION and field.p is not None):
            p = field.p
            base = FieldDescriptor.GF(p)
            g = base.primitive_root()
            zeta = pow(g, (p - 1) // self.zeta_order, p)
            root = pow(zeta, self.zeta_exp, p)
            value = field.from_int(root)
        else:
            value = field.one() if self.zeta_exp % 2 == 0 or self.zeta_order == 1 else field.minus_one()
        for v, e in self.mono:
            value = value * field.var(v) ** e
        return value

    def __mul__(self, other):
        n = _lcm(self.zeta_order, other.zeta_order)
        e = self.zeta_exp * (n // self.zeta_order) + other.zeta_exp * (n // other.zeta_order)
        mono = dict(self.mono)
        for v, k in other.mono:
            mono[v] = mono.get(v, 0) + k
        return UnitDescriptor(n, e, tuple(sorted(mono.items())))

    def __pow__(self, k):
        mono = tuple((v, e * k) for v, e in self.mono)
        return UnitDescriptor(self.zeta_order, self.zeta_exp * k, mono)

    def inverse(self):
        return self ** -1

    def is_identity(self):
        return self.zeta_exp == 0 and not self.mono

    def order(self):
        """Multiplicative order: finite iff the monomial part is trivial."""
        if self.mono:
            return inf
        return self.zeta_order // gcd(self.zeta_order, self.zeta_exp)


def _lcm(a, b):
    return a * b // gcd(a, b)


def sign_unit(field):
    """The unit -1, degenerating to +1 in characteristic 2."""
    if field.characteristic == 2:
        return UnitDescriptor.one()
    return UnitDescriptor(2, 1, ())


def multiplicative_order(u, field=None, bound=ORDER_ENUM_BOUND):
    """Least n >= 1 with u^n = 1, or math.inf.

    Accepts a UnitDescriptor (field optional) or a FieldElement.
    """
    if isinstance(u, UnitDescriptor):
        return u.order()
    f = u.field
    if u.is_zero():
        raise FieldError("not a unit")
    if f.kind == RATIONALS:
        if u.data == 1:
            return 1
        if u.data == -1:
            return 2
        return inf
    if f.kind == PRIME:
        if f.p > bound:
            raise FieldError("order enumeration bound exceeded")
        acc = u.data
        for n in range(1, f.p):
            if acc == 1:
                return n
            acc = acc * u.data % f.p
        raise FieldError("order enumeration failed")  # unreachable for units
    # function field: finite order forces a constant from the base field
    num, den = u.data
    if not (polys.pis_const(num) and polys.pis_const(den)):
        return inf
    cn = num[max(num)]
    cd = den[max(den)]
    if f.p is None:
        q = Fraction(cn, cd)
        if q == 1:
            return 1
        if q == -1:
            return 2
        return inf
    base = FieldDescriptor.GF(f.p)
    return multiplicative_order(FieldElement(base, cn * pow(cd, f.p - 2, f.p) % f.p), bound=bound)


def unit_eval(u, field):
    return u.eval(field)


# ---------------------------------------------------------------------------
# parsing


class _Parser:
    """Recursive descent over + - * / ^ ( ), integers, and variable names."""

    def __init__(self, field, text):
        self.field = field
        self.toks = self._tokenize(text)
        self.pos = 0

    @staticmethod
    def _tokenize(text):
        toks = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch in "+-*/^()":
                toks.append(ch)
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                toks.append(int(text[i:j]))
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                toks.append(text[i:j])
                i = j
            else:
                raise FieldError(f"bad character {ch!r} in element string")
        return toks

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self):
        value = self.expr()
        if self.peek() is not None:
            raise FieldError(f"trailing input at token {self.peek()!r}")
        return value

    def expr(self):
        if self.peek() == "-":
            self.take()
            value = -self.term()
        else:
            value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.factor()
            value = value * rhs if op == "*" else value / rhs
        return value

    def factor(self):
        if self.peek() == "-":
            self.take()
            return -self.factor()
        value = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            n = self.take()
            if not isinstance(n, int):
                raise FieldError("exponent must be an integer")
            value = value ** (sign * n)
        return value

    def atom(self):
        tok = self.take()
        if tok == "(":
            value = self.expr()
            if self.take() != ")":
                raise FieldError("unbalanced parentheses")
            return value
        if isinstance(tok, int):
            return self.field.from_int(tok)
        if isinstance(tok, str) and tok not in "+-*/^()":
            return self.field.var(tok)
        raise FieldError(f"unexpected token {tok!r}")


def _parse_element(field, text):
    return _Parser(field, str(text)).parse()
