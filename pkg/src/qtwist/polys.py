"""Sparse multivariate polynomials with integer (or mod-p) coefficients.

A polynomial is a dict mapping exponent tuples to nonzero coefficients;
the zero polynomial is the empty dict.  All functions keep that invariant:
coefficients are never zero, and are reduced into [0, p) when a modulus is
given.  Monomial order is lex on the exponent tuples.
"""

from math import gcd


def pzero():
    return {}


def pconst(c, nvars, p=None):
    if p is not None:
        c %= p
    if c == 0:
        return {}
    return {(0,) * nvars: c}


def pvar(i, nvars):
    e = [0] * nvars
    e[i] = 1
    return {tuple(e): 1}


def pis_zero(f):
    return not f


def pis_const(f):
    return all(all(e == 0 for e in mono) for mono in f)


def padd(f, g, p=None):
    h = dict(f)
    for mono, c in g.items():
        c2 = h.get(mono, 0) + c
        if p is not None:
            c2 %= p
        if c2:
            h[mono] = c2
        else:
            h.pop(mono, None)
    return h


def pneg(f, p=None):
    if p is None:
        return {mono: -c for mono, c in f.items()}
    return {mono: (-c) % p for mono, c in f.items()}


def psub(f, g, p=None):
    return padd(f, pneg(g, p), p)


def pscale(f, c, p=None):
    if p is not None:
        c %= p
    if c == 0:
        return {}
    h = {}
    for mono, a in f.items():
        a2 = a * c
        if p is not None:
            a2 %= p
        if a2:
            h[mono] = a2
    return h


def pmul(f, g, p=None):
    if not f or not g:
        return {}
    h = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            mono = tuple(a + b for a, b in zip(m1, m2))
            c = h.get(mono, 0) + c1 * c2
            if p is not None:
                c %= p
            if c:
                h[mono] = c
            else:
                h.pop(mono, None)
    return h


def ppow(f, n, p=None):
    if n < 0:
        raise ValueError("negative polynomial power")
    result = None
    base = f
    while n:
        if n & 1:
            result = base if result is None else pmul(result, base, p)
        n >>= 1
        if n:
            base = pmul(base, base, p)
    if result is None:
        # f^0; need the arity
        nvars = len(next(iter(f))) if f else 0
        return pconst(1, nvars)
    return result


def plead(f):
    """Lex-maximal (monomial, coefficient) pair."""
    mono = max(f)
    return mono, f[mono]


def pcontent(f):
    """(integer content, componentwise-min exponent) of a nonzero poly."""
    ig = 0
    mins = None
    for mono, c in f.items():
        ig = gcd(ig, c)
        if mins is None:
            mins = list(mono)
        else:
            mins = [min(a, b) for a, b in zip(mins, mono)]
    return ig, tuple(mins)


def pstrip(f):
    """Divide out integer content and the common monomial factor.

    Returns (stripped poly, content, monomial).  Used to keep lazily
    normalized fractions small; this is not a gcd computation.
    """
    if not f:
        return f, 1, None
    ig, mins = pcontent(f)
    if ig < 0:
        ig = -ig
    # make the lex-leading coefficient positive for a deterministic form
    if f[max(f)] < 0:
        ig = -ig
    if ig == 1 and all(e == 0 for e in mins):
        return f, 1, mins
    h = {}
    for mono, c in f.items():
        h[tuple(a - b for a, b in zip(mono, mins))] = c // ig
    return h, ig, mins


def pdivexact(f, g, p=None):
    """Quotient f/g when the division is exact; raises otherwise."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    if not f:
        return {}
    q = {}
    r = dict(f)
    lg, cg = plead(g)
    while r:
        lr, cr = plead(r)
        mono = tuple(a - b for a, b in zip(lr, lg))
        if any(e < 0 for e in mono):
            raise ArithmeticError("inexact polynomial division")
        if p is None:
            if cr % cg != 0:
                raise ArithmeticError("inexact polynomial division")
            c = cr // cg
        else:
            c = cr * pow(cg, p - 2, p) % p
        q[mono] = c
        r = psub(r, pmul({mono: c}, g, p), p)
    return q


def puni_gcd(f, g):
    """Gcd of univariate integer polynomials, primitive and lex-monic-signed.

    Only used for display of univariate rational functions.
    """
    f = dict(f)
    g = dict(g)
    while g:
        # pseudo-remainder: scale f so leading terms cancel exactly
        while f and max(f) >= max(g):
            lf, cf = plead(f)
            lg, cg = plead(g)
            d = gcd(cf, cg)
            f = psub(pscale(f, cg // d), pmul({tuple(a - b for a, b in zip(lf, lg)): cf // d}, g))
        f, g = g, f
        if f:
            f = pstrip(f)[0]
    return pstrip(f)[0] if f else f


def pstr(f, varnames):
    """Deterministic human-readable form, terms in descending lex order."""
    if not f:
        return "0"
    parts = []
    for mono in sorted(f, reverse=True):
        c = f[mono]
        factors = []
        for name, e in zip(varnames, mono):
            if e == 1:
                factors.append(name)
            elif e != 0:
                factors.append(f"{name}^{e}")
        body = "*".join(factors)
        if not body:
            term = str(c)
        elif c == 1:
            term = body
        elif c == -1:
            term = "-" + body
        else:
            term = f"{c}*{body}"
        parts.append(term)
    out = parts[0]
    for term in parts[1:]:
        out += " - " + term[1:] if term.startswith("-") else " + " + term
    return out
