"""Sparse multivariate and dense univariate polynomials with exact coefficients."""

import ast
from fractions import Fraction
from functools import reduce

from .fields import QQ


def degrevlex_key(e):
    """Sort key making ``sorted`` ascending in degree-reverse-lexicographic order."""
    return (sum(e), tuple(-x for x in reversed(e)))


def _format_coeff(field, c):
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return str(c.numerator)
        return f"{c.numerator}/{c.denominator}"
    return str(c)


class MultiPoly:
    """Polynomial in ``nvars`` variables stored as {exponent tuple: nonzero coefficient}."""

    __slots__ = ("nvars", "terms", "field")

    def __init__(self, nvars, terms=None, field=QQ):
        self.nvars = nvars
        self.field = field
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} does not have {nvars} entries")
                c = field(c)
                if c != 0:
                    clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, nvars, terms, field):
        p = cls.__new__(cls)
        p.nvars = nvars
        p.field = field
        p.terms = terms
        return p

    @classmethod
    def zero(cls, nvars, field=QQ):
        return cls._raw(nvars, {}, field)

    @classmethod
    def constant(cls, c, nvars, field=QQ):
        return cls(nvars, {(0,) * nvars: c}, field)

    @classmethod
    def variable(cls, i, nvars, field=QQ):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1}, field)

    @classmethod
    def monomial(cls, e, nvars, field=QQ, coeff=1):
        return cls(nvars, {tuple(e): coeff}, field)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self):
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self):
        return len({sum(e) for e in self.terms}) <= 1

    def coefficient(self, e):
        return self.terms.get(tuple(e), self.field.zero)

    def support(self):
        return sorted(self.terms, key=degrevlex_key, reverse=True)

    def used_variables(self):
        return sorted({i for e in self.terms for i, x in enumerate(e) if x})

    def _check(self, other):
        if other.nvars != self.nvars or other.field != self.field:
            raise ValueError("polynomials live in different rings")

    def _lift(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(other, self.nvars, self.field)

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e)
            s = c if s is None else s + c
            if s == 0:
                t.pop(e, None)
            else:
                t[e] = s
        return MultiPoly._raw(self.nvars, t, self.field)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()}, self.field)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c):
        c = self.field(c)
        if c == 0:
            return MultiPoly.zero(self.nvars, self.field)
        return MultiPoly._raw(self.nvars, {e: v * c for e, v in self.terms.items()}, self.field)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = t.get(e)
                t[e] = c1 * c2 if s is None else s + c1 * c2
        return MultiPoly._raw(self.nvars, {e: c for e, c in t.items() if c != 0}, self.field)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        out = MultiPoly.constant(1, self.nvars, self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if other == 0:
            return not self.terms
        return self == self._lift(other)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def diff(self, j):
        t = {}
        for e, c in self.terms.items():
            if e[j]:
                f = list(e)
                f[j] -= 1
                t[tuple(f)] = c * e[j]
        return MultiPoly._raw(self.nvars, {e: c for e, c in t.items() if c != 0}, self.field)

    def gradient(self):
        return [self.diff(j) for j in range(self.nvars)]

    def evaluate(self, point):
        total = self.field.zero
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * x ** k
            total = total + term
        return total

    def substitute(self, images):
        """Replace x_i by the polynomial ``images[i]`` (all in a common ring)."""
        if not images:
            raise ValueError("no images supplied")
        ring = images[0]
        out = MultiPoly.zero(ring.nvars, ring.field)
        for e, c in self.terms.items():
            term = MultiPoly.constant(c, ring.nvars, ring.field)
            for img, k in zip(images, e):
                if k:
                    term = term * img ** k
            out = out + term
        return out

    def linear_change(self, M):
        """Apply x_i -> sum_j M[i][j] x_j."""
        n = self.nvars
        images = []
        for i in range(n):
            images.append(MultiPoly(n, {tuple(1 if k == j else 0 for k in range(n)): M[i][j]
                                        for j in range(n) if M[i][j] != 0}, self.field))
        return self.substitute(images)

    def extend(self, nvars):
        """Embed into a ring with more variables (new variables appended)."""
        if nvars < self.nvars:
            raise ValueError("cannot shrink the ring")
        pad = (0,) * (nvars - self.nvars)
        return MultiPoly._raw(nvars, {e + pad: c for e, c in self.terms.items()}, self.field)

    def leading_term(self):
        e = max(self.terms)
        return e, self.terms[e]

    def exact_div(self, g):
        """Quotient of an exact division; raises ValueError if ``g`` does not divide."""
        self._check(g)
        if g.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        ge, gc = g.leading_term()
        r = self
        q = {}
        while r.terms:
            e, c = r.leading_term()
            d = tuple(a - b for a, b in zip(e, ge))
            if min(d) < 0:
                raise ValueError("not an exact division")
            k = c / gc
            q[d] = k
            r = r - g * MultiPoly._raw(self.nvars, {d: k}, self.field)
        return MultiPoly._raw(self.nvars, q, self.field)

    def divides(self, f):
        try:
            f.exact_div(self)
        except ValueError:
            return False
        return True

    def normalized(self):
        """Scale so the leading (lex-largest) coefficient is 1."""
        if not self.terms:
            return self
        return self.scale(1 / self.leading_term()[1])

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in self.support():
            c = self.terms[e]
            mono = "*".join(f"x{i}" if k == 1 else f"x{i}^{k}" for i, k in enumerate(e) if k)
            neg = isinstance(c, Fraction) and c < 0
            a = -c if neg else c
            cs = _format_coeff(self.field, a)
            if not mono:
                body = cs
            elif cs == "1":
                body = mono
            else:
                body = f"{cs}*{mono}"
            parts.append(("-" if neg else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, body in parts[1:]:
            out += f" {s} {body}"
        return out

    def __repr__(self):
        return f"MultiPoly({self})"


class UniPoly:
    """Dense univariate polynomial, coefficients lowest degree first."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs, field=QQ):
        cs = [field(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.field = field

    @classmethod
    def _raw(cls, coeffs, field):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        p = cls.__new__(cls)
        p.coeffs = tuple(cs)
        p.field = field
        return p

    @classmethod
    def zero(cls, field=QQ):
        return cls._raw((), field)

    @classmethod
    def one(cls, field=QQ):
        return cls._raw((field.one,), field)

    @classmethod
    def t(cls, field=QQ):
        return cls._raw((field.zero, field.one), field)

    @classmethod
    def from_roots(cls, roots, field=QQ):
        out = cls.one(field)
        for r in roots:
            out = out * cls((-field(r), 1), field)
        return out

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def is_constant(self):
        return len(self.coeffs) <= 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def monic(self):
        if not self.coeffs:
            return self
        inv = 1 / self.coeffs[-1]
        return UniPoly._raw([c * inv for c in self.coeffs], self.field)

    def _lift(self, other):
        if isinstance(other, UniPoly):
            return other
        return UniPoly._raw((self.field(other),), self.field)

    def __add__(self, other):
        other = self._lift(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UniPoly._raw(out, self.field)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly._raw([-c for c in self.coeffs], self.field)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            c = self.field(other)
            return UniPoly._raw([x * c for x in self.coeffs], self.field)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly.zero(self.field)
        out = [self.field.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return UniPoly._raw(out, self.field)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = UniPoly.one(self.field)
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other):
        if not other.coeffs:
            raise ZeroDivisionError("division by the zero polynomial")
        r = list(self.coeffs)
        db = len(other.coeffs) - 1
        inv = 1 / other.coeffs[-1]
        if len(r) - 1 < db:
            return UniPoly.zero(self.field), self
        q = [self.field.zero] * (len(r) - db)
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i]
            if c == 0:
                continue
            c = c * inv
            q[i - db] = c
            for j, b in enumerate(other.coeffs):
                r[i - db + j] = r[i - db + j] - c * b
        return UniPoly._raw(q, self.field), UniPoly._raw(r[:db], self.field)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other):
        q, r = self.divmod(other)
        if r:
            raise ValueError("not an exact division")
        return q

    def divides(self, other):
        return not (other % self)

    def derivative(self):
        return UniPoly._raw([c * i for i, c in enumerate(self.coeffs)][1:], self.field)

    def __call__(self, x):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        return self == self._lift(other)

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            neg = isinstance(c, Fraction) and c < 0
            a = -c if neg else c
            cs = _format_coeff(self.field, a)
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if not mono:
                body = cs
            elif cs == "1":
                body = mono
            else:
                body = f"{cs}*{mono}"
            parts.append(("-" if neg else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, body in parts[1:]:
            out += f" {s} {body}"
        return out

    def __repr__(self):
        return f"UniPoly({self})"


def upoly_gcd(a, b):
    """Monic gcd (zero if both inputs vanish)."""
    while b:
        a, b = b, a % b
    return a.monic()


def upoly_xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g and g monic (or zero)."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = UniPoly.one(F), UniPoly.zero(F)
    t0, t1 = UniPoly.zero(F), UniPoly.one(F)
    while r1:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0:
        return r0, s0, t0
    inv = 1 / r0.lc
    return r0 * inv, s0 * inv, t0 * inv


def _pth_root(f):
    # in F_p a polynomial with zero derivative is g(t^p) = g(t)^p
    p = f.field.characteristic
    return UniPoly._raw(f.coeffs[::p], f.field)


def radical(f):
    """Monic squarefree part of a nonzero polynomial (works in characteristic p too)."""
    F = f.field
    f = f.monic()
    if f.degree is None or f.degree <= 0:
        return UniPoly.one(F)
    d = f.derivative()
    if not d:
        return radical(_pth_root(f))
    g = upoly_gcd(f, d)
    s = f.exact_div(g).monic()
    rest = g
    while True:
        h = upoly_gcd(rest, s)
        if h.degree == 0:
            break
        rest = rest.exact_div(h)
    if rest.degree and rest.degree > 0:
        s = s * radical(rest)
    return s.monic()


def multiplicity(b, f):
    """Largest k with b^k dividing f (b nonconstant)."""
    k = 0
    while True:
        q, r = f.divmod(b)
        if r:
            return k
        f = q
        k += 1


def gcd_free_basis(polys):
    """Coprime squarefree basis of a list of nonzero univariate polynomials.

    Returns a list of (monic basis element, multiplicity vector) where the
    vector records, for each input, the exponent of the element in it.  All
    irreducible factors inside one element share the same vector, and
    distinct elements carry distinct vectors.
    """
    if not polys:
        return []
    for f in polys:
        if not f:
            raise ValueError("zero polynomial in gcd-free basis input")
    F = polys[0].field
    prod = reduce(lambda a, b: a * b, polys, UniPoly.one(F))
    pieces = [radical(prod)] if prod.degree and prod.degree > 0 else []
    for f in polys:
        refined = []
        for b in pieces:
            cur, rem = b, f
            while cur.degree > 0:
                g = upoly_gcd(cur, rem)
                piece = cur.exact_div(g).monic()
                if piece.degree > 0:
                    refined.append(piece)
                if g.degree == 0:
                    break
                cur = g
                rem = rem.exact_div(g)
        pieces = refined
    out = [(b, tuple(multiplicity(b, f) for f in polys)) for b in pieces]
    out.sort(key=lambda bv: (bv[0].degree, [str(c) for c in bv[0].coeffs]))
    return out


# -- parsing ---------------------------------------------------------------

class PolyParseError(ValueError):
    pass


def _max_var(node):
    m = -1
    for sub in ast.walk(node):
        if isinstance(sub, ast.Name):
            if not (sub.id.startswith("x") and sub.id[1:].isdigit()):
                raise PolyParseError(f"unknown symbol {sub.id!r}; variables are x0, x1, ...")
            m = max(m, int(sub.id[1:]))
    return m


def _build(node, nvars, field):
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise PolyParseError(f"unsupported constant {node.value!r}")
        return MultiPoly.constant(node.value, nvars, field)
    if isinstance(node, ast.Name):
        return MultiPoly.variable(int(node.id[1:]), nvars, field)
    if isinstance(node, ast.UnaryOp):
        v = _build(node.operand, nvars, field)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
    if isinstance(node, ast.BinOp):
        left = _build(node.left, nvars, field)
        if isinstance(node.op, ast.Pow):
            k = _build(node.right, nvars, field)
            if k.degree not in (None, 0):
                raise PolyParseError("exponents must be integer constants")
            kv = k.coefficient((0,) * nvars)
            if isinstance(kv, Fraction) and kv.denominator != 1:
                raise PolyParseError("exponents must be integers")
            kv = int(kv if isinstance(kv, Fraction) else kv.v)
            if kv < 0:
                raise PolyParseError("negative exponent")
            return left ** kv
        right = _build(node.right, nvars, field)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if right.degree not in (None, 0) or right.is_zero():
                raise PolyParseError("can only divide by a nonzero constant")
            return left.scale(1 / right.coefficient((0,) * nvars))
    raise PolyParseError(f"unsupported syntax: {ast.dump(node)}")


def _parse_tree(text):
    try:
        return ast.parse(text.replace("^", "**"), mode="eval").body
    except SyntaxError as exc:
        raise PolyParseError(f"cannot parse {text!r}: {exc.msg}") from None


def parse_poly(text, nvars=None, field=QQ):
    """Parse ``coef*x0^e0*...`` style text (``+``, ``-``, ``*``, ``^``, ``/`` and parentheses)."""
    tree = _parse_tree(text)
    if isinstance(tree, ast.Tuple):
        raise PolyParseError("expected a single polynomial")
    m = _max_var(tree)
    n = nvars if nvars is not None else m + 1
    if m >= n:
        raise PolyParseError(f"variable x{m} exceeds the ring x0..x{n - 1}")
    return _build(tree, max(n, 1), field)


def parse_forms(text, nvars=None, field=QQ):
    """Parse a comma separated list of polynomials into a common ring."""
    tree = _parse_tree(text)
    nodes = tree.elts if isinstance(tree, ast.Tuple) else [tree]
    m = max(_max_var(nd) for nd in nodes)
    n = nvars if nvars is not None else m + 1
    if m >= n:
        raise PolyParseError(f"variable x{m} exceeds the ring x0..x{n - 1}")
    return [_build(nd, max(n, 1), field) for nd in nodes]


# -- factorization over F_p ----------------------------------------------------

def _powmod(base, e, mod):
    out = UniPoly.one(base.field)
    base = base % mod
    while e:
        if e & 1:
            out = (out * base) % mod
        base = (base * base) % mod
        e >>= 1
    return out


def _equal_degree(g, d, rng):
    if g.degree == d:
        return [g]
    F = g.field
    p = F.characteristic
    t = UniPoly.t(F)
    while True:
        a = UniPoly([F(rng.randrange(p)) for _ in range(g.degree)], F)
        if a.degree is None or a.degree < 1:
            a = a + t
        b = _powmod(a, (p ** d - 1) // 2, g) - 1
        h = upoly_gcd(g, b)
        if 0 < h.degree < g.degree:
            return _equal_degree(h, d, rng) + _equal_degree(g.exact_div(h).monic(), d, rng)


def irreducible_factors_fp(f, rng):
    """Distinct monic irreducible factors of a nonzero polynomial over F_p."""
    F = f.field
    if not F.characteristic:
        raise ValueError("factorization is only provided over prime fields")
    h = radical(f)
    t = UniPoly.t(F)
    out = []
    xp = t
    i = 1
    while h.degree >= 2 * i:
        xp = _powmod(xp, F.characteristic, h)
        g = upoly_gcd(h, xp - t)
        if g.degree > 0:
            out += _equal_degree(g, i, rng)
            h = h.exact_div(g).monic()
            xp = xp % h
        i += 1
    if h.degree > 0:
        out.append(h)
    return sorted(out, key=lambda q: (q.degree, [int(c) for c in q.coeffs]))
