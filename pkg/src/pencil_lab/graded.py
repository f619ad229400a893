"""Degree-by-degree linear algebra over the graded ring K[x_0..x_n]."""

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

from .linalg import EchelonBasis, sparse_rank_nullspace
from .poly import MultiPoly, degrevlex_key


def dim_R(nvars, d):
    return comb(d + nvars - 1, nvars - 1) if d >= 0 else 0


@lru_cache(maxsize=None)
def monomials(nvars, d):
    """Exponent vectors of degree d, largest first in degrevlex order."""
    if d < 0:
        return ()
    out = []

    def rec(i, left, acc):
        if i == nvars - 1:
            out.append(tuple(acc + [left]))
            return
        for k in range(left, -1, -1):
            rec(i + 1, left - k, acc + [k])

    rec(0, d, [])
    out.sort(key=degrevlex_key, reverse=True)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(nvars, d):
    return {e: i for i, e in enumerate(monomials(nvars, d))}


def _add(e, f):
    return tuple(a + b for a, b in zip(e, f))


class FreeMap:
    """Graded map  sum_j R(-s_j) -> sum_i R(-tau_i)  given by homogeneous entries.

    Entry (i, j) is zero or homogeneous of degree s_j - tau_i.
    """

    def __init__(self, entries, source_shifts, target_shifts, nvars, field):
        self.entries = [list(r) for r in entries]
        self.source_shifts = list(source_shifts)
        self.target_shifts = list(target_shifts)
        self.nvars = nvars
        self.field = field
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                if x and (not x.is_homogeneous() or x.degree != self.source_shifts[j] - self.target_shifts[i]):
                    raise ValueError(f"entry ({i},{j}) has the wrong degree")

    @property
    def nsource(self):
        return len(self.source_shifts)

    def source_offsets(self, t):
        offs, k = [], 0
        for s in self.source_shifts:
            offs.append(k)
            k += dim_R(self.nvars, t - s)
        return offs, k

    def target_offsets(self, t):
        offs, k = [], 0
        for s in self.target_shifts:
            offs.append(k)
            k += dim_R(self.nvars, t - s)
        return offs, k

    def source_dim(self, t):
        return self.source_offsets(t)[1]

    def rows_at(self, t):
        """Sparse rows of the coefficient matrix in degree t."""
        nv = self.nvars
        soffs, _ = self.source_offsets(t)
        toffs, _ = self.target_offsets(t)
        rows = {}
        for j, s in enumerate(self.source_shifts):
            mons = monomials(nv, t - s)
            for i, tau in enumerate(self.target_shifts):
                f = self.entries[i][j] if self.entries else None
                if not f:
                    continue
                tidx = monomial_index(nv, t - tau)
                for mi, mu in enumerate(mons):
                    col = soffs[j] + mi
                    for e, c in f.terms.items():
                        r = toffs[i] + tidx[_add(e, mu)]
                        row = rows.get(r)
                        if row is None:
                            rows[r] = {col: c}
                        else:
                            row[col] = row.get(col, 0) + c
        return [{k: v for k, v in r.items() if v != 0} for r in rows.values()]

    def kernel_at(self, t):
        """Basis of the degree-t kernel as sparse coordinate vectors."""
        n = self.source_dim(t)
        if n == 0:
            return []
        _, basis = sparse_rank_nullspace(self.rows_at(t), n, self.field.one)
        return basis

    def kernel_dim(self, t):
        n = self.source_dim(t)
        if n == 0:
            return 0
        eb = EchelonBasis()
        for r in self.rows_at(t):
            eb.add(r)
        return n - len(eb)

    def rank_at(self, t):
        return self.source_dim(t) - self.kernel_dim(t)

    def to_polys(self, vec, t):
        """Coordinates in degree t -> column of polynomials."""
        soffs, _ = self.source_offsets(t)
        nv = self.nvars
        cols = [dict() for _ in self.source_shifts]
        bounds = soffs + [self.source_dim(t)]
        for k, c in vec.items():
            j = _which(bounds, k)
            cols[j][monomials(nv, t - self.source_shifts[j])[k - soffs[j]]] = c
        return [MultiPoly(nv, cj, self.field) for cj in cols]

    def to_coords(self, polys, t):
        soffs, _ = self.source_offsets(t)
        out = {}
        for j, p in enumerate(polys):
            if not p:
                continue
            idx = monomial_index(self.nvars, t - self.source_shifts[j])
            for e, c in p.terms.items():
                out[soffs[j] + idx[e]] = c
        return out

    def apply(self, polys):
        out = []
        for row in self.entries:
            acc = MultiPoly.zero(self.nvars, self.field)
            for x, p in zip(row, polys):
                if x and p:
                    acc = acc + x * p
            out.append(acc)
        return out


def _which(bounds, k):
    lo, hi = 0, len(bounds) - 2
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if bounds[mid] <= k:
            lo = mid
        else:
            hi = mid - 1
    return lo


@dataclass
class KernelStep:
    """Minimal generators of ker(phi) in degrees <= D."""

    degrees: Counter
    generators: list
    kernel_dims: dict


def minimal_kernel_generators(phi, D):
    """Minimal homogeneous generators of the kernel module of ``phi`` up to degree D.

    In each degree t the new generators are a complement of R_1 * K_{t-1} in K_t.
    """
    nv = phi.nvars
    x = [MultiPoly.variable(i, nv, phi.field) for i in range(nv)]
    start = min(phi.source_shifts, default=0)
    degrees = Counter()
    gens = []
    dims = {}
    prev = []
    for t in range(start, D + 1):
        kern = phi.kernel_at(t)
        dims[t] = len(kern)
        if not kern:
            prev = []
            continue
        span = EchelonBasis()
        for v in prev:
            for xi in x:
                span.add(phi.to_coords([xi * p for p in v], t))
                if len(span) == len(kern):
                    break
            if len(span) == len(kern):
                break
        new = []
        if len(span) < len(kern):
            for kv in kern:
                if span.add(kv):
                    new.append(phi.to_polys(kv, t))
                    if len(span) == len(kern):
                        break
        for g in new:
            gens.append((t, g))
        if new:
            degrees[t] += len(new)
        prev = [phi.to_polys(kv, t) for kv in kern]
    return KernelStep(degrees, gens, dims)


@dataclass
class Resolution:
    steps: list
    D: int
    kernel_dims: dict
    complete: bool
    identity_ok: bool
    generators: list = field(default_factory=list)

    def length(self):
        return len([s for s in self.steps if sum(s.values())]) - 1


def resolve(phi, D, max_steps=None):
    """Minimal graded free resolution of ker(phi), truncated at degree D."""
    nv = phi.nvars
    if max_steps is None:
        max_steps = nv + 1
    steps = []
    first_dims = None
    current = phi
    complete = False
    first_gens = None
    for _ in range(max_steps):
        ks = minimal_kernel_generators(current, D)
        if first_dims is None:
            first_dims = ks.kernel_dims
            first_gens = ks.generators
        if not ks.generators:
            complete = all(v == 0 for v in ks.kernel_dims.values())
            break
        steps.append(ks.degrees)
        entries = [[g[i] for _, g in ks.generators] for i in range(current.nsource)]
        current = FreeMap(entries, [t for t, _ in ks.generators], current.source_shifts, nv, phi.field)
    identity_ok = True
    for t, dk in first_dims.items():
        alt = 0
        for s, st in enumerate(steps):
            alt += (-1) ** s * sum(c * dim_R(nv, t - d) for d, c in st.items())
        if alt != dk:
            identity_ok = False
    return Resolution(steps, D, first_dims, complete, identity_ok, first_gens or [])


# -- multivariate gcd by linear algebra ---------------------------------------

def _has_cofactor(f, g, e):
    """Nonzero (a, b) with a*f = b*g, deg a = e, or None."""
    nv, F = f.nvars, f.field
    df, dg = f.degree, g.degree
    eb_deg = e + df - dg
    if eb_deg < 0:
        return None
    # unknowns: coefficients of a (degree e) and b (degree eb_deg); equation a f - b g = 0
    ma = monomials(nv, e)
    mb = monomials(nv, eb_deg)
    tidx = monomial_index(nv, e + df)
    rows = {}
    for k, mu in enumerate(ma):
        for ex, c in f.terms.items():
            rows.setdefault(tidx[_add(ex, mu)], {})[k] = c
    off = len(ma)
    for k, mu in enumerate(mb):
        for ex, c in g.terms.items():
            rows.setdefault(tidx[_add(ex, mu)], {})[off + k] = -c
    rows = [{k: v for k, v in r.items() if v != 0} for r in rows.values()]
    _, kern = sparse_rank_nullspace(rows, off + len(mb), F.one)
    if not kern:
        return None
    v = kern[0]
    a = MultiPoly(nv, {ma[k]: c for k, c in v.items() if k < off}, F)
    return a


def poly_gcd(f, g):
    """Greatest common divisor of homogeneous polynomials (leading coefficient 1)."""
    if not f:
        return g.normalized()
    if not g:
        return f.normalized()
    if not (f.is_homogeneous() and g.is_homogeneous()):
        raise ValueError("gcd implemented for homogeneous polynomials")
    if f.degree == 0 or g.degree == 0:
        return MultiPoly.constant(1, f.nvars, f.field)
    dg = g.degree
    # a*f = b*g has a solution with deg a = e iff e >= deg g - deg gcd
    if _has_cofactor(f, g, dg - 1) is None:
        return MultiPoly.constant(1, f.nvars, f.field)
    lo, hi = 0, dg - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _has_cofactor(f, g, mid) is not None:
            hi = mid
        else:
            lo = mid + 1
    a = _has_cofactor(f, g, lo)
    return g.exact_div(a).normalized()


def hilbert_function_quotient(gens, nvars, field, degrees):
    """dim (R/I)_t for the ideal generated by homogeneous ``gens``."""
    out = {}
    for t in degrees:
        eb = EchelonBasis()
        idx = monomial_index(nvars, t)
        for g in gens:
            if not g or g.degree > t:
                continue
            for mu in monomials(nvars, t - g.degree):
                eb.add({idx[_add(e, mu)]: c for e, c in g.terms.items()})
        out[t] = dim_R(nvars, t) - len(eb)
    return out
