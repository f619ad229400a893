"""Regular sequences of homogeneous forms: Jacobian syzygies, resolutions and Hilbert data."""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm

from .graded import (FreeMap, dim_R, hilbert_function_quotient, monomials, poly_gcd,
                     resolve)
from .poly import MultiPoly


class NotRegular(ValueError):
    pass


def _ci_hilbert(nvars, degs, t):
    """Hilbert function of a complete intersection with generators of the given degrees."""
    # coefficients of prod (1 - z^e) / (1 - z)^nvars
    num = {0: 1}
    for e in degs:
        nxt = dict(num)
        for k, c in num.items():
            nxt[k + e] = nxt.get(k + e, 0) - c
        num = nxt
    return sum(c * dim_R(nvars, t - k) for k, c in num.items())


@dataclass(frozen=True)
class RegSequence:
    """Homogeneous forms f_1..f_k in n+1 variables, deg f_i = d_i + 1."""

    forms: tuple
    regular: bool
    regularity_note: str

    @classmethod
    def from_forms(cls, forms, probe_window=None):
        forms = tuple(forms)
        if not forms:
            raise ValueError("empty sequence")
        nv = forms[0].nvars
        for f in forms:
            if f.nvars != nv or f.field != forms[0].field:
                raise ValueError("forms live in different rings")
            if f.is_zero():
                raise NotRegular("zero form in the sequence")
            if not f.is_homogeneous():
                raise ValueError(f"form is not homogeneous: {f}")
            if f.degree == 0:
                raise NotRegular("constant form in the sequence")
        k = len(forms)
        if k > nv - 1:
            raise ValueError("need k <= n")
        if k == 1:
            return cls(forms, True, "single nonzero form")
        if k == 2:
            g = poly_gcd(forms[0], forms[1])
            if g.degree > 0:
                return cls(forms, False, f"common factor {g}")
            return cls(forms, True, "coprime forms")
        degs = [f.degree for f in forms]
        top = probe_window if probe_window is not None else sum(degs) - k + 2
        hf = hilbert_function_quotient(list(forms), nv, forms[0].field, range(top + 1))
        for t, h in hf.items():
            if h != _ci_hilbert(nv, degs, t):
                return cls(forms, False, f"Hilbert function differs from a complete intersection in degree {t}")
        return cls(forms, True, f"assumed regular: Hilbert function matches a complete intersection up to degree {top}")

    @property
    def nvars(self):
        return self.forms[0].nvars

    @property
    def n(self):
        return self.nvars - 1

    @property
    def k(self):
        return len(self.forms)

    @property
    def field(self):
        return self.forms[0].field

    @property
    def d(self):
        return tuple(f.degree - 1 for f in self.forms)

    def jacobian(self):
        return [f.gradient() for f in self.forms]

    def jacobian_map(self):
        """J : R^{n+1} -> sum_i R(d_i)."""
        return FreeMap(self.jacobian(), [0] * self.nvars, [-di for di in self.d], self.nvars, self.field)

    def euler_check(self):
        x = [MultiPoly.variable(i, self.nvars, self.field) for i in range(self.nvars)]
        for f, row in zip(self.forms, self.jacobian()):
            lhs = MultiPoly.zero(self.nvars, self.field)
            for xi, df in zip(x, row):
                lhs = lhs + xi * df
            if lhs != f.scale(f.degree):
                return False
        return True


def syzygies(seq, a):
    """Basis of degree-a Jacobian syzygies (columns of degree-a forms)."""
    phi = seq.jacobian_map()
    return [phi.to_polys(v, a) for v in phi.kernel_at(a)]


def syzygy_dim(seq, a):
    return seq.jacobian_map().kernel_dim(a)


def compressibility_general(seq):
    return syzygy_dim(seq, 0)


def _det(M):
    k = len(M)
    if k == 1:
        return M[0][0]
    acc = None
    for j in range(k):
        if not M[0][j]:
            continue
        minor = [r[:j] + r[j + 1:] for r in M[1:]]
        term = M[0][j] * _det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc if acc is not None else M[0][0] * 0


def jacobian_minors(seq):
    J = seq.jacobian()
    k = seq.k
    out = []
    for cols in combinations(range(seq.nvars), k):
        m = _det([[J[i][j] for j in cols] for i in range(k)])
        if m:
            out.append(m)
    return out


@dataclass(frozen=True)
class MinorsContent:
    l: int
    common_factor: MultiPoly
    c1_T: int
    minors: tuple


def minors_content(seq):
    """Common factor of the maximal minors of the Jacobian and c_1 of the sheaf."""
    minors = jacobian_minors(seq)
    if not minors:
        raise NotRegular("all maximal minors vanish: not generically surjective")
    g = minors[0]
    for m in minors[1:]:
        g = poly_gcd(g, m)
        if g.degree == 0:
            break
    g = g.normalized()
    for m in minors:
        m.exact_div(g)
    l = g.degree
    return MinorsContent(l, g, l - sum(seq.d), tuple(minors))


def _fit_tail(values, tail=3):
    """Classify a Hilbert function tail: (dim, degree) or None when no stable fit."""
    ts = sorted(values)
    if len(ts) < tail + 1:
        return None
    last = [values[t] for t in ts[-(tail + 1):]]
    if len(set(last)) == 1:
        return (-1, 0) if last[0] == 0 else (0, last[0])
    diffs = [b - a for a, b in zip(last, last[1:])]
    if len(set(diffs)) == 1:
        return (1, diffs[0])
    return (2, None)


@dataclass(frozen=True)
class HilbertReport:
    dims: dict
    dimension: int
    degree: int
    residual_dims: dict = None
    residual_dimension: int = None
    residual_degree: int = None
    conclusive: bool = True

    def to_json(self):
        out = {"dims": {str(k): v for k, v in self.dims.items()},
               "dimension": self.dimension, "degree": self.degree, "conclusive": self.conclusive}
        if self.residual_dims is not None:
            out["residual"] = {"dims": {str(k): v for k, v in self.residual_dims.items()},
                               "dimension": self.residual_dimension, "degree": self.residual_degree}
        return out


def hilbert_Q(seq, window=None, content=None):
    """Hilbert function of the cokernel of the Jacobian and a fit of its tail.

    ``dimension`` is -1 (empty), 0 or 1, or 2 meaning "at least 2".  When the
    minors share a factor, the scheme cut by the minors divided by that factor
    is also fitted.
    """
    if window is None:
        window = range(0, 2 * sum(seq.d) + 5)
    window = list(window)
    phi = seq.jacobian_map()
    nv = seq.nvars
    dims = {}
    for t in window:
        dims[t] = sum(dim_R(nv, t + di) for di in seq.d) - phi.rank_at(t)
    fit = _fit_tail(dims)
    if fit is None:
        return HilbertReport(dims, None, None, conclusive=False)
    dim, deg = fit
    if content is None:
        content = minors_content(seq)
    rdims = rdim = rdeg = None
    if content.l > 0:
        gens = [m.exact_div(content.common_factor) for m in content.minors]
        rdims = hilbert_function_quotient(gens, nv, seq.field, window)
        rfit = _fit_tail(rdims)
        rdim, rdeg = rfit if rfit else (None, None)
    return HilbertReport(dims, dim, deg, rdims, rdim, rdeg, True)


@dataclass
class BettiTable:
    D: int
    steps: list
    complete: bool
    identity_ok: bool
    kernel_dims: dict

    def length(self):
        return len(self.steps) - 1

    @property
    def possibly_truncated(self):
        """True unless the table is exact below D with a free degree of headroom at D."""
        top = max((d for st in self.steps for d in st), default=None)
        return not (self.complete and self.identity_ok) or (top is not None and top >= self.D)

    def to_json(self):
        return {"D": self.D, "complete_below_D": self.complete and self.identity_ok,
                "possibly_truncated": self.possibly_truncated,
                "steps": {str(i): {str(d): c for d, c in sorted(s.items())} for i, s in enumerate(self.steps)}}

    def shape(self):
        return [dict(sorted(s.items())) for s in self.steps]


def betti_truncated(seq, D=None, max_steps=None):
    """Graded Betti numbers of the Jacobian syzygy module up to degree D."""
    if D is None:
        D = sum(seq.d) + 3
    res = resolve(seq.jacobian_map(), D, max_steps)
    return BettiTable(D, [dict(s) for s in res.steps], res.complete, res.identity_ok, res.kernel_dims)


@dataclass(frozen=True)
class FreenessUpTo:
    verdict: str
    exponents: tuple = None
    reason: str = ""

    def to_json(self):
        return {"verdict": self.verdict, "exponents": list(self.exponents) if self.exponents else self.exponents,
                "reason": self.reason}


def freeness_up_to(seq, D=None, betti=None, content=None):
    """Freeness certificate from a truncated resolution."""
    if betti is None:
        betti = betti_truncated(seq, D, max_steps=2)
    if content is None:
        content = minors_content(seq)
    gens = betti.steps[0] if betti.steps else {}
    syz = betti.steps[1] if len(betti.steps) > 1 else {}
    count = sum(gens.values())
    total = sum(d * c for d, c in gens.items())
    rank = seq.nvars - seq.k
    if any(syz.values()):
        return FreenessUpTo("not-free", None, f"first syzygy among generators in degree {min(syz)}")
    if count > rank:
        return FreenessUpTo("not-free", None, f"{count} generators exceed the rank {rank}")
    if count == rank:
        if total == -content.c1_T:
            exps = tuple(sorted((-d for d, c in gens.items() for _ in range(c)), reverse=True))
            return FreenessUpTo("free", exps, "independent generators with matching first Chern class")
        return FreenessUpTo("not-free", None, "generator degrees do not add up to -c1")
    # a splitting would need rank - count further summands of degree < -D
    missing = rank - count
    room = content.c1_T + total
    if room > -(betti.D + 1) * missing:
        return FreenessUpTo("not-free", None,
                            f"the {missing} missing summand(s) would need degrees summing to {room}, "
                            f"but each is at most {-(betti.D + 1)}")
    return FreenessUpTo("undetermined", None, f"no decision below degree {betti.D}")


def web_power_lift(seq, D=4):
    """Equal-degree sequence (f_i^{l_i}) and a check that syzygy dimensions agree up to D."""
    L = lcm(*[f.degree for f in seq.forms])
    tau = RegSequence(tuple(f ** (L // f.degree) for f in seq.forms), seq.regular, seq.regularity_note)
    agree = all(syzygy_dim(seq, a) == syzygy_dim(tau, a) for a in range(D + 1))
    return tau, agree


def rational_form(seq):
    """Twisted 1-form (d1+1) f1 df2 - (d2+1) f2 df1, as coefficient polynomials."""
    if seq.k != 2:
        raise ValueError("rational form needs two forms")
    f1, f2 = seq.forms
    g = poly_gcd(f1, f2)
    if g.degree > 0:
        raise NotRegular(f"common factor {g}")
    d1, d2 = seq.d
    return [f1 * a * (d1 + 1) - f2 * b * (d2 + 1) for a, b in zip(f2.gradient(), f1.gradient())]


def contract(omega, vec):
    acc = MultiPoly.zero(omega[0].nvars, omega[0].field)
    for w, v in zip(omega, vec):
        if w and v:
            acc = acc + w * v
    return acc


@dataclass(frozen=True)
class BoundsVerdict:
    verdict: str
    degree_used: int
    bounds: dict
    reason: str

    def to_json(self):
        return {"verdict": self.verdict, "degree_used": self.degree_used,
                "bounds": {k: str(v) for k, v in self.bounds.items()}, "reason": self.reason}


def stability_bounds(seq, hilbert=None, content=None):
    """Numerical stability test for two forms in four variables.

    The degree entering the inequalities is that of the one-dimensional part
    of the Jacobian scheme (0 when it is finite).
    """
    if seq.k != 2 or seq.n != 3:
        raise ValueError("stability bounds need two forms in P^3")
    d1, d2 = sorted(seq.d)
    if content is None:
        content = minors_content(seq)
    if d1 + d2 == 0:
        return BoundsVerdict("inconclusive", None, {}, "needs d1 + d2 > 0")
    if content.l != 0:
        return BoundsVerdict("inconclusive", None, {}, "needs c1(Q) = 0 (minors share a factor)")
    if hilbert is None:
        hilbert = hilbert_Q(seq, content=content)
    if not hilbert.conclusive:
        raise ValueError("Hilbert data inconclusive; enlarge the window")
    if hilbert.dimension is not None and hilbert.dimension >= 2:
        return BoundsVerdict("inconclusive", None, {}, "Jacobian scheme has dimension >= 2")
    deg = hilbert.degree if hilbert.dimension == 1 else 0
    s2 = d1 * d1 + d2 * d2
    if (d1 + d2) % 2 == 0:
        stable = Fraction(s2 - d1 - d2 - 2, 2)
        semi = Fraction(s2 + d1 + d2, 2)
        bounds = {"stable": stable, "semistable": semi}
        if deg < stable:
            return BoundsVerdict("stable", deg, bounds, f"{deg} < {stable}")
        if deg < semi:
            return BoundsVerdict("semistable", deg, bounds, f"{deg} < {semi}")
        return BoundsVerdict("inconclusive", deg, bounds, "bounds not met (the test is one-directional)")
    stable = Fraction(s2 - 1, 2)
    bounds = {"stable": stable}
    if deg < stable:
        return BoundsVerdict("stable", deg, bounds, f"{deg} < {stable}")
    return BoundsVerdict("inconclusive", deg, bounds, "bounds not met (the test is one-directional)")
