"""Classification verdicts computed from the invariants of a pencil of quadrics.

Formulas that concern the sheaf of a compressible pencil are evaluated on the
incompressible reduction (n_hat = n - m, r1_hat = r1 - m).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

from .fields import QQ
from .pencil import PencilInvariants, SegreCluster, format_segre, pencil_invariants, _symbol_order
from .poly import UniPoly

MAX_ATLAS_N = 12


@dataclass(frozen=True)
class StabilityVerdict:
    case: str
    reason: str
    slope: Fraction

    def to_json(self):
        return {"case": self.case, "reason": self.reason, "slope": str(self.slope)}


@dataclass(frozen=True)
class FreenessVerdict:
    is_free: bool
    exponents: tuple = None
    table_row: str = None

    def to_json(self):
        return {"is_free": self.is_free,
                "exponents": list(self.exponents) if self.exponents is not None else None,
                "table_row": self.table_row}


@dataclass(frozen=True)
class SchemeReport:
    components: tuple
    h0_structure_sheaf: int
    dim_Xi: int
    note: str = ""

    def to_json(self):
        return {"components": [dict(c) for c in self.components],
                "h0_structure_sheaf": self.h0_structure_sheaf,
                "dim_Xi": self.dim_Xi, "note": self.note}


def stability_verdict(inv):
    n, e, m = inv.n, inv.double_hyperplanes, inv.m
    slope = Fraction(e - 2, n - 1) if n > 1 else None
    if n < 3:
        return StabilityVerdict("small-n", "n < 3: locally free, trichotomy not applied", slope)
    if e == 2:
        return StabilityVerdict("trivial-sum", "two double hyperplanes: T = O^(n-1)", slope)
    if e == 1:
        if m == 0:
            return StabilityVerdict("stable", "one double hyperplane, incompressible", slope)
        return StabilityVerdict("unstable", "one double hyperplane, compressible", slope)
    if m > 0:
        return StabilityVerdict("unstable", "compressible, no double hyperplane", slope)
    lhs, rhs = 2 * inv.r0, n + 1
    if lhs < rhs:
        return StabilityVerdict("stable", f"incompressible, 2*r0 = {lhs} < n+1 = {rhs}", slope)
    if lhs == rhs:
        return StabilityVerdict("strictly-semistable", f"incompressible, 2*r0 = {lhs} = n+1", slope)
    return StabilityVerdict("unstable", f"incompressible, 2*r0 = {lhs} > n+1 = {rhs}", slope)


def ext_support(inv):
    """Positive q with nonvanishing local Ext^q(T, O), computed on the incompressible reduction."""
    h = inv.hat()
    out = set()
    for cl in h.clusters:
        for q in cl.prefix_sums():
            out.add(h.n - h.r1 - 1 - q)
    if h.r1 > 0:
        out.add(h.n - h.r1 - 2)
    return frozenset(q for q in out if q > 0)


def ext_support_ambient(inv):
    """Same support expressed with the ambient n and r1 (the shifts by m cancel)."""
    out = set()
    for cl in inv.clusters:
        for q in cl.prefix_sums():
            out.add(inv.n - inv.r1 - 1 - q)
    if inv.r1 - inv.m > 0:
        out.add(inv.n - inv.r1 - 2)
    return frozenset(q for q in out if q > 0)


def pdim(inv):
    """Length of a minimal locally free resolution."""
    ext = ext_support(inv)
    from_ext = max(ext, default=0)
    h = inv.hat()
    if h.r1 > 0:
        closed = h.n - h.r1 - 2
    else:
        closed = h.n - min(cl.parts[0][1] for cl in h.clusters) - 1
    closed = max(0, closed)
    if closed != from_ext:
        raise AssertionError(f"pdim formula {closed} disagrees with Ext support {sorted(ext)}")
    return closed


def _two_point_all_ones(h):
    pts = h.point_parts()
    if len(pts) == 2 and all(len(pp) == 1 and pp[0][0] == 1 for pp in pts):
        return min(pp[0][1] for pp in pts)
    return None


def _twos_and_ones(h):
    pts = h.point_parts()
    if len(pts) != 1:
        return None
    parts = dict(pts[0])
    if 2 in parts and set(parts) <= {1, 2}:
        return parts[2]
    return None


def gpdim(inv):
    """Length of the minimal graded free resolution of the module of sections."""
    h = inv.hat()
    if h.r1 == 0:
        q = _two_point_all_ones(h)
        if q is None:
            q = _twos_and_ones(h)
        value = h.n - q - 1 if q is not None else h.n - 2
    elif all(x == 1 for x in h.c):
        value = h.n - h.r1 - 2
    else:
        value = h.n - 1
    return max(0, value)


def _row_signature(h):
    key = (h.n, h.r1, h.c, tuple(sorted(h.point_parts())))
    return key


def _sig(n_hat, r1, c, symbol):
    from .pencil import parse_segre
    return (n_hat, r1, tuple(c), tuple(sorted(parse_segre(symbol))))


FREE_TABLE = [
    ("1", _sig(3, 0, (), "[(1^2),(1^2)]"), (-1, -1)),
    ("2", _sig(3, 0, (), "[(2^2)]"), (-1, -1)),
    ("3", _sig(3, 1, (1,), "[1]"), (-1, -1)),
    ("4", _sig(2, 0, (), "[1,1,1]"), (-2,)),
    ("5", _sig(2, 0, (), "[2,1]"), (-2,)),
    ("6", _sig(2, 0, (), "[3]"), (-2,)),
    ("7", _sig(2, 0, (), "[(2,1)]"), (-1,)),
    ("8", _sig(2, 0, (), "[(1^2),1]"), (-1,)),
    ("9", _sig(1, 0, (), "[1,1]"), ()),
    ("10", _sig(1, 0, (), "[2]"), ()),
    ("extra", _sig(2, 1, (1,), "[]"), (-1,)),
]


def freeness(inv):
    """Match the incompressible signature against the table of free pencils."""
    sig = _row_signature(inv.hat())
    verdict = FreenessVerdict(False)
    for row, key, tail in FREE_TABLE:
        if key == sig:
            verdict = FreenessVerdict(True, tuple([0] * inv.m) + tail, row)
            break
    if verdict.is_free != (not ext_support(inv)):
        raise AssertionError("freeness disagrees with the Ext support")
    return verdict


def jacobian_report(inv):
    """Primary components of the Jacobian scheme (on the incompressible reduction)."""
    h = inv.hat()
    comps = []
    for idx, cl in enumerate(h.clusters):
        a = [x for x, _ in cl.parts] + [0]
        for k, q in enumerate(cl.prefix_sums()):
            base = q - 1
            entry = {"kind": "linear" if h.r1 == 0 else "linear-hat",
                     "cluster": idx, "point": str(cl.point), "copies": cl.point_degree,
                     "dimension": base + h.r1, "base_dimension": base,
                     "fiber_length": a[k] - a[k + 1]}
            if inv.m:
                entry["ambient_dimension"] = base + h.r1 + inv.m
            comps.append(entry)
    if h.r1 > 0:
        entry = {"kind": "scroll", "dimension": h.r1, "degree": h.v}
        if inv.m:
            entry["ambient_dimension"] = h.r1 + inv.m
        comps.append(entry)
        h0 = 1
    else:
        h0 = sum(cl.parts[0][0] * cl.point_degree for cl in h.clusters)
    note = "computed on the incompressible reduction; ambient components are cones" if inv.m else ""
    return SchemeReport(tuple(comps), h0, max(inv.r0 - 1, inv.r1), note)


# -- Chern data ------------------------------------------------------------

def _series_mul(a, b, n):
    out = [0] * (n + 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j <= n:
                out[i + j] += x * y
    return out


def _line_bundle_series(d, n, power):
    """(1 + d h)^power truncated at h^n (power may be negative)."""
    if power >= 0:
        s = [1] + [0] * n
        for _ in range(power):
            s = _series_mul(s, [1, d], n)
        return s
    inv = [Fraction(-d) ** k for k in range(n + 1)]
    s = [1] + [0] * n
    for _ in range(-power):
        s = _series_mul(s, inv, n)
    return s


def chern_from_resolution(steps, n):
    """Chern classes c_1..c_n of a sheaf with locally free resolution.

    ``steps[i]`` maps twists to multiplicities of the i-th term F_i in
    ... -> F_1 -> F_0 -> T -> 0.
    """
    total = [1] + [0] * n
    for i, step in enumerate(steps):
        sign = 1 if i % 2 == 0 else -1
        for d, mult in step.items():
            total = _series_mul(total, _line_bundle_series(d, n, sign * mult), n)
    return tuple(int(x) for x in total[1:])


def chern_from_exponents(exps, n):
    return chern_from_resolution([{d: list(exps).count(d) for d in set(exps)}], n)


P3_RESOLUTIONS = {
    1: ({-2: 4}, {-3: 2}),
    2: ({-2: 2, -1: 1}, {-3: 1}),
    3: ({-1: 3}, {-2: 1}),
}


def _twist(d):
    return f"O({d})" if d else "O"


def resolution_string(steps):
    terms = []
    for step in reversed(steps):
        terms.append(" ⊕ ".join(f"{_twist(d)}^{k}" if k > 1 else _twist(d)
                                for d, k in sorted(step.items())))
    return "0 -> " + " -> ".join(terms) + " -> T -> 0"


def p3_row(inv):
    """Classification row of a pencil in P^3."""
    if inv.n != 3:
        raise ValueError("P^3 classification needs n = 3")
    fr = freeness(inv)
    st = stability_verdict(inv)
    row = {"segre": inv.segre_symbol(), "r0": inv.r0, "r1": inv.r1, "u": inv.u, "v": inv.v,
           "c": list(inv.c), "m": inv.m, "stability": st.case, "pdim": pdim(inv)}
    if fr.is_free:
        row["chern"] = chern_from_exponents(fr.exponents, 3)
        row["label"] = "free"
        row["exponents"] = list(fr.exponents)
        row["resolution"] = None
    else:
        steps = P3_RESOLUTIONS[inv.r0]
        row["chern"] = chern_from_resolution(list(steps), 3)
        row["label"] = {"stable": "s", "strictly-semistable": "sss"}.get(st.case, st.case)
        row["exponents"] = None
        row["resolution"] = resolution_string(list(steps))
        row["resolution_steps"] = [dict(s) for s in steps]
    return row


def p3_classify(P):
    return p3_row(pencil_invariants(P) if not isinstance(P, PencilInvariants) else P)


# -- atlas -----------------------------------------------------------------

def partitions(w, largest=None):
    """Partitions of w as tuples of (a, p) with a decreasing."""
    if largest is None:
        largest = w
    if w == 0:
        yield ()
        return
    for a in range(min(w, largest), 0, -1):
        for p in range(w // a, 0, -1):
            for rest in partitions(w - a * p, a - 1):
                yield ((a, p),) + rest


def segre_symbols(w):
    """All Segre symbols of total weight w, each a sorted tuple of per-point parts."""
    pieces = [pp for k in range(1, w + 1) for pp in partitions(k)]
    out = []

    def rec(start, remaining, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for i in range(start, len(pieces)):
            wt = sum(a * p for a, p in pieces[i])
            if wt <= remaining:
                rec(i, remaining - wt, acc + [pieces[i]])

    rec(0, w, [])
    return [tuple(sorted(s, key=_symbol_order)) for s in out]


def _degenerate(degree_vector, symbol):
    if all(c == 0 for c in degree_vector):
        if not symbol:
            return True
        if len(symbol) == 1 and all(a == 1 for a, _ in symbol[0]):
            return True
    return False


def invariants_from_signature(r1, degree_vector, point_parts, field=QQ):
    """Invariant record built from (r1, degree vector with zeros, Segre data) without a pencil."""
    dv = tuple(sorted(degree_vector))
    if len(dv) != r1:
        raise ValueError("degree vector must have r1 entries")
    weight = sum(a * p for pp in point_parts for a, p in pp)
    v = sum(dv)
    u = weight + v
    n = r1 + u + v - 1
    from .pencil import default_points
    pts = default_points(len(point_parts), field)
    clusters = tuple(SegreCluster(UniPoly((-x, 1), field), 1, tuple(pp)) for x, pp in zip(pts, point_parts))
    sum_ps = [sum(p for _, p in pp) for pp in point_parts]
    r0 = r1 + max(sum_ps, default=0)
    e = sum(1 for s in sum_ps if r1 + s == n)
    m = sum(1 for x in dv if x == 0)
    return PencilInvariants(n, m, r0, r1, u, v, dv, clusters, e, field=field)


def verdict_row(inv):
    fr = freeness(inv)
    row = {"n": inv.n, "r1": inv.r1, "u": inv.u, "v": inv.v, "c": list(inv.c),
           "degree_vector": list(inv.degree_vector), "m": inv.m, "segre": inv.segre_symbol(),
           "r0": inv.r0, "e": inv.double_hyperplanes,
           "stability": stability_verdict(inv).case,
           "ext_support": sorted(ext_support(inv)), "pdim": pdim(inv), "gpdim": gpdim(inv),
           "free": fr.is_free, "exponents": list(fr.exponents) if fr.is_free else None,
           "table_row": fr.table_row}
    if inv.n == 3:
        p3 = p3_row(inv)
        row["chern"] = list(p3["chern"])
        row["label"] = p3["label"]
    return row


def _degree_vectors(r1, budget):
    """Nondecreasing tuples of r1 nonnegative integers with 2*sum <= budget."""
    for combo in combinations_with_replacement(range(budget // 2 + 1), r1):
        if 2 * sum(combo) <= budget:
            yield combo


def atlas(n, mode="regular", granularity="segre"):
    """Enumerate invariant signatures of pencils of quadrics in P^n with verdicts."""
    if n > MAX_ATLAS_N:
        raise ValueError(f"atlas limited to n <= {MAX_ATLAS_N}")
    if n < 1:
        raise ValueError("n must be positive")
    if mode not in ("regular", "irregular"):
        raise ValueError("mode must be regular or irregular")
    if granularity == "splitting":
        return _splitting_atlas(n, mode)
    rows = []
    r1_range = [0] if mode == "regular" else range(1, n + 1)
    for r1 in r1_range:
        for dv in _degree_vectors(r1, n + 1 - r1):
            w = n + 1 - r1 - 2 * sum(dv)
            for sym in segre_symbols(w) if w > 0 else [()]:
                if _degenerate(dv, sym):
                    continue
                rows.append(verdict_row(invariants_from_signature(r1, dv, list(sym))))
    rows.sort(key=lambda r: (r["r1"], r["c"], r["m"], r["r0"], r["segre"]))
    return rows


def _splitting_atlas(n, mode):
    rows = []
    r1_range = [0] if mode == "regular" else range(1, n + 1)
    for r1 in r1_range:
        for dv in _degree_vectors(r1, n + 1 - r1):
            v = sum(dv)
            u = n + 1 - r1 - v
            if u < v or u + v == 0:
                continue
            w = u - v
            realizable = not (all(c == 0 for c in dv) and w <= 1)
            if mode == "regular" and w == 0:
                continue
            rows.append({"n": n, "r1": r1, "u": u, "v": v, "h0_Ct": w,
                         "degree_vector": list(dv), "m": sum(1 for c in dv if c == 0),
                         "compressible": any(c == 0 for c in dv),
                         "completely_irregular": u == v, "realizable": realizable})
    rows.sort(key=lambda r: (r["r1"], -r["u"], r["degree_vector"]))
    return rows
