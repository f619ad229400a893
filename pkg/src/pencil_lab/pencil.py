"""Symmetric matrix pencils of pairs of quadrics and their classification invariants."""

import re
from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .fields import QQ
from .linalg import (EchelonBasis, block_diag, is_symmetric, matmul, rank,
                     rank_nullspace, transpose, zeros, det, bareiss_rank)
from .poly import MultiPoly, UniPoly, gcd_free_basis
from .smith import minimal_kernel_basis, smith_form


class InvalidPencil(ValueError):
    pass


@dataclass(frozen=True)
class SymmetricPencil:
    """rho(z1, z2) = z1*A + z2*B with A, B symmetric of size n+1."""

    A: tuple
    B: tuple
    field: object = QQ

    def __post_init__(self):
        F = self.field
        A = tuple(tuple(F(x) for x in r) for r in self.A)
        B = tuple(tuple(F(x) for x in r) for r in self.B)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        N = len(A)
        if N < 2 or len(B) != N or any(len(r) != N for r in A + B):
            raise InvalidPencil("A and B must be square matrices of the same size >= 2")
        if not is_symmetric(A) or not is_symmetric(B):
            raise InvalidPencil("pencil matrices must be symmetric")
        flat = [[x for r in A for x in r], [x for r in B for x in r]]
        if rank(flat) < 2:
            raise InvalidPencil("A and B are proportional (or zero): not a pencil")

    @property
    def n(self):
        return len(self.A) - 1

    @property
    def size(self):
        return len(self.A)

    def at(self, z1, z2):
        F = self.field
        z1, z2 = F(z1), F(z2)
        return [[z1 * a + z2 * b for a, b in zip(ra, rb)] for ra, rb in zip(self.A, self.B)]

    def polymatrix(self):
        """A + t*B over K[t] (the pencil at the point (1 : t))."""
        F = self.field
        return [[UniPoly((a, b), F) for a, b in zip(ra, rb)] for ra, rb in zip(self.A, self.B)]

    def forms(self):
        return quadric_from_matrix(self.A, self.field), quadric_from_matrix(self.B, self.field)

    def congruent(self, M):
        """Pencil (M^T A M, M^T B M)."""
        Mt = transpose(M)
        return SymmetricPencil(matmul(matmul(Mt, self.A), M), matmul(matmul(Mt, self.B), M), self.field)

    def apply_homography(self, h):
        """Pencil (h00 A + h01 B, h10 A + h11 B)."""
        (a, b), (c, d) = h
        F = self.field
        A = [[F(a) * x + F(b) * y for x, y in zip(ra, rb)] for ra, rb in zip(self.A, self.B)]
        B = [[F(c) * x + F(d) * y for x, y in zip(ra, rb)] for ra, rb in zip(self.A, self.B)]
        return SymmetricPencil(A, B, F)

    def to_json(self):
        F = self.field
        return {"A": [[F.to_json(x) for x in r] for r in self.A],
                "B": [[F.to_json(x) for x in r] for r in self.B]}


def quadric_from_matrix(M, field):
    """The quadric 1/2 x^T M x."""
    N = len(M)
    terms = {}
    half = field(1) / field(2)
    for i in range(N):
        for j in range(i, N):
            if M[i][j] == 0:
                continue
            e = [0] * N
            e[i] += 1
            e[j] += 1
            terms[tuple(e)] = M[i][j] * half if i == j else M[i][j]
    return MultiPoly(N, terms, field)


def hessian_matrix(f):
    if f.is_zero() or f.degree != 2 or not f.is_homogeneous():
        raise InvalidPencil(f"not a quadratic form: {f}")
    N = f.nvars
    M = [[f.field.zero] * N for _ in range(N)]
    for e, c in f.terms.items():
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        i, j = idx
        if i == j:
            M[i][i] = c * 2
        else:
            M[i][j] = c
            M[j][i] = c
    return M


def hessian_pencil(f1, f2):
    """Pencil of full second-partial (Hessian) matrices of two quadrics."""
    if f1.nvars != f2.nvars:
        raise InvalidPencil("forms live in different rings")
    return SymmetricPencil(hessian_matrix(f1), hessian_matrix(f2), f1.field)


def compressibility(P):
    """(m, basis of the common kernel of A and B)."""
    stacked = [list(r) for r in P.A] + [list(r) for r in P.B]
    _, basis = rank_nullspace(stacked, P.field)
    return len(basis), basis


def reduce_incompressible(P):
    """Restrict the pencil to a complement of the common kernel; returns (P_hat, m)."""
    m, basis = compressibility(P)
    if m == 0:
        return P, 0
    eb = EchelonBasis()
    for v in basis:
        eb.add({j: x for j, x in enumerate(v) if x != 0})
    keep = [j for j in range(P.size) if j not in eb.pivots]
    A = [[P.A[i][j] for j in keep] for i in keep]
    B = [[P.B[i][j] for j in keep] for i in keep]
    return SymmetricPencil(A, B, P.field), m


def _sample_points(P):
    # (0:1) followed by (1:lam), lam = 0..n+1; n+3 points in all
    yield (0, 1)
    for lam in range(P.n + 2):
        yield (1, lam)


def generic_corank(P, method="pointwise"):
    """Corank of a generic member z1*A + z2*B.

    ``pointwise`` takes the largest rank over n+3 points of P^1 (minors have
    degree at most n+1, so this is exact); ``bareiss`` runs fraction-free
    elimination over K[t] directly.
    """
    N = P.size
    if method == "bareiss":
        return N - bareiss_rank(P.polymatrix(), lambda a, b: a.exact_div(b))
    F = P.field
    if F.characteristic and F.characteristic < N + 2:
        raise ValueError("field too small; use a prime larger than n+2")
    best = 0
    for z in _sample_points(P):
        best = max(best, rank(P.at(*z)))
        if best == N:
            break
    return N - best


def normalize_homography(P, r1=None):
    """Move a point of generic corank to infinity; returns (P', h)."""
    F = P.field
    if r1 is None:
        r1 = generic_corank(P)
    target = P.size - r1
    if rank([list(r) for r in P.B]) == target:
        return P, ((F.one, F.zero), (F.zero, F.one))
    limit = F.characteristic or None
    c = 0
    while limit is None or c < limit:
        if rank(P.at(1, c)) == target:
            h = ((F.zero, F.one), (F.one, F(c)))
            return P.apply_homography(h), h
        c += 1
    raise ValueError("field too small to find a point of generic rank")


_SUPERSCRIPTS = str.maketrans("⁰¹²³⁴⁵⁶⁷⁸⁹", "0123456789")


@dataclass(frozen=True)
class SegreCluster:
    """Points of P^1 (roots of ``point``) sharing elementary divisors ``parts`` = ((a, p), ...)."""

    point: UniPoly
    point_degree: int
    parts: tuple

    @property
    def sum_p(self):
        return sum(p for _, p in self.parts)

    @property
    def weight(self):
        """Contribution of one geometric point to u - v."""
        return sum(a * p for a, p in self.parts)

    def prefix_sums(self):
        """q_k = p_1 + ... + p_k for every k."""
        out, s = [], 0
        for _, p in self.parts:
            s += p
            out.append(s)
        return out

    def symbol(self):
        return format_parts(self.parts)


def format_parts(parts):
    if len(parts) == 1 and parts[0][1] == 1:
        return str(parts[0][0])
    return "(" + ",".join(f"{a}^{p}" if p > 1 else str(a) for a, p in parts) + ")"


def _symbol_order(parts):
    return (-sum(p for _, p in parts), [(-a, -p) for a, p in parts])


def format_segre(point_parts):
    """Symbol string from a list of per-point parts."""
    return "[" + ",".join(format_parts(pp) for pp in sorted(point_parts, key=_symbol_order)) + "]"


def parse_segre(text):
    """Parse a symbol like ``[(6^3,3^4,2^3)]`` or ``[2,1,1]`` into per-point parts."""
    s = re.sub("[⁰¹²³⁴⁵⁶⁷⁸⁹]+", lambda mt: "^" + mt.group(0).translate(_SUPERSCRIPTS), text)
    s = s.replace(" ", "")
    if not (s.startswith("[") and s.endswith("]")):
        raise ValueError(f"symbol must be bracketed: {text!r}")
    body = s[1:-1]
    points = []
    for item in re.findall(r"\([^()]*\)|[^,()]+", body):
        inner = item[1:-1] if item.startswith("(") else item
        pieces = [x for x in inner.split(",") if x]
        if not pieces:
            raise ValueError(f"empty point in symbol {text!r}")
        parts = Counter()
        for piece in pieces:
            m = re.fullmatch(r"(\d+)(?:\^(\d+))?", piece)
            if not m:
                raise ValueError(f"bad symbol entry {piece!r}")
            a, p = int(m.group(1)), int(m.group(2) or 1)
            if a < 1 or p < 1:
                raise ValueError("exponents and counts must be positive")
            parts[a] += p
        points.append(tuple(sorted(parts.items(), reverse=True)))
    rebuilt = "".join(re.findall(r"\([^()]*\)|[^,()]+|,", body))
    if rebuilt != body:
        raise ValueError(f"cannot parse symbol {text!r}")
    return points


@dataclass(frozen=True)
class SegreData:
    clusters: tuple
    u: int
    v: int
    r1: int
    degree_vector: tuple
    homography: tuple
    invariant_factors: tuple


def segre_data(P):
    """Segre clusters, splitting type, generic corank and degree vector."""
    F = P.field
    N = P.size
    r1 = generic_corank(P)
    Pn, h = normalize_homography(P, r1)
    M = Pn.polymatrix()
    S = smith_form(M, F, transforms=False)
    if S.rank != N - r1:
        raise AssertionError("Smith rank disagrees with the generic corank")
    factors = S.nonconstant_factors()
    clusters = []
    for g, mult in gcd_free_basis(factors) if factors else []:
        cnt = Counter(k for k in mult if k > 0)
        parts = tuple(sorted(cnt.items(), reverse=True))
        clusters.append(SegreCluster(g, g.degree, parts))
    clusters.sort(key=lambda c: (_symbol_order(c.parts), c.point.degree, str(c.point)))
    kernel = minimal_kernel_basis(M, F, degree_bound=N, nullity=r1)
    degs = tuple(sorted(d for d, _ in kernel))
    total = sum(c.point_degree * c.weight for c in clusters)
    if total != sum(f.degree for f in factors):
        raise AssertionError("cluster weights do not reproduce the invariant factor degrees")
    s = N - r1
    if (s + total) % 2:
        raise AssertionError("u + v and u - v have different parity")
    u, v = (s + total) // 2, (s - total) // 2
    if v != sum(degs):
        raise AssertionError(f"v = {v} but the minimal indices sum to {sum(degs)}")
    return SegreData(tuple(clusters), u, v, r1, degs, h, tuple(S.invariant_factors))


@dataclass(frozen=True)
class PencilInvariants:
    """Complete invariant record of a pencil of quadrics."""

    n: int
    m: int
    r0: int
    r1: int
    u: int
    v: int
    degree_vector: tuple
    clusters: tuple
    double_hyperplanes: int
    homography: tuple = ((1, 0), (0, 1))
    field: object = dc_field(default=QQ, compare=False)

    @property
    def c(self):
        """Positive minimal indices."""
        return tuple(x for x in self.degree_vector if x > 0)

    @property
    def is_regular(self):
        return self.r1 == 0

    @property
    def completely_irregular(self):
        return self.u == self.v

    @property
    def n_hat(self):
        return self.n - self.m

    @property
    def r1_hat(self):
        return self.r1 - self.m

    @property
    def point_count(self):
        return sum(c.point_degree for c in self.clusters)

    def point_parts(self):
        """Parts per geometric point (clusters expanded by degree)."""
        return [c.parts for c in self.clusters for _ in range(c.point_degree)]

    def segre_symbol(self):
        return format_segre(self.point_parts())

    def hat(self):
        """Invariants of the incompressible reduction."""
        return PencilInvariants(self.n - self.m, 0, self.r0 - self.m, self.r1 - self.m, self.u, self.v,
                                self.c, self.clusters, self.double_hyperplanes, self.homography, self.field)

    def cluster_location(self, cl):
        """Cluster support in the original pencil coordinates, as text."""
        F = self.field
        (h00, h01), (h10, h11) = self.homography
        if cl.point_degree == 1:
            lam = -cl.point.coeffs[0]
            z1 = F(h00) + F(h10) * lam
            z2 = F(h01) + F(h11) * lam
            if z1 != 0:
                z2, z1 = z2 / z1, F.one
            else:
                z2 = F.one
            return f"({F.to_json(z1)}:{F.to_json(z2)})"
        return f"roots of {cl.point} in (1:t)-coordinates after homography"

    def to_json(self):
        F = self.field
        return {
            "n": self.n, "m": self.m, "r0": self.r0, "r1": self.r1, "u": self.u, "v": self.v,
            "degree_vector": list(self.degree_vector),
            "c": list(self.c),
            "segre_symbol": self.segre_symbol(),
            "clusters": [{"point": str(c.point), "point_degree": c.point_degree,
                          "location": self.cluster_location(c),
                          "parts": [list(x) for x in c.parts]} for c in self.clusters],
            "double_hyperplanes": self.double_hyperplanes,
            "homography": [[F.to_json(F(x)) for x in r] for r in self.homography],
            "regular": self.is_regular,
            "completely_irregular": self.completely_irregular,
            "degree_vector_note": "zeros count compressible directions",
        }


def pencil_invariants(P):
    """Full invariant record of a pencil."""
    sd = segre_data(P)
    m, _ = compressibility(P)
    if m != sum(1 for x in sd.degree_vector if x == 0):
        raise AssertionError("compressibility disagrees with the zero minimal indices")
    r0 = sd.r1 + max((c.sum_p for c in sd.clusters), default=0)
    e = sum(c.point_degree for c in sd.clusters if sd.r1 + c.sum_p == P.n)
    return PencilInvariants(P.n, m, r0, sd.r1, sd.u, sd.v, sd.degree_vector, sd.clusters, e,
                            sd.homography, P.field)


# -- reconstruction ----------------------------------------------------------

def rho_block(a, lam, field):
    """Size-a block with (z2 - lam*z1) on the antidiagonal and z1 just above it."""
    lam = field(lam)
    A = zeros(a, a, field)
    B = zeros(a, a, field)
    for i in range(a):
        A[i][a - 1 - i] = -lam
        B[i][a - 1 - i] = field.one
        if a - 2 - i >= 0:
            A[i][a - 2 - i] = field.one
    return A, B


def companion(f):
    """Companion matrix C with C e_i = e_{i+1} and characteristic polynomial f (monic)."""
    F = f.field
    N = f.degree
    C = zeros(N, N, F)
    for i in range(N - 1):
        C[i + 1][i] = F.one
    for i in range(N):
        C[i][N - 1] = -f.coeffs[i]
    return C


def companion_block(f):
    """Symmetric pencil block (-C S, S); (tI - C) S has Smith form (1, ..., 1, f)."""
    F = f.field
    N = f.degree
    C = companion(f)
    S = zeros(N, N, F)
    for i in range(N):
        for j in range(N):
            if i + j + 1 <= N:
                S[i][j] = f.coeffs[i + j + 1]
    CS = matmul(C, S)
    if not is_symmetric(CS) or det(S, F) == 0:
        raise AssertionError("Hankel symmetrizer failed")
    return [[-x for x in r] for r in CS], S


def tau_block(c, field):
    """Symmetric (2c+1)-block [[0, tau], [tau^T, 0]] with tau_c of size (c+1) x c."""
    N = 2 * c + 1
    A = zeros(N, N, field)
    B = zeros(N, N, field)
    for j in range(c):
        A[j][c + 1 + j] = A[c + 1 + j][j] = field.one
        B[j + 1][c + 1 + j] = B[c + 1 + j][j + 1] = field.one
    return A, B


def default_points(k, field=QQ):
    """0, 1, -1, 2, -2, ..."""
    out = [0]
    i = 1
    while len(out) < k:
        out += [i, -i]
        i += 1
    return [field(x) for x in out[:k]]


def cluster_blocks(point, parts, field):
    """Blocks for one cluster: a rational lam or a monic UniPoly."""
    blocks = []
    for a, p in parts:
        for _ in range(p):
            if isinstance(point, UniPoly) and point.degree > 1:
                blocks.append(companion_block(point ** a))
            else:
                lam = -point.coeffs[0] if isinstance(point, UniPoly) else point
                blocks.append(rho_block(a, lam, field))
    return blocks


def recover_pencil(r1, degree_vector, point_parts, points=None, field=QQ):
    """Block pencil with the given generic corank, minimal indices and Segre data.

    ``point_parts`` lists parts per point; ``points`` gives a rational value or a
    monic UniPoly per entry (default 0, 1, -1, 2, ...).
    """
    dv = list(degree_vector)
    if any(c < 1 for c in dv):
        raise ValueError("minimal indices must be >= 1 (add compressible directions separately)")
    if len(dv) != r1:
        raise ValueError("the number of minimal indices must equal r1")
    if not dv and not point_parts:
        raise ValueError("empty invariant data")
    if points is None:
        points = default_points(len(point_parts), field)
    if len(points) != len(point_parts):
        raise ValueError("one point per Segre entry is required")
    pts = [p if isinstance(p, UniPoly) else field(p) for p in points]
    keys = [str(p) if isinstance(p, UniPoly) else p for p in pts]
    if len(set(map(str, keys))) != len(keys):
        raise ValueError("Segre points must be distinct")
    blocks = [tau_block(c, field) for c in dv]
    for pt, parts in zip(pts, point_parts):
        blocks += cluster_blocks(pt, parts, field)
    A = block_diag([b[0] for b in blocks], field)
    B = block_diag([b[1] for b in blocks], field)
    return SymmetricPencil(A, B, field)


def regular_part(inv):
    """Pencil of size u - v carrying the torsion part, in the original coordinates."""
    if inv.u == inv.v:
        raise ValueError("empty regular part")
    F = inv.field
    blocks = []
    for cl in inv.clusters:
        blocks += cluster_blocks(cl.point, cl.parts, F)
    A = block_diag([b[0] for b in blocks], F)
    B = block_diag([b[1] for b in blocks], F)
    P = SymmetricPencil(A, B, F)
    (a, b), (c, d) = inv.homography
    # undo A' = aA + bB, B' = cA + dB
    dt = F(a) * F(d) - F(b) * F(c)
    hinv = ((F(d) / dt, -F(b) / dt), (-F(c) / dt, F(a) / dt))
    return P.apply_homography(hinv)


def normal_form(r1, degree_vector, point_parts, points=None, field=QQ):
    """Block pencil for a degree vector that may contain zeros.

    Each zero minimal index becomes a coordinate on which both forms vanish.
    """
    dv = sorted(degree_vector)
    m = sum(1 for c in dv if c == 0)
    P = recover_pencil(r1 - m, dv[m:], point_parts, points, field)
    if not m:
        return P
    z = zeros(m, m, field)
    return SymmetricPencil(block_diag([P.A, z], field), block_diag([P.B, z], field), field)
