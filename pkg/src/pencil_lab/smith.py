"""Matrices over K[t]: Smith normal form and minimal polynomial kernel bases."""

from dataclasses import dataclass

from .linalg import EchelonBasis, rank, sparse_rank_nullspace
from .poly import UniPoly


def pm_identity(n, field):
    one, zero = UniPoly.one(field), UniPoly.zero(field)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def pm_mul(A, B):
    field = A[0][0].field
    out = []
    for r in A:
        row = []
        for j in range(len(B[0])):
            acc = UniPoly.zero(field)
            for k, x in enumerate(r):
                if x and B[k][j]:
                    acc = acc + x * B[k][j]
            row.append(acc)
        out.append(row)
    return out


def pm_eval(P, x):
    return [[e(x) for e in r] for r in P]


def pm_from_coeffs(mats, field):
    """Polynomial matrix sum_k mats[k] * t^k."""
    m, n = len(mats[0]), len(mats[0][0])
    return [[UniPoly([M[i][j] for M in mats], field) for j in range(n)] for i in range(m)]


def pm_coeffs(P, field):
    """Coefficient matrices [P_0, P_1, ...] with P = sum_k P_k t^k."""
    e = max((x.degree for r in P for x in r if x), default=0)
    m, n = len(P), len(P[0])
    out = []
    for k in range(e + 1):
        out.append([[P[i][j].coeffs[k] if (P[i][j].degree or 0) >= k and P[i][j] else field.zero
                     for j in range(n)] for i in range(m)])
    return out


def pm_degree(P):
    return max((x.degree for r in P for x in r if x), default=0)


def generic_rank(P, field):
    """Rank over K(t), as the maximum rank at enough sample points."""
    if not P or not P[0]:
        return 0
    m, n = len(P), len(P[0])
    top = min(m, n)
    need = pm_degree(P) * top + 1
    if field.characteristic and need > field.characteristic:
        raise ValueError("field too small for pointwise generic rank; use a larger prime")
    best = 0
    for k in range(need):
        best = max(best, rank(pm_eval(P, field(k))))
        if best == top:
            break
    return best


@dataclass(frozen=True)
class SmithForm:
    """Invariant factors d_1 | ... | d_r with optional unimodular U, V such that U P V = D."""

    invariant_factors: tuple
    rank: int
    shape: tuple
    U: list = None
    V: list = None

    def diagonal(self, field):
        m, n = self.shape
        D = [[UniPoly.zero(field)] * n for _ in range(m)]
        for i, d in enumerate(self.invariant_factors):
            D[i][i] = d
        return D

    def nonconstant_factors(self):
        return [d for d in self.invariant_factors if d.degree > 0]


def _row_axpy(M, i, k, q):
    """row_i -= q * row_k."""
    rk = M[k]
    M[i] = [a - q * b if b else a for a, b in zip(M[i], rk)]


def _col_axpy(M, j, k, q):
    """col_j -= q * col_k."""
    for r in M:
        if r[k]:
            r[j] = r[j] - q * r[k]


def smith_form(P, field, transforms=True):
    """Smith normal form over K[t] by minimal-degree pivoting."""
    m = len(P)
    n = len(P[0]) if m else 0
    A = [list(r) for r in P]
    U = pm_identity(m, field) if transforms else None
    V = pm_identity(n, field) if transforms else None
    factors = []
    k = 0
    while k < min(m, n):
        best = None
        for i in range(k, m):
            for j in range(k, n):
                x = A[i][j]
                if x and (best is None or x.degree < best[0]):
                    best = (x.degree, i, j)
                    if x.degree == 0:
                        break
            if best and best[0] == 0:
                break
        if best is None:
            break
        _, i, j = best
        _swap_rows(A, U, k, i)
        _swap_cols(A, V, k, j)
        while True:
            dirty = False
            for i in range(k + 1, m):
                if A[i][k]:
                    q, r = A[i][k].divmod(A[k][k])
                    _row_axpy(A, i, k, q)
                    if U is not None:
                        _row_axpy(U, i, k, q)
                    if r:
                        _swap_rows(A, U, k, i)
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(k + 1, n):
                if A[k][j]:
                    q, r = A[k][j].divmod(A[k][k])
                    _col_axpy(A, j, k, q)
                    if V is not None:
                        _col_axpy(V, j, k, q)
                    if r:
                        _swap_cols(A, V, k, j)
                        dirty = True
                        break
            if dirty:
                continue
            # pivot must divide the whole remaining block
            bad = None
            piv = A[k][k]
            for i in range(k + 1, m):
                for j in range(k + 1, n):
                    if A[i][j] and A[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            A[k] = [a + b for a, b in zip(A[k], A[bad])]
            if U is not None:
                U[k] = [a + b for a, b in zip(U[k], U[bad])]
        lc = A[k][k].lc
        if lc != 1:
            inv = 1 / lc
            A[k] = [x * inv for x in A[k]]
            if U is not None:
                U[k] = [x * inv for x in U[k]]
        factors.append(A[k][k])
        k += 1
    return SmithForm(tuple(factors), len(factors), (m, n), U, V)


def _swap_rows(A, U, a, b):
    if a != b:
        A[a], A[b] = A[b], A[a]
        if U is not None:
            U[a], U[b] = U[b], U[a]


def _swap_cols(A, V, a, b):
    if a != b:
        for r in A:
            r[a], r[b] = r[b], r[a]
        if V is not None:
            for r in V:
                r[a], r[b] = r[b], r[a]


def minimal_kernel_basis(P, field, degree_bound=None, nullity=None):
    """Minimal basis of the polynomial right kernel {v : P v = 0}.

    Returns (degree, vector) pairs sorted by degree; the degrees are the
    minimal (column) indices of P.  Degree by degree we solve the striped
    coefficient system and keep a complement of the shifts of vectors
    already found.
    """
    m = len(P)
    n = len(P[0]) if m else 0
    if nullity is None:
        nullity = n - generic_rank(P, field)
    if nullity == 0:
        return []
    coeffs = pm_coeffs(P, field)
    e = len(coeffs) - 1
    if degree_bound is None:
        # minimal indices sum to at most e * rank
        degree_bound = max(1, e * (n - nullity))
    sparse_blocks = [[{c: x for c, x in enumerate(row) if x != 0} for row in Pk] for Pk in coeffs]
    found = []
    for d in range(degree_bound + 1):
        rows = []
        for s in range(d + e + 1):
            for i in range(m):
                row = {}
                for j in range(max(0, s - e), min(d, s) + 1):
                    for c, x in sparse_blocks[s - j][i].items():
                        row[j * n + c] = x
                if row:
                    rows.append(row)
        _, kern = sparse_rank_nullspace(rows, n * (d + 1), field.one)
        shifts = EchelonBasis()
        for deg, vec in found:
            flat = _flatten(vec, deg, n)
            for sh in range(d - deg + 1):
                shifts.add({k + sh * n: x for k, x in flat.items()})
        for kv in kern:
            if shifts.add(kv):
                vec = _unflatten(kv, d, n, field)
                found.append((d, vec))
        if len(found) >= nullity:
            break
    if len(found) != nullity:
        raise ValueError("degree bound too small to span the kernel")
    lead = EchelonBasis()
    for deg, vec in found:
        lc = {i: x.coeffs[deg] for i, x in enumerate(vec) if x.degree == deg}
        if not lead.add(lc):
            raise AssertionError("kernel basis is not column reduced")
    return found


def _flatten(vec, deg, n):
    out = {}
    for i, x in enumerate(vec):
        for j, c in enumerate(x.coeffs):
            if c != 0:
                out[j * n + i] = c
    return out


def _unflatten(flat, d, n, field):
    cols = [[field.zero] * (d + 1) for _ in range(n)]
    for k, x in flat.items():
        j, i = divmod(k, n)
        cols[i][j] = x
    return [UniPoly(c, field) for c in cols]
