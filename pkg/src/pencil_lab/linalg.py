"""Exact linear algebra on lists of lists and sparse dict rows.

Matrices are plain row lists whose entries belong to a field from
:mod:`pencil_lab.fields` (or to ``UniPoly`` for the fraction-free route).
"""

from fractions import Fraction
from math import lcm


def identity(n, field):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def zeros(r, c, field):
    return [[field.zero] * c for _ in range(r)]


def transpose(M):
    return [list(col) for col in zip(*M)] if M else []


def matmul(A, B):
    if not A:
        return []
    Bt = transpose(B)
    return [[_dot(r, c) for c in Bt] for r in A]


def _dot(r, c):
    acc = None
    for x, y in zip(r, c):
        if x == 0 or y == 0:
            continue
        acc = x * y if acc is None else acc + x * y
    if acc is None:
        return r[0] * 0 if r else 0
    return acc


def matvec(A, v):
    return [_dot(r, v) for r in A]


def matadd(A, B):
    return [[x + y for x, y in zip(r, s)] for r, s in zip(A, B)]


def matscale(A, c):
    return [[x * c for x in r] for r in A]


def is_symmetric(A):
    return all(A[i][j] == A[j][i] for i in range(len(A)) for j in range(i))


def block_diag(blocks, field):
    n = sum(len(b) for b in blocks)
    out = zeros(n, n, field)
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[k + i][k + j] = x
        k += len(b)
    return out


def to_sparse(M):
    return [{j: x for j, x in enumerate(r) if x != 0} for r in M]


def _leading(row):
    return min(row)


def _axpy(row, c, other):
    """row -= c * other, in place."""
    for j, x in other.items():
        v = row.get(j)
        v = -c * x if v is None else v - c * x
        if v == 0:
            row.pop(j, None)
        else:
            row[j] = v


class EchelonBasis:
    """Incrementally maintained row-echelon basis of sparse vectors.

    Each stored row has leading coefficient 1 at its pivot column.
    """

    def __init__(self):
        self.pivots = {}

    def __len__(self):
        return len(self.pivots)

    def reduce(self, vec):
        row = dict(vec)
        while row:
            c = _leading(row)
            p = self.pivots.get(c)
            if p is None:
                return row
            _axpy(row, row[c], p)
        return row

    def add(self, vec):
        """Insert ``vec``; return True when it was independent of the basis."""
        row = self.reduce(vec)
        if not row:
            return False
        c = _leading(row)
        inv = 1 / row[c]
        self.pivots[c] = {j: x * inv for j, x in row.items()}
        return True

    def contains(self, vec):
        return not self.reduce(vec)

    def rref(self):
        """Fully reduced rows keyed by pivot column."""
        cols = sorted(self.pivots)
        red = {}
        for c in reversed(cols):
            row = dict(self.pivots[c])
            for j in [j for j in row if j != c and j in red]:
                if j in row:
                    _axpy(row, row[j], red[j])
            red[c] = row
        return red


def sparse_rank_nullspace(rows, ncols, one=1):
    """Rank and kernel basis (as sparse dicts) of sparse rows of width ``ncols``.

    ``one`` is the unit of the coefficient field.
    """
    eb = EchelonBasis()
    for r in rows:
        eb.add(r)
    red = eb.rref()
    free = [j for j in range(ncols) if j not in red]
    basis = []
    if free:
        free_set = set(free)
        # column f of the reduced rows, gathered once
        col_entries = {f: [] for f in free}
        for c, row in red.items():
            for j, x in row.items():
                if j in free_set:
                    col_entries[j].append((c, x))
        for f in free:
            v = {f: one}
            for c, x in col_entries[f]:
                v[c] = -x
            basis.append(v)
    return len(red), basis


def rank_nullspace(M, field, ncols=None):
    """Rank of a dense matrix and an exact basis of its right kernel (dense vectors)."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    rank, basis = sparse_rank_nullspace(to_sparse(M), ncols, field.one)
    out = []
    for v in basis:
        out.append([field(v.get(j, 0)) for j in range(ncols)])
    return rank, out


def rank(M):
    if not M:
        return 0
    eb = EchelonBasis()
    for r in to_sparse(M):
        eb.add(r)
    return len(eb)


def left_nullspace(M, field):
    return rank_nullspace(transpose(M), field, len(M))[1]


def solve(M, b, field):
    """One solution x of M x = b, or None if inconsistent."""
    aug = [list(r) + [y] for r, y in zip(M, b)]
    ncols = len(M[0]) if M else 0
    eb = EchelonBasis()
    for r in to_sparse(aug):
        eb.add(r)
    red = eb.rref()
    if ncols in red:
        return None
    x = [field.zero] * ncols
    for c, row in red.items():
        x[c] = field(row.get(ncols, 0))
    return x


def bareiss_rank(rows, exact_div):
    """Rank by fraction-free elimination over an integral domain.

    ``exact_div(a, b)`` must return the exact quotient a/b.
    """
    M = [list(r) for r in rows]
    if not M or not M[0]:
        return 0
    nr, nc = len(M), len(M[0])
    r = 0
    prev = None
    for col in range(nc):
        piv = next((i for i in range(r, nr) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][col]
        top = M[r]
        for i in range(r + 1, nr):
            row = M[i]
            a = row[col]
            for j in range(col + 1, nc):
                v = row[j] * p - a * top[j]
                row[j] = v if prev is None else exact_div(v, prev)
            row[col] = 0 * p
        prev = p
        r += 1
        if r == nr:
            break
    return r


def bareiss_det(M, exact_div):
    """Determinant of a square matrix over an integral domain, fraction-free."""
    M = [list(r) for r in M]
    n = len(M)
    sign = 1
    prev = None
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            return 0 * M[0][0]
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        p = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = M[i][j] * p - M[i][k] * M[k][j]
                M[i][j] = v if prev is None else exact_div(v, prev)
        prev = p
    d = M[n - 1][n - 1]
    return d if sign > 0 else -d


def kron(A, B):
    """Kronecker product of two dense matrices."""
    return [[a * b for a in ra for b in rb] for ra in A for rb in B]


def bareiss_rank_field(M, field):
    """Fraction-free rank over Q (integer Bareiss) or F_p."""
    if not M:
        return 0
    if field.characteristic == 0:
        rows = []
        for r in M:
            d = lcm(*[Fraction(x).denominator for x in r]) if r else 1
            rows.append([int(Fraction(x) * d) for x in r])
        return bareiss_rank(rows, lambda a, b: a // b)
    return bareiss_rank(M, lambda a, b: a / b)


def det(M, field):
    """Determinant by Gaussian elimination."""
    n = len(M)
    A = [list(r) for r in M]
    d = field.one
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            return field.zero
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = -d
        p = A[c][c]
        d = d * p
        inv = 1 / p
        for i in range(c + 1, n):
            f = A[i][c] * inv
            if f != 0:
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return d


def inverse(M, field):
    n = len(M)
    aug = [list(r) + [field.one if i == j else field.zero for j in range(n)] for i, r in enumerate(M)]
    eb = EchelonBasis()
    for r in to_sparse(aug):
        eb.add(r)
    red = eb.rref()
    if any(c not in red for c in range(n)):
        raise ZeroDivisionError("singular matrix")
    return [[field(red[i].get(n + j, 0)) for j in range(n)] for i in range(n)]
