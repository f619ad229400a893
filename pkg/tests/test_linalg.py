from fractions import Fraction

import pytest
import sympy

from pencil_lab.fields import QQ
from pencil_lab.linalg import (EchelonBasis, bareiss_det, bareiss_rank, bareiss_rank_field, det, inverse,
                               left_nullspace, matmul, matvec, rank, rank_nullspace, solve)

from conftest import F101


def _random_matrix(rng, r, c, F, density=0.6, rank_cap=None):
    if rank_cap == 0:
        return [[F.zero] * c for _ in range(r)]
    if rank_cap is not None:
        X = [[F(rng.randint(-3, 3)) for _ in range(rank_cap)] for _ in range(r)]
        Y = [[F(rng.randint(-3, 3)) for _ in range(c)] for _ in range(rank_cap)]
        return matmul(X, Y)
    return [[F(rng.randint(-3, 3)) if rng.random() < density else F.zero for _ in range(c)] for _ in range(r)]


def test_rank_and_nullspace_against_sympy(rng):
    for _ in range(60):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        M = _random_matrix(rng, r, c, QQ, rank_cap=rng.randint(0, min(r, c)))
        rk, basis = rank_nullspace(M, QQ)
        assert rk == sympy.Matrix(M).rank()
        assert len(basis) == c - rk
        for v in basis:
            assert all(x == 0 for x in matvec(M, v))


def test_dual_rank_routes(rng):
    for F in (QQ, F101):
        for _ in range(60):
            r, c = rng.randint(1, 7), rng.randint(1, 7)
            M = _random_matrix(rng, r, c, F, rank_cap=rng.randint(0, min(r, c)))
            assert rank(M) == bareiss_rank_field(M, F)


def test_bareiss_over_integers():
    M = [[2, 4, 6], [1, 3, 5], [3, 7, 11]]
    assert bareiss_rank(M, lambda a, b: a // b) == 2
    assert bareiss_det([[2, 1], [7, 4]], lambda a, b: a // b) == 1


def test_det_inverse_solve(rng):
    for _ in range(30):
        n = rng.randint(1, 5)
        M = _random_matrix(rng, n, n, QQ, density=1.0)
        d = det(M, QQ)
        assert d == Fraction(sympy.Matrix(M).det())
        assert bareiss_det(M, lambda a, b: a / b) == d
        if d:
            Mi = inverse(M, QQ)
            assert matmul(M, Mi) == [[QQ.one if i == j else QQ.zero for j in range(n)] for i in range(n)]
            b = [QQ(rng.randint(-5, 5)) for _ in range(n)]
            assert matvec(M, solve(M, b, QQ)) == b


def test_left_nullspace():
    M = [[QQ(1), QQ(2)], [QQ(2), QQ(4)], [QQ(0), QQ(1)]]
    basis = left_nullspace(M, QQ)
    assert len(basis) == 1
    w = basis[0]
    assert all(sum(w[i] * M[i][j] for i in range(3)) == 0 for j in range(2))


def test_echelon_basis_membership():
    E = EchelonBasis()
    assert E.add({0: QQ(1), 1: QQ(1)})
    assert E.add({1: QQ(1), 2: QQ(1)})
    assert not E.add({0: QQ(1), 2: QQ(-1)})
    assert E.contains({0: QQ(2), 1: QQ(4), 2: QQ(2)})
    assert not E.contains({2: QQ(1)})
