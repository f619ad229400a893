import pytest

from pencil_lab.fields import QQ
from pencil_lab.linalg import rank
from pencil_lab.pencil import (InvalidPencil, SymmetricPencil, compressibility, format_segre, generic_corank,
                               hessian_pencil, normal_form, normalize_homography, parse_segre, pencil_invariants,
                               recover_pencil, reduce_incompressible, regular_part, segre_data)
from pencil_lab.poly import UniPoly, parse_forms
from pencil_lab.smith import smith_form

from conftest import F101


def pencil(text, nvars=None, field=QQ):
    return hessian_pencil(*parse_forms(text, nvars, field))


P5_IRREGULAR = "x1*x5 + x3*x4, x2*x4 + x0*x5"


def test_hessian_matrices():
    P = pencil("x0^2, x1^2")
    assert P.A == ((2, 0), (0, 0)) and P.B == ((0, 0), (0, 2))
    P = pencil("x0*x2, 2*x0*x1 + x3^2")
    assert P.A[0][2] == P.A[2][0] == 1 and rank(P.A) == 2
    assert P.B[0][1] == P.B[1][0] == 2 and P.B[3][3] == 2 and rank(P.B) == 3
    P = pencil("x0*x1 + x2*x3, x0^2 + x1^2")
    assert P.A[0][1] == P.A[2][3] == 1
    assert P.B == ((2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 0, 0), (0, 0, 0, 0))


@pytest.mark.parametrize("text", ["x0^2, 3*x0^2", "x0*x1, x0*x1*x2", "x0 + x1, x1^2"])
def test_invalid_pencils(text):
    with pytest.raises(InvalidPencil):
        pencil(text)


def test_asymmetric_rejected():
    with pytest.raises(InvalidPencil):
        SymmetricPencil([[0, 1], [0, 0]], [[1, 0], [0, 1]])


def test_compressibility():
    assert compressibility(pencil("x0^2, x1^2", 4))[0] == 2
    assert compressibility(pencil("x0*x2, 2*x0*x1 + x3^2"))[0] == 0
    assert compressibility(pencil("x0^2, x1^2", 6))[0] == 4


def test_reduce_incompressible():
    P, m = pencil("x0*x2, 2*x0*x1 + x3^2"), None
    Q, m = reduce_incompressible(P)
    assert m == 0 and Q is P
    Q, m = reduce_incompressible(pencil("x0^2, x1^2", 6))
    assert (Q.n, m) == (1, 4)
    Q, m = reduce_incompressible(pencil("x0^2 + x2^2, x1^2 + x2^2", 4))
    assert (Q.n, m) == (2, 1)
    assert pencil_invariants(Q).segre_symbol() == "[1,1,1]"


def test_generic_corank_dual_routes():
    cases = [(recover_pencil(0, [], parse_segre("[1,1,1,1]")), 0),
             (pencil("x0*x2, 2*x0*x1 + x3^2"), 1),
             (pencil(P5_IRREGULAR), 2)]
    for P, want in cases:
        assert generic_corank(P) == want
        assert generic_corank(P, method="bareiss") == want


def test_generic_corank_random_agreement(rng):
    from pencil_lab.reproduce import _low_rank_symmetric
    for _ in range(30):
        N = rng.randint(2, 7)
        try:
            P = SymmetricPencil(_low_rank_symmetric(N, F101, rng), _low_rank_symmetric(N, F101, rng), F101)
        except InvalidPencil:
            continue
        assert generic_corank(P) == generic_corank(P, method="bareiss")


def test_normalize_homography():
    P = recover_pencil(0, [], parse_segre("[1,1,1,1]"), points=[1, 2, 3, 4])
    Q, h = normalize_homography(P)
    assert h == ((1, 0), (0, 1)) and Q is P
    # determinant z1^4: the point (0:1) is the only singular member, and infinity is singular
    D = SymmetricPencil([[1, 0], [0, 0]], [[0, 0], [0, 1]])
    Dp = SymmetricPencil([[0, 0], [0, 1]], [[1, 0], [0, 0]])
    Q, h = normalize_homography(Dp)
    assert rank(list(map(list, Q.B))) == 2
    assert rank(list(map(list, normalize_homography(D)[0].B))) == 2


def test_segre_examples():
    sd = segre_data(pencil("x0*x1 + x2*x3, x0^2 + x2^2"))
    assert len(sd.clusters) == 1 and sd.clusters[0].parts == ((2, 2),)
    assert (sd.r1, sd.u, sd.v) == (0, 4, 0)
    inv = pencil_invariants(pencil("x0*x2, 2*x0*x1 + x3^2"))
    assert (inv.segre_symbol(), inv.r1, inv.u, inv.v, inv.c, inv.r0) == ("[1]", 1, 2, 1, (1,), 2)
    inv = pencil_invariants(pencil(P5_IRREGULAR))
    assert (inv.clusters, inv.u, inv.v, inv.c) == ((), 2, 2, (1, 1))
    # the forms printed in the free table for the [(2^2)] row actually give [(1^2),1,1]
    assert pencil_invariants(pencil("x0*x1 + x2*x3, x0^2 + x1^2")).segre_symbol() == "[(1^2),1,1]"


def test_invariant_identities_on_examples():
    texts = ["x0^2, x1^2", "x0*x1, x2*x3", "x0^2 + x2^2, x1^2 + x2^2", P5_IRREGULAR,
             "x0*x1 + x2*x3 + x4^2, x0*x2 + x3^2", "x0^2, x0*x1"]
    for t in texts:
        for nv in (None, 7):
            inv = pencil_invariants(pencil(t, nv))
            assert inv.u + inv.v + inv.r1 == inv.n + 1
            assert inv.u - inv.v == sum(c.point_degree * a * p for c in inv.clusters for a, p in c.parts)
            assert inv.v == sum(inv.c)
            assert inv.m == sum(1 for x in inv.degree_vector if x == 0)
            assert inv.r0 == inv.r1 + max((c.sum_p for c in inv.clusters), default=0)
            if inv.m == 0:
                assert 3 * inv.r1 <= inv.n + 1


def test_irrational_cluster_over_Q():
    P = pencil("x0^2 - 2*x1^2, x0*x1")
    inv = pencil_invariants(P)
    assert inv.segre_symbol() == "[1,1]" and len(inv.clusters) == 1
    assert inv.clusters[0].point_degree == 2


def test_parse_and_format_segre():
    assert parse_segre("[(1²),(1²)]") == [((1, 2),), ((1, 2),)]
    assert parse_segre("[(6^3,3^4,2^3)]") == [((6, 3), (3, 4), (2, 3))]
    assert parse_segre("[]") == []
    assert parse_segre("[(2,1),1]") == [((2, 1), (1, 1)), ((1, 1),)]
    for s in ["[1,1,1,1]", "[(2,1^2)]", "[(3^2,1^4),(4^5,3^2,2^3)]", "[(1^2),2]"]:
        assert sorted(parse_segre(format_segre(parse_segre(s)))) == sorted(parse_segre(s))
    for bad in ["(1,1", "[a]", "[0]", "[(2,2]"]:
        with pytest.raises(ValueError):
            parse_segre(bad)


def test_recover_errors():
    with pytest.raises(ValueError):
        recover_pencil(1, [0], [])
    with pytest.raises(ValueError):
        recover_pencil(2, [1], [])
    with pytest.raises(ValueError):
        recover_pencil(0, [], [])
    with pytest.raises(ValueError):
        recover_pencil(0, [], parse_segre("[1,1]"), points=[3, 3])


def test_recover_examples():
    inv = pencil_invariants(recover_pencil(1, [1], parse_segre("[1]")))
    assert (inv.n, inv.r1, inv.c, inv.segre_symbol()) == (3, 1, (1,), "[1]")
    inv = pencil_invariants(recover_pencil(2, [1, 1], []))
    assert (inv.n, inv.u, inv.v, inv.clusters) == (5, 2, 2, ())
    P = normal_form(2, [0, 1], parse_segre("[(2,1)]"))
    inv = pencil_invariants(P)
    assert (inv.n, inv.m, inv.degree_vector, inv.segre_symbol()) == (6, 1, (0, 1), "[(2,1)]")


def test_recover_with_irreducible_point():
    t = UniPoly.t(QQ)
    q = t * t + 1
    P = recover_pencil(0, [], [((2, 1),), ((1, 1),)], points=[q, QQ(3)])
    inv = pencil_invariants(P)
    assert sorted(inv.point_parts()) == sorted([((2, 1),), ((2, 1),), ((1, 1),)])


def test_regular_part():
    with pytest.raises(ValueError, match="empty regular part"):
        regular_part(pencil_invariants(pencil(P5_IRREGULAR)))
    inv = pencil_invariants(recover_pencil(0, [], parse_segre("[(2^2)]")))
    R = regular_part(inv)
    S = smith_form(R.polymatrix(), QQ, transforms=False)
    assert [f.degree for f in S.invariant_factors] == [0, 0, 2, 2]
    inv = pencil_invariants(recover_pencil(1, [1], parse_segre("[2,1]")))
    R = regular_part(inv)
    assert R.size == 3 and pencil_invariants(R).segre_symbol() == "[2,1]"


def test_round_trip_large():
    P = recover_pencil(3, [1, 2, 2], parse_segre("[(3^2,1^4),(4^5,3^2,2^3)]"))
    inv = pencil_invariants(P)
    assert (inv.n, inv.u, inv.v, inv.r1, inv.c) == (54, 47, 5, 3, (1, 2, 2))
    assert sorted(inv.point_parts()) == sorted(parse_segre("[(3^2,1^4),(4^5,3^2,2^3)]"))


def test_congruence_invariance(rng):
    from pencil_lab.reproduce import _random_invertible
    P = normal_form(2, [0, 1], parse_segre("[(2,1),1]"), field=F101)
    base = pencil_invariants(P)
    for _ in range(5):
        Q = P.congruent(_random_invertible(P.size, F101, rng))
        Q = Q.apply_homography(((F101(2), F101(5)), (F101(1), F101(7))))
        inv = pencil_invariants(Q)
        assert (inv.r1, inv.degree_vector, sorted(inv.point_parts()), inv.r0, inv.m) == \
            (base.r1, base.degree_vector, sorted(base.point_parts()), base.r0, base.m)
