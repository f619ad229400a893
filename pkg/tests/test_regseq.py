import pytest

from pencil_lab.fields import QQ
from pencil_lab.poly import MultiPoly, parse_forms, parse_poly
from pencil_lab.regseq import (NotRegular, RegSequence, betti_truncated, compressibility_general, contract,
                               freeness_up_to, hilbert_Q, minors_content, rational_form, stability_bounds,
                               syzygies, syzygy_dim, web_power_lift)
from pencil_lab.reproduce import nonfree_family


def seq(text, nvars=None):
    return RegSequence.from_forms(parse_forms(text, nvars))


def test_regularity_checks():
    assert not seq("x0*x2, x0*x1").regular
    assert seq("x0*x1, x2^3 + x3^3").regular
    assert seq("x0^2, x1^2, x2^2", 4).regular
    assert not seq("x0*x1, x0*x2, x1*x2", 4).regular
    with pytest.raises(ValueError):
        seq("x0^2 + x1")
    with pytest.raises(NotRegular):
        RegSequence.from_forms([MultiPoly.zero(3), parse_poly("x0", 3)])


def test_syzygies_annihilate():
    s = seq("x0*x1 + x2*x3, x0*x1*x2*x3")
    J = s.jacobian()
    for a in range(3):
        for nu in syzygies(s, a):
            for row in J:
                assert not contract(row, nu)
    assert s.euler_check()


def test_compressibility_general():
    assert compressibility_general(seq("x0^2, x1^2", 4)) == 2
    assert compressibility_general(seq("x0*x1 + x2*x3, x0*x1*x2*x3")) == 0
    # invariant under a linear change of coordinates
    M = [[1, 2, 0, 0], [0, 1, 1, 0], [3, 0, 1, 0], [0, 0, 0, 1]]
    forms = [f.linear_change(M) for f in parse_forms("x0^2, x1^2", 4)]
    assert compressibility_general(RegSequence.from_forms(forms)) == 2


def test_minors_content():
    mc = minors_content(seq("x0*x1 + x2*x3, x0*x1*x2*x3"))
    assert mc.l == 2 and mc.common_factor == parse_poly("x0*x1 - x2*x3", 4)
    mc = minors_content(seq("x0^2, x1^2 + x2^2 + x3^2"))
    assert mc.l == 1 and mc.common_factor == parse_poly("x0", 4)
    mc = minors_content(seq("x0*x1, x0^2*x1 + x2^3 + x3^3"))
    assert (mc.l, mc.c1_T) == (0, -3)


def test_hilbert_fits():
    h = hilbert_Q(seq("x0^2 + x1^2 + x2^2 + x3^2, x0^2 + 2*x1^2 + 3*x2^2 + 4*x3^2"))
    assert (h.dimension, h.degree) == (0, 4)
    h = hilbert_Q(seq("x0^2, x1^2 + x2^2 + x3^2"))
    assert h.residual_dimension is not None
    h = hilbert_Q(seq("x0*x1 + x2*x3, x0*x1*x2*x3"))
    assert (h.residual_dimension, h.residual_degree) == (1, 2)


def test_betti_examples():
    b = betti_truncated(seq("x0^2 + x1^2 + x2^2 + x3^2, x0^2 + 2*x1^2 + 3*x2^2 + 4*x3^2"), D=6)
    assert b.shape() == [{2: 4}, {3: 2}] and b.complete and b.identity_ok
    b = betti_truncated(seq("x0*x1, x2*x3"), D=5)
    assert b.shape() == [{1: 2}]
    b = betti_truncated(nonfree_family(0), D=7)
    assert b.shape() == [{3: 5}, {4: 4}, {5: 1}]


def test_betti_flags_small_bound():
    b = betti_truncated(nonfree_family(0), D=3)
    assert b.possibly_truncated
    assert not betti_truncated(nonfree_family(0), D=7).possibly_truncated


def test_freeness_examples():
    fu = freeness_up_to(seq("x0*x1, x2^3 + x3^3"), D=4)
    assert (fu.verdict, fu.exponents) == ("free", (-1, -2))
    assert freeness_up_to(seq("x0*x1, x0^2*x1 + x2^3 + x3^3"), D=4).verdict == "not-free"
    fu = freeness_up_to(seq("x0, x3^2", 4), D=3)
    assert (fu.verdict, fu.exponents) == ("free", (0, 0))
    fu = freeness_up_to(seq("x0, x0*x2 + x3^2", 4), D=3)
    assert (fu.verdict, fu.exponents) == ("free", (0, -1))


def test_freeness_undetermined_when_truncated():
    # a free sequence whose second generator lies above the bound
    fu = freeness_up_to(seq("x0*x1, x2^3 + x3^3"), D=1)
    assert fu.verdict == "undetermined"


def test_web_power_lift():
    s = seq("x0*x1, x2*x3")
    tau, ok = web_power_lift(s)
    assert tau.forms == s.forms and ok
    tau, ok = web_power_lift(seq("x0, x3^2", 4))
    assert [f.degree for f in tau.forms] == [2, 2] and ok
    tau, ok = web_power_lift(seq("x0*x1, x2^3 + x3^3"), D=5)
    assert [f.degree for f in tau.forms] == [6, 6] and ok


def test_rational_form():
    w = rational_form(seq("x0*x1, x2*x3"))
    assert w == [parse_poly(t, 4) for t in ["-2*x1*x2*x3", "-2*x0*x2*x3", "2*x0*x1*x3", "2*x0*x1*x2"]]
    w = rational_form(seq("x0^2, x1^2", 4))
    assert w[:2] == [parse_poly("-4*x0*x1^2", 4), parse_poly("4*x0^2*x1", 4)] and not w[2] and not w[3]
    s = seq("x0*x1 + x2*x3, x0*x1*x2*x3")
    w = rational_form(s)
    x = [MultiPoly.variable(i, 4) for i in range(4)]
    assert not contract(w, x)
    for a in range(3):
        for nu in syzygies(s, a):
            assert not contract(w, nu)
    with pytest.raises(NotRegular):
        rational_form(RegSequence.from_forms(parse_forms("x0*x2, x0*x1")))


def test_stability_bounds():
    s = seq("x0^2 + x1^2 + x2^2 + x3^2, x0^2 + 2*x1^2 + 3*x2^2 + 4*x3^2")
    assert stability_bounds(s).verdict == "semistable"
    assert stability_bounds(nonfree_family(0)).verdict == "inconclusive"
    assert stability_bounds(seq("x0*x1 + x2*x3, x0*x1*x2*x3")).verdict == "inconclusive"
    assert stability_bounds(seq("x0^3 + x1^3 + x2^3 + x3^3, x0^3 + 2*x1^3 + 3*x2^3 + 4*x3^3")).verdict == "stable"
