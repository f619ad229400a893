import pytest

from pencil_lab.fields import QQ
from pencil_lab.pencil import hessian_pencil, normal_form, parse_segre, pencil_invariants, recover_pencil
from pencil_lab.poly import parse_forms
from pencil_lab.regseq import RegSequence, betti_truncated
from pencil_lab.verdicts import (FREE_TABLE, atlas, chern_from_exponents, chern_from_resolution, ext_support,
                                 ext_support_ambient, freeness, gpdim, invariants_from_signature,
                                 jacobian_report, p3_classify, p3_row, partitions, pdim, segre_symbols,
                                 stability_verdict)


def inv_of(text, nvars=None):
    return pencil_invariants(hessian_pencil(*parse_forms(text, nvars)))


def inv_segre(sym):
    return pencil_invariants(recover_pencil(0, [], parse_segre(sym)))


P5 = "x1*x5 + x3*x4, x2*x4 + x0*x5"


def test_stability_cases():
    assert stability_verdict(inv_of("x0^2, x1^2", 4)).case == "trivial-sum"
    assert stability_verdict(inv_segre("[(1^3),1]")).case == "stable"
    assert stability_verdict(inv_segre("[(1^2),(1^2)]")).case == "strictly-semistable"
    assert stability_verdict(inv_segre("[1,1,1,1]")).case == "stable"
    assert stability_verdict(inv_of(P5)).case == "stable"
    # one double hyperplane but compressible
    assert stability_verdict(inv_of("x0^2, x1^2 + x2^2", 4)).case == "unstable"
    assert stability_verdict(inv_of("x0^2, x1^2")).case == "small-n"


def test_ext_support_and_pdim():
    inv = pencil_invariants(recover_pencil(0, [], parse_segre("[(6^3,3^4,2^3)]")))
    assert sorted(ext_support(inv)) == [24, 27, 31] and pdim(inv) == 31
    assert sorted(ext_support(inv_of(P5))) == [1]
    assert pdim(inv_segre("[1,1,1,1]")) == 1
    assert pdim(inv_segre("[(1^2),(1^2)]")) == 0


def test_ext_support_frames_agree():
    for text, nv in [("x0*x1, x2*x3", 6), ("x0^2 + x2^2, x1^2 + x2^2", 5), (P5, 8)]:
        inv = inv_of(text, nv)
        assert ext_support(inv) == ext_support_ambient(inv)


def test_gpdim():
    assert gpdim(inv_segre("[(1^2),(1^2)]")) == 0
    assert gpdim(inv_segre("[1,1,1,1]")) == 1
    assert gpdim(inv_of(P5)) == 1


def test_gpdim_irregular_p5_against_betti():
    forms = parse_forms(P5)
    betti = betti_truncated(RegSequence(tuple(forms), True, ""), D=5)
    assert betti.complete and betti.identity_ok
    assert betti.length() == gpdim(inv_of(P5)) == 1


def test_freeness_rows():
    for n in (3, 4, 6):
        fr = freeness(inv_of("x0*x1, x2*x3", n + 1))
        assert fr.is_free and sorted(fr.exponents) == sorted([0] * (n - 3) + [-1, -1])
        fr = freeness(inv_of("x0^2 + x2^2, x1^2 + x2^2", n + 1))
        assert fr.is_free and sorted(fr.exponents) == sorted([0] * (n - 2) + [-2])
    assert not freeness(inv_segre("[2,1,1]")).is_free
    assert len(FREE_TABLE) == 11


def test_p3_rows():
    row = p3_row(inv_segre("[3,1]"))
    assert (tuple(row["chern"]), row["label"], row["pdim"]) == ((-2, 3, 4), "s", 1)
    row = p3_row(inv_segre("[(2,1),1]"))
    assert (tuple(row["chern"]), row["label"]) == ((-2, 2, 2), "sss")
    # the middle term O(-2)^2 + O(-1) has rank 3, so the kernel is a single O(-3)
    assert row["resolution"] == "0 -> O(-3) -> O(-2)^2 ⊕ O(-1) -> T -> 0"
    row = p3_classify(hessian_pencil(*parse_forms("x0*x2, 2*x0*x1 + x3^2")))
    assert row["exponents"] == [-1, -1] and row["label"] == "free"
    with pytest.raises(ValueError):
        p3_row(inv_of(P5))


def test_chern_helpers():
    assert chern_from_resolution([{-2: 4}, {-3: 2}], 3) == (-2, 3, 4)
    assert chern_from_resolution([{-2: 2, -1: 1}, {-3: 1}], 3) == (-2, 2, 2)
    assert chern_from_resolution([{-1: 3}, {-2: 1}], 3) == (-1, 1, 1)
    assert chern_from_exponents([-1, -1], 3) == (-2, 1, 0)
    # the cotangent-like check: c(O(-1)^4)/c(O(-2)) on P^3
    assert chern_from_resolution([{-1: 4}, {-2: 1}], 3) == (-2, 2, 0)


def test_jacobian_report_big_example():
    inv = pencil_invariants(recover_pencil(3, [1, 2, 2], parse_segre("[(3^2,1^4),(4^5,3^2,2^3)]")))
    rep = jacobian_report(inv)
    scroll = [c for c in rep.components if c["kind"] == "scroll"]
    assert scroll == [{"kind": "scroll", "dimension": 3, "degree": 5}]
    linear = [c for c in rep.components if c["kind"] == "linear-hat"]
    pieces = sorted((c["cluster"], c["base_dimension"], c["fiber_length"]) for c in linear)
    # (4^5,3^2,2^3): simple P^4, simple P^6, double P^9; (3^2,1^4): double line, simple P^5
    assert pieces == [(0, 4, 1), (0, 6, 1), (0, 9, 2), (1, 1, 2), (1, 5, 1)]


def test_enumeration_helpers():
    assert len(list(partitions(4))) == 5
    assert len(segre_symbols(4)) == 14  # includes [(1^4)], dropped as degenerate by the atlas


def test_atlas_counts():
    rows = atlas(3, "regular")
    assert len(rows) == 13
    assert sorted(r["pdim"] for r in rows) == [0, 0] + [1] * 11
    rows = atlas(3, "irregular")
    assert len(rows) == 9
    assert sum(1 for r in rows if r["m"] == 0) == 1
    rows = atlas(5, "irregular", "splitting")
    assert len(rows) == 12
    assert sum(1 for r in rows if (r["u"], r["v"]) == (2, 2)) == 2
    with pytest.raises(ValueError):
        atlas(40)


def test_signature_matches_explicit_pencil():
    for r1, dv, sym in [(0, [], "[(2,1),1]"), (2, [0, 1], "[2]"), (1, [1], "[1]"), (3, [0, 1, 2], "[]")]:
        a = invariants_from_signature(r1, dv, parse_segre(sym))
        b = pencil_invariants(normal_form(r1, dv, parse_segre(sym)))
        assert (a.n, a.m, a.r0, a.r1, a.u, a.v, a.degree_vector, a.double_hyperplanes) == \
            (b.n, b.m, b.r0, b.r1, b.u, b.v, b.degree_vector, b.double_hyperplanes)
