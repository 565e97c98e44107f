import pytest

from conftest import corpus_sources
from hyperq.algebra import trivial_algebra
from hyperq.catalog import BAND_SIG, GROUP_SIG, LATTICE_SIG, catalog_get
from hyperq.errors import FormulaError
from hyperq.satisfaction import (
    find_all_failures,
    holds_hyperidentity,
    holds_hyperquasi,
    holds_identity,
    holds_quasi,
    is_abelian,
    replay_condition_witness,
    replay_witness,
)
from hyperq.terms import format_term, parse_formula, transform_T

MEDIAL = "F(F(u,v),F(x,y)) = F(F(u,x),F(v,y))"
PROP32 = "F(x,y) = F(x,z) -> F(x,y) = F(x,G(y,z))"
SD_JOIN = "join(x,y) = join(x,z) -> join(x,y) = join(x, meet(y,z))"


def test_identity_commutativity_z2():
    z2 = catalog_get("z2")
    assert holds_identity(z2, parse_formula("plus(x,y) = plus(y,x)", GROUP_SIG)).holds


def test_identity_fails_on_rectangular_band():
    rb = catalog_get("rb22")
    v = holds_identity(rb, parse_formula("dot(x,y) = dot(y,x)", BAND_SIG))
    assert not v.holds
    assert v.witness.assignment == {"x": 0, "y": 1}
    assert replay_witness(rb, parse_formula("dot(x,y) = dot(y,x)", BAND_SIG), v.witness)


def test_identity_absorption_chain2():
    chain2 = catalog_get("chain2")
    assert holds_identity(
        chain2, parse_formula("join(x, meet(x,y)) = x", LATTICE_SIG)
    ).holds


def test_identity_rejects_premises_and_hypervars():
    z2 = catalog_get("z2")
    with pytest.raises(FormulaError, match="premises"):
        holds_identity(z2, parse_formula("x = y -> x = y", GROUP_SIG))
    with pytest.raises(FormulaError, match="hyper"):
        holds_identity(z2, parse_formula("F(x,y) = F(y,x)", GROUP_SIG))
    with pytest.raises(FormulaError, match="hyper"):
        holds_quasi(z2, parse_formula("F(x,y) = F(y,x)", GROUP_SIG))


def test_quasi_semidistributivity():
    n5 = catalog_get("n5")
    assert holds_quasi(n5, parse_formula(SD_JOIN, LATTICE_SIG)).holds
    m3 = catalog_get("m3")
    v = holds_quasi(m3, parse_formula(SD_JOIN, LATTICE_SIG))
    assert not v.holds
    assert v.witness.assignment == {"x": 1, "y": 2, "z": 3}


def test_quasi_trivial_algebra():
    t = trivial_algebra(GROUP_SIG)
    f = parse_formula("plus(x,y) = x -> y = zero()", GROUP_SIG)
    assert holds_quasi(t, f).holds


def test_hyperidentity_medial_z2():
    z2 = catalog_get("z2")
    assert holds_hyperidentity(z2, parse_formula(MEDIAL, GROUP_SIG)).holds


def test_hyperidentity_commutativity_fails_z2():
    z2 = catalog_get("z2")
    f = parse_formula("F(x,y) = F(y,x)", GROUP_SIG)
    v = holds_hyperidentity(z2, f)
    assert not v.holds
    assert format_term(v.witness.sigma["F"].witness) == "x1"
    assert v.witness.assignment == {"x": 0, "y": 1}
    assert replay_witness(z2, f, v.witness)


def test_hyperidentity_band_idempotence():
    rb = catalog_get("rb22")
    assert holds_hyperidentity(rb, parse_formula("F(x,x) = x", BAND_SIG)).holds


def test_hyperidentity_rejects_premises():
    z2 = catalog_get("z2")
    with pytest.raises(FormulaError, match="premises"):
        holds_hyperidentity(z2, parse_formula("x = y -> x = y", GROUP_SIG))


def test_hyperquasi_prop32():
    for name in ("chain2", "n5"):
        a = catalog_get(name)
        assert holds_hyperquasi(a, parse_formula(PROP32, LATTICE_SIG)).holds
    m3 = catalog_get("m3")
    f = parse_formula(PROP32, LATTICE_SIG)
    v = holds_hyperquasi(m3, f)
    assert not v.holds
    assert format_term(v.witness.sigma["F"].witness) == "join(x1,x2)"
    assert format_term(v.witness.sigma["G"].witness) == "meet(x1,x2)"
    assert v.witness.assignment == {"x": 1, "y": 2, "z": 3}
    assert replay_witness(m3, f, v.witness)


def test_hyperquasi_conclusion_repeats_premise():
    for name in ("z2", "m3", "rb22"):
        a = catalog_get(name)
        f = parse_formula("F(x) = F(y) -> F(x) = F(y)", a.sig)
        assert holds_hyperquasi(a, f).holds


def test_hyperquasi_on_plain_formula_agrees_with_quasi():
    # a hyper-mode formula may contain no hypervariables
    m3 = catalog_get("m3")
    f = parse_formula(SD_JOIN, LATTICE_SIG)
    v = holds_hyperquasi(m3, f)
    assert not v.holds
    assert v.witness.assignment == holds_quasi(m3, f).witness.assignment


def test_is_abelian_z4():
    assert is_abelian(catalog_get("z4"), 3).holds


def test_is_abelian_rb22():
    assert is_abelian(catalog_get("rb22"), 3).holds


def test_is_abelian_s3_fails_soundly():
    s3 = catalog_get("s3")
    v = is_abelian(s3, 2)
    assert not v.holds
    assert replay_condition_witness(s3, v.witness)


def test_is_abelian_chain2_fails():
    v = is_abelian(catalog_get("chain2"), 2)
    assert not v.holds
    assert replay_condition_witness(catalog_get("chain2"), v.witness)


def test_find_all_failures_m3_cap1():
    m3 = catalog_get("m3")
    w = find_all_failures(m3, parse_formula(PROP32, LATTICE_SIG), cap=1)
    assert len(w) == 1
    assert format_term(w[0].sigma["F"].witness) == "join(x1,x2)"
    assert format_term(w[0].sigma["G"].witness) == "meet(x1,x2)"


def test_find_all_failures_n5_empty():
    n5 = catalog_get("n5")
    assert find_all_failures(n5, parse_formula(PROP32, LATTICE_SIG), cap=5) == []


def test_find_all_failures_commutativity_projections():
    z2 = catalog_get("z2")
    f = parse_formula("F(x,y) = F(y,x)", GROUP_SIG)
    ws = find_all_failures(z2, f, cap=10)
    assert len(ws) == 4
    sigmas = {format_term(w.sigma["F"].witness) for w in ws}
    assert sigmas == {"x1", "x2"}
    for w in ws:
        assert replay_witness(z2, f, w)


def test_find_all_failures_cap_respected():
    z2 = catalog_get("z2")
    f = parse_formula("F(x,y) = F(y,x)", GROUP_SIG)
    assert len(find_all_failures(z2, f, cap=2)) == 2


def test_degenerate_premise_agreement():
    # zero-premise formulas: quasi == identity, hyperquasi == hyperidentity
    for kind, sig, names in (
        ("group", GROUP_SIG, ("z1", "z2", "z3")),
        ("lattice", LATTICE_SIG, ("chain2",)),
        ("band", BAND_SIG, ("rb11", "rb12")),
    ):
        for src in corpus_sources(kind):
            f = parse_formula(src, sig)
            if f.premises:
                continue
            for name in names:
                a = catalog_get(name)
                if f.is_hyper:
                    assert (
                        holds_hyperquasi(a, f).holds
                        == holds_hyperidentity(a, f).holds
                    )
                else:
                    assert holds_quasi(a, f).holds == holds_identity(a, f).holds


def test_monotonicity_under_T():
    # hyper-satisfaction of T(q) implies plain satisfaction of q
    for kind, sig, names in (
        ("group", GROUP_SIG, ("z2", "z3")),
        ("lattice", LATTICE_SIG, ("chain2",)),
        ("band", BAND_SIG, ("rb12", "rb22")),
    ):
        for src in corpus_sources(kind):
            q = parse_formula(src, sig)
            if q.is_hyper:
                continue
            hyper, _ = transform_T(q)
            for name in names:
                a = catalog_get(name)
                if holds_hyperquasi(a, hyper).holds:
                    assert holds_quasi(a, q).holds, (name, src)


def test_prop31_cross_check():
    # the term condition agrees with the hyper-quasi-identity pair
    tc = {
        2: "F(u,x1) = F(u,y1) -> F(v,x1) = F(v,y1)",
        3: "F(u,x1,x2) = F(u,y1,y2) -> F(v,x1,x2) = F(v,y1,y2)",
    }
    tc_rev = {
        2: "F(v,x1) = F(v,y1) -> F(u,x1) = F(u,y1)",
        3: "F(v,x1,x2) = F(v,y1,y2) -> F(u,x1,x2) = F(u,y1,y2)",
    }
    for name in ("z1", "z2", "z3", "z4", "chain2", "rb11", "rb12", "rb22"):
        a = catalog_get(name)
        for k in (2, 3):
            direct = is_abelian(a, k).holds
            hyper = all(
                holds_hyperquasi(a, parse_formula(tc[m], a.sig)).holds
                and holds_hyperquasi(a, parse_formula(tc_rev[m], a.sig)).holds
                for m in range(2, k + 1)
            )
            assert direct == hyper, (name, k)


def test_witness_soundness_across_corpus():
    for kind, sig, names in (
        ("group", GROUP_SIG, ("z2", "z3")),
        ("lattice", LATTICE_SIG, ("chain2",)),
        ("band", BAND_SIG, ("rb12",)),
    ):
        for src in corpus_sources(kind):
            f = parse_formula(src, sig)
            for name in names:
                a = catalog_get(name)
                if f.is_hyper:
                    v = holds_hyperquasi(a, f)
                else:
                    v = holds_quasi(a, f)
                if not v.holds:
                    assert replay_witness(a, f, v.witness), (name, src)
