import pytest

from solvquot.counting import (
    CountError,
    aut_order_by_lifting,
    closed_form_delta,
    closed_form_eulerian,
    delta,
    delta_s4,
    dihedral_prime_delta,
    enumerate_epis_to_table,
    epi_binary_dihedral_recursive,
    epi_count,
    epi_count_q2p,
    epi_dihedral_recursive,
    epi_levels,
    epi_maps,
    gaschutz_eulerian,
    hom_count,
    table1_delta,
)
from solvquot.groups import builtin_group
from solvquot.presentations import builtin_from_string, builtin_presentation

F1 = builtin_presentation("free", 1)
F2 = builtin_presentation("free", 2)
F3 = builtin_presentation("free", 3)
B3 = builtin_presentation("braid", 3)
B4 = builtin_presentation("braid", 4)
B5 = builtin_presentation("braid", 5)
KLEIN = builtin_presentation("klein")
S3 = builtin_group("S(3)")
S4 = builtin_group("S(4)")
D8 = builtin_group("D(8)")
Q8 = builtin_group("Q(8)")


def test_free_group_counts():
    assert hom_count(F2, S3) == 36
    rep = epi_count(F2, S3, with_hom=True)
    assert (rep.hom, rep.epi, rep.aut, rep.delta) == (36, 18, 6, 3)
    rep = epi_count(F2, S4)
    assert (rep.epi, rep.aut, rep.delta) == (216, 24, 9)


def test_coprime_product_formula():
    z6 = builtin_group("Z(6)")
    assert hom_count(F2, z6) == 36  # hom into Z_2 times hom into Z_3
    z3d8 = builtin_group("Z(3)*D(8)")
    d = epi_count(F2, z3d8).delta
    assert d == epi_count(F2, builtin_group("Z(3)")).delta * epi_count(F2, D8).delta


def test_lift_statistics_through_s4():
    # 18 epimorphisms onto S_3, each with 16 lifts of which 12 survive
    levels = list(epi_levels(F2, S4))
    stats = levels[-1][2]
    assert stats["epi_in"] == 18 and stats["epi_out"] == 216
    assert 216 == 18 * (16 - 4)


def test_epi_lift():
    from solvquot.counting import epi_lift

    for images in epi_maps(F2, S4, level=2):
        out = epi_lift(F2, S4, 2, images)
        assert len(out) == 12  # 16 lifts minus the 4 complements
        assert all(m.level == 3 and m.is_surjective() for m in out[:3])
    for images in epi_maps(KLEIN, S4, level=2):
        assert epi_lift(KLEIN, S4, 2, images) == []
    # a non-liftable epimorphism into a non-split layer gives nothing
    bs15 = builtin_presentation("bs", 1, 5)
    for images in epi_maps(bs15, D8, level=2):
        assert epi_lift(bs15, D8, 2, images) == []
    with pytest.raises(ValueError):
        epi_lift(F2, S4, 2, (0, 0))


def test_klein_lifts():
    levels = list(epi_levels(KLEIN, S4))
    stats = levels[-1][2]
    assert stats["epi_in"] == 6 and stats["epi_out"] == 0
    assert epi_count(KLEIN, S4).delta == 0
    assert epi_count(KLEIN, S3).delta == 1


def test_braid_counts():
    assert hom_count(B3, S3) == 12
    assert epi_count(B3, S3).epi == 6
    assert epi_count(B3, S4).delta == 1
    assert epi_count(B4, S4).delta == 3
    for spec in ["S(3)", "D(8)", "A(4)"]:
        assert epi_count(B5, builtin_group(spec)).delta == 0
    assert epi_count(B5, builtin_group("Z(6)")).delta == 1


def test_closed_form_eulerian_dihedral():
    assert closed_form_eulerian("dihedral", (3,), 2) == 18
    assert closed_form_eulerian("dihedral", (4,), 2) == 24
    for m in range(2, 13):
        tw = builtin_group("D(%d)" % (2 * m))
        for n in (1, 2, 3):
            got = epi_count(builtin_presentation("free", n), tw, with_aut=False).epi
            assert got == closed_form_eulerian("dihedral", (m,), n)


def test_closed_form_eulerian_binary_dihedral():
    assert closed_form_eulerian("binary_dihedral", (2,), 2) == 24
    for m in range(1, 7):
        tw = builtin_group("Dstar(%d)" % (4 * m))
        for n in (1, 2, 3):
            got = epi_count(builtin_presentation("free", n), tw, with_aut=False).epi
            assert got == closed_form_eulerian("binary_dihedral", (m,), n)


def test_closed_form_surface_families():
    # the displayed forms are valid for m odd or m = 2 mod 4; for 4 | m the
    # engine (confirmed by the brute-force oracle) disagrees with them, so
    # that corner is rejected
    for g in (1, 2):
        Pg = builtin_presentation("surface", g)
        Pn = builtin_presentation("nonorientable", 2 * g)
        for m in (1, 2, 3, 6, 10, 15):
            tw = builtin_group("D(%d)" % (2 * m)) if m > 1 else builtin_group("Z(2)")
            a = epi_count(Pg, tw, with_aut=False).epi
            b = epi_count(Pn, tw, with_aut=False).epi
            assert a == closed_form_eulerian("surface", (g, m), None)
            assert b == closed_form_eulerian("nonorientable", (2 * g, m), None)
    with pytest.raises(ValueError):
        closed_form_eulerian("surface", (2, 4), None)
    with pytest.raises(ValueError):
        closed_form_eulerian("nonorientable", (2, 8), None)


def test_alternate_drivers_match_engine():
    for label in ["free(2)", "bs(1,3)", "bs(2,4)", "klein", "braid(3)", "surface(2)"]:
        P = builtin_from_string(label)
        ms = (2, 3, 4, 6, 8, 9, 12) if P.n <= 2 else (2, 3, 4, 6)
        for m in ms:
            a = epi_dihedral_recursive(P, m)
            b = epi_count(P, builtin_group("D(%d)" % (2 * m)), with_aut=False).epi
            assert a == b, (label, m)
        for m in (1, 2, 3, 4, 6):
            a = epi_binary_dihedral_recursive(P, m)
            b = epi_count(P, builtin_group("Dstar(%d)" % (4 * m)), with_aut=False).epi
            assert a == b, (label, m)


def test_bs_delta_tables():
    for m in range(1, 7):
        for n in range(m, 7):
            P = builtin_presentation("bs", m, n)
            assert epi_count(P, D8).delta == closed_form_delta("bs_d8", (m, n))
            assert epi_count(P, Q8).delta == closed_form_delta("bs_q8", (m, n))
    assert closed_form_delta("bs_d8", (2, 6)) == 3
    assert closed_form_delta("bs_d8", (1, 3)) == 1
    assert closed_form_delta("bs_d8", (1, 5)) == 0


def test_parafree_s4():
    for m, n in [(1, 3), (2, 4), (3, 5), (1, 1), (-1, 1)]:
        P = builtin_presentation("parafree", m, n)
        want = closed_form_delta("parafree_s4", (m, n))
        assert epi_count(P, S4).delta == want
    assert closed_form_delta("parafree_s4", (1, 3)) == 17
    assert closed_form_delta("parafree_s4", (2, 4)) == 9


def test_hillman_link():
    hl = builtin_presentation("hillman_link")
    assert epi_count(hl, S3).delta == 3
    assert epi_count(hl, S4).delta == 33
    assert delta_s4(hl) == 33


def test_delta_s4_one_layer():
    for P, want in [(F2, 9), (B3, 1), (B4, 3), (KLEIN, 0)]:
        assert delta_s4(P) == want


def test_gaschutz_formula():
    assert gaschutz_eulerian(S4, 2) == 216
    assert gaschutz_eulerian(builtin_group("Z(2)"), 5) == 2**5 - 1
    assert gaschutz_eulerian(D8, 2) == 24
    for spec in ["D(8)", "Q(8)", "A(4)", "S(4)", "M(7,6,3)", "Z(3)*D(8)", "Dstar(24)"]:
        tw = builtin_group(spec)
        for n in (1, 2, 3):
            got = epi_count(builtin_presentation("free", n), tw, with_aut=False).epi
            assert got == gaschutz_eulerian(tw, n)


def test_epi_count_q2p():
    assert epi_count_q2p(F2, 2, 3, 1) == 216
    assert epi_count_q2p(KLEIN, 2, 3, 1) == 0
    bs12 = builtin_presentation("bs", 1, 2)
    assert epi_count_q2p(bs12, 2, 3, 1) == epi_count(
        bs12, builtin_group("V(2,3,1)"), with_aut=False
    ).epi


def test_braid_metabelian_closed_forms_vs_engine():
    for spec, params in [("M(3,4,2)", (1, 3, 4)), ("M(7,6,3)", (2, 7, 6)),
                         ("A(4)", (3, 2, 3))]:
        tw = builtin_group(spec)
        want = closed_form_delta("braid_metabelian", params)
        assert epi_count(B3, tw).delta == want
        assert epi_count(B4, tw).delta == want
    assert closed_form_delta("braid_metabelian", (4, 5, 6)) == 1
    with pytest.raises(ValueError):
        closed_form_delta("braid_metabelian", (1, 3, 5))
    assert closed_form_delta("braid_solvable", (True,)) == 1
    assert closed_form_delta("braid_solvable", (False,)) == 0


def test_table1_deltas_vs_engine():
    sources = [F2, KLEIN, B3, builtin_presentation("bs", 2, 4),
               builtin_presentation("surface", 2)]
    rows = [("S3", "S(3)"), ("D8", "D(8)"), ("Q8", "Q(8)"), ("D12", "D(12)"),
            ("Dstar12", "Dstar(12)"), ("A4", "A(4)"), ("D10", "D(10)"),
            ("D14", "D(14)")]
    for P in sources:
        for name, spec in rows:
            assert table1_delta(P, name) == epi_count(P, builtin_group(spec)).delta, (
                str(P), name)


def test_dihedral_prime_delta():
    assert dihedral_prime_delta(F2, 3) == 3
    assert dihedral_prime_delta(F2, 5) == epi_count(F2, builtin_group("D(10)")).delta


def test_delta_integrality_enforced():
    # delta is |Epi| / |Aut| with exact division on every computed pair
    for label in ["free(2)", "bs(1,3)", "klein", "braid(3)", "parafree(1,3)"]:
        P = builtin_from_string(label)
        for spec in ["S(3)", "D(8)", "Q(8)", "A(4)", "S(4)", "D(12)"]:
            rep = epi_count(P, builtin_group(spec))
            assert rep.epi == rep.delta * rep.aut


def test_epi_maps_are_epimorphisms():
    maps = epi_maps(F2, S4)
    assert len(maps) == 216
    table = S4.group
    assert all(len(table.closure(im)) == 24 for im in maps[:10])


def test_aut_by_lifting_matches_report():
    rep = epi_count(B4, S4)
    assert rep.aut == aut_order_by_lifting(S4) == 24


def test_report_json_shape():
    rep = epi_count(B4, S4, with_hom=True, source_label="builtin:braid(4)")
    doc = rep.to_json_dict()
    assert list(doc) == ["source", "target", "hom", "epi", "aut", "delta",
                         "levels", "provenance"]
    assert doc["levels"][0].keys() == {
        "q", "s", "zeta", "kappa", "alpha", "split", "epi_in", "epi_out"
    }


def test_enumerate_epis_to_table():
    epis = enumerate_epis_to_table(F2, builtin_group("Z(2)^2").group)
    assert len(epis) == 6
