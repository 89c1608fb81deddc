"""Backend tests: composition, biproducts, sections, complements, tables."""

import pytest

from exangulate.algebra import FinAbGroup, GroupHom, TRIVIAL_GROUP, cyclic
from exangulate.category import (
    FinAbBackend,
    TableBackend,
    TableValidationError,
    capped_objects,
    is_retraction,
    is_section,
    solve_hom_system,
    split_complement,
    table_from_groups,
    two_sided_inverse,
    validate_table,
)


@pytest.fixture(scope="module")
def finab4():
    return FinAbBackend(4)


@pytest.fixture(scope="module")
def finab12():
    return FinAbBackend(12)


def biproduct_identities(bk, bp, x, y):
    assert bp.p1 @ bp.i1 == bk.identity(x)
    assert bp.p2 @ bp.i2 == bk.identity(y)
    assert (bp.p1 @ bp.i2).is_zero()
    assert (bp.p2 @ bp.i1).is_zero()
    assert (bp.i1 @ bp.p1) + (bp.i2 @ bp.p2) == bk.identity(bp.ob)


# ---------------------------------------------------------------------------
# composition


def test_compose_multiplications(finab12):
    z12 = cyclic(12)
    f2 = finab12.morphism(GroupHom(z12, z12, ((2,),)))
    f3 = finab12.morphism(GroupHom(z12, z12, ((3,),)))
    assert (f3 @ f2).payload.matrix == ((6,),)


def test_identity_neutral_and_zero_absorbs(finab12):
    z12 = cyclic(12)
    f = finab12.morphism(GroupHom(z12, z12, ((5,),)))
    assert finab12.identity(z12) @ f == f
    assert f @ finab12.identity(z12) == f
    assert (finab12.zero_morphism(z12, z12) @ f).is_zero()


def test_probe_generator_associativity_and_bilinearity(finab4):
    probes = finab4.probes()
    for x in probes:
        for y in probes:
            for z in probes:
                gens_xy = finab4.hom_generators(x, y)
                gens_yz = finab4.hom_generators(y, z)
                for w in probes:
                    gens_zw = finab4.hom_generators(z, w)
                    for f in gens_xy:
                        for g in gens_yz:
                            for h in gens_zw:
                                assert (h @ g) @ f == h @ (g @ f)
                for f in gens_xy:
                    for g in gens_yz:
                        for g2 in gens_yz:
                            assert (g + g2) @ f == (g @ f) + (g2 @ f)
                        for f2 in gens_xy:
                            assert g @ (f + f2) == (g @ f) + (g @ f2)


# ---------------------------------------------------------------------------
# biproducts


def test_biproduct_z2_z3_is_z6(finab12):
    x, y = cyclic(2), cyclic(3)
    bp = finab12.biproduct(x, y)
    assert bp.ob == cyclic(6)
    biproduct_identities(finab12, bp, x, y)


def test_biproduct_with_zero(finab4):
    x = FinAbGroup((2, 4))
    bp = finab4.biproduct(x, TRIVIAL_GROUP)
    assert bp.ob == x
    assert bp.i1 == finab4.identity(x)
    biproduct_identities(finab4, bp, x, TRIVIAL_GROUP)


def test_biproduct_identities_over_capped_universe(finab4):
    objs = capped_objects(finab4, 2)
    assert len(objs) == 6
    for x in objs:
        for y in objs:
            biproduct_identities(finab4, finab4.biproduct(x, y), x, y)


def test_diagonal_and_codiagonal(finab4):
    z2 = cyclic(2)
    d = finab4.diagonal(z2)
    bp = finab4.biproduct(z2, z2)
    assert bp.p1 @ d == finab4.identity(z2)
    assert bp.p2 @ d == finab4.identity(z2)
    assert finab4.apply(d, z2.element((1,))) == bp.ob.element(
        finab4.apply(bp.i1 + bp.i2, z2.element((1,))).coords
    )
    c = finab4.codiagonal(z2)
    assert c @ bp.i1 == finab4.identity(z2)
    assert c @ bp.i2 == finab4.identity(z2)


def test_every_object_is_biproduct_of_probes(finab12):
    for x in capped_objects(finab12, 2):
        parts = finab12.decompose(x)
        assert all(p in finab12.probes() for p in parts)
        assert finab12.biproduct_many(parts).ob == x


# ---------------------------------------------------------------------------
# sections, retractions, complements


def test_inclusion_is_section(finab4):
    x, y = cyclic(2), cyclic(4)
    bp = finab4.biproduct(x, y)
    r = is_section(bp.i1)
    assert r is not None and r @ bp.i1 == finab4.identity(x)


def test_doubling_is_not_a_section(finab4):
    z4 = cyclic(4)
    two = finab4.morphism(GroupHom(z4, z4, ((2,),)))
    # oracle: all four endomorphisms r of Z/4 give r(2x) in {0, 2x}
    assert is_section(two) is None
    assert is_retraction(two) is None


def test_identity_is_section_with_identity_witness(finab4):
    ident = finab4.identity(FinAbGroup((2, 4)))
    assert is_section(ident) == ident


def test_split_complement_of_canonical_inclusion(finab12):
    x, y = cyclic(2), cyclic(3)
    bp = finab12.biproduct(x, y)
    sc = split_complement(bp.i1)
    assert sc.complement == cyclic(3)
    assert (sc.quotient @ bp.i1).is_zero()


def test_split_complement_of_skew_section(finab4):
    z2 = cyclic(2)
    k = FinAbGroup((2, 2))
    f = finab4.morphism(GroupHom(z2, k, ((1,), (1,))))
    sc = split_complement(f)
    assert sc.complement == cyclic(2)
    bp = finab4.biproduct(z2, sc.complement)
    assert sc.iso @ f == bp.i1
    assert bp.p2 @ sc.iso == sc.quotient


def test_split_complement_of_identity(finab4):
    x = FinAbGroup((2, 4))
    sc = split_complement(finab4.identity(x))
    assert sc.complement == TRIVIAL_GROUP


def test_section_iff_complement_exhaustive(finab4):
    objs = [TRIVIAL_GROUP, cyclic(2), cyclic(4), FinAbGroup((2, 2))]
    for a in objs:
        for b in objs:
            if finab4.hom_group(b, a).order > 64:
                continue
            for f in finab4.morphisms(a, b):
                witness = is_section(f)
                if witness is None:
                    with pytest.raises(Exception):
                        split_complement(f)
                else:
                    sc = split_complement(f)
                    assert sc.retraction @ f == finab4.identity(a)
                    # complement order matches the index of the image
                    assert sc.complement.order * a.order == b.order


def test_two_sided_inverse(finab4):
    z2 = cyclic(2)
    k = FinAbGroup((2, 2))
    swap = finab4.morphism(GroupHom(k, k, ((0, 1), (1, 0))))
    inv = two_sided_inverse(swap)
    assert inv == swap
    two = finab4.morphism(GroupHom(cyclic(4), cyclic(4), ((2,),)))
    assert two_sided_inverse(two) is None
    assert two_sided_inverse(finab4.zero_morphism(z2, k)) is None


# ---------------------------------------------------------------------------
# table backend


@pytest.fixture(scope="module")
def table_two_z2():
    data = table_from_groups({"P": cyclic(2), "Q": cyclic(2)})
    return TableBackend(data)


def test_table_validates(table_two_z2):
    assert validate_table(table_two_z2.data) == []


def test_table_biproduct_identities(table_two_z2):
    bk = table_two_z2
    objs = capped_objects(bk, 2)
    assert bk.zero_object() in objs
    for x in objs:
        for y in objs:
            biproduct_identities(bk, bk.biproduct(x, y), x, y)


def test_table_composition_matches_group_model(table_two_z2):
    bk = table_two_z2
    p, q = ("P",), ("Q",)
    fs = list(bk.morphisms(p, q))
    gs = list(bk.morphisms(q, p))
    assert len(fs) == 2 and len(gs) == 2
    f = next(m for m in fs if not m.is_zero())
    g = next(m for m in gs if not m.is_zero())
    assert g @ f == bk.identity(p)


def test_table_envelope_morphism_coords_roundtrip(table_two_z2):
    bk = table_two_z2
    x = bk.biproduct_many([("P",), ("Q",)]).ob
    for f in bk.morphisms(x, x):
        assert bk.morphism_from_coords(x, x, bk.morphism_coords(f)) == f


def test_corrupted_table_reports_named_triple():
    data = table_from_groups({"P": cyclic(2), "Q": cyclic(4)})
    bad_compose = dict(data.compose)
    # zero out composition with the identity of P: breaks the unit law
    key = ("P", "P", "Q")
    bad_compose[key] = (((0,),),)
    bad = type(data)(data.objects, data.homs, data.identities, bad_compose)
    problems = validate_table(bad)
    assert any("P" in p and "Q" in p for p in problems)
    with pytest.raises(TableValidationError):
        TableBackend(bad)


def test_table_split_complement():
    bk = TableBackend(table_from_groups({"P": cyclic(2), "Q": cyclic(3)}))
    x = ("P",)
    b = bk.biproduct_many([("P",), ("Q",)]).ob
    iota = bk.biproduct_many([("P",), ("Q",)]).iotas[0]
    sc = split_complement(iota)
    assert sc.complement == ("Q",)


# ---------------------------------------------------------------------------
# hom-system solver


def test_solve_hom_system_lifting(finab4):
    z2, z4 = cyclic(2), cyclic(4)
    incl = finab4.morphism(GroupHom(z2, z4, ((2,),)))  # injective 1 -> 2
    proj = finab4.morphism(GroupHom(z4, z2, ((1,),)))  # surjective
    # find u: Z/2 -> Z/4 with proj @ u = id (a splitting of proj): impossible
    sols = solve_hom_system(
        finab4,
        [(z2, z4)],
        [(z2, z2)],
        lambda fs: [proj @ fs[0]],
        [finab4.identity(z2)],
    )
    assert sols.particular is None and sols.count == 0
    # find u with proj @ u = 0: two solutions 0 and incl
    sols = solve_hom_system(
        finab4,
        [(z2, z4)],
        [(z2, z2)],
        lambda fs: [proj @ fs[0]],
        [finab4.zero_morphism(z2, z2)],
    )
    found = {s[0] for s in sols}
    assert found == {finab4.zero_morphism(z2, z4), incl}
    assert sols.count == 2


def test_solve_hom_system_two_unknowns(finab4):
    z4 = cyclic(4)
    two = finab4.morphism(GroupHom(z4, z4, ((2,),)))
    # f + g = 2 with f restricted through doubling: f = 2h
    sols = solve_hom_system(
        finab4,
        [(z4, z4), (z4, z4)],
        [(z4, z4)],
        lambda fs: [(two @ fs[0]) + fs[1]],
        [two],
    )
    assert sols.particular is not None
    for f, g in sols.solutions(bound=64):
        assert (two @ f) + g == two


def test_associativity_violation_named():
    data = table_from_groups({"P": cyclic(2), "Q": cyclic(2)})
    bad_compose = dict(data.compose)
    # corrupt a triple not touched by the unit checks: the composite
    # hom(P,Q) after hom(Q,P) is zeroed while both factor tables stay intact
    bad_compose[("P", "Q", "P")] = (((0,),),)
    bad = type(data)(data.objects, data.homs, data.identities, bad_compose)
    problems = validate_table(bad)
    assert problems
    assert any("associativity" in p for p in problems)
