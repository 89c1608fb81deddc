"""Independent oracles used by the test suite.

The sequence-level Baer sum below is built from raw pullback/pushout
subquotients of the realised middles, so it shares no code path with the
class arithmetic it checks.
"""

from exangulate.algebra import GroupHom, canonicalize, kernel
from exangulate.category import Morphism
from exangulate.exangle import NComplex


def baer_sum_sequence(structure, d1, d2) -> NComplex:
    """The classical Baer-sum sequence of two Ext^1 classes with equal ends."""
    assert (d1.A, d1.C) == (d2.A, d2.C)
    bf = structure.bifunctor
    bk = structure.backend
    rz = structure.realisation
    a_obj, c_obj = d1.A, d1.C
    from exangulate.bifunctor import direct_sum

    total = direct_sum(d1, d2)
    x = rz.realise_complex(total)
    e12 = x.objects[1]
    iota, proj = x.diffs  # A+A -> E12 -> C+C
    bp_a = bk.biproduct(a_obj, a_obj)
    bp_c = bk.biproduct(c_obj, c_obj)
    diag = bk.diagonal(c_obj)
    nabla = bk.codiagonal(a_obj)

    # pullback along the diagonal: E' = {(e, c) : proj(e) = diag(c)}
    bp_ec = bk.biproduct(e12, c_obj)
    difference = (proj.payload @ bp_ec.p1.payload) - (
        diag.payload @ bp_ec.p2.payload
    )
    sub = kernel(difference)
    e_prime, incl_prime = sub.group, sub.inclusion  # E' -> E12 + C

    # pushout along the codiagonal: E'' = (A + E') / <(nabla v, -iota'(v))>
    # where iota': A+A -> E' lifts iota through the pullback
    from exangulate.algebra import solve

    lift_cols = []
    for gen in bp_a.ob.generators():
        target = bp_ec.i1.payload @ iota.payload
        v = solve(incl_prime, target(gen))
        assert v is not None, "inclusion must factor through the pullback"
        lift_cols.append(v)
    iota_prime = GroupHom.from_images(bp_a.ob, e_prime, lift_cols)

    k = a_obj.rank
    m = e_prime.rank
    rows = []
    for i in range(k + m):
        row = []
        # relations of A + E'
        for j in range(k):
            row.append(a_obj.invariant_factors[j] if i == j else 0)
        for j in range(m):
            row.append(e_prime.invariant_factors[j] if i == k + j else 0)
        # pushout relations (nabla v, -iota'(v)) per generator v of A+A
        for j, gen in enumerate(bp_a.ob.generators()):
            if i < k:
                row.append(nabla.payload(gen).coords[i])
            else:
                row.append((-1 * iota_prime(gen)).coords[i - k])
        rows.append(tuple(row))
    canon = canonicalize(tuple(rows))
    e_sum = canon.group
    incl_sum = GroupHom(a_obj, e_sum, tuple(row[:k] for row in canon.project))
    # projection: [(a, e')] -> pi'(e') where pi': E' -> C is the second leg
    pi_prime = bp_ec.p2.payload @ incl_prime
    proj_rows = []
    for i in range(c_obj.rank):
        proj_rows.append(
            tuple(
                sum(
                    pi_prime.matrix[i][t] * canon.lift[k + t][j]
                    for t in range(m)
                )
                for j in range(e_sum.rank)
            )
        )
    proj_sum = GroupHom(e_sum, c_obj, tuple(proj_rows))
    return NComplex(
        1,
        (a_obj, e_sum, c_obj),
        (
            Morphism(bk, a_obj, e_sum, incl_sum),
            Morphism(bk, e_sum, c_obj, proj_sum),
        ),
    )
