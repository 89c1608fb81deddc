"""The category of extensions and its exact structure.

Objects are extensions delta in E(C, A); a morphism delta -> rho is a pair
(a, c) with push(a, delta) = pull(c, rho).  A sequence delta -> rho -> eta
is a conflation when both component rows are split exact; the axioms of an
exact category are verified on a capped, seeded universe.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

from .algebra import GroupElement
from .bifunctor import Bifunctor, Extension, direct_sum
from .category import (
    HomSystemSolutions,
    Morphism,
    ObjectMismatchError,
    capped_objects,
    row_split_exact,
    solve_element_system,
    solve_hom_system,
    split_idempotent,
)
from .reporting import Report


class ExtensionMismatchError(ValueError):
    """Morphisms of extensions composed along unequal extensions."""


class NotSectionsError(ValueError):
    """Completion requested for a morphism whose components do not split."""


@dataclass(frozen=True)
class MorphismViolation:
    """Both sides of the failed defining equation push(a, .) = pull(c, .)."""

    lhs: Extension
    rhs: Extension

    def __str__(self) -> str:
        return f"push(a, delta) = {self.lhs.elem} but pull(c, rho) = {self.rhs.elem}"


@dataclass(frozen=True)
class ExtMorphism:
    source: Extension
    target: Extension
    a: Morphism
    c: Morphism

    def __str__(self) -> str:
        return f"({self.a}, {self.c})"


def check_morphism(
    delta: Extension, rho: Extension, a: Morphism, c: Morphism
) -> Union[ExtMorphism, MorphismViolation]:
    """Validate the pair (a, c) as a morphism delta -> rho."""
    bf = delta.bifunctor
    if (a.source, a.target) != (delta.A, rho.A):
        raise ObjectMismatchError("component a has wrong ends")
    if (c.source, c.target) != (delta.C, rho.C):
        raise ObjectMismatchError("component c has wrong ends")
    lhs = bf.push(a, delta)
    rhs = bf.pull(c, rho)
    if lhs != rhs:
        return MorphismViolation(lhs, rhs)
    return ExtMorphism(delta, rho, a, c)


def ext_morphism(
    delta: Extension, rho: Extension, a: Morphism, c: Morphism
) -> ExtMorphism:
    out = check_morphism(delta, rho, a, c)
    if isinstance(out, MorphismViolation):
        raise ValueError(f"not a morphism of extensions: {out}")
    return out


def identity_of(delta: Extension) -> ExtMorphism:
    bk = delta.bifunctor.backend
    return ExtMorphism(delta, delta, bk.identity(delta.A), bk.identity(delta.C))


def zero_ext_morphism(delta: Extension, rho: Extension) -> ExtMorphism:
    bk = delta.bifunctor.backend
    return ExtMorphism(
        delta, rho, bk.zero_morphism(delta.A, rho.A), bk.zero_morphism(delta.C, rho.C)
    )


def compose_morphisms(m2: ExtMorphism, m1: ExtMorphism) -> ExtMorphism:
    """(b, d) after (a, c) is (b a, d c); the middle extensions must be equal."""
    if m1.target != m2.source:
        raise ExtensionMismatchError(
            "codomain and domain extensions are not equal on the nose"
        )
    return ExtMorphism(m1.source, m2.target, m2.a @ m1.a, m2.c @ m1.c)


def add_morphisms(m1: ExtMorphism, m2: ExtMorphism) -> ExtMorphism:
    if (m1.source, m1.target) != (m2.source, m2.target):
        raise ExtensionMismatchError("sum of morphisms with different ends")
    return ExtMorphism(m1.source, m1.target, m1.a + m2.a, m1.c + m2.c)


def ext_hom_solutions(delta: Extension, rho: Extension) -> HomSystemSolutions:
    """All pairs (a, c) forming morphisms delta -> rho, as a solution set."""
    bf = delta.bifunctor
    bk = bf.backend
    group = bf.value(delta.C, rho.A)

    def eval_pair(fs: Sequence[Morphism]) -> list[GroupElement]:
        a, c = fs
        return [bf.push(a, delta).elem - bf.pull(c, rho).elem]

    return solve_element_system(
        bk,
        [(delta.A, rho.A), (delta.C, rho.C)],
        [group],
        eval_pair,
        [group.zero()],
    )


def ext_morphisms(
    delta: Extension, rho: Extension, bound: Optional[int] = None
) -> Iterator[ExtMorphism]:
    for a, c in ext_hom_solutions(delta, rho).solutions(bound):
        yield ExtMorphism(delta, rho, a, c)


def is_ext_iso(m: ExtMorphism) -> Optional[ExtMorphism]:
    """The inverse morphism when both components are invertible, else None."""
    from .category import two_sided_inverse

    a_inv = two_sided_inverse(m.a)
    if a_inv is None:
        return None
    c_inv = two_sided_inverse(m.c)
    if c_inv is None:
        return None
    return ext_morphism(m.target, m.source, a_inv, c_inv)


# ---------------------------------------------------------------------------
# biproducts in the category of extensions


@dataclass(frozen=True)
class ExtBiproduct:
    ob: Extension
    i1: ExtMorphism
    i2: ExtMorphism
    p1: ExtMorphism
    p2: ExtMorphism


def biproduct_ext(delta: Extension, rho: Extension) -> ExtBiproduct:
    bf = delta.bifunctor
    bk = bf.backend
    total = direct_sum(delta, rho)
    bp_a = bk.biproduct(delta.A, rho.A)
    bp_c = bk.biproduct(delta.C, rho.C)
    return ExtBiproduct(
        total,
        ext_morphism(delta, total, bp_a.i1, bp_c.i1),
        ext_morphism(rho, total, bp_a.i2, bp_c.i2),
        ext_morphism(total, delta, bp_a.p1, bp_c.p1),
        ext_morphism(total, rho, bp_a.p2, bp_c.p2),
    )


# ---------------------------------------------------------------------------
# conflations


@dataclass(frozen=True)
class RowWitness:
    retraction: Morphism  # r with r f = id
    section: Morphism     # s with g s = id and f r + s g = id


@dataclass(frozen=True)
class ExtConflation:
    first: Extension
    middle: Extension
    last: Extension
    inflation: ExtMorphism
    deflation: ExtMorphism
    a_row: RowWitness
    c_row: RowWitness


@dataclass(frozen=True)
class ConflationDecision:
    ok: bool
    reason: str = ""
    conflation: Optional[ExtConflation] = None


def _canonical_cokernel(f: Morphism, r: Morphism):
    """(Q, q: B -> Q) realizing coker f for a section f with retraction r."""
    bk = f.backend
    e = bk.identity(f.target) - (f @ r)
    found = split_idempotent(e)
    if found is None:
        return None
    comp, k, p = found
    return comp, p, k


def _canonical_kernel(g: Morphism, s: Morphism):
    """(K, k: K -> B) realizing ker g for a retraction g with section s."""
    bk = g.backend
    e = bk.identity(g.source) - (s @ g)
    found = split_idempotent(e)
    if found is None:
        return None
    comp, k, p = found
    return comp, k, p


def _is_cokernel_of(f: Morphism, r: Morphism, b: Morphism) -> bool:
    """Whether b: B -> Q is a cokernel of the section f (retraction r)."""
    from .category import solve_hom_equation, two_sided_inverse

    if not (b @ f).is_zero():
        return False
    realized = _canonical_cokernel(f, r)
    if realized is None:
        return False
    comp, q, _ = realized
    u = solve_hom_equation(
        f.backend, (comp, b.target), (f.target, b.target), lambda t: t @ q, b
    )
    return u is not None and two_sided_inverse(u) is not None


def _is_kernel_of(g: Morphism, s: Morphism, a: Morphism) -> bool:
    """Whether a: K -> B is a kernel of the retraction g (section s)."""
    from .category import solve_hom_equation, two_sided_inverse

    if not (g @ a).is_zero():
        return False
    realized = _canonical_kernel(g, s)
    if realized is None:
        return False
    comp, k, _ = realized
    v = solve_hom_equation(
        g.backend, (a.source, comp), (a.source, g.source), lambda t: k @ t, a
    )
    return v is not None and two_sided_inverse(v) is not None


def is_conflation(
    m1: ExtMorphism, m2: ExtMorphism, thorough: bool = False
) -> ConflationDecision:
    """Decide whether delta -> rho -> eta lies in the exact structure.

    The fast path checks split exactness of both component rows by a joint
    linear solve.  With ``thorough`` the two textbook characterizations
    (sections with cokernels; retractions with kernels) are also computed
    and must agree.
    """
    if m1.target != m2.source:
        return ConflationDecision(False, "sequence is not composable")
    a_row = row_split_exact(m1.a, m2.a)
    c_row = row_split_exact(m1.c, m2.c)
    ok = a_row is not None and c_row is not None
    if thorough:
        sections_side = _characterize_sections(m1, m2)
        retractions_side = _characterize_retractions(m1, m2)
        if sections_side != ok or retractions_side != ok:
            raise AssertionError(
                "conflation characterizations disagree: "
                f"split={ok} sections={sections_side} retractions={retractions_side}"
            )
    if not ok:
        missing = "first" if a_row is None else "second"
        return ConflationDecision(
            False, f"{missing} component row is not split exact"
        )
    return ConflationDecision(
        True,
        "",
        ExtConflation(
            m1.source,
            m1.target,
            m2.target,
            m1,
            m2,
            RowWitness(*a_row),
            RowWitness(*c_row),
        ),
    )


def _characterize_sections(m1: ExtMorphism, m2: ExtMorphism) -> bool:
    from .category import solve_hom_equation

    bk = m1.a.backend
    for f, b in ((m1.a, m2.a), (m1.c, m2.c)):
        r = solve_hom_equation(
            bk, (f.target, f.source), (f.source, f.source),
            lambda t: t @ f, bk.identity(f.source),
        )
        if r is None or not _is_cokernel_of(f, r, b):
            return False
    return True


def _characterize_retractions(m1: ExtMorphism, m2: ExtMorphism) -> bool:
    from .category import solve_hom_equation

    bk = m1.a.backend
    for f, b in ((m1.a, m2.a), (m1.c, m2.c)):
        s = solve_hom_equation(
            bk, (b.target, b.source), (b.target, b.target),
            lambda t: b @ t, bk.identity(b.target),
        )
        if s is None or not _is_kernel_of(b, s, f):
            return False
    return True


def complete_inflation(m: ExtMorphism) -> ExtConflation:
    """Extend a pair of sections (a, c): delta -> rho' to a conflation.

    The third term is pull(s_c, push(b, rho')) for b a cokernel of a and
    s_c the section of the c-side cokernel with s_c d = id - c r_c.
    """
    from .category import solve_hom_equation

    bf = m.source.bifunctor
    bk = bf.backend
    rho = m.target
    sides = []
    for f in (m.a, m.c):
        r = solve_hom_equation(
            bk, (f.target, f.source), (f.source, f.source),
            lambda t: t @ f, bk.identity(f.source),
        )
        if r is None:
            raise NotSectionsError(f"component {f} is not a section")
        realized = _canonical_cokernel(f, r)
        if realized is None:
            raise NotSectionsError(f"no split cokernel for {f}")
        comp, q, k = realized
        sides.append((r, comp, q, k))
    (r_a, comp_a, b, _), (r_c, comp_c, d, s_c) = sides
    eta = bf.pull(s_c, bf.push(b, rho))
    deflation = ext_morphism(rho, eta, b, d)
    conf = is_conflation(m, deflation)
    if not conf.ok:
        raise AssertionError(f"completion failed: {conf.reason}")
    return conf.conflation


def complete_deflation(m: ExtMorphism) -> ExtConflation:
    """Extend a pair of retractions (b, d): rho' -> eta to a conflation."""
    from .category import solve_hom_equation

    bf = m.source.bifunctor
    bk = bf.backend
    rho = m.source
    sides = []
    for g in (m.a, m.c):
        s = solve_hom_equation(
            bk, (g.target, g.source), (g.target, g.target),
            lambda t: g @ t, bk.identity(g.target),
        )
        if s is None:
            raise NotSectionsError(f"component {g} is not a retraction")
        realized = _canonical_kernel(g, s)
        if realized is None:
            raise NotSectionsError(f"no split kernel for {g}")
        comp, k, p = realized
        sides.append((s, comp, k, p))
    (s_b, comp_a, k_a, p_a), (s_d, comp_c, k_c, _) = sides
    delta = bf.pull(k_c, bf.push(p_a, rho))
    inflation = ext_morphism(delta, rho, k_a, k_c)
    conf = is_conflation(inflation, m)
    if not conf.ok:
        raise AssertionError(f"completion failed: {conf.reason}")
    return conf.conflation


def is_inflation_morphism(m: ExtMorphism) -> Optional[ExtConflation]:
    """The completed conflation when m is an inflation, else None."""
    try:
        return complete_inflation(m)
    except NotSectionsError:
        return None


def is_deflation_morphism(m: ExtMorphism) -> Optional[ExtConflation]:
    try:
        return complete_deflation(m)
    except NotSectionsError:
        return None


# ---------------------------------------------------------------------------
# the E2 pushout, built exactly as in the exactness proof


@dataclass(frozen=True)
class PushoutData:
    conflation: ExtConflation      # delta -> beta (+) rho -> gamma
    corner: Extension              # gamma
    leg_from_target: ExtMorphism   # beta -> gamma
    leg_from_middle: ExtMorphism   # rho -> gamma


def pushout_of_inflation(conf: ExtConflation, m: ExtMorphism) -> PushoutData:
    """Push the inflation of ``conf`` out along m = (u, w): delta -> beta.

    Follows the exactness proof: (e, f) = ((-u; id; 0), (-w; id; 0)) into
    beta (+) rho, with prescribed cokernels (id, u, 0; 0, 0, id) written in
    the split coordinates carried by the conflation witnesses.
    """
    bf = conf.first.bifunctor
    bk = bf.backend
    delta, rho = conf.first, conf.middle
    if m.source != delta:
        raise ExtensionMismatchError("morphism must start at the conflation foot")
    beta = m.target
    bp = biproduct_ext(beta, rho)
    e = (bp.i1.a @ (-m.a)) + (bp.i2.a @ conf.inflation.a)
    f = (bp.i1.c @ (-m.c)) + (bp.i2.c @ conf.inflation.c)
    ef = ext_morphism(delta, bp.ob, e, f)
    l = _pushout_cokernel(
        bk, m.a, conf.a_row.retraction, conf.deflation.a,
        conf.last.A, bp.i1.a.target, bp.p1.a, bp.p2.a,
    )
    mm = _pushout_cokernel(
        bk, m.c, conf.c_row.retraction, conf.deflation.c,
        conf.last.C, bp.i1.c.target, bp.p1.c, bp.p2.c,
    )
    wit = row_split_exact(f, mm)
    if wit is None:
        raise AssertionError("prescribed cokernel row is not split exact")
    _, s_m = wit
    gamma = bf.pull(s_m, bf.push(l, bp.ob))
    deflation = ext_morphism(bp.ob, gamma, l, mm)
    conf_out = is_conflation(ef, deflation)
    if not conf_out.ok:
        raise AssertionError(f"pushout sequence is not a conflation: {conf_out.reason}")
    leg_beta = compose_morphisms(deflation, bp.i1)
    leg_rho = compose_morphisms(deflation, bp.i2)
    return PushoutData(conf_out.conflation, gamma, leg_beta, leg_rho)


def _pushout_cokernel(bk, u, r, b, comp_obj, total, p_first, p_second):
    """(id_U, u r; 0, b): U (+) B  ->  U (+) A' in split coordinates."""
    tgt = bk.biproduct(u.target, comp_obj)
    first_row = p_first + (u @ r @ p_second)
    second_row = b @ p_second
    return (tgt.i1 @ first_row) + (tgt.i2 @ second_row)


def pushout_mediator(
    pd: PushoutData, cone_beta: ExtMorphism, cone_rho: ExtMorphism
) -> HomSystemSolutions:
    """Morphisms gamma -> tau commuting with both pushout legs."""
    gamma = pd.corner
    tau = cone_beta.target
    bf = gamma.bifunctor
    bk = bf.backend
    hom_ba = bk.hom_group(pd.leg_from_target.target.A, tau.A)
    value = bf.value(gamma.C, tau.A)
    leg_b, leg_r = pd.leg_from_target, pd.leg_from_middle

    eq_groups = [
        bk.hom_group(leg_b.source.A, tau.A),
        bk.hom_group(leg_b.source.C, tau.C),
        bk.hom_group(leg_r.source.A, tau.A),
        bk.hom_group(leg_r.source.C, tau.C),
        value,
    ]

    def eval_pair(fs):
        p, q = fs
        return [
            bk.morphism_coords(p @ leg_b.a),
            bk.morphism_coords(q @ leg_b.c),
            bk.morphism_coords(p @ leg_r.a),
            bk.morphism_coords(q @ leg_r.c),
            bf.push(p, gamma).elem - bf.pull(q, tau).elem,
        ]

    rhs = [
        bk.morphism_coords(cone_beta.a),
        bk.morphism_coords(cone_beta.c),
        bk.morphism_coords(cone_rho.a),
        bk.morphism_coords(cone_rho.c),
        value.zero(),
    ]
    return solve_element_system(
        bk, [(gamma.A, tau.A), (gamma.C, tau.C)], eq_groups, eval_pair, rhs
    )


# ---------------------------------------------------------------------------
# the exact-category verifier


class ExtensionCategory:
    """(E-Ext(C), X_E): the exact category attached to a bifunctor."""

    def __init__(self, bifunctor: Bifunctor):
        self.bifunctor = bifunctor
        self.backend = bifunctor.backend

    def __repr__(self) -> str:
        return f"ExtensionCategory({self.bifunctor!r})"

    def verify(self, **kwargs) -> Report:
        return verify_exact_category(self.bifunctor, **kwargs)


def _sample_elements(group, cap_order, rng, n_samples):
    """All elements when small; else zero, generators and seeded samples."""
    if group.order <= cap_order:
        return [e for e in group.elements(cap_order)], False
    out = [group.zero()]
    out.extend(group.generators())
    for _ in range(n_samples):
        out.append(
            group.element(tuple(rng.randrange(d) for d in group.invariant_factors))
        )
    seen = set()
    uniq = []
    for e in out:
        if e.coords not in seen:
            seen.add(e.coords)
            uniq.append(e)
    return uniq, True


def _sample_solutions(sols: HomSystemSolutions, cap_order, rng, n_samples):
    if sols.particular is None:
        return []
    if sols.count <= cap_order:
        return list(sols.solutions(cap_order))
    return sols.sample(rng, n_samples)


def verify_exact_category(
    bifunctor: Bifunctor,
    cap_objects: int = 2,
    cap_order: int = 16,
    samples: int = 2,
    seed: int = 0,
    report: Optional[Report] = None,
) -> Report:
    """Check E0/E1/E2 and duals on a capped, seeded universe of extensions."""
    rng = random.Random(seed)
    rep = report if report is not None else Report()
    rep.caps.update(
        {"cap_objects": cap_objects, "cap_order": cap_order, "samples": samples}
    )
    bf = bifunctor
    bk = bf.backend
    objects = capped_objects(bk, cap_objects)

    extensions = []
    sampled_any = False
    for a in objects:
        for c in objects:
            elems, sampled = _sample_elements(bf.value(c, a), cap_order, rng, samples)
            sampled_any = sampled_any or sampled
            extensions.extend(Extension(a, c, e, bf) for e in elems)
    if sampled_any:
        rep.skip(
            "extcat/universe",
            "some extension groups exceeded cap_order; sampled zero+generators+random",
        )

    def sample_exts(k):
        pool = extensions
        if len(pool) <= k:
            return list(pool)
        return rng.sample(pool, k)

    # --- additivity: hom-sets closed under addition, biproducts work -------
    ok = True
    witness = ""
    for delta in sample_exts(6):
        for rho in sample_exts(6):
            sols = _sample_solutions(ext_hom_solutions(delta, rho), cap_order, rng, samples)
            mors = [ExtMorphism(delta, rho, a, c) for a, c in sols]
            for m1 in mors[:4]:
                for m2 in mors[:4]:
                    summed = add_morphisms(m1, m2)
                    if isinstance(
                        check_morphism(delta, rho, summed.a, summed.c),
                        MorphismViolation,
                    ):
                        ok = False
                        witness = f"{m1} + {m2} between {delta} and {rho}"
    rep.record("extcat/hom-groups-closed-under-addition", ok, witness=witness)

    ok = True
    witness = ""
    for delta in sample_exts(5):
        for rho in sample_exts(5):
            try:
                bp = biproduct_ext(delta, rho)
            except ValueError as exc:
                ok, witness = False, f"{delta} (+) {rho}: {exc}"
                continue
            checks = [
                compose_morphisms(bp.p1, bp.i1) == identity_of(delta),
                compose_morphisms(bp.p2, bp.i2) == identity_of(rho),
                compose_morphisms(bp.p1, bp.i2) == zero_ext_morphism(rho, delta),
                compose_morphisms(bp.p2, bp.i1) == zero_ext_morphism(delta, rho),
                add_morphisms(
                    compose_morphisms(bp.i1, bp.p1), compose_morphisms(bp.i2, bp.p2)
                )
                == identity_of(bp.ob),
            ]
            if not all(checks):
                ok, witness = False, f"biproduct identities fail for {delta}, {rho}"
    rep.record("extcat/biproduct-identities", ok, witness=witness)

    # --- canonical conflations and iso closure ------------------------------
    canonical = []
    for delta in sample_exts(4):
        for rho in sample_exts(4):
            bp = biproduct_ext(delta, rho)
            canonical.append((bp.i1, bp.p2))

    ok = True
    witness = ""
    for m1, m2 in canonical:
        try:
            dec = is_conflation(m1, m2, thorough=True)
        except (ValueError, AssertionError) as exc:
            ok, witness = False, f"conflation check crashed: {exc}"
            continue
        if not dec.ok:
            ok, witness = False, f"canonical split sequence rejected: {m1}, {m2}"
    rep.record("extcat/canonical-conflations", ok, witness=witness)

    ok = True
    witness = ""
    for m1, m2 in canonical[:6]:
        # twist the middle by an automorphism and recheck membership
        mid = m1.target
        autos = []
        for a, c in _sample_solutions(
            ext_hom_solutions(mid, mid), cap_order, rng, samples
        ):
            cand = ExtMorphism(mid, mid, a, c)
            inv = is_ext_iso(cand)
            if inv is not None:
                autos.append((cand, inv))
            if len(autos) >= 2:
                break
        for auto, inv in autos:
            twisted1 = compose_morphisms(auto, m1)
            twisted2 = compose_morphisms(m2, inv)
            if not is_conflation(twisted1, twisted2).ok:
                ok, witness = False, f"iso twist broke a conflation at {mid}"
    rep.record("extcat/iso-closed", ok, witness=witness)

    # --- E0 / E0op ----------------------------------------------------------
    ok = True
    witness = ""
    for delta in extensions:
        ident = identity_of(delta)
        try:
            conf = is_inflation_morphism(ident)
        except (ValueError, AssertionError) as exc:
            ok, witness = False, f"identity completion crashed: {exc}"
            break
        if conf is None or not bk.is_zero_object(conf.last.A) or not bk.is_zero_object(conf.last.C):
            ok, witness = False, f"identity of {delta} is not an inflation"
            break
    rep.record("extcat/E0-identities-are-inflations", ok, witness=witness)

    ok = True
    witness = ""
    for delta in extensions:
        ident = identity_of(delta)
        try:
            conf = is_deflation_morphism(ident)
        except (ValueError, AssertionError) as exc:
            ok, witness = False, f"identity completion crashed: {exc}"
            break
        if conf is None or not bk.is_zero_object(conf.first.A) or not bk.is_zero_object(conf.first.C):
            ok, witness = False, f"identity of {delta} is not a deflation"
            break
    rep.record("extcat/E0op-identities-are-deflations", ok, witness=witness)

    # --- E1 / E1op ----------------------------------------------------------
    def sample_inflations(k):
        out = []
        for delta in sample_exts(k):
            for rho in sample_exts(2):
                bp = biproduct_ext(delta, rho)
                out.append(bp.i1)
        return out

    ok = True
    witness = ""
    for infl in sample_inflations(3):
        for rho2 in sample_exts(2):
            try:
                second = biproduct_ext(infl.target, rho2).i1
                composite = compose_morphisms(second, infl)
                conf = is_inflation_morphism(composite)
            except (ValueError, AssertionError) as exc:
                ok, witness = False, f"inflation composition crashed: {exc}"
                continue
            if conf is None:
                ok = False
                witness = f"composite of inflations not an inflation at {infl.source}"
    rep.record("extcat/E1-inflations-compose", ok, witness=witness)

    ok = True
    witness = ""
    for delta in sample_exts(3):
        for rho in sample_exts(2):
            for rho2 in sample_exts(2):
                try:
                    bp = biproduct_ext(delta, rho)
                    bp2 = biproduct_ext(bp.ob, rho2)
                    composite = compose_morphisms(bp.p1, bp2.p1)
                    conf = is_deflation_morphism(composite)
                except (ValueError, AssertionError) as exc:
                    ok, witness = False, f"deflation composition crashed: {exc}"
                    continue
                if conf is None:
                    ok = False
                    witness = f"composite of deflations not a deflation at {delta}"
    rep.record("extcat/E1op-deflations-compose", ok, witness=witness)

    # --- E2 / E2op ----------------------------------------------------------
    ok = True
    witness = ""
    checked = 0
    for delta in sample_exts(3):
        for rho in sample_exts(2):
            bp = biproduct_ext(delta, rho)
            conf = is_conflation(bp.i1, bp.p2).conflation
            if conf is None:
                ok, witness = False, f"no canonical conflation at {delta}"
                continue
            for beta in sample_exts(2):
                for a, c in _sample_solutions(
                    ext_hom_solutions(delta, beta), cap_order, rng, 1
                )[: samples + 1]:
                    mor = ExtMorphism(delta, beta, a, c)
                    try:
                        pd = pushout_of_inflation(conf, mor)
                    except (ValueError, AssertionError) as exc:
                        ok, witness = False, f"E2 construction failed: {exc}"
                        continue
                    checked += 1
                    if is_inflation_morphism(pd.leg_from_target) is None:
                        ok = False
                        witness = f"pushout leg not an inflation at {delta} -> {beta}"
                    # square commutes
                    lhs = compose_morphisms(pd.leg_from_target, mor)
                    rhs = compose_morphisms(pd.leg_from_middle, conf.inflation)
                    if lhs != rhs:
                        ok, witness = False, "pushout square does not commute"
                    # universal property against sampled cones
                    for tau in sample_exts(1):
                        for pb, qb in _sample_solutions(
                            ext_hom_solutions(beta, tau), cap_order, rng, 1
                        )[:1]:
                            cone_b = ExtMorphism(beta, tau, pb, qb)
                            want = compose_morphisms(cone_b, mor)
                            cone_r_sols = solve_hom_system(
                                bk,
                                [(conf.middle.A, tau.A), (conf.middle.C, tau.C)],
                                [
                                    (conf.first.A, tau.A),
                                    (conf.first.C, tau.C),
                                ],
                                lambda fs: [
                                    fs[0] @ conf.inflation.a,
                                    fs[1] @ conf.inflation.c,
                                ],
                                [want.a, want.c],
                            )
                            found_cone = None
                            for pr, qr in _sample_solutions(
                                cone_r_sols, cap_order, rng, 1
                            ):
                                cand = check_morphism(conf.middle, tau, pr, qr)
                                if isinstance(cand, ExtMorphism):
                                    found_cone = cand
                                    break
                            if found_cone is None:
                                continue
                            med = pushout_mediator(pd, cone_b, found_cone)
                            if med.count != 1:
                                ok = False
                                witness = (
                                    f"mediator count {med.count} for cone at "
                                    f"{bk.object_label(tau.A)}"
                                )
    detail = f"{checked} pushouts checked"
    rep.record("extcat/E2-pushouts", ok, detail=detail, witness=witness)

    ok = True
    witness = ""
    checked = 0
    for delta in sample_exts(3):
        for rho in sample_exts(2):
            bp = biproduct_ext(delta, rho)
            conf = is_conflation(bp.i1, bp.p2).conflation
            if conf is None:
                ok, witness = False, f"no canonical conflation at {delta}"
                continue
            for beta in sample_exts(2):
                for a, c in _sample_solutions(
                    ext_hom_solutions(beta, conf.last), cap_order, rng, 1
                )[: samples + 1]:
                    mor = ExtMorphism(beta, conf.last, a, c)
                    try:
                        pl = pullback_of_deflation(conf, mor)
                    except (ValueError, AssertionError) as exc:
                        ok, witness = False, f"E2op construction failed: {exc}"
                        continue
                    checked += 1
                    if is_deflation_morphism(pl.leg_to_source) is None:
                        ok = False
                        witness = f"pullback leg not a deflation at {beta}"
                    lhs = compose_morphisms(mor, pl.leg_to_source)
                    rhs = compose_morphisms(conf.deflation, pl.leg_to_middle)
                    if lhs != rhs:
                        ok, witness = False, "pullback square does not commute"
    detail = f"{checked} pullbacks checked"
    rep.record("extcat/E2op-pullbacks", ok, detail=detail, witness=witness)

    return rep


# ---------------------------------------------------------------------------
# the dual E2op construction


@dataclass(frozen=True)
class PullbackData:
    conflation: ExtConflation     # gamma -> beta (+) rho -> eta
    corner: Extension             # gamma
    leg_to_source: ExtMorphism    # gamma -> beta
    leg_to_middle: ExtMorphism    # gamma -> rho


def pullback_of_deflation(conf: ExtConflation, m: ExtMorphism) -> PullbackData:
    """Pull the deflation of ``conf`` back along m = (u, w): beta -> eta."""
    bf = conf.first.bifunctor
    bk = bf.backend
    rho, eta = conf.middle, conf.last
    if m.target != eta:
        raise ExtensionMismatchError("morphism must end at the conflation head")
    beta = m.source
    bp = biproduct_ext(beta, rho)
    # (e', f') = (-u, b): beta (+) rho -> eta by the coproduct property
    e = ((-m.a) @ bp.p1.a) + (conf.deflation.a @ bp.p2.a)
    f = ((-m.c) @ bp.p1.c) + (conf.deflation.c @ bp.p2.c)
    ef = ext_morphism(bp.ob, eta, e, f)
    k_l = _pullback_kernel(
        bk, m.a, conf.a_row, conf.inflation.a,
        beta.A, bp.i1.a, bp.i2.a,
    )
    k_m = _pullback_kernel(
        bk, m.c, conf.c_row, conf.inflation.c, beta.C, bp.i1.c, bp.i2.c,
    )
    wit = row_split_exact(k_l, e)
    if wit is None:
        raise AssertionError("prescribed kernel row is not split exact")
    r_k, _ = wit
    wit_c = row_split_exact(k_m, f)
    if wit_c is None:
        raise AssertionError("prescribed kernel row is not split exact")
    gamma = bf.pull(k_m, bf.push(r_k, bp.ob))
    inflation = ext_morphism(gamma, bp.ob, k_l, k_m)
    conf_out = is_conflation(inflation, ef)
    if not conf_out.ok:
        raise AssertionError(
            f"pullback sequence is not a conflation: {conf_out.reason}"
        )
    leg_beta = compose_morphisms(bp.p1, inflation)
    leg_rho = compose_morphisms(bp.p2, inflation)
    return PullbackData(conf_out.conflation, gamma, leg_beta, leg_rho)


def _pullback_kernel(bk, u, row, a_incl, src_obj, i_first, i_second):
    """(id_U; 0; u ...): U (+) A  ->  U (+) B in split coordinates.

    The kernel of (-u, b) is spanned by (x, s u x + a y): the section s of
    the deflation reinserts u x into the middle object.
    """
    src = bk.biproduct(u.source, a_incl.source)
    s = row.section
    first_col = (i_first @ src.p1) + (i_second @ ((s @ u @ src.p1) + (a_incl @ src.p2)))
    return first_col
