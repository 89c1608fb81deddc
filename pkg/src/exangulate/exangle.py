"""Complexes, mapping cones, homotopies, n-exangles and realisations.

A realised structure assigns each extension a canonical representative
complex; class equality is decided by a homotopy-equivalence search whose
ingredients (chain maps, homotopies, one-sided inverses up to homotopy)
are all linear problems over the finite hom groups.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Sequence

from .algebra import kernel as group_kernel
from .bifunctor import Bifunctor, Ext1Bifunctor, Extension, SplitBifunctor
from .category import (
    CategoryBackend,
    FinAbBackend,
    Morphism,
    capped_objects,
    retraction_of,
    section_of,
    solve_hom_system,
    split_complement,
    split_idempotent,
)
from .extcat import ExtMorphism, ext_hom_solutions
from .reporting import Report


class NotAComplexError(ValueError):
    pass


class NoRealisationRegisteredError(ValueError):
    pass


class NoLiftError(RuntimeError):
    """An (R0) lift failed to exist: a realisation defect, not user error."""


@dataclass(frozen=True)
class NComplex:
    """A complex concentrated in degrees 0..n+1 with vanishing composites."""

    degree: int
    objects: tuple
    diffs: tuple[Morphism, ...]

    def __post_init__(self) -> None:
        n = self.degree
        if len(self.objects) != n + 2 or len(self.diffs) != n + 1:
            raise NotAComplexError("wrong number of objects or differentials")
        for i, d in enumerate(self.diffs):
            if d.source != self.objects[i] or d.target != self.objects[i + 1]:
                raise NotAComplexError(f"differential {i} has wrong ends")
        for i in range(n):
            if not (self.diffs[i + 1] @ self.diffs[i]).is_zero():
                raise NotAComplexError(f"d{i + 1} d{i} is not zero")

    @property
    def backend(self) -> CategoryBackend:
        return self.diffs[0].backend

    @property
    def ends(self) -> tuple:
        return (self.objects[0], self.objects[-1])

    def __str__(self) -> str:
        bk = self.backend
        return " -> ".join(bk.object_label(x) for x in self.objects)


@dataclass(frozen=True)
class ChainMap:
    source: NComplex
    target: NComplex
    maps: tuple[Morphism, ...]

    def __post_init__(self) -> None:
        n = self.source.degree
        if self.target.degree != n or len(self.maps) != n + 2:
            raise NotAComplexError("chain map with wrong number of components")
        for i, f in enumerate(self.maps):
            if f.source != self.source.objects[i] or f.target != self.target.objects[i]:
                raise NotAComplexError(f"component {i} has wrong ends")
        for i in range(n + 1):
            if self.maps[i + 1] @ self.source.diffs[i] != self.target.diffs[i] @ self.maps[i]:
                raise NotAComplexError(f"square {i} does not commute")

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        if other.target != self.source:
            raise NotAComplexError("chain maps not composable")
        return ChainMap(
            other.source,
            self.target,
            tuple(f @ g for f, g in zip(self.maps, other.maps)),
        )

    @staticmethod
    def identity(x: NComplex) -> "ChainMap":
        return ChainMap(x, x, tuple(x.backend.identity(ob) for ob in x.objects))

    @staticmethod
    def zero(x: NComplex, y: NComplex) -> "ChainMap":
        bk = x.backend
        return ChainMap(
            x, y, tuple(bk.zero_morphism(a, b) for a, b in zip(x.objects, y.objects))
        )


@dataclass(frozen=True)
class Homotopy:
    """maps[i] = h^(i+1): X^(i+1) -> Y^i, witnessing f - g = dh + hd."""

    maps: tuple[Morphism, ...]


def identity_padded_complex(backend, a, c, degree: int) -> NComplex:
    """The canonical contractible complex from a to c (split shape)."""
    zero = backend.zero_object()
    if degree == 1:
        bp = backend.biproduct(a, c)
        return NComplex(1, (a, bp.ob, c), (bp.i1, bp.p2))
    objects = [a, a] + [zero] * (degree - 2) + [c, c]
    diffs = [backend.identity(a)]
    for i in range(1, degree):
        diffs.append(backend.zero_morphism(objects[i], objects[i + 1]))
    diffs.append(backend.identity(c))
    return NComplex(degree, tuple(objects), tuple(diffs))


# ---------------------------------------------------------------------------
# mapping cone and cocone


def mapping_cone(f: ChainMap) -> NComplex:
    """Cone of f: X -> Y with f^0 = id on the shared degree-0 object."""
    n = f.source.degree
    bk = f.source.backend
    x, y = f.source, f.target
    if x.objects[0] != y.objects[0] or f.maps[0] != bk.identity(x.objects[0]):
        raise NotAComplexError("cone requires f^0 = id")
    mids = [bk.biproduct(x.objects[i + 1], y.objects[i]) for i in range(1, n + 1)]
    objects = [x.objects[1]] + [bp.ob for bp in mids] + [y.objects[n + 1]]
    first = mids[0]
    diffs = [(first.i1 @ (-x.diffs[1])) + (first.i2 @ f.maps[1])]
    for i in range(1, n):
        src, tgt = mids[i - 1], mids[i]
        diffs.append(
            (tgt.i1 @ (-x.diffs[i + 1]) @ src.p1)
            + (tgt.i2 @ f.maps[i + 1] @ src.p1)
            + (tgt.i2 @ y.diffs[i] @ src.p2)
        )
    last = mids[n - 1]
    diffs.append((f.maps[n + 1] @ last.p1) + (y.diffs[n] @ last.p2))
    return NComplex(n, tuple(objects), tuple(diffs))


def mapping_cocone(g: ChainMap) -> NComplex:
    """Cocone of g: Y -> X with g^(n+1) = id; the dual of the cone."""
    n = g.source.degree
    bk = g.source.backend
    y, x = g.source, g.target
    if y.objects[n + 1] != x.objects[n + 1] or g.maps[n + 1] != bk.identity(
        y.objects[n + 1]
    ):
        raise NotAComplexError("cocone requires the top component to be id")
    mids = [bk.biproduct(x.objects[j - 1], y.objects[j]) for j in range(1, n + 1)]
    objects = [y.objects[0]] + [bp.ob for bp in mids] + [x.objects[n]]
    first = mids[0]
    diffs = [(first.i1 @ g.maps[0]) + (first.i2 @ y.diffs[0])]
    for j in range(1, n):
        src, tgt = mids[j - 1], mids[j]
        diffs.append(
            (tgt.i1 @ (-x.diffs[j - 1]) @ src.p1)
            + (tgt.i1 @ g.maps[j] @ src.p2)
            + (tgt.i2 @ y.diffs[j] @ src.p2)
        )
    last = mids[n - 1]
    diffs.append(((-x.diffs[n - 1]) @ last.p1) + (g.maps[n] @ last.p2))
    return NComplex(n, tuple(objects), tuple(diffs))


# ---------------------------------------------------------------------------
# chain maps and homotopies as linear problems


def chain_map_solutions(x: NComplex, y: NComplex, end0: Morphism, end_top: Morphism):
    """All chain maps X -> Y with the two end components prescribed."""
    n = x.degree
    bk = x.backend
    if n != y.degree:
        raise NotAComplexError("degrees differ")
    unknown_pairs = [(x.objects[i], y.objects[i]) for i in range(1, n + 1)]
    equation_pairs = [(x.objects[i], y.objects[i + 1]) for i in range(n + 1)]

    def evaluate(fs: Sequence[Morphism]) -> list[Morphism]:
        full = [end0, *fs, end_top]
        return [
            (full[i + 1] @ x.diffs[i]) - (y.diffs[i] @ full[i]) for i in range(n + 1)
        ]

    return solve_hom_system(bk, unknown_pairs, equation_pairs, evaluate)


def chain_map_with_ends(
    x: NComplex, y: NComplex, end0: Morphism, end_top: Morphism
) -> Optional[ChainMap]:
    sols = chain_map_solutions(x, y, end0, end_top)
    if sols.particular is None:
        return None
    return ChainMap(x, y, (end0, *sols.particular, end_top))


def is_homotopic(f: ChainMap, g: ChainMap) -> Optional[Homotopy]:
    """A homotopy witnessing f ~ g, or None."""
    if f.source != g.source or f.target != g.target:
        raise NotAComplexError("chain maps with different ends")
    x, y = f.source, f.target
    n = x.degree
    bk = x.backend
    unknown_pairs = [(x.objects[i], y.objects[i - 1]) for i in range(1, n + 2)]
    equation_pairs = [(x.objects[i], y.objects[i]) for i in range(n + 2)]
    rhs = [f.maps[i] - g.maps[i] for i in range(n + 2)]

    def evaluate(hs: Sequence[Morphism]) -> list[Morphism]:
        out = []
        for i in range(n + 2):
            term = bk.zero_morphism(x.objects[i], y.objects[i])
            if i <= n:
                term = term + (hs[i] @ x.diffs[i])
            if i >= 1:
                term = term + (y.diffs[i - 1] @ hs[i - 1])
            out.append(term)
        return out

    sols = solve_hom_system(bk, unknown_pairs, equation_pairs, evaluate, rhs)
    if sols.particular is None:
        return None
    return Homotopy(tuple(sols.particular))


def is_contractible(x: NComplex) -> Optional[Homotopy]:
    return is_homotopic(ChainMap.identity(x), ChainMap.zero(x, x))


@dataclass(frozen=True)
class HomotopyEquivalence:
    forward: ChainMap
    backward: ChainMap
    back_forward: Homotopy   # backward @ forward ~ id(source)
    forward_back: Homotopy   # forward @ backward ~ id(target)


def _one_sided_inverse(u: ChainMap, side: str):
    """Solve (v u ~ id) or (u v ~ id) jointly in (v, h): both are linear.

    The candidate inverse v is a fixed-end chain map, as inverses in the
    fixed-end homotopy category must be.
    """
    x, y = u.source, u.target
    n = x.degree
    bk = x.backend
    z = x if side == "left" else y
    ident_a = bk.identity(x.objects[0])
    ident_c = bk.identity(x.objects[n + 1])
    v_pairs = [(y.objects[i], x.objects[i]) for i in range(1, n + 1)]
    h_pairs = [(z.objects[i], z.objects[i - 1]) for i in range(1, n + 2)]
    eq_chain = [(y.objects[i], x.objects[i + 1]) for i in range(n + 1)]
    eq_id = [(z.objects[i], z.objects[i]) for i in range(n + 2)]

    def evaluate(fs):
        vs = [ident_a, *fs[: n], ident_c]
        hs = fs[n :]
        chain_eqs = [
            (vs[i + 1] @ y.diffs[i]) - (x.diffs[i] @ vs[i]) for i in range(n + 1)
        ]
        ident_eqs = []
        for i in range(n + 2):
            term = (
                (vs[i] @ u.maps[i]) if side == "left" else (u.maps[i] @ vs[i])
            )
            if i <= n:
                term = term + (hs[i] @ z.diffs[i])
            if i >= 1:
                term = term + (z.diffs[i - 1] @ hs[i - 1])
            ident_eqs.append(term)
        return chain_eqs + ident_eqs

    rhs = [bk.zero_morphism(*p) for p in eq_chain] + [
        bk.identity(z.objects[i]) for i in range(n + 2)
    ]
    sols = solve_hom_system(bk, v_pairs + h_pairs, eq_chain + eq_id, evaluate, rhs)
    if sols.particular is None:
        return None
    vs = (ident_a, *sols.particular[: n], ident_c)
    hs = sols.particular[n :]
    return ChainMap(y, x, tuple(vs)), Homotopy(tuple(hs))


def homotopy_equivalent(
    x: NComplex, y: NComplex, max_candidates: int = 64
) -> Optional[HomotopyEquivalence]:
    """A fixed-end homotopy equivalence between complexes with equal ends.

    A candidate u: X -> Y is an equivalence exactly when it admits both a
    left and a right inverse up to homotopy; each one-sided inverse is a
    joint linear problem, so only u itself is searched.  When both exist,
    the left inverse is automatically two-sided in the homotopy category.
    """
    if x.ends != y.ends:
        return None
    if x == y:
        ident = ChainMap.identity(x)
        zero_h = Homotopy(
            tuple(
                x.backend.zero_morphism(x.objects[i], x.objects[i - 1])
                for i in range(1, x.degree + 2)
            )
        )
        return HomotopyEquivalence(ident, ident, zero_h, zero_h)
    bk = x.backend
    a, c = x.ends
    sols = chain_map_solutions(x, y, bk.identity(a), bk.identity(c))
    if sols.particular is None:
        return None
    for middles in sols.head(max_candidates):
        u = ChainMap(x, y, (bk.identity(a), *middles, bk.identity(c)))
        left = _one_sided_inverse(u, "left")
        if left is None:
            continue
        right = _one_sided_inverse(u, "right")
        if right is None:
            continue
        v, h_left = left
        h_right = is_homotopic(u @ v, ChainMap.identity(y))
        if h_right is None:
            raise AssertionError(
                "a left inverse with an existing right inverse must be two-sided"
            )
        return HomotopyEquivalence(u, v, h_left, h_right)
    return None


# ---------------------------------------------------------------------------
# n-exangle exactness


@dataclass(frozen=True)
class ExangleDecision:
    ok: bool
    probe: Optional[object] = None
    position: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def _exact_at(maps: list[GroupHom]) -> Optional[int]:
    """Index of the first inexact interior position, or None."""
    for i in range(len(maps) - 1):
        u, v = maps[i], maps[i + 1]
        composite_zero = all(
            v(u(g)).is_zero() for g in u.source.generators()
        )
        if not composite_zero:
            return i
        im_order = u.source.order // group_kernel(u).group.order
        ker_order = group_kernel(v).group.order
        if im_order != ker_order:
            return i
    return None


def is_n_exangle(x: NComplex, delta: Extension) -> ExangleDecision:
    """Check exactness of both induced functor sequences at every probe."""
    bf = delta.bifunctor
    bk = x.backend
    n = x.degree
    if (delta.A, delta.C) != x.ends:
        raise NotAComplexError("extension ends do not match the complex")
    from .category import hom_induced
    from .algebra import GroupHom

    for probe in bk.probes():
        # covariant: Hom(P, X^0) -> ... -> Hom(P, X^(n+1)) -> E(P, X^0)
        maps = [
            hom_induced(
                bk,
                (probe, x.objects[i]),
                (probe, x.objects[i + 1]),
                lambda t, d=x.diffs[i]: d @ t,
            )
            for i in range(n + 1)
        ]
        last_src = bk.hom_group(probe, x.objects[n + 1])
        value = bf.value(probe, x.objects[0])
        images = [
            bf.pull(bk.morphism_from_coords(probe, x.objects[n + 1], e), delta).elem
            for e in last_src.generators()
        ]
        maps.append(GroupHom.from_images(last_src, value, images))
        bad = _exact_at(maps)
        if bad is not None:
            return ExangleDecision(False, probe, f"covariant position {bad + 1}")

        # contravariant: Hom(X^(n+1), P) -> ... -> Hom(X^0, P) -> E(X^(n+1), P)
        maps = [
            hom_induced(
                bk,
                (x.objects[i + 1], probe),
                (x.objects[i], probe),
                lambda t, d=x.diffs[i]: t @ d,
            )
            for i in range(n, -1, -1)
        ]
        last_src = bk.hom_group(x.objects[0], probe)
        value = bf.value(x.objects[n + 1], probe)
        images = [
            bf.push(bk.morphism_from_coords(x.objects[0], probe, e), delta).elem
            for e in last_src.generators()
        ]
        maps.append(GroupHom.from_images(last_src, value, images))
        bad = _exact_at(maps)
        if bad is not None:
            return ExangleDecision(False, probe, f"contravariant position {bad + 1}")
    return ExangleDecision(True)


# ---------------------------------------------------------------------------
# realisations


@dataclass(frozen=True)
class HomotopyClass:
    """A canonical representative plus the raw complex it classifies."""

    representative: NComplex
    raw: NComplex
    equivalence: HomotopyEquivalence  # raw -> representative


def _trivial_class(rep: NComplex) -> HomotopyClass:
    ident = ChainMap.identity(rep)
    zero_h = Homotopy(
        tuple(
            rep.backend.zero_morphism(rep.objects[i], rep.objects[i - 1])
            for i in range(1, rep.degree + 2)
        )
    )
    return HomotopyClass(rep, rep, HomotopyEquivalence(ident, ident, zero_h, zero_h))


class Realisation(ABC):
    """An exact realisation: extensions to homotopy classes of complexes."""

    bifunctor: Bifunctor

    @property
    def degree(self) -> int:
        return self.bifunctor.degree

    @abstractmethod
    def realise_complex(self, delta: Extension) -> NComplex:
        """The canonical representative of s(delta)."""

    @abstractmethod
    def is_inflation(self, f: Morphism) -> bool:
        ...

    @abstractmethod
    def is_deflation(self, g: Morphism) -> bool:
        ...

    def realise(self, delta: Extension) -> HomotopyClass:
        return _trivial_class(self.realise_complex(delta))

    def classify(self, raw: NComplex, delta: Extension) -> Optional[HomotopyClass]:
        """raw as a member of s(delta), with equivalence witnesses."""
        rep = self.realise_complex(delta)
        eq = homotopy_equivalent(raw, rep)
        if eq is None:
            return None
        return HomotopyClass(rep, raw, eq)

    def same_class(self, x: NComplex, y: NComplex) -> bool:
        return homotopy_equivalent(x, y) is not None


class SplitRealisation(Realisation):
    """The smallest structure: zero extensions realise to contractibles."""

    def __init__(self, bifunctor: SplitBifunctor):
        if not isinstance(bifunctor, SplitBifunctor):
            raise TypeError("split realisation needs the trivial bifunctor")
        self.bifunctor = bifunctor

    def realise_complex(self, delta: Extension) -> NComplex:
        if not delta.is_zero():
            raise NoRealisationRegisteredError("split classes are all zero")
        return identity_padded_complex(
            self.bifunctor.backend, delta.A, delta.C, self.degree
        )

    def is_inflation(self, f: Morphism) -> bool:
        from .category import NotASectionError

        if retraction_of(f) is None:
            return False
        try:
            split_complement(f)
        except NotASectionError:
            return False
        return True

    def is_deflation(self, g: Morphism) -> bool:
        s = section_of(g)
        if s is None:
            return False
        bk = g.backend
        e = bk.identity(g.source) - (s @ g)
        return split_idempotent(e) is not None


class Ext1Realisation(Realisation):
    """Short exact sequences over finite abelian groups (degree 1)."""

    def __init__(self, bifunctor: Ext1Bifunctor):
        if not isinstance(bifunctor, Ext1Bifunctor):
            raise TypeError("this realisation is for Ext^1 over FinAb")
        self.bifunctor = bifunctor

    def realise_complex(self, delta: Extension) -> NComplex:
        from .algebra import canonicalize, GroupHom

        bf = self.bifunctor
        bk = bf.backend
        a_obj, c_obj = delta.A, delta.C
        reps = bf._reps(c_obj, a_obj, delta.elem)
        k = a_obj.rank
        j_count = c_obj.rank
        size = k + j_count
        rows = []
        for i in range(k):
            row = [0] * size
            row[i] = a_obj.invariant_factors[i]
            for j in range(j_count):
                row[k + j] = -reps[j].coords[i]
            rows.append(row)
        for j in range(j_count):
            row = [0] * size
            row[k + j] = c_obj.invariant_factors[j]
            rows.append(row)
        canon = canonicalize(tuple(tuple(r) for r in rows))
        middle = canon.group
        incl = GroupHom(
            a_obj, middle, tuple(row[:k] for row in canon.project)
        )
        proj = GroupHom(
            middle, c_obj, tuple(canon.lift[k + j] for j in range(j_count))
        )
        return NComplex(
            1,
            (a_obj, middle, c_obj),
            (Morphism(bk, a_obj, middle, incl), Morphism(bk, middle, c_obj, proj)),
        )

    def class_of_sequence(self, x: NComplex) -> Extension:
        """The Ext class realised by a short exact complex (A -> B -> C)."""
        from .algebra import solve

        bf = self.bifunctor
        f, g = x.diffs
        a_obj, b_obj, c_obj = x.objects
        reps = []
        for j, cj in enumerate(c_obj.invariant_factors):
            gen = c_obj.generators()[j]
            b_lift = solve(g.payload, gen)
            if b_lift is None:
                raise NotAComplexError("projection is not surjective")
            target = cj * b_lift
            m_j = solve(f.payload, target)
            if m_j is None:
                raise NotAComplexError("sequence is not exact at the middle")
            reps.append(m_j)
        return Extension(a_obj, c_obj, bf._from_reps(c_obj, a_obj, reps), bf)

    def is_inflation(self, f: Morphism) -> bool:
        return group_kernel(f.payload).group.order == 1

    def is_deflation(self, g: Morphism) -> bool:
        from .algebra import image_order

        return image_order(g.payload) == g.target.order


@dataclass(frozen=True)
class ExStructure:
    """A realised structure; the realisation is None for bifunctors
    (like Hom) that the theory equips with no realisation."""

    label: str
    backend: CategoryBackend
    bifunctor: Bifunctor
    realisation: Optional[Realisation]

    @property
    def degree(self) -> int:
        return self.bifunctor.degree

    def __repr__(self) -> str:
        return f"ExStructure({self.label})"


def split_structure(backend: CategoryBackend, degree: int = 1) -> ExStructure:
    bf = SplitBifunctor(backend, degree)
    return ExStructure(f"split-n{degree}", backend, bf, SplitRealisation(bf))


def ext1_structure(backend: FinAbBackend) -> ExStructure:
    bf = Ext1Bifunctor(backend)
    return ExStructure(
        f"ext1-exp{backend.exponent}", backend, bf, Ext1Realisation(bf)
    )


# ---------------------------------------------------------------------------
# lifting morphisms of extensions (R0)


def realise(structure: ExStructure, delta: Extension) -> HomotopyClass:
    """The homotopy class assigned to an extension by the structure."""
    if structure.realisation is None:
        raise NoRealisationRegisteredError(
            f"structure {structure.label} carries no realisation"
        )
    return structure.realisation.realise(delta)


def lift_morphism(m: ExtMorphism, x: NComplex, y: NComplex) -> ChainMap:
    """A chain map realising (a, c) between given realisations."""
    out = chain_map_with_ends(x, y, m.a, m.c)
    if out is None:
        raise NoLiftError(
            "no chain map realises the morphism: an (R0) violation"
        )
    return out


# ---------------------------------------------------------------------------
# the axiom verifier


def _universe_extensions(structure: ExStructure, cap_objects, cap_order, rng, samples):
    bf = structure.bifunctor
    objects = capped_objects(structure.backend, cap_objects)
    out = []
    sampled = False
    for a in objects:
        for c in objects:
            group = bf.value(c, a)
            if group.order <= cap_order:
                elems = list(group.elements(cap_order))
            else:
                sampled = True
                elems = [group.zero()]
                elems.extend(group.generators())
                for _ in range(samples):
                    elems.append(
                        group.element(
                            tuple(rng.randrange(d) for d in group.invariant_factors)
                        )
                    )
                seen = set()
                elems = [
                    e for e in elems if e.coords not in seen and not seen.add(e.coords)
                ]
            out.extend(Extension(a, c, e, bf) for e in elems)
    return objects, out, sampled


def verify_axioms(
    structure: ExStructure,
    cap_objects: int = 2,
    cap_order: int = 16,
    samples: int = 2,
    seed: int = 0,
    report: Optional[Report] = None,
) -> Report:
    """Check (R0)-(R2), (EA1), (EA2) and (EA2op) on a capped universe."""
    rng = random.Random(seed)
    rep = report if report is not None else Report()
    rep.caps.update(
        {"cap_objects": cap_objects, "cap_order": cap_order, "samples": samples}
    )
    bf = structure.bifunctor
    bk = structure.backend
    rz = structure.realisation
    n = structure.degree
    objects, extensions, sampled = _universe_extensions(
        structure, cap_objects, cap_order, rng, samples
    )
    if sampled:
        rep.skip(
            f"exangle/{structure.label}/universe",
            "value groups above cap_order sampled (zero+generators+random)",
        )
    prefix = f"exangle/{structure.label}"

    def sample_exts(k):
        if len(extensions) <= k:
            return list(extensions)
        return rng.sample(extensions, k)

    # --- R2 -------------------------------------------------------------
    ok, witness = True, ""
    for a in objects:
        zero_right = bf.zero_extension(a, bk.zero_object())
        got = rz.realise_complex(zero_right)
        want = identity_padded_complex(bk, a, bk.zero_object(), n)
        if got != want and homotopy_equivalent(got, want) is None:
            ok, witness = False, f"s({bk.object_label(a)}, 0) has wrong shape"
        zero_left = bf.zero_extension(bk.zero_object(), a)
        got = rz.realise_complex(zero_left)
        want = identity_padded_complex(bk, bk.zero_object(), a, n)
        if got != want and homotopy_equivalent(got, want) is None:
            ok, witness = False, f"s(0, {bk.object_label(a)}) has wrong shape"
    rep.record(f"{prefix}/R2-zero-extensions", ok, witness=witness)

    # --- R1 -------------------------------------------------------------
    ok, witness = True, ""
    for delta in extensions:
        x = rz.realise_complex(delta)
        dec = is_n_exangle(x, delta)
        if not dec.ok:
            ok = False
            witness = f"{delta}: fails at probe {dec.probe}, {dec.position}"
            break
    rep.record(f"{prefix}/R1-realisations-are-exangles", ok, witness=witness)

    # --- R0 -------------------------------------------------------------
    ok, witness = True, ""
    lifts_checked = 0
    for delta in sample_exts(6):
        for rho in sample_exts(6):
            sols = ext_hom_solutions(delta, rho)
            if sols.particular is None:
                continue
            pairs = (
                list(sols.solutions(cap_order))
                if sols.count <= cap_order
                else sols.sample(rng, samples)
            )
            x = rz.realise_complex(delta)
            y = rz.realise_complex(rho)
            for a, c in pairs:
                m = ExtMorphism(delta, rho, a, c)
                try:
                    lift_morphism(m, x, y)
                    lifts_checked += 1
                except NoLiftError:
                    ok, witness = False, f"no lift for {m} between {x} and {y}"
    rep.record(
        f"{prefix}/R0-morphisms-lift", ok,
        detail=f"{lifts_checked} lifts found", witness=witness,
    )

    # --- EA1 ------------------------------------------------------------
    ok, witness = True, ""
    composed = 0
    small = [x for x in objects if bk.hom_group(x, x).order <= cap_order * 16]
    for a in small:
        for b in small:
            if bk.hom_group(a, b).order > cap_order * 16:
                continue
            inflations_ab = [
                f for f in bk.morphisms(a, b) if rz.is_inflation(f)
            ]
            for b2 in small[: max(2, len(small) // 2)]:
                if bk.hom_group(b, b2).order > cap_order * 16:
                    continue
                for g in bk.morphisms(b, b2):
                    if not rz.is_inflation(g):
                        continue
                    for f in inflations_ab[: samples + 2]:
                        composed += 1
                        if not rz.is_inflation(g @ f):
                            ok = False
                            witness = (
                                f"inflations {bk.object_label(a)}->"
                                f"{bk.object_label(b)}->{bk.object_label(b2)} "
                                "do not compose"
                            )
    rep.record(
        f"{prefix}/EA1-inflations-compose", ok,
        detail=f"{composed} composites checked", witness=witness,
    )

    ok, witness = True, ""
    composed = 0
    for a in small:
        for b in small:
            if bk.hom_group(a, b).order > cap_order * 16:
                continue
            deflations_ab = [
                f for f in bk.morphisms(a, b) if rz.is_deflation(f)
            ]
            for b2 in small[: max(2, len(small) // 2)]:
                if bk.hom_group(b, b2).order > cap_order * 16:
                    continue
                for g in bk.morphisms(b, b2):
                    if not rz.is_deflation(g):
                        continue
                    for f in deflations_ab[: samples + 2]:
                        composed += 1
                        if not rz.is_deflation(g @ f):
                            ok = False
                            witness = "deflations do not compose"
    rep.record(
        f"{prefix}/EA1op-deflations-compose", ok,
        detail=f"{composed} composites checked", witness=witness,
    )

    # --- EA2 ------------------------------------------------------------
    ok, witness = True, ""
    checked = 0
    for delta in sample_exts(5):
        d_obj, a_obj = delta.C, delta.A
        for c_src in objects[: max(3, len(objects) // 2)]:
            hom_cd = bk.hom_group(c_src, d_obj)
            if hom_cd.order > cap_order * 16:
                continue
            cands = list(bk.morphisms(c_src, d_obj))
            if len(cands) > samples + 2:
                cands = [cands[0]] + rng.sample(cands[1:], samples + 1)
            for c_mor in cands:
                res = _check_ea2_instance(structure, delta, c_mor)
                checked += 1
                if res is not None:
                    ok, witness = False, res
    rep.record(
        f"{prefix}/EA2-cones-realise-pushforwards", ok,
        detail=f"{checked} instances checked", witness=witness,
    )

    # --- EA2op ----------------------------------------------------------
    ok, witness = True, ""
    checked = 0
    for delta in sample_exts(5):
        for b_tgt in objects[: max(3, len(objects) // 2)]:
            hom_ab = bk.hom_group(delta.A, b_tgt)
            if hom_ab.order > cap_order * 16:
                continue
            cands = list(bk.morphisms(delta.A, b_tgt))
            if len(cands) > samples + 2:
                cands = [cands[0]] + rng.sample(cands[1:], samples + 1)
            for a_mor in cands:
                res = _check_ea2op_instance(structure, delta, a_mor)
                checked += 1
                if res is not None:
                    ok, witness = False, res
    rep.record(
        f"{prefix}/EA2op-cocones-realise-pullbacks", ok,
        detail=f"{checked} instances checked", witness=witness,
    )
    return rep


def _check_ea2_instance(structure, delta, c_mor, max_lifts: int = 16):
    """None when some lift of (id, c) has its cone realising the pushforward."""
    bf = structure.bifunctor
    bk = structure.backend
    rz = structure.realisation
    rho = bf.pull(c_mor, delta)
    x = rz.realise_complex(rho)
    y = rz.realise_complex(delta)
    sols = chain_map_solutions(x, y, bk.identity(delta.A), c_mor)
    if sols.particular is None:
        return f"(EA2) no lift of (id, c) for {delta} along {c_mor}"
    eps = bf.push(x.diffs[0], delta)
    target = rz.realise_complex(eps)
    satisfying = 0
    tried = 0
    for middles in sols.head(max_lifts):
        tried += 1
        cone = mapping_cone(ChainMap(x, y, (bk.identity(delta.A), *middles, c_mor)))
        if homotopy_equivalent(cone, target) is not None:
            satisfying += 1
            return None
    return (
        f"(EA2) none of {tried} lifts has a cone realising the pushforward "
        f"for {delta} along {c_mor}"
    )


def _check_ea2op_instance(structure, delta, a_mor, max_lifts: int = 16):
    bf = structure.bifunctor
    bk = structure.backend
    rz = structure.realisation
    eps = bf.push(a_mor, delta)
    x = rz.realise_complex(eps)
    y = rz.realise_complex(delta)
    sols = chain_map_solutions(y, x, a_mor, bk.identity(delta.C))
    if sols.particular is None:
        return f"(EA2op) no lift of (a, id) for {delta} along {a_mor}"
    eta = bf.pull(x.diffs[x.degree], delta)
    target = rz.realise_complex(eta)
    tried = 0
    for middles in sols.head(max_lifts):
        tried += 1
        cocone = mapping_cocone(
            ChainMap(y, x, (a_mor, *middles, bk.identity(delta.C)))
        )
        if homotopy_equivalent(cocone, target) is not None:
            return None
    return (
        f"(EA2op) none of {tried} lifts has a cocone realising the pullback "
        f"for {delta} along {a_mor}"
    )
