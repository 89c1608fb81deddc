"""Biadditive functors to abelian groups and their extension values.

Three instances: the split (trivial) bifunctor on any backend, the Hom
bifunctor, and Ext^1 over finite abelian groups.  Ext^1 classes live in
A/cA per cyclic summand Z/c of the base object, via the resolution
Z --c--> Z --> Z/c; pushforward acts on representatives, pullback lifts
through the resolutions.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from math import gcd
from typing import Iterator, Optional, Sequence

from .algebra import (
    FinAbGroup,
    GroupElement,
    GroupHom,
    TRIVIAL_GROUP,
    kernel,
    presentation_of_factors,
    solve,
)
from .category import (
    CategoryBackend,
    FinAbBackend,
    Morphism,
    ObjectMismatchError,
)


@dataclass(frozen=True)
class Extension:
    """An element of value(C, A): an abstract extension of C by A."""

    A: object
    C: object
    elem: GroupElement
    bifunctor: "Bifunctor" = field(compare=False, repr=False)

    def is_zero(self) -> bool:
        return self.elem.is_zero()

    def __add__(self, other: "Extension") -> "Extension":
        if (self.A, self.C) != (other.A, other.C):
            raise ObjectMismatchError("extensions with different ends")
        return Extension(self.A, self.C, self.elem + other.elem, self.bifunctor)

    def __neg__(self) -> "Extension":
        return Extension(self.A, self.C, -self.elem, self.bifunctor)

    def __rmul__(self, k: int) -> "Extension":
        return Extension(self.A, self.C, k * self.elem, self.bifunctor)

    def __str__(self) -> str:
        bk = self.bifunctor.backend
        return (
            f"{self.elem} in E({bk.object_label(self.C)}, {bk.object_label(self.A)})"
        )


class Bifunctor(ABC):
    """E: C^op x C -> Ab, biadditive, with finite values."""

    backend: CategoryBackend
    degree: int

    @abstractmethod
    def value(self, c, a) -> FinAbGroup:
        ...

    @abstractmethod
    def _push(self, x: Morphism, c, e: GroupElement) -> GroupElement:
        ...

    @abstractmethod
    def _pull(self, z: Morphism, a, e: GroupElement) -> GroupElement:
        ...

    # ---- derived ------------------------------------------------------------

    def extension(self, a, c, elem: GroupElement) -> Extension:
        if elem.parent != self.value(c, a):
            raise ObjectMismatchError("element not in value group")
        return Extension(a, c, elem, self)

    def zero_extension(self, a, c) -> Extension:
        return Extension(a, c, self.value(c, a).zero(), self)

    def extensions(self, a, c, bound: Optional[int] = None) -> Iterator[Extension]:
        for e in self.value(c, a).elements(bound):
            yield Extension(a, c, e, self)

    def push(self, x: Morphism, delta: Extension) -> Extension:
        """x_E(delta) for x: A -> X."""
        if x.source != delta.A:
            raise ObjectMismatchError("pushforward morphism must start at A")
        return Extension(x.target, delta.C, self._push(x, delta.C, delta.elem), self)

    def pull(self, z: Morphism, delta: Extension) -> Extension:
        """z^E(delta) for z: Z -> C."""
        if z.target != delta.C:
            raise ObjectMismatchError("pullback morphism must end at C")
        return Extension(delta.A, z.source, self._pull(z, delta.A, delta.elem), self)

    def push_hom(self, x: Morphism, c) -> GroupHom:
        """value(c, source x) -> value(c, target x) as a group hom."""
        src = self.value(c, x.source)
        return GroupHom.from_images(
            src, self.value(c, x.target), [self._push(x, c, g) for g in src.generators()]
        )

    def pull_hom(self, z: Morphism, a) -> GroupHom:
        """value(target z, a) -> value(source z, a) as a group hom."""
        src = self.value(z.target, a)
        return GroupHom.from_images(
            src, self.value(z.source, a), [self._pull(z, a, g) for g in src.generators()]
        )


class SplitBifunctor(Bifunctor):
    """The trivial bifunctor: every value group is trivial."""

    def __init__(self, backend: CategoryBackend, degree: int = 1):
        if degree < 1:
            raise ValueError("degree must be at least 1")
        self.backend = backend
        self.degree = degree

    def __repr__(self) -> str:
        return f"SplitBifunctor(degree={self.degree})"

    def value(self, c, a) -> FinAbGroup:
        return TRIVIAL_GROUP

    def _push(self, x, c, e):
        return TRIVIAL_GROUP.zero()

    def _pull(self, z, a, e):
        return TRIVIAL_GROUP.zero()


class HomBifunctor(Bifunctor):
    """E(C, A) = Hom(C, A); push/pull are post/pre-composition.

    Degree-1 conventions; used for the category of extensions only, it
    carries no realisation.
    """

    def __init__(self, backend: CategoryBackend):
        self.backend = backend
        self.degree = 1

    def __repr__(self) -> str:
        return "HomBifunctor()"

    def value(self, c, a) -> FinAbGroup:
        return self.backend.hom_group(c, a)

    def as_morphism(self, delta: Extension) -> Morphism:
        return self.backend.morphism_from_coords(delta.C, delta.A, delta.elem)

    def from_morphism(self, f: Morphism) -> Extension:
        return Extension(f.target, f.source, self.backend.morphism_coords(f), self)

    def _push(self, x, c, e):
        d = self.backend.morphism_from_coords(c, x.source, e)
        return self.backend.morphism_coords(x @ d)

    def _pull(self, z, a, e):
        d = self.backend.morphism_from_coords(z.target, a, e)
        return self.backend.morphism_coords(d @ z)


@dataclass(frozen=True)
class _Ext1Layout:
    group: FinAbGroup
    canon: object
    moduli: tuple[int, ...]


class Ext1Bifunctor(Bifunctor):
    """Ext^1 over finite abelian groups.

    A class in Ext^1(C, A) with C = (+)_j Z/c_j is a tuple of classes
    m_j in A / c_j A; the raw coordinate at (j, i) is m_j's coefficient
    on the i-th generator of A, reduced mod gcd(a_i, c_j).
    """

    def __init__(self, backend: FinAbBackend):
        if not isinstance(backend, FinAbBackend):
            raise TypeError("Ext1 requires the finite-abelian-group backend")
        self.backend = backend
        self.degree = 1
        self._layouts: dict = {}

    def __repr__(self) -> str:
        return "Ext1Bifunctor()"

    def _layout(self, c: FinAbGroup, a: FinAbGroup) -> _Ext1Layout:
        key = (c, a)
        hit = self._layouts.get(key)
        if hit is None:
            moduli = tuple(
                gcd(ai, cj) for cj in c.invariant_factors for ai in a.invariant_factors
            )
            canon = presentation_of_factors(moduli)
            hit = _Ext1Layout(canon.group, canon, moduli)
            self._layouts[key] = hit
        return hit

    def value(self, c, a) -> FinAbGroup:
        return self._layout(c, a).group

    def _reps(self, c: FinAbGroup, a: FinAbGroup, e: GroupElement) -> list[GroupElement]:
        """One representative in A per cyclic summand Z/c_j of C."""
        lay = self._layout(c, a)
        raw = lay.canon.lift_element(e)
        k = a.rank
        return [
            a.element(raw[j * k : (j + 1) * k]) for j in range(c.rank)
        ]

    def _from_reps(self, c: FinAbGroup, a: FinAbGroup, reps: Sequence[GroupElement]) -> GroupElement:
        lay = self._layout(c, a)
        raw: list[int] = []
        for rep in reps:
            raw.extend(rep.coords)
        return lay.canon.project_vector(raw)

    def _push(self, x, c, e):
        reps = self._reps(c, x.source, e)
        return self._from_reps(c, x.target, [x.payload(m) for m in reps])

    def _pull(self, z, a, e):
        c = z.target
        znew = z.source
        reps = self._reps(c, a, e)
        cf = c.invariant_factors
        zf = znew.invariant_factors
        out = []
        for l, cl in enumerate(zf):
            acc = a.zero()
            for j, cj in enumerate(cf):
                t = z.payload.matrix[j][l]
                lam = (t * cl) // cj  # integral since z is well defined
                acc = acc + lam * reps[j]
            out.append(acc)
        return self._from_reps(znew, a, out)


# ---------------------------------------------------------------------------
# sums of extensions


def direct_sum(delta: Extension, rho: Extension) -> Extension:
    """The unique class in E(C+D, A+B) with components (delta, 0, 0, rho)."""
    bf = delta.bifunctor
    if rho.bifunctor is not bf:
        raise ObjectMismatchError("extensions from different bifunctors")
    bk = bf.backend
    bp_a = bk.biproduct(delta.A, rho.A)
    bp_c = bk.biproduct(delta.C, rho.C)
    t1 = bf.push(bp_a.i1, bf.pull(bp_c.p1, delta))
    t2 = bf.push(bp_a.i2, bf.pull(bp_c.p2, rho))
    return t1 + t2


def direct_sum_components(total: Extension, ends) -> tuple:
    """The four components E(iota_i, pi_j)(total) for ends ((A,C), (B,D))."""
    bf = total.bifunctor
    bk = bf.backend
    (a, c), (b, d) = ends
    bp_a = bk.biproduct(a, b)
    bp_c = bk.biproduct(c, d)
    if bp_a.ob != total.A or bp_c.ob != total.C:
        raise ObjectMismatchError("ends do not match the total extension")
    return (
        bf.pull(bp_c.i1, bf.push(bp_a.p1, total)),
        bf.pull(bp_c.i1, bf.push(bp_a.p2, total)),
        bf.pull(bp_c.i2, bf.push(bp_a.p1, total)),
        bf.pull(bp_c.i2, bf.push(bp_a.p2, total)),
    )


def baer_sum(delta1: Extension, delta2: Extension) -> Extension:
    """Group addition on value(C, A)."""
    return delta1 + delta2


def baer_sum_structural(delta1: Extension, delta2: Extension) -> Extension:
    """E(Delta_C, Nabla_A)(delta1 (+) delta2): the diagonal/codiagonal form."""
    bf = delta1.bifunctor
    bk = bf.backend
    if (delta1.A, delta1.C) != (delta2.A, delta2.C):
        raise ObjectMismatchError("summands with different ends")
    total = direct_sum(delta1, delta2)
    return bf.pull(bk.diagonal(delta1.C), bf.push(bk.codiagonal(delta1.A), total))


# ---------------------------------------------------------------------------
# relative substructures


class RelativeBifunctor(Bifunctor):
    """The subfunctor of classes killed by pullback along maps from I."""

    def __init__(self, parent: Bifunctor, test_objects: Sequence):
        self.parent = parent
        self.backend = parent.backend
        self.degree = parent.degree
        self.test_objects = tuple(test_objects)
        self._values: dict = {}

    def __repr__(self) -> str:
        labels = [self.backend.object_label(x) for x in self.test_objects]
        return f"RelativeBifunctor(tests={labels})"

    def _value_data(self, c, a):
        key = (c, a)
        hit = self._values.get(key)
        if hit is None:
            parent_group = self.parent.value(c, a)
            tests = []
            for x in self.test_objects:
                for z in self.backend.hom_generators(x, c):
                    tests.append(self.parent.pull_hom(z, a))
            if not tests:
                stacked = GroupHom.zero(parent_group, TRIVIAL_GROUP)
            else:
                targets = [t.target for t in tests]
                canon = presentation_of_factors(
                    tuple(d for g in targets for d in g.invariant_factors)
                )
                images = []
                for gen in parent_group.generators():
                    raw: list[int] = []
                    for t in tests:
                        raw.extend(t(gen).coords)
                    images.append(canon.project_vector(raw))
                stacked = GroupHom.from_images(parent_group, canon.group, images)
            sub = kernel(stacked)
            hit = (sub.group, sub.inclusion)
            self._values[key] = hit
        return hit

    def value(self, c, a) -> FinAbGroup:
        return self._value_data(c, a)[0]

    def embed(self, delta: Extension) -> Extension:
        """The same class seen in the parent bifunctor."""
        _, incl = self._value_data(delta.C, delta.A)
        return Extension(delta.A, delta.C, incl(delta.elem), self.parent)

    def _restrict(self, c, a, parent_elem: GroupElement) -> GroupElement:
        _, incl = self._value_data(c, a)
        x = solve(incl, parent_elem)
        if x is None:
            raise ObjectMismatchError(
                "class leaves the relative subfunctor; it is not closed here"
            )
        return x

    def _push(self, x, c, e):
        _, incl = self._value_data(c, x.source)
        out = self.parent._push(x, c, incl(e))
        return self._restrict(c, x.target, out)

    def _pull(self, z, a, e):
        _, incl = self._value_data(z.target, a)
        out = self.parent._pull(z, a, incl(e))
        return self._restrict(z.source, a, out)


def relative_subfunctor(parent: Bifunctor, test_objects: Sequence) -> RelativeBifunctor:
    return RelativeBifunctor(parent, test_objects)
