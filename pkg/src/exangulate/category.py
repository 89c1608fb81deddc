"""Additive-category backends: finite abelian groups and finite hom tables.

Both backends present the same interface: structural object equality,
hom-sets that are finite abelian groups, bilinear composition and canonical
biproducts.  The table backend works in the additive envelope of its basic
objects (objects are sorted tuples of basic names), so biproducts are total
and the biproduct identities hold by construction.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from typing import Callable, Iterator, Optional, Sequence

from .algebra import (
    BoundExceededError,
    DEFAULT_ENUMERATION_BOUND,
    FinAbGroup,
    GroupElement,
    GroupHom,
    TRIVIAL_GROUP,
    cyclic,
    hom_group,
    cokernel,
    presentation_of_factors,
    solve,
)


class ObjectMismatchError(ValueError):
    """Morphisms or objects with incompatible ends were combined."""


class NotASectionError(ValueError):
    """A split complement was requested for a morphism with no retraction."""


class TableValidationError(ValueError):
    """A hom table violates a category law; the message names the triple."""


@dataclass(frozen=True)
class Morphism:
    backend: "CategoryBackend" = field(compare=False, repr=False)
    source: object
    target: object
    payload: object

    def __matmul__(self, other: "Morphism") -> "Morphism":
        return self.backend.compose(self, other)

    def __add__(self, other: "Morphism") -> "Morphism":
        return self.backend.add(self, other)

    def __neg__(self) -> "Morphism":
        return self.backend.negate(self)

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + self.backend.negate(other)

    def __rmul__(self, k: int) -> "Morphism":
        return self.backend.scale(k, self)

    def is_zero(self) -> bool:
        return self == self.backend.zero_morphism(self.source, self.target)

    def __str__(self) -> str:
        bk = self.backend
        return f"{bk.object_label(self.source)} -> {bk.object_label(self.target)}"


@dataclass(frozen=True)
class MultiBiproduct:
    """A biproduct with one inclusion/projection per summand."""

    ob: object
    iotas: tuple[Morphism, ...]
    pis: tuple[Morphism, ...]


@dataclass(frozen=True)
class Biproduct:
    ob: object
    i1: Morphism
    i2: Morphism
    p1: Morphism
    p2: Morphism


class CategoryBackend(ABC):
    """Setup data for an additive category with finite hom groups."""

    @abstractmethod
    def probes(self) -> tuple:
        """Objects generating the capped universe under biproducts."""

    @abstractmethod
    def zero_object(self):
        ...

    @abstractmethod
    def object_label(self, x) -> str:
        ...

    @abstractmethod
    def hom_group(self, x, y) -> FinAbGroup:
        ...

    @abstractmethod
    def morphism_coords(self, f: Morphism) -> GroupElement:
        ...

    @abstractmethod
    def morphism_from_coords(self, x, y, e: GroupElement) -> Morphism:
        ...

    @abstractmethod
    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        ...

    @abstractmethod
    def identity(self, x) -> Morphism:
        ...

    @abstractmethod
    def biproduct_many(self, objects: Sequence) -> MultiBiproduct:
        ...

    @abstractmethod
    def decompose(self, x) -> tuple:
        """Canonical probe summands with x == biproduct_many(...).ob."""

    # ---- derived operations -------------------------------------------------

    def is_zero_object(self, x) -> bool:
        return self.hom_group(x, x).order == 1

    def zero_morphism(self, x, y) -> Morphism:
        return self.morphism_from_coords(x, y, self.hom_group(x, y).zero())

    def add(self, f: Morphism, g: Morphism) -> Morphism:
        if (f.source, f.target) != (g.source, g.target):
            raise ObjectMismatchError("sum of morphisms with different ends")
        e = self.morphism_coords(f) + self.morphism_coords(g)
        return self.morphism_from_coords(f.source, f.target, e)

    def negate(self, f: Morphism) -> Morphism:
        return self.morphism_from_coords(
            f.source, f.target, -self.morphism_coords(f)
        )

    def scale(self, k: int, f: Morphism) -> Morphism:
        return self.morphism_from_coords(
            f.source, f.target, k * self.morphism_coords(f)
        )

    def hom_generators(self, x, y) -> tuple[Morphism, ...]:
        return tuple(
            self.morphism_from_coords(x, y, e)
            for e in self.hom_group(x, y).generators()
        )

    def morphisms(self, x, y, bound: Optional[int] = None) -> Iterator[Morphism]:
        for e in self.hom_group(x, y).elements(bound):
            yield self.morphism_from_coords(x, y, e)

    def biproduct(self, x, y) -> Biproduct:
        mb = self.biproduct_many((x, y))
        return Biproduct(mb.ob, mb.iotas[0], mb.iotas[1], mb.pis[0], mb.pis[1])

    def diagonal(self, x) -> Morphism:
        bp = self.biproduct(x, x)
        return bp.i1 + bp.i2

    def codiagonal(self, x) -> Morphism:
        bp = self.biproduct(x, x)
        return bp.p1 + bp.p2


# ---------------------------------------------------------------------------
# finite abelian groups


class FinAbBackend(CategoryBackend):
    """All finite abelian groups of exponent dividing a fixed bound."""

    def __init__(self, exponent: int):
        if exponent < 2:
            raise ValueError("exponent must be at least 2")
        self.exponent = exponent
        self._probes = tuple(
            cyclic(d) for d in range(2, exponent + 1) if exponent % d == 0
        )
        self._bp_cache: dict = {}

    def __repr__(self) -> str:
        return f"FinAbBackend(exponent={self.exponent})"

    def probes(self):
        return self._probes

    def zero_object(self):
        return TRIVIAL_GROUP

    def object_label(self, x) -> str:
        return str(x)

    def hom_group(self, x, y) -> FinAbGroup:
        return hom_group(x, y).group

    def morphism_coords(self, f: Morphism) -> GroupElement:
        return hom_group(f.source, f.target).coords(f.payload)

    def morphism_from_coords(self, x, y, e: GroupElement) -> Morphism:
        return Morphism(self, x, y, hom_group(x, y).from_coords(e))

    def morphism(self, hom: GroupHom) -> Morphism:
        return Morphism(self, hom.source, hom.target, hom)

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        if f.target != g.source:
            raise ObjectMismatchError(
                f"cannot compose {f} with {g}: middle objects differ"
            )
        return Morphism(self, f.source, g.target, g.payload @ f.payload)

    def identity(self, x) -> Morphism:
        return Morphism(self, x, x, GroupHom.identity(x))

    def add(self, f: Morphism, g: Morphism) -> Morphism:
        if (f.source, f.target) != (g.source, g.target):
            raise ObjectMismatchError("sum of morphisms with different ends")
        return Morphism(self, f.source, f.target, f.payload + g.payload)

    def negate(self, f: Morphism) -> Morphism:
        return Morphism(self, f.source, f.target, -f.payload)

    def scale(self, k: int, f: Morphism) -> Morphism:
        return Morphism(self, f.source, f.target, k * f.payload)

    def zero_morphism(self, x, y) -> Morphism:
        return Morphism(self, x, y, GroupHom.zero(x, y))

    def apply(self, f: Morphism, e: GroupElement) -> GroupElement:
        return f.payload(e)

    def biproduct_many(self, objects: Sequence) -> MultiBiproduct:
        key = tuple(objects)
        hit = self._bp_cache.get(key)
        if hit is not None:
            return hit
        factors: list[int] = []
        offsets = []
        for ob in key:
            offsets.append(len(factors))
            factors.extend(ob.invariant_factors)
        canon = presentation_of_factors(tuple(factors))
        total = canon.group
        iotas = []
        pis = []
        for ob, off in zip(key, offsets):
            r = ob.rank
            iota = tuple(row[off : off + r] for row in canon.project)
            pi = tuple(canon.lift[off + i] for i in range(r))
            iotas.append(Morphism(self, ob, total, GroupHom(ob, total, iota)))
            pis.append(Morphism(self, total, ob, GroupHom(total, ob, pi)))
        out = MultiBiproduct(total, tuple(iotas), tuple(pis))
        self._bp_cache[key] = out
        return out

    def decompose(self, x) -> tuple:
        return tuple(cyclic(d) for d in x.invariant_factors)


# ---------------------------------------------------------------------------
# declarative hom-table categories (additive envelope)


@dataclass(frozen=True)
class TableData:
    """Basic objects with hom groups, identities and a composition table.

    ``compose[(x, y, z)][j][i]`` gives, as coordinates in hom(x, z), the
    composite (generator j of hom(y, z)) after (generator i of hom(x, y)).
    """

    objects: tuple[str, ...]
    homs: dict
    identities: dict
    compose: dict

    def hom(self, x: str, y: str) -> FinAbGroup:
        return self.homs[(x, y)]


def validate_table(data: TableData) -> list[str]:
    """Category-law violations in a hom table, each naming its triple."""
    problems = []
    obs = data.objects
    for x in obs:
        for y in obs:
            if (x, y) not in data.homs:
                problems.append(f"missing hom group ({x},{y})")
    if problems:
        return problems

    def compose_elems(x, y, z, g: GroupElement, f: GroupElement) -> GroupElement:
        table = data.compose[(x, y, z)]
        out = data.hom(x, z).zero()
        for j, gj in enumerate(g.coords):
            for i, fi in enumerate(f.coords):
                out = out + (gj * fi) * data.hom(x, z).element(table[j][i])
        return out

    for x in obs:
        if x not in data.identities:
            problems.append(f"missing identity for {x}")
            continue
    if problems:
        return problems

    # bilinear well-definedness: generator orders must be respected
    for (x, y, z), table in data.compose.items():
        hyz, hxy, hxz = data.hom(y, z), data.hom(x, y), data.hom(x, z)
        for j, dj in enumerate(hyz.invariant_factors):
            for i, di in enumerate(hxy.invariant_factors):
                entry = hxz.element(table[j][i])
                if not (dj * entry).is_zero() or not (di * entry).is_zero():
                    problems.append(
                        f"bilinearity broken at ({x},{y},{z}) generators ({j},{i})"
                    )
    if problems:
        return problems

    # unit laws on generators
    for x in obs:
        for y in obs:
            idx = data.hom(x, x).element(data.identities[x])
            idy = data.hom(y, y).element(data.identities[y])
            for i, gen in enumerate(data.hom(x, y).generators()):
                if compose_elems(x, x, y, gen, idx) != gen:
                    problems.append(f"right unit broken at ({x},{y}) generator {i}")
                if compose_elems(x, y, y, idy, gen) != gen:
                    problems.append(f"left unit broken at ({x},{y}) generator {i}")

    # associativity on generator triples
    for w in obs:
        for x in obs:
            for y in obs:
                for z in obs:
                    for h in data.hom(y, z).generators():
                        for g in data.hom(x, y).generators():
                            for f in data.hom(w, x).generators():
                                lhs = compose_elems(
                                    w, x, z, compose_elems(x, y, z, h, g), f
                                )
                                rhs = compose_elems(
                                    w, y, z, h, compose_elems(w, x, y, g, f)
                                )
                                if lhs != rhs:
                                    problems.append(
                                        "associativity broken at "
                                        f"({w},{x},{y},{z})"
                                    )
    return problems


def table_from_groups(named: dict) -> TableData:
    """Tabulate a finite abelian category on explicitly named objects."""
    names = tuple(named)
    homs = {}
    identities = {}
    comp = {}
    for x in names:
        for y in names:
            homs[(x, y)] = hom_group(named[x], named[y]).group
    for x in names:
        hg = hom_group(named[x], named[x])
        identities[x] = hg.coords(GroupHom.identity(named[x])).coords
    for x in names:
        for y in names:
            for z in names:
                hxy = hom_group(named[x], named[y])
                hyz = hom_group(named[y], named[z])
                hxz = hom_group(named[x], named[z])
                table = tuple(
                    tuple(
                        hxz.coords(g @ f).coords for f in hxy.basis
                    )
                    for g in hyz.basis
                )
                comp[(x, y, z)] = table
    return TableData(names, homs, identities, comp)


class TableBackend(CategoryBackend):
    """Additive envelope of a hom table: objects are sorted name tuples."""

    def __init__(self, data: TableData, check: bool = True):
        if check:
            problems = validate_table(data)
            if problems:
                raise TableValidationError("; ".join(problems[:5]))
        self.data = data
        self._hom_cache: dict = {}

    def __repr__(self) -> str:
        return f"TableBackend(objects={list(self.data.objects)})"

    def probes(self):
        return tuple((name,) for name in self.data.objects)

    def zero_object(self):
        return ()

    def object_label(self, x) -> str:
        return " + ".join(x) if x else "0"

    def decompose(self, x) -> tuple:
        return tuple((name,) for name in x)

    def _hom_layout(self, x, y):
        key = (x, y)
        hit = self._hom_cache.get(key)
        if hit is not None:
            return hit
        factors: list[int] = []
        cells = []
        for q, yq in enumerate(y):
            for p, xp in enumerate(x):
                g = self.data.hom(xp, yq)
                cells.append((q, p, g, len(factors)))
                factors.extend(g.invariant_factors)
        canon = presentation_of_factors(tuple(factors))
        layout = (canon, tuple(cells), len(factors))
        self._hom_cache[key] = layout
        return layout

    def hom_group(self, x, y) -> FinAbGroup:
        return self._hom_layout(x, y)[0].group

    def _payload_raw(self, x, y, payload) -> tuple[int, ...]:
        canon, cells, size = self._hom_layout(x, y)
        raw = []
        for q, p, g, off in cells:
            raw.extend(payload[q][p].coords)
        return tuple(raw)

    def morphism_coords(self, f: Morphism) -> GroupElement:
        canon, cells, size = self._hom_layout(f.source, f.target)
        return canon.project_vector(self._payload_raw(f.source, f.target, f.payload))

    def morphism_from_coords(self, x, y, e: GroupElement) -> Morphism:
        canon, cells, size = self._hom_layout(x, y)
        raw = canon.lift_element(e)
        blocks = [[None] * len(x) for _ in range(len(y))]
        for q, p, g, off in cells:
            blocks[q][p] = g.element(raw[off : off + g.rank])
        payload = tuple(tuple(row) for row in blocks)
        return Morphism(self, x, y, payload)

    def morphism_from_blocks(self, x, y, blocks) -> Morphism:
        payload = tuple(tuple(row) for row in blocks)
        for q, yq in enumerate(y):
            for p, xp in enumerate(x):
                if payload[q][p].parent != self.data.hom(xp, yq):
                    raise ObjectMismatchError(f"block ({q},{p}) in wrong hom group")
        return Morphism(self, x, y, payload)

    def _compose_basic(
        self, x: str, y: str, z: str, g: GroupElement, f: GroupElement
    ) -> GroupElement:
        table = self.data.compose[(x, y, z)]
        target = self.data.hom(x, z)
        acc = [0] * target.rank
        for j, gj in enumerate(g.coords):
            if gj == 0:
                continue
            row = table[j]
            for i, fi in enumerate(f.coords):
                if fi == 0:
                    continue
                entry = row[i]
                k = gj * fi
                for t in range(target.rank):
                    acc[t] += k * entry[t]
        return target.element(acc)

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        if f.target != g.source:
            raise ObjectMismatchError("middle objects differ")
        x, y, z = f.source, f.target, g.target
        blocks = []
        for r, zr in enumerate(z):
            row = []
            for p, xp in enumerate(x):
                acc = self.data.hom(xp, zr).zero()
                for k, yk in enumerate(y):
                    acc = acc + self._compose_basic(
                        xp, yk, zr, g.payload[r][k], f.payload[k][p]
                    )
                row.append(acc)
            blocks.append(tuple(row))
        return Morphism(self, x, z, tuple(blocks))

    def identity(self, x) -> Morphism:
        blocks = []
        for q, yq in enumerate(x):
            row = []
            for p, xp in enumerate(x):
                h = self.data.hom(xp, yq)
                if p == q:
                    row.append(h.element(self.data.identities[xp]))
                else:
                    row.append(h.zero())
            blocks.append(tuple(row))
        return Morphism(self, x, x, tuple(blocks))

    def zero_morphism(self, x, y) -> Morphism:
        blocks = tuple(
            tuple(self.data.hom(xp, yq).zero() for xp in x) for yq in y
        )
        return Morphism(self, x, y, blocks)

    def add(self, f: Morphism, g: Morphism) -> Morphism:
        if (f.source, f.target) != (g.source, g.target):
            raise ObjectMismatchError("sum of morphisms with different ends")
        blocks = tuple(
            tuple(a + b for a, b in zip(r1, r2))
            for r1, r2 in zip(f.payload, g.payload)
        )
        return Morphism(self, f.source, f.target, blocks)

    def negate(self, f: Morphism) -> Morphism:
        blocks = tuple(tuple(-a for a in row) for row in f.payload)
        return Morphism(self, f.source, f.target, blocks)

    def scale(self, k: int, f: Morphism) -> Morphism:
        blocks = tuple(tuple(k * a for a in row) for row in f.payload)
        return Morphism(self, f.source, f.target, blocks)

    def biproduct_many(self, objects: Sequence) -> MultiBiproduct:
        parts = []
        for k, ob in enumerate(objects):
            for p, name in enumerate(ob):
                parts.append((name, k, p))
        parts.sort(key=lambda t: (t[0], t[1], t[2]))
        total = tuple(name for name, _, _ in parts)
        position = {(k, p): pos for pos, (_, k, p) in enumerate(parts)}
        iotas = []
        pis = []
        for k, ob in enumerate(objects):
            iota_blocks = [
                [self.data.hom(xp, yq).zero() for xp in ob] for yq in total
            ]
            pi_blocks = [
                [self.data.hom(yq, xp).zero() for yq in total] for xp in ob
            ]
            for p, name in enumerate(ob):
                pos = position[(k, p)]
                ident = self.data.hom(name, name).element(self.data.identities[name])
                iota_blocks[pos][p] = ident
                pi_blocks[p][pos] = ident
            iotas.append(self.morphism_from_blocks(ob, total, iota_blocks))
            pis.append(self.morphism_from_blocks(total, ob, pi_blocks))
        return MultiBiproduct(total, tuple(iotas), tuple(pis))


# ---------------------------------------------------------------------------
# universes, sections and complements


def capped_objects(backend: CategoryBackend, max_summands: int) -> tuple:
    """Zero plus all biproducts of at most ``max_summands`` probes."""
    seen = {}
    zero = backend.zero_object()
    seen[repr(zero)] = zero
    for k in range(1, max_summands + 1):
        for combo in combinations_with_replacement(backend.probes(), k):
            ob = backend.biproduct_many(combo).ob
            seen.setdefault(repr(ob), ob)
    return tuple(seen.values())


def is_section(f: Morphism, bound: Optional[int] = None) -> Optional[Morphism]:
    """A retraction r with r @ f = id, found exhaustively, or None."""
    bk = f.backend
    ident = bk.identity(f.source)
    for r in bk.morphisms(f.target, f.source, bound):
        if r @ f == ident:
            return r
    return None


def is_retraction(g: Morphism, bound: Optional[int] = None) -> Optional[Morphism]:
    """A section s with g @ s = id, found exhaustively, or None."""
    bk = g.backend
    ident = bk.identity(g.target)
    for s in bk.morphisms(g.target, g.source, bound):
        if g @ s == ident:
            return s
    return None


@dataclass(frozen=True)
class SplitComplement:
    """Witness data for a section f: A -> B with B ~ A (+) complement."""

    complement: object
    quotient: Morphism     # b: B -> A', a cokernel of f
    section: Morphism      # s: A' -> B with b s = id, s b = id - f r
    retraction: Morphism   # r: B -> A with r f = id and r s = 0
    iso: Morphism          # h: B -> A (+) A' with h f = iota_A, pi_A' h = b
    iso_inv: Morphism


def hom_induced(
    backend: CategoryBackend,
    src_pair: tuple,
    dst_pair: tuple,
    fn: Callable[[Morphism], Morphism],
) -> GroupHom:
    """Materialize an additive map Hom(src) -> Hom(dst) on hom groups."""
    src_group = backend.hom_group(*src_pair)
    dst_group = backend.hom_group(*dst_pair)
    images = [
        backend.morphism_coords(fn(backend.morphism_from_coords(*src_pair, e)))
        for e in src_group.generators()
    ]
    return GroupHom.from_images(src_group, dst_group, images)


def solve_hom_equation(
    backend: CategoryBackend,
    src_pair: tuple,
    dst_pair: tuple,
    fn: Callable[[Morphism], Morphism],
    rhs: Morphism,
) -> Optional[Morphism]:
    """Some f with fn(f) = rhs for an additive fn, or None."""
    lin = hom_induced(backend, src_pair, dst_pair, fn)
    x = solve(lin, backend.morphism_coords(rhs))
    if x is None:
        return None
    return backend.morphism_from_coords(*src_pair, x)


def retraction_of(f: Morphism) -> Optional[Morphism]:
    """Some r with r f = id, found by a linear solve (same answer as the
    exhaustive search, which stays available as an oracle)."""
    bk = f.backend
    return solve_hom_equation(
        bk,
        (f.target, f.source),
        (f.source, f.source),
        lambda r: r @ f,
        bk.identity(f.source),
    )


def section_of(g: Morphism) -> Optional[Morphism]:
    """Some s with g s = id, found by a linear solve."""
    bk = g.backend
    return solve_hom_equation(
        bk,
        (g.target, g.source),
        (g.target, g.target),
        lambda s: g @ s,
        bk.identity(g.target),
    )


def split_complement(
    f: Morphism, bound: Optional[int] = None
) -> SplitComplement:
    """Complete a section A -> B to a split decomposition of B."""
    bk = f.backend
    r = retraction_of(f)
    if r is None:
        raise NotASectionError(f"{f} admits no retraction")
    ident_b = bk.identity(f.target)
    e = ident_b - (f @ r)
    found = _cokernel_of_section(f, r, e, bound)
    if found is None:
        raise NotASectionError(f"no split complement found for {f}")
    comp, b, s0 = found
    s = e @ s0
    bp = bk.biproduct(f.source, comp)
    h = (bp.i1 @ r) + (bp.i2 @ b)
    h_inv = (f @ bp.p1) + (s @ bp.p2)
    assert h @ f == bp.i1 and bp.p2 @ h == b
    assert h @ h_inv == bk.identity(bp.ob) and h_inv @ h == ident_b
    return SplitComplement(comp, b, s, r, h, h_inv)


def _cokernel_of_section(f, r, e, bound):
    bk = f.backend
    if isinstance(bk, FinAbBackend):
        q = cokernel(f.payload)
        b = Morphism(bk, f.target, q.group, q.projection)
        s0 = solve_hom_equation(
            bk,
            (q.group, f.target),
            (q.group, q.group),
            lambda s: b @ s,
            bk.identity(q.group),
        )
        if s0 is None:
            raise AssertionError("cokernel projection of a section must split")
        return q.group, b, s0
    # table envelope: search sub-multisets of the target's summands
    target = f.target
    candidates = {}
    for k in range(len(target) + 1):
        from itertools import combinations

        for combo in combinations(range(len(target)), k):
            cand = tuple(sorted(target[i] for i in combo))
            candidates.setdefault(cand, None)
    for cand in candidates:
        hom_bc = bk.hom_group(f.target, cand)
        if hom_bc.order > (bound or DEFAULT_ENUMERATION_BOUND):
            raise BoundExceededError("complement search exceeds bound")
        for b in bk.morphisms(f.target, cand, bound):
            if not (b @ f).is_zero():
                continue
            s = solve_hom_equation(
                bk, (cand, f.target), (f.target, f.target), lambda s: s @ b, e
            )
            if s is None:
                continue
            if b @ s == bk.identity(cand):
                return cand, b, s
    return None


def two_sided_inverse(
    f: Morphism, bound: Optional[int] = None
) -> Optional[Morphism]:
    """g with f g = id and g f = id, or None."""
    bk = f.backend
    sols = solve_hom_system(
        bk,
        [(f.target, f.source)],
        [(f.target, f.target)],
        lambda gs: [f @ gs[0]],
        [bk.identity(f.target)],
    )
    if sols.particular is None:
        return None
    ident_src = bk.identity(f.source)
    for (g,) in sols.solutions(bound):
        if g @ f == ident_src:
            return g
    return None


# ---------------------------------------------------------------------------
# simultaneous linear systems over hom groups


@dataclass(frozen=True)
class HomSystemSolutions:
    """Solutions of an affine system in several morphism unknowns.

    ``particular`` is None when the system is inconsistent.  ``count``
    equals the number of solutions (kernel order) when consistent.
    """

    backend: CategoryBackend
    unknown_pairs: tuple
    particular: Optional[tuple[Morphism, ...]]
    _base: Optional[tuple[int, ...]]
    _system: Optional["ModularSystem"]

    @property
    def count(self) -> int:
        if self.particular is None:
            return 0
        return self._system.kernel_count

    def _from_raw(self, raw: Sequence[int]) -> tuple[Morphism, ...]:
        out = []
        off = 0
        for pair in self.unknown_pairs:
            g = self.backend.hom_group(*pair)
            out.append(
                self.backend.morphism_from_coords(
                    *pair, g.element(raw[off : off + g.rank])
                )
            )
            off += g.rank
        return tuple(out)

    def __iter__(self) -> Iterator[tuple[Morphism, ...]]:
        return self.solutions()

    def solutions(self, bound: Optional[int] = None) -> Iterator[tuple[Morphism, ...]]:
        if self.particular is None:
            return
        for vec in self._system.kernel_vectors(bound):
            yield self._from_raw([b + v for b, v in zip(self._base, vec)])

    def sample(self, rng, count: int) -> list[tuple[Morphism, ...]]:
        """The particular solution plus ``count`` seeded random ones."""
        if self.particular is None:
            return []
        out = [self.particular]
        for _ in range(count):
            vec = self._system.kernel_sample(rng)
            out.append(self._from_raw([b + v for b, v in zip(self._base, vec)]))
        return out

    def head(self, k: int) -> list[tuple[Morphism, ...]]:
        """The first k solutions in canonical order (no bound check)."""
        if self.particular is None:
            return []
        out = []
        for vec in self._system.kernel_vectors_lazy():
            out.append(self._from_raw([b + v for b, v in zip(self._base, vec)]))
            if len(out) >= k:
                break
        return out


def solve_element_system(
    backend: CategoryBackend,
    unknown_pairs: Sequence[tuple],
    equation_groups: Sequence[FinAbGroup],
    evaluate: Callable[[Sequence[Morphism]], Sequence[GroupElement]],
    rhs: Optional[Sequence[GroupElement]] = None,
) -> HomSystemSolutions:
    """Solve evaluate(f_1, ..., f_k) = rhs with values in arbitrary groups.

    ``evaluate`` must be affine (a constant plus a map additive in each
    unknown); unknowns are morphisms f_i in Hom(unknown_pairs[i]).
    """
    from .algebra import ModularSystem

    unknown_pairs = tuple(unknown_pairs)
    equation_groups = tuple(equation_groups)
    src_groups = [backend.hom_group(*p) for p in unknown_pairs]
    var_moduli = tuple(d for g in src_groups for d in g.invariant_factors)
    eq_moduli = tuple(d for g in equation_groups for d in g.invariant_factors)

    def pack_dst(values: Sequence[GroupElement]) -> list[int]:
        raw: list[int] = []
        for v, g in zip(values, equation_groups):
            if v.parent != g:
                raise ObjectMismatchError("equation value in wrong group")
            raw.extend(v.coords)
        return raw

    zeros = [backend.zero_morphism(*p) for p in unknown_pairs]
    offset = pack_dst(evaluate(zeros))

    columns = []
    for k, g in enumerate(src_groups):
        for gen in g.generators():
            fs = list(zeros)
            fs[k] = backend.morphism_from_coords(*unknown_pairs[k], gen)
            image = pack_dst(evaluate(fs))
            columns.append(
                [(x - o) % m for x, o, m in zip(image, offset, eq_moduli)]
            )
    system = ModularSystem(eq_moduli, var_moduli, columns)

    if rhs is None:
        target = [(-o) % m for o, m in zip(offset, eq_moduli)]
    else:
        target = [
            (x - o) % m for x, o, m in zip(pack_dst(rhs), offset, eq_moduli)
        ]
    base = system.solve(target)
    if base is None:
        return HomSystemSolutions(backend, unknown_pairs, None, None, None)
    sols = HomSystemSolutions(backend, unknown_pairs, None, tuple(base), system)
    particular = sols._from_raw(base)
    return HomSystemSolutions(backend, unknown_pairs, particular, tuple(base), system)


def solve_hom_system(
    backend: CategoryBackend,
    unknown_pairs: Sequence[tuple],
    equation_pairs: Sequence[tuple],
    evaluate: Callable[[Sequence[Morphism]], Sequence[Morphism]],
    rhs: Optional[Sequence[Morphism]] = None,
) -> HomSystemSolutions:
    """Solve morphism equations evaluate(f_1, ..., f_k) = rhs."""
    equation_pairs = tuple(equation_pairs)
    groups = [backend.hom_group(*p) for p in equation_pairs]

    def eval_elems(fs: Sequence[Morphism]) -> list[GroupElement]:
        out = []
        for v, pair in zip(evaluate(fs), equation_pairs):
            if (v.source, v.target) != pair:
                raise ObjectMismatchError("equation value with wrong ends")
            out.append(backend.morphism_coords(v))
        return out

    rhs_elems = None
    if rhs is not None:
        rhs_elems = [backend.morphism_coords(v) for v in rhs]
    return solve_element_system(
        backend, unknown_pairs, groups, eval_elems, rhs_elems
    )


def row_split_exact(f: Morphism, g: Morphism) -> Optional[tuple[Morphism, Morphism]]:
    """Witnesses (r, s) with r f = id, g s = id, f r + s g = id, or None."""
    bk = f.backend
    if f.target != g.source:
        raise ObjectMismatchError("row is not composable")
    a_obj, b_obj, c_obj = f.source, f.target, g.target
    sols = solve_hom_system(
        bk,
        [(b_obj, a_obj), (c_obj, b_obj)],
        [(a_obj, a_obj), (c_obj, c_obj), (b_obj, b_obj)],
        lambda us: [us[0] @ f, g @ us[1], (f @ us[0]) + (us[1] @ g)],
        [bk.identity(a_obj), bk.identity(c_obj), bk.identity(b_obj)],
    )
    if sols.particular is None:
        return None
    r, s = sols.particular
    return r, s


def split_idempotent(e: Morphism, bound: Optional[int] = None):
    """(K, k: K -> B, p: B -> K) with k p = e and p k = id, or None."""
    bk = e.backend
    if e.source != e.target:
        raise ObjectMismatchError("idempotent must be an endomorphism")
    if not (e @ e == e):
        raise ValueError("morphism is not idempotent")
    b_obj = e.source
    if isinstance(bk, FinAbBackend):
        from .algebra import kernel as group_kernel

        q = cokernel(e.payload)
        sub = group_kernel(q.projection)
        k = Morphism(bk, sub.group, b_obj, sub.inclusion)
        p = solve_hom_equation(
            bk, (b_obj, sub.group), (b_obj, b_obj), lambda t: k @ t, e
        )
        if p is None:
            raise AssertionError("image of an idempotent must split off")
        return sub.group, k, p
    from itertools import combinations

    def try_k(cand, k):
        sols = solve_hom_system(
            bk,
            [(b_obj, cand)],
            [(b_obj, b_obj), (cand, cand)],
            lambda ps: [k @ ps[0], ps[0] @ k],
            [e, bk.identity(cand)],
        )
        if sols.particular is None:
            return None
        return cand, k, sols.particular[0]

    # first pass: restrict the image along coordinate inclusions
    candidates: dict = {}
    for n in range(len(b_obj) + 1):
        for combo in combinations(range(len(b_obj)), n):
            cand = tuple(b_obj[i] for i in combo)
            candidates.setdefault(cand, None)
            incl = _submultiset_inclusion(bk, b_obj, cand, combo)
            k = e @ incl
            found = try_k(cand, k)
            if found is not None:
                return found
    # completeness fallback: exhaust small hom groups
    for cand in candidates:
        if bk.hom_group(cand, b_obj).order > (bound or DEFAULT_ENUMERATION_BOUND):
            raise BoundExceededError("idempotent splitting search exceeds bound")
        for k in bk.morphisms(cand, b_obj, bound):
            if e @ k != k:
                continue
            found = try_k(cand, k)
            if found is not None:
                return found
    return None


def _submultiset_inclusion(bk, total, cand, combo):
    """The coordinate inclusion of a sub-multiset into a table object."""
    blocks = [
        [bk.data.hom(cp, tp).zero() for cp in cand] for tp in total
    ]
    for slot, pos in enumerate(combo):
        name = total[pos]
        blocks[pos][slot] = bk.data.hom(name, name).element(bk.data.identities[name])
    return bk.morphism_from_blocks(cand, total, blocks)
