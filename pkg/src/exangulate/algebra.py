"""Exact integer linear algebra over finite abelian groups.

Groups are kept in invariant-factor canonical form d1 | d2 | ... | dk with
every factor >= 2, so structural equality of values is group equality.
Everything here is pure: elements, homs and groups are frozen and safe to
share.  All arithmetic is exact (Python ints).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import gcd, prod
from typing import Callable, Iterator, Optional, Sequence

Matrix = tuple[tuple[int, ...], ...]

#: Default ceiling for exhaustive element enumeration.
DEFAULT_ENUMERATION_BOUND = 4096


class InfiniteGroupError(ValueError):
    """A presentation has free rank, so its quotient is not finite."""


class BoundExceededError(RuntimeError):
    """An exhaustive enumeration would exceed the configured bound."""


# ---------------------------------------------------------------------------
# small exact-matrix helpers (tuples of tuples, row major)

def mat(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def mat_identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def mat_zero(rows: int, cols: int) -> Matrix:
    return tuple((0,) * cols for _ in range(rows))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise ValueError(f"shape mismatch {len(a)}x{len(a[0])} @ {len(b)}x{len(b[0])}")
    bt = tuple(zip(*b)) if b else ()
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(a: Matrix, v: Sequence[int]) -> tuple[int, ...]:
    out = []
    for row in a:
        acc = 0
        for x, y in zip(row, v):
            acc += x * y
        out.append(acc)
    return tuple(out)


def mat_det(a: Matrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ M @ V = D with U, V unimodular, D diagonal with d1 | d2 | ..."""

    u: Matrix
    d: Matrix
    v: Matrix
    u_inv: Matrix
    v_inv: Matrix

    def diagonal(self) -> tuple[int, ...]:
        return tuple(
            self.d[i][i] for i in range(min(len(self.d), len(self.d[0]) if self.d else 0))
        )


@lru_cache(maxsize=None)
def smith_decomposition(m_mat: Matrix) -> SmithDecomposition:
    rows = len(m_mat)
    cols = len(m_mat[0]) if rows else 0
    d = [list(r) for r in m_mat]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    ui = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]
    vi = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i: int, j: int) -> None:
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]
        for r in ui:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i: int, j: int) -> None:
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]
        vi[i], vi[j] = vi[j], vi[i]

    def add_row(src: int, dst: int, k: int) -> None:
        # rows: dst += k * src; inverse tracked on columns of ui
        d[dst] = [x + k * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]
        for r in ui:
            r[src] -= k * r[dst]

    def add_col(src: int, dst: int, k: int) -> None:
        for r in d:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]
        vi[src] = [x - k * y for x, y in zip(vi[src], vi[dst])]

    def rows_2x2(i: int, j: int, a: int, b: int, c: int, e: int) -> None:
        # (row_i, row_j) <- (a*row_i + b*row_j, c*row_i + e*row_j), a*e - b*c = 1
        d[i], d[j] = (
            [a * x + b * y for x, y in zip(d[i], d[j])],
            [c * x + e * y for x, y in zip(d[i], d[j])],
        )
        u[i], u[j] = (
            [a * x + b * y for x, y in zip(u[i], u[j])],
            [c * x + e * y for x, y in zip(u[i], u[j])],
        )
        for r in ui:
            r[i], r[j] = e * r[i] - c * r[j], -b * r[i] + a * r[j]

    def cols_2x2(i: int, j: int, a: int, b: int, c: int, e: int) -> None:
        # (col_i, col_j) <- (a*col_i + b*col_j, c*col_i + e*col_j), a*e - b*c = 1
        for r in d:
            r[i], r[j] = a * r[i] + b * r[j], c * r[i] + e * r[j]
        for r in v:
            r[i], r[j] = a * r[i] + b * r[j], c * r[i] + e * r[j]
        vi[i], vi[j] = (
            [e * x - c * y for x, y in zip(vi[i], vi[j])],
            [-b * x + a * y for x, y in zip(vi[i], vi[j])],
        )

    t = 0
    while t < min(rows, cols):
        pivot = next(
            ((i, j) for i in range(t, rows) for j in range(t, cols) if d[i][j]),
            None,
        )
        if pivot is None:
            break
        if pivot[0] != t:
            swap_rows(t, pivot[0])
        if pivot[1] != t:
            swap_cols(t, pivot[1])
        while True:
            for i in range(t + 1, rows):
                if d[i][t]:
                    a, b = d[t][t], d[i][t]
                    if b % a == 0:
                        add_row(t, i, -(b // a))
                    else:
                        g, x, y = _ext_gcd(a, b)
                        rows_2x2(t, i, x, y, -(b // g), a // g)
            for j in range(t + 1, cols):
                if d[t][j]:
                    a, b = d[t][t], d[t][j]
                    if b % a == 0:
                        add_col(t, j, -(b // a))
                    else:
                        g, x, y = _ext_gcd(a, b)
                        cols_2x2(t, j, x, y, -(b // g), a // g)
            if any(d[i][t] for i in range(t + 1, rows)):
                continue
            if any(d[t][j] for j in range(t + 1, cols)):
                continue
            bad = next(
                (
                    (i, j)
                    for i in range(t + 1, rows)
                    for j in range(t + 1, cols)
                    if d[i][j] % d[t][t] != 0
                ),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
            for r in ui:
                r[t] = -r[t]
        t += 1
    return SmithDecomposition(mat(u), mat(d), mat(v), mat(ui), mat(vi))


def smith_normal_form(m_mat: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """U, D, V with U @ M @ V = D in Smith normal form."""
    s = smith_decomposition(mat(m_mat))
    return s.u, s.d, s.v


# ---------------------------------------------------------------------------
# groups, elements, homs


@dataclass(frozen=True)
class FinAbGroup:
    """A finite abelian group in invariant-factor form; () is trivial."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self) -> None:
        fs = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", fs)
        for d in fs:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
        for a, b in zip(fs, fs[1:]):
            if b % a != 0:
                raise ValueError(f"broken divisibility chain {fs}")

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def element(self, coords: Sequence[int]) -> "GroupElement":
        return GroupElement(self, tuple(coords))

    def generators(self) -> tuple["GroupElement", ...]:
        n = self.rank
        return tuple(
            GroupElement(self, tuple(int(i == j) for j in range(n))) for i in range(n)
        )

    def elements(self, bound: Optional[int] = None) -> Iterator["GroupElement"]:
        limit = DEFAULT_ENUMERATION_BOUND if bound is None else bound
        if self.order > limit:
            raise BoundExceededError(f"|{self}| = {self.order} > bound {limit}")
        for coords in product(*(range(d) for d in self.invariant_factors)):
            yield GroupElement(self, coords)

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " x ".join(f"C{d}" for d in self.invariant_factors)


TRIVIAL_GROUP = FinAbGroup(())


def cyclic(n: int) -> FinAbGroup:
    """Z/n as a FinAbGroup (n = 1 gives the trivial group)."""
    if n < 1:
        raise ValueError("modulus must be positive")
    return TRIVIAL_GROUP if n == 1 else FinAbGroup((n,))


@dataclass(frozen=True)
class GroupElement:
    parent: FinAbGroup
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        fs = self.parent.invariant_factors
        if len(self.coords) != len(fs):
            raise ValueError(f"coords {self.coords} wrong length for {self.parent}")
        object.__setattr__(
            self, "coords", tuple(int(c) % d for c, d in zip(self.coords, fs))
        )

    def __add__(self, other: "GroupElement") -> "GroupElement":
        if other.parent != self.parent:
            raise ValueError("elements of different groups")
        return GroupElement(
            self.parent, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.parent, tuple(-c for c in self.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __rmul__(self, k: int) -> "GroupElement":
        return GroupElement(self.parent, tuple(k * c for c in self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __str__(self) -> str:
        return f"({', '.join(map(str, self.coords))})"


@dataclass(frozen=True)
class GroupHom:
    """Integer-matrix homomorphism; entry (i, j) is mod target factor i.

    ``trusted`` skips the well-definedness validation: operations on
    well-defined homs (composition, sums, canonical coordinates) stay
    well defined, so internal constructions set it.
    """

    source: FinAbGroup
    target: FinAbGroup
    matrix: Matrix
    trusted: bool = field(default=False, compare=False, repr=False)
    _zero_flag: object = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        src = self.source.invariant_factors
        tgt = self.target.invariant_factors
        rows = self.matrix
        if len(rows) != len(tgt) or any(len(r) != len(src) for r in rows):
            raise ValueError(
                f"matrix shape {len(rows)}x? does not map {self.source} -> {self.target}"
            )
        reduced = tuple(
            tuple(int(x) % tgt[i] for x in row) for i, row in enumerate(rows)
        )
        object.__setattr__(self, "matrix", reduced)
        if not self.trusted:
            for j, a in enumerate(src):
                for i, b in enumerate(tgt):
                    if (reduced[i][j] * a) % b != 0:
                        raise ValueError(
                            f"entry ({i},{j}) = {reduced[i][j]} ill-defined for "
                            f"{self.source} -> {self.target}"
                        )

    def __call__(self, x: GroupElement) -> GroupElement:
        if x.parent != self.source:
            raise ValueError("element not in source group")
        return GroupElement(self.target, mat_vec(self.matrix, x.coords))

    def __matmul__(self, other: "GroupHom") -> "GroupHom":
        if other.target != self.source:
            raise ValueError("homs not composable")
        inner = self.source.rank
        cols = other.source.rank
        if inner == 0 or self.is_zero() or other.is_zero():
            rows = tuple((0,) * cols for _ in range(self.target.rank))
        else:
            other_t = list(zip(*other.matrix))
            rows = []
            for row in self.matrix:
                out_row = []
                for col in other_t:
                    acc = 0
                    for a, b in zip(row, col):
                        acc += a * b
                    out_row.append(acc)
                rows.append(tuple(out_row))
            rows = tuple(rows)
        return GroupHom(other.source, self.target, rows, trusted=True)

    def __add__(self, other: "GroupHom") -> "GroupHom":
        if (other.source, other.target) != (self.source, self.target):
            raise ValueError("homs with different ends")
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        return GroupHom(
            self.source,
            self.target,
            tuple(
                tuple(a + b for a, b in zip(r1, r2))
                for r1, r2 in zip(self.matrix, other.matrix)
            ),
            trusted=True,
        )

    def __neg__(self) -> "GroupHom":
        return GroupHom(
            self.source,
            self.target,
            tuple(tuple(-a for a in r) for r in self.matrix),
            trusted=True,
        )

    def __sub__(self, other: "GroupHom") -> "GroupHom":
        return self + (-other)

    def __rmul__(self, k: int) -> "GroupHom":
        return GroupHom(
            self.source,
            self.target,
            tuple(tuple(k * a for a in r) for r in self.matrix),
            trusted=True,
        )

    def is_zero(self) -> bool:
        if self._zero_flag is None:
            object.__setattr__(
                self, "_zero_flag", all(all(a == 0 for a in r) for r in self.matrix)
            )
        return self._zero_flag

    @staticmethod
    def identity(g: FinAbGroup) -> "GroupHom":
        return GroupHom(g, g, mat_identity(g.rank), trusted=True)

    @staticmethod
    def zero(source: FinAbGroup, target: FinAbGroup) -> "GroupHom":
        return GroupHom(source, target, mat_zero(target.rank, source.rank), trusted=True)

    @staticmethod
    def from_images(
        source: FinAbGroup, target: FinAbGroup, images: Sequence[GroupElement]
    ) -> "GroupHom":
        """The hom sending generator j of the source to images[j]."""
        if len(images) != source.rank:
            raise ValueError("one image per source generator required")
        rows = tuple(
            tuple(img.coords[i] for img in images) for i in range(target.rank)
        )
        return GroupHom(source, target, rows)


def hom_from_function(
    source: FinAbGroup, target: FinAbGroup, fn: Callable[[GroupElement], GroupElement]
) -> GroupHom:
    """Materialize an additive function as a GroupHom via generator images."""
    return GroupHom.from_images(source, target, [fn(g) for g in source.generators()])


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class Canonicalization:
    """A finite quotient Z^n / (column span) in canonical coordinates.

    ``project`` maps ambient coordinates to canonical ones (reduce mod the
    invariant factors afterwards); ``lift`` is a set-theoretic section with
    project @ lift = identity exactly.
    """

    group: FinAbGroup
    project: Matrix
    lift: Matrix
    _sparse: object = field(default=None, compare=False, repr=False)

    def _sparse_rows(self):
        if self._sparse is None:
            proj = tuple(
                tuple((j, x) for j, x in enumerate(row) if x) for row in self.project
            )
            lift = tuple(
                tuple((j, x) for j, x in enumerate(row) if x) for row in self.lift
            )
            object.__setattr__(self, "_sparse", (proj, lift))
        return self._sparse

    def project_vector(self, v: Sequence[int]) -> GroupElement:
        proj, _ = self._sparse_rows()
        return GroupElement(
            self.group,
            tuple(sum(x * v[j] for j, x in row) for row in proj),
        )

    def lift_element(self, e: GroupElement) -> tuple[int, ...]:
        _, lift = self._sparse_rows()
        coords = e.coords
        return tuple(sum(x * coords[j] for j, x in row) for row in lift)


@lru_cache(maxsize=None)
def canonicalize(relations: Matrix) -> Canonicalization:
    """Quotient of Z^n by the column span of an n x r relations matrix."""
    relations = mat(relations)
    n = len(relations)
    r = len(relations[0]) if n else 0
    s = smith_decomposition(relations)
    diag = list(s.diagonal()) + [0] * (n - min(n, r))
    if any(d == 0 for d in diag):
        raise InfiniteGroupError(f"presentation has free rank: diagonal {diag}")
    keep = [i for i in range(n) if diag[i] != 1]
    group = FinAbGroup(tuple(diag[i] for i in keep))
    project = tuple(s.u[i] for i in keep)
    lift = tuple(tuple(s.u_inv[i][j] for j in keep) for i in range(n))
    return Canonicalization(group, project, lift)


def presentation_of_factors(moduli: Sequence[int]) -> Canonicalization:
    """Canonical form of a direct sum of cyclic groups Z/m (m >= 1)."""
    ms = tuple(int(m) for m in moduli)
    if any(m < 1 for m in ms):
        raise ValueError("moduli must be positive")
    rel = tuple(
        tuple(ms[i] if i == j else 0 for j in range(len(ms))) for i in range(len(ms))
    )
    return canonicalize(rel)


# ---------------------------------------------------------------------------
# hom groups


@dataclass(frozen=True)
class HomGroup:
    """Hom(source, target) as a canonical FinAbGroup with realizing homs.

    Raw coordinates are indexed by (target factor i, source factor j) in
    row-major order; the raw modulus at (i, j) is gcd(a_j, b_i).
    """

    source: FinAbGroup
    target: FinAbGroup
    group: FinAbGroup
    _canon: Canonicalization
    _raw_moduli: tuple[int, ...]

    @property
    def basis(self) -> tuple[GroupHom, ...]:
        return tuple(self.from_coords(g) for g in self.group.generators())

    def _raw_of(self, f: GroupHom) -> tuple[int, ...]:
        src = self.source.invariant_factors
        tgt = self.target.invariant_factors
        out = []
        for i, b in enumerate(tgt):
            for j, a in enumerate(src):
                g = gcd(a, b)
                step = b // g
                entry = f.matrix[i][j] % b
                if entry % step != 0:
                    raise ValueError("hom not well defined")
                out.append((entry // step) % g)
        return tuple(out)

    def _from_raw(self, raw: Sequence[int]) -> GroupHom:
        src = self.source.invariant_factors
        tgt = self.target.invariant_factors
        rows = []
        k = 0
        for i, b in enumerate(tgt):
            row = []
            for j, a in enumerate(src):
                row.append((raw[k] * (b // gcd(a, b))) % b)
                k += 1
            rows.append(tuple(row))
        return GroupHom(self.source, self.target, tuple(rows), trusted=True)

    def coords(self, f: GroupHom) -> GroupElement:
        if (f.source, f.target) != (self.source, self.target):
            raise ValueError("hom has wrong ends")
        return self._canon.project_vector(self._raw_of(f))

    def from_coords(self, e: GroupElement) -> GroupHom:
        if e.parent != self.group:
            raise ValueError("element not in this hom group")
        raw = mat_vec(self._canon.lift, e.coords)
        return self._from_raw(raw)

    def elements(self, bound: Optional[int] = None) -> Iterator[GroupHom]:
        for e in self.group.elements(bound):
            yield self.from_coords(e)


@lru_cache(maxsize=None)
def hom_group(source: FinAbGroup, target: FinAbGroup) -> HomGroup:
    src = source.invariant_factors
    tgt = target.invariant_factors
    moduli = tuple(gcd(a, b) for b in tgt for a in src)
    canon = presentation_of_factors(moduli)
    return HomGroup(source, target, canon.group, canon, moduli)


# ---------------------------------------------------------------------------
# kernels, cokernels, solving


@dataclass(frozen=True)
class Subgroup:
    group: FinAbGroup
    inclusion: GroupHom


@dataclass(frozen=True)
class Quotient:
    group: FinAbGroup
    projection: GroupHom


def _augmented(f: GroupHom) -> Matrix:
    """[M | diag(target factors)] viewed as a map of free groups."""
    tgt = f.target.invariant_factors
    t = len(tgt)
    return tuple(
        f.matrix[i] + tuple(tgt[i] if i == k else 0 for k in range(t))
        for i in range(t)
    )


def _lattice_kernel_basis(m_mat: Matrix) -> list[tuple[int, ...]]:
    """Columns spanning {x : M x = 0} over the integers."""
    rows = len(m_mat)
    cols = len(m_mat[0]) if rows else 0
    s = smith_decomposition(m_mat)
    diag = list(s.diagonal()) + [0] * max(0, cols - rows)
    free = [j for j in range(cols) if j >= min(rows, cols) or diag[j] == 0]
    return [tuple(s.v[i][j] for i in range(cols)) for j in free]


def kernel(f: GroupHom) -> Subgroup:
    src = f.source.invariant_factors
    s_rank = len(src)
    if s_rank == 0:
        return Subgroup(TRIVIAL_GROUP, GroupHom.zero(TRIVIAL_GROUP, f.source))
    if f.target.rank == 0:
        return Subgroup(f.source, GroupHom.identity(f.source))
    cols = _lattice_kernel_basis(_augmented(f))
    gen = tuple(tuple(c[i] for c in cols) for i in range(s_rank))
    s = smith_decomposition(gen)
    diag = s.diagonal()
    if len([d for d in diag if d != 0]) != s_rank:
        raise AssertionError("kernel lattice unexpectedly not of full rank")
    basis = tuple(
        tuple(s.u_inv[i][j] * diag[j] for j in range(s_rank)) for i in range(s_rank)
    )
    # rel = basis^{-1} @ diag(src): y-coordinates of the source relation lattice
    rel_rows = []
    for i in range(s_rank):
        row = []
        for j in range(s_rank):
            num = s.u[i][j] * src[j]
            if num % diag[i] != 0:
                raise AssertionError("relation lattice not inside kernel lattice")
            row.append(num // diag[i])
        rel_rows.append(tuple(row))
    canon = canonicalize(tuple(rel_rows))
    incl = GroupHom(canon.group, f.source, mat_mul(basis, canon.lift))
    return Subgroup(canon.group, incl)


def cokernel(f: GroupHom) -> Quotient:
    tgt = f.target.invariant_factors
    if not tgt:
        return Quotient(TRIVIAL_GROUP, GroupHom.zero(f.target, TRIVIAL_GROUP))
    canon = canonicalize(_augmented(f))
    proj = GroupHom(
        f.target, canon.group, tuple(row[: len(tgt)] for row in canon.project)
    )
    return Quotient(canon.group, proj)


def image_order(f: GroupHom) -> int:
    return f.source.order // kernel(f).group.order


def solve(f: GroupHom, y: GroupElement) -> Optional[GroupElement]:
    """Some x with f(x) = y, or None when y is not in the image."""
    if y.parent != f.target:
        raise ValueError("element not in target group")
    src_rank = f.source.rank
    if f.target.rank == 0:
        return f.source.zero()
    aug = _augmented(f)
    s = smith_decomposition(aug)
    rows = len(aug)
    cols = len(aug[0])
    c = mat_vec(s.u, y.coords)
    diag = list(s.diagonal())
    z = [0] * cols
    for i in range(rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d != 0:
                return None
            z[i] = c[i] // d
    w = mat_vec(s.v, z)
    return GroupElement(f.source, w[:src_rank])


def enumerate_elements(
    group: FinAbGroup, bound: Optional[int] = None
) -> Iterator[GroupElement]:
    """Each element exactly once, zero first."""
    return group.elements(bound)


# ---------------------------------------------------------------------------
# Howell-form solver for linear systems with per-coordinate moduli
#
# The verification loops solve many systems  sum_j x_j col_j = rhs  whose
# coordinates all live in tiny cyclic groups; per-coordinate modular
# elimination avoids the coefficient growth of integer Smith reduction.


def _modinv(a: int, m: int) -> int:
    g, x, _ = _ext_gcd(a, m)
    if g != 1:
        raise ValueError(f"{a} is not a unit mod {m}")
    return x % m


@dataclass(frozen=True)
class HowellRow:
    lead: int
    row: tuple[int, ...]
    box: int  # number of distinct coefficient values for this basis row


def howell_basis(rows: Sequence[Sequence[int]], moduli: Sequence[int]) -> list[HowellRow]:
    """Echelon basis of the subgroup of prod Z/m_j generated by ``rows``.

    Every span element has a unique expression sum c_i * row_i with
    0 <= c_i < box_i; annihilator multiples are propagated so the boxes
    really enumerate the span (the Howell property).
    """
    n = len(moduli)

    def reduce_row(r):
        return [v % m for v, m in zip(r, moduli)]

    def lead_of(r):
        for i, v in enumerate(r):
            if v:
                return i
        return None

    work: list[tuple[int, list[int]]] = []
    for r in rows:
        rr = reduce_row(r)
        l = lead_of(rr)
        if l is not None:
            work.append((l, rr))
    basis: list[HowellRow] = []
    for j in range(n):
        cur = [r for (l, r) in work if l == j]
        rest = [(l, r) for (l, r) in work if l > j]
        while len(cur) > 1:
            r1 = cur.pop()
            r2 = cur.pop()
            a, b = r1[j], r2[j]
            g, x, y = _ext_gcd(a, b)
            comb = reduce_row([x * u + y * v for u, v in zip(r1, r2)])
            other = reduce_row([(b // g) * u - (a // g) * v for u, v in zip(r1, r2)])
            cur.append(comb)
            lo = lead_of(other)
            if lo is not None:
                rest.append((lo, other))
        if cur:
            r = cur[0]
            mj = moduli[j]
            g = gcd(r[j], mj)
            box = mj // g
            basis.append(HowellRow(j, tuple(r), box))
            ann = reduce_row([box * v for v in r])
            la = lead_of(ann)
            if la is not None:
                rest.append((la, ann))
        work = rest
    return basis


class ModularSystem:
    """sum_j x_j col_j = rhs with x_j mod var_moduli[j], rows mod eq_moduli."""

    def __init__(
        self,
        eq_moduli: Sequence[int],
        var_moduli: Sequence[int],
        columns: Sequence[Sequence[int]],
    ):
        self.eq_moduli = tuple(int(m) for m in eq_moduli)
        self.var_moduli = tuple(int(m) for m in var_moduli)
        if len(columns) != len(self.var_moduli):
            raise ValueError("one column per unknown coordinate required")
        m_eq = len(self.eq_moduli)
        self._m_eq = m_eq
        self._moduli = self.eq_moduli + self.var_moduli
        rows = []
        for j, col in enumerate(columns):
            if len(col) != m_eq:
                raise ValueError("column has wrong length")
            row = list(col) + [0] * len(self.var_moduli)
            row[m_eq + j] = 1
            rows.append(row)
        basis = howell_basis(rows, self._moduli)
        self._eq_rows = [hr for hr in basis if hr.lead < m_eq]
        self._kernel_rows = [hr for hr in basis if hr.lead >= m_eq]

    def solve(self, rhs: Sequence[int]) -> Optional[tuple[int, ...]]:
        m_eq = self._m_eq
        moduli = self._moduli
        if len(rhs) != m_eq:
            raise ValueError("rhs has wrong length")
        target = [v % m for v, m in zip(rhs, self.eq_moduli)]
        v = [0] * len(moduli)
        for hr in self._eq_rows:
            j = hr.lead
            need = (target[j] - v[j]) % moduli[j]
            if need == 0:
                continue
            p = hr.row[j]
            g = gcd(p, moduli[j])
            if need % g:
                return None
            sub = moduli[j] // g
            t = ((need // g) * _modinv((p // g) % sub, sub)) % sub
            if t:
                v = [(u + t * w) % m for u, w, m in zip(v, hr.row, moduli)]
        for j in range(m_eq):
            if v[j] != target[j]:
                return None
        return tuple(v[m_eq:])

    @property
    def kernel_count(self) -> int:
        return prod(hr.box for hr in self._kernel_rows)

    def kernel_vectors(self, bound: Optional[int] = None) -> Iterator[tuple[int, ...]]:
        """Each kernel vector exactly once, zero first."""
        limit = DEFAULT_ENUMERATION_BOUND if bound is None else bound
        if self.kernel_count > limit:
            raise BoundExceededError(
                f"kernel of order {self.kernel_count} exceeds bound {limit}"
            )
        return self.kernel_vectors_lazy()

    def kernel_vectors_lazy(self) -> Iterator[tuple[int, ...]]:
        """Unbounded kernel iteration; callers must limit consumption."""
        m_eq = self._m_eq
        var_moduli = self.var_moduli
        rows = [hr.row[m_eq:] for hr in self._kernel_rows]
        for coeffs in product(*(range(hr.box) for hr in self._kernel_rows)):
            out = [0] * len(var_moduli)
            for c, row in zip(coeffs, rows):
                if c:
                    for i, w in enumerate(row):
                        out[i] += c * w
            yield tuple(o % m for o, m in zip(out, var_moduli))

    def kernel_sample(self, rng) -> tuple[int, ...]:
        out = [0] * len(self.var_moduli)
        for hr in self._kernel_rows:
            c = rng.randrange(hr.box)
            if c:
                for i, w in enumerate(hr.row[self._m_eq :]):
                    out[i] += c * w
        return tuple(o % m for o, m in zip(out, self.var_moduli))
