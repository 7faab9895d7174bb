"""Finitely generated abelian groups in invariant-factor form.

Groups are ``Z^r x Z/d_1 x ... x Z/d_k`` with ``d_1 | d_2 | ... | d_k`` and
every ``d_i >= 2``.  Elements are coordinate tuples on the canonical
generating set (free generators first, then torsion generators), and
homomorphisms are integer matrices whose column ``j`` is the image of
generator ``j``.  All arithmetic uses Python integers, so nothing
overflows.

>>> G = parse_group("Z/2 x Z/3")
>>> str(G)
'Z/6'
>>> f = GroupHom(parse_group("Z"), parse_group("Z"), [[2]])
>>> str(cokernel(f)[0])
'Z/2'
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Iterator, Sequence

import numpy as np

from krull_forge.rng import as_generator, randint

Matrix = list[list[int]]


class GroupMismatchError(ValueError):
    pass


class GroupSpecError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Smith normal form


def identity_matrix(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def determinant(A: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Gaussian elimination (Bareiss)."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(map(int, row)) for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def unimodular_inverse(A: Sequence[Sequence[int]]) -> Matrix:
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                factor = M[r][c]
                M[r] = [x - factor * y for x, y in zip(M[r], M[c])]
    out = [[M[i][n + j] for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


def smith_normal_form(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, S, V)`` with ``U @ M @ V == S``.

    ``U`` and ``V`` are unimodular and ``S`` is diagonal with nonnegative
    entries forming a divisibility chain (zeros last).
    """
    A = [list(map(int, row)) for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = identity_matrix(m)
    V = identity_matrix(n)

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            A[i], A[j] = A[j], A[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            for row in A:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst: int, src: int, q: int) -> None:
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        candidates = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not candidates:
            break
        _, i0, j0 = min(candidates)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    add_row(i, t, -q)
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    add_col(j, t, -q)
            rest = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
            rest += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
            if rest:
                _, i1, j1 = min(rest)
                swap_rows(t, i1)
                swap_cols(t, j1)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return U, A, V


def invariant_factors(diagonal: Sequence[int]) -> tuple[int, list[int]]:
    """Normalize a list of cyclic orders (0 meaning Z) to ``(rank, chain)``."""
    k = len(diagonal)
    _, S, _ = smith_normal_form([[diagonal[i] if i == j else 0 for j in range(k)] for i in range(k)])
    entries = [S[i][i] for i in range(k)]
    rank = sum(1 for d in entries if d == 0)
    return rank, [d for d in entries if d > 1]


# ---------------------------------------------------------------------------
# Groups and elements


@dataclass(frozen=True)
class FGAbelianGroup:
    """``Z^free_rank x Z/d_1 x ... x Z/d_k``, normalized at construction.

    Any list of positive moduli is accepted and brought into invariant-factor
    form, so ``FGAbelianGroup(0, (2, 3)) == FGAbelianGroup(0, (6,))``.
    """

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        mods = tuple(int(d) for d in self.torsion)
        if any(d < 1 for d in mods):
            raise ValueError(f"torsion moduli must be positive, got {mods}")
        normal = all(d >= 2 for d in mods) and all(b % a == 0 for a, b in zip(mods, mods[1:]))
        if not normal:
            extra, mods_list = invariant_factors(mods)
            assert extra == 0
            mods = tuple(mods_list)
        object.__setattr__(self, "torsion", mods)

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def moduli(self) -> tuple[int, ...]:
        """Order of each canonical generator, 0 standing for infinite order."""
        return (0,) * self.free_rank + self.torsion

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def order(self) -> int | None:
        return None if self.free_rank else prod(self.torsion)

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.ngens:
            raise GroupMismatchError(f"expected {self.ngens} coordinates, got {len(coords)}")
        return tuple(int(c) % d if d else int(c) for c, d in zip(coords, self.moduli))

    def elem(self, coords: Sequence[int]) -> GroupElem:
        return GroupElem(self, self.reduce(coords))

    def zero(self) -> GroupElem:
        return GroupElem(self, (0,) * self.ngens)

    def gens(self) -> list[GroupElem]:
        n = self.ngens
        return [GroupElem(self, tuple(int(i == j) for j in range(n))) for i in range(n)]

    def elements(self) -> Iterator[GroupElem]:
        if self.free_rank:
            raise ValueError("group is infinite")

        def rec(i: int, prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
            if i == len(self.torsion):
                yield prefix
                return
            for t in range(self.torsion[i]):
                yield from rec(i + 1, prefix + (t,))

        for coords in rec(0, ()):
            yield GroupElem(self, coords)

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " x ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion), "text": str(self)}


@dataclass(frozen=True)
class GroupElem:
    group: FGAbelianGroup
    coords: tuple[int, ...]

    @property
    def free_part(self) -> tuple[int, ...]:
        return self.coords[: self.group.free_rank]

    @property
    def torsion_part(self) -> tuple[int, ...]:
        return self.coords[self.group.free_rank :]

    def _check(self, other: GroupElem) -> None:
        if self.group != other.group:
            raise GroupMismatchError(f"{self.group} vs {other.group}")

    def __add__(self, other: GroupElem) -> GroupElem:
        self._check(other)
        return self.group.elem([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: GroupElem) -> GroupElem:
        self._check(other)
        return self.group.elem([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> GroupElem:
        return self.group.elem([-a for a in self.coords])

    def __mul__(self, k: int) -> GroupElem:
        return self.group.elem([k * a for a in self.coords])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.coords)) + ")"


def elem_add(g: GroupElem, h: GroupElem) -> GroupElem:
    return g + h


def elem_neg(g: GroupElem) -> GroupElem:
    return -g


def elem_is_zero(g: GroupElem) -> bool:
    return g.is_zero()


def random_elem(group: FGAbelianGroup, seed: np.random.Generator | int, free_bound: int = 10) -> GroupElem:
    """Deterministic random element; free coordinates lie in ``[-free_bound, free_bound]``."""
    rng = as_generator(seed)
    coords = [randint(rng, -free_bound, free_bound) if d == 0 else randint(rng, 0, d - 1) for d in group.moduli]
    return GroupElem(group, tuple(coords))


# ---------------------------------------------------------------------------
# Homomorphisms


@dataclass(frozen=True, eq=False)
class GroupHom:
    """Homomorphism given by the images of the source's canonical generators.

    ``matrix`` has ``target.ngens`` rows and ``source.ngens`` columns.  The
    optional ``section`` (same shape, transposed roles) sends each target
    generator to a preimage; cokernel projections carry one.
    """

    source: FGAbelianGroup
    target: FGAbelianGroup
    matrix: tuple[tuple[int, ...], ...]
    section: tuple[tuple[int, ...], ...] | None = field(default=None, repr=False)

    def __init__(self, source, target, matrix, section=None):
        rows = [list(map(int, row)) for row in matrix]
        if len(rows) != target.ngens or any(len(r) != source.ngens for r in rows):
            raise GroupMismatchError("matrix shape does not match source/target")
        cols = [target.reduce([rows[i][j] for i in range(target.ngens)]) for j in range(source.ngens)]
        for j, d in enumerate(source.moduli):
            if d and any(target.reduce([d * c for c in cols[j]])):
                raise ValueError(f"generator {j} of order {d} maps to an element of different order")
        reduced = tuple(tuple(cols[j][i] for j in range(source.ngens)) for i in range(target.ngens))
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "matrix", reduced)
        object.__setattr__(self, "section", None if section is None else tuple(tuple(r) for r in section))

    @classmethod
    def identity(cls, group: FGAbelianGroup) -> GroupHom:
        return cls(group, group, identity_matrix(group.ngens))

    @classmethod
    def zero(cls, source: FGAbelianGroup, target: FGAbelianGroup) -> GroupHom:
        return cls(source, target, [[0] * source.ngens for _ in range(target.ngens)])

    @classmethod
    def scalar(cls, group: FGAbelianGroup, k: int) -> GroupHom:
        return cls(group, group, [[k * x for x in row] for row in identity_matrix(group.ngens)])

    @classmethod
    def from_images(cls, source: FGAbelianGroup, images: Sequence[GroupElem]) -> GroupHom:
        if len(images) != source.ngens:
            raise GroupMismatchError("one image per source generator required")
        if not images:
            raise ValueError("target cannot be inferred from an empty image list")
        target = images[0].group
        return cls(source, target, [[img.coords[i] for img in images] for i in range(target.ngens)])

    def __call__(self, g: GroupElem) -> GroupElem:
        if g.group != self.source:
            raise GroupMismatchError(f"{g.group} is not the source {self.source}")
        return self.target.elem(
            [sum(a * x for a, x in zip(row, g.coords)) for row in self.matrix]
        )

    def compose(self, inner: GroupHom) -> GroupHom:
        """``self ∘ inner``."""
        if inner.target != self.source:
            raise GroupMismatchError("composition of incompatible maps")
        return GroupHom(inner.source, self.target, mat_mul(self.matrix, inner.matrix))

    def __sub__(self, other: GroupHom) -> GroupHom:
        if (self.source, self.target) != (other.source, other.target):
            raise GroupMismatchError("difference of incompatible maps")
        return GroupHom(
            self.source,
            self.target,
            [[a - b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)],
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupHom):
            return NotImplemented
        return (self.source, self.target, self.matrix) == (other.source, other.target, other.matrix)

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.matrix))

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.matrix)

    def lift(self, q: GroupElem) -> GroupElem:
        if self.section is None:
            raise ValueError("this homomorphism carries no section")
        if q.group != self.target:
            raise GroupMismatchError("element is not in the target")
        return self.source.elem([sum(a * x for a, x in zip(row, q.coords)) for row in self.section])


def cokernel(f: GroupHom) -> tuple[FGAbelianGroup, GroupHom]:
    """``target / image(f)`` in invariant-factor form, with the projection.

    The presentation matrix stacks the images of the source generators next
    to the target's own torsion relations; its Smith form gives the quotient.
    The returned projection carries a section for lifting quotient generators.
    """
    T = f.target
    n = T.ngens
    rel_cols = [list(col) for col in zip(*f.matrix)] if f.source.ngens else []
    for i, d in enumerate(T.moduli):
        if d:
            rel_cols.append([d if r == i else 0 for r in range(n)])
    rel = [[col[i] for col in rel_cols] for i in range(n)]
    if n == 0:
        Q = FGAbelianGroup()
        return Q, GroupHom(T, Q, [], section=[])
    U, S, _ = smith_normal_form(rel)
    diag = [S[i][i] if i < len(rel_cols) else 0 for i in range(n)]
    free_rows = [i for i in range(n) if diag[i] == 0]
    tors_rows = [i for i in range(n) if diag[i] > 1]
    Q = FGAbelianGroup(len(free_rows), tuple(diag[i] for i in tors_rows))
    assert Q.torsion == tuple(diag[i] for i in tors_rows)
    kept = free_rows + tors_rows
    proj = [U[i] for i in kept]
    U_inv = unimodular_inverse(U)
    section = [[U_inv[r][i] for i in kept] for r in range(n)]
    return Q, GroupHom(T, Q, proj, section=section)


def subgroup_quotient(group: FGAbelianGroup, gens: Sequence[GroupElem]) -> tuple[FGAbelianGroup, GroupHom]:
    """Quotient of ``group`` by the subgroup generated by ``gens``."""
    for g in gens:
        if g.group != group:
            raise GroupMismatchError(f"{g} is not an element of {group}")
    free = FGAbelianGroup(len(gens))
    inclusion = GroupHom(free, group, [[g.coords[i] for g in gens] for i in range(group.ngens)])
    return cokernel(inclusion)


# ---------------------------------------------------------------------------
# Parsing

_TERM = re.compile(r"^(?:Z|Z\^(\d+)|Z/(\d+))$")


def parse_group(spec: str) -> FGAbelianGroup:
    """Parse ``"0"`` or ``term ("x" term)*`` with terms ``Z``, ``Z^n``, ``Z/n``."""
    text = spec.strip()
    if text == "0":
        return FGAbelianGroup()
    if not text:
        raise GroupSpecError("empty group spec")
    rank = 0
    mods: list[int] = []
    for raw in re.split(r"\s*x\s*", text):
        m = _TERM.match(raw)
        if m is None:
            raise GroupSpecError(f"malformed term {raw!r} in {spec!r}")
        power, modulus = m.groups()
        if power is not None:
            if int(power) < 1:
                raise GroupSpecError(f"exponent must be >= 1 in {raw!r}")
            rank += int(power)
        elif modulus is not None:
            if int(modulus) < 2:
                raise GroupSpecError(f"modulus must be >= 2 in {raw!r}")
            mods.append(int(modulus))
        else:
            rank += 1
    return FGAbelianGroup(rank, tuple(mods))
