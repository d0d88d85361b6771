"""Presymplectic data spaces, injective form-preserving maps and their subobject lattice.

A subobject of a data space is represented by its image, a :class:`Subspace`
in canonical reduced echelon form, so that isomorphism of subobjects is
syntactic equality.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

from gmpy2 import mpq

from . import linalg as la
from .linalg import Matrix, Q

Frozen = Tuple[Tuple[mpq, ...], ...]


class MorphismError(ValueError):
    """Raised when a matrix does not define a morphism of data spaces."""


@dataclass(frozen=True)
class DataSpace:
    dim: int
    form: Frozen

    def __post_init__(self):
        form = la.freeze([[Q(v) for v in r] for r in self.form])
        object.__setattr__(self, "form", form)
        if len(form) != self.dim or any(len(r) != self.dim for r in form):
            raise ValueError("form must be dim x dim")
        for i in range(self.dim):
            for j in range(i, self.dim):
                if form[i][j] != -form[j][i]:
                    raise ValueError("form is not antisymmetric")

    @classmethod
    def zero(cls) -> "DataSpace":
        return cls(0, ())

    @classmethod
    def plain(cls, dim: int) -> "DataSpace":
        """``dim``-dimensional space with the zero form."""
        return cls(dim, la.freeze(la.zeros(dim, dim)))

    def pair(self, u: Sequence[mpq], v: Sequence[mpq]) -> mpq:
        return sum((u[i] * sum((self.form[i][j] * v[j] for j in range(self.dim) if self.form[i][j]), la.ZERO)
                    for i in range(self.dim) if u[i]), la.ZERO)

    def full(self) -> "Subspace":
        return Subspace(self, la.freeze(la.identity(self.dim)))

    def null(self) -> "Subspace":
        return Subspace(self, ())

    def direct_sum(self, other: "DataSpace") -> "DataSpace":
        return DataSpace(self.dim + other.dim,
                         la.freeze(la.block_diag([self.form, other.form],
                                                 [(self.dim, self.dim), (other.dim, other.dim)])))


@dataclass(frozen=True)
class LinearMorphism:
    source: DataSpace
    target: DataSpace
    matrix: Frozen
    check: bool = True

    def __post_init__(self):
        m = la.freeze([[Q(v) for v in r] for r in self.matrix])
        object.__setattr__(self, "matrix", m)
        if len(m) != self.target.dim or any(len(r) != self.source.dim for r in m):
            raise MorphismError("matrix shape does not match source/target")
        if self.check:
            if la.rank(la.transpose(m, self.target.dim), self.target.dim) != self.source.dim:
                raise MorphismError("map is not injective")
            if self.pullback_form() != self.source.form:
                raise MorphismError("map does not preserve the form")

    def pullback_form(self) -> Frozen:
        mt = la.transpose(self.matrix, self.source.dim)
        return la.freeze(la.matmul(la.matmul(mt, self.target.form), self.matrix))

    @classmethod
    def identity(cls, space: DataSpace) -> "LinearMorphism":
        return cls(space, space, la.freeze(la.identity(space.dim)), check=False)

    @classmethod
    def initial(cls, space: DataSpace) -> "LinearMorphism":
        """The unique morphism out of the zero space."""
        return cls(DataSpace.zero(), space, tuple(() for _ in range(space.dim)), check=False)

    def __matmul__(self, other: "LinearMorphism") -> "LinearMorphism":
        if other.target != self.source:
            raise MorphismError("morphisms are not composable")
        prod = la.matmul(self.matrix, other.matrix) if self.matrix and other.source.dim else \
            la.zeros(self.target.dim, other.source.dim)
        return LinearMorphism(other.source, self.target, la.freeze(prod), check=False)

    def apply(self, v: Sequence[mpq]) -> list:
        return la.matvec(self.matrix, v)

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim

    def image(self) -> "Subspace":
        return Subspace.span(self.target, la.transpose(self.matrix, self.source.dim))

    def image_of(self, s: "Subspace") -> "Subspace":
        return Subspace.span(self.target, [self.apply(v) for v in s.basis])

    def preimage_of(self, s: "Subspace") -> "Subspace":
        """``{v : f v in s}``, computed through the annihilator of ``s``."""
        normals = s.normals()
        rows = la.matmul(normals, self.matrix) if normals else []
        return Subspace.span(self.source, la.nullspace(rows, self.source.dim))

    def direct_sum(self, other: "LinearMorphism") -> "LinearMorphism":
        m = la.block_diag([self.matrix, other.matrix],
                          [(self.target.dim, self.source.dim), (other.target.dim, other.source.dim)])
        return LinearMorphism(self.source.direct_sum(other.source), self.target.direct_sum(other.target),
                              la.freeze(m), check=False)


@dataclass(frozen=True)
class Subspace:
    ambient: DataSpace
    basis: Frozen

    @classmethod
    def span(cls, ambient: DataSpace, vectors: Sequence[Sequence]) -> "Subspace":
        rows = [[Q(v) for v in r] for r in vectors]
        if any(len(r) != ambient.dim for r in rows):
            raise ValueError("vector length does not match ambient dimension")
        red, _ = la.rref(rows, ambient.dim)
        return cls(ambient, la.freeze(red))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(next(i for i, v in enumerate(r) if v) for r in self.basis)

    def normals(self) -> Matrix:
        """Rows spanning the annihilator."""
        return la.nullspace(self.basis, self.ambient.dim)

    def contains(self, v: Sequence[mpq]) -> bool:
        return la.rank(list(self.basis) + [list(v)], self.ambient.dim) == self.dim

    def coordinates(self, v: Sequence[mpq]) -> list:
        """Coefficients of ``v`` in the echelon basis (``v`` must lie in the subspace)."""
        c = [v[p] for p in self.pivots]
        if [sum((ci * r[j] for ci, r in zip(c, self.basis)), la.ZERO) for j in range(self.ambient.dim)] != list(v):
            raise ValueError("vector is not in the subspace")
        return c

    def inclusion(self) -> LinearMorphism:
        """The subobject ``m : S -> ambient`` with the restricted form."""
        src = DataSpace(self.dim, la.freeze(la.matmul(la.matmul(self.basis, self.ambient.form),
                                                       la.transpose(self.basis, self.ambient.dim)))
                        if self.dim else ())
        return LinearMorphism(src, self.ambient, la.freeze(la.transpose(self.basis, self.ambient.dim))
                              if self.dim else tuple(() for _ in range(self.ambient.dim)), check=False)

    def __le__(self, other: "Subspace") -> bool:
        return subobject_leq(self, other)


def _same_ambient(subs: Sequence[Subspace], ambient: DataSpace | None) -> DataSpace:
    amb = ambient if ambient is not None else (subs[0].ambient if subs else None)
    if amb is None:
        raise ValueError("an ambient space is required for an empty family")
    for s in subs:
        if s.ambient.dim != amb.dim:
            raise ValueError("subspaces live in different ambients")
    return amb


def equalizer(f: LinearMorphism, g: LinearMorphism) -> Subspace:
    if f.source.dim != g.source.dim or f.target.dim != g.target.dim:
        raise MorphismError("equalizer needs parallel morphisms")
    diff = la.sub(f.matrix, g.matrix)
    return Subspace.span(f.source, la.nullspace(diff, f.source.dim))


def kernel_of_difference(a: Sequence[Sequence[mpq]], space: DataSpace) -> Subspace:
    """Fixed space ``{v : a v = v}`` of an endomorphism matrix."""
    n = space.dim
    diff = [[a[i][j] - (la.ONE if i == j else la.ZERO) for j in range(n)] for i in range(n)]
    return Subspace.span(space, la.nullspace(diff, n))


def intersect(subs: Sequence[Subspace], ambient: DataSpace | None = None) -> Subspace:
    amb = _same_ambient(subs, ambient)
    if not subs:
        return amb.full()
    normals: Matrix = []
    for s in subs:
        if s.dim < amb.dim:
            normals.extend(s.normals())
    return Subspace.span(amb, la.nullspace(normals, amb.dim))


def intersect_normals(normals: Sequence[Sequence[mpq]], ambient: DataSpace) -> Subspace:
    """Common zero set of a family of linear functionals."""
    return Subspace.span(ambient, la.nullspace(list(normals), ambient.dim))


def union(subs: Sequence[Subspace], ambient: DataSpace | None = None) -> Subspace:
    amb = _same_ambient(subs, ambient)
    rows = [list(r) for s in subs for r in s.basis]
    return Subspace.span(amb, rows)


def subobject_leq(a: Subspace, b: Subspace) -> bool:
    if a.ambient.dim != b.ambient.dim:
        raise ValueError("subspaces live in different ambients")
    if a.dim > b.dim:
        return False
    return la.rank(list(b.basis) + list(a.basis), a.ambient.dim) == b.dim


def subobject_iso(a: Subspace, b: Subspace) -> bool:
    if a.ambient.dim != b.ambient.dim:
        raise ValueError("subspaces live in different ambients")
    return a.basis == b.basis


def is_trivial(a: Subspace) -> bool:
    return a.dim == 0


def factor_through(f: LinearMorphism, n: LinearMorphism) -> LinearMorphism | None:
    """The unique ``g`` with ``n @ g == f`` if it exists (``n`` is injective)."""
    if f.target.dim != n.target.dim:
        raise MorphismError("factorization needs a common codomain")
    if f.target.dim == 0 or f.source.dim == 0:
        sol = la.zeros(n.source.dim, f.source.dim)
    else:
        sol = la.solve(n.matrix, f.matrix, n.source.dim)
        if sol is None:
            return None
    return LinearMorphism(f.source, n.source, la.freeze(sol), check=False)
