"""Integral lattices given by Gram matrices, and the standard building blocks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .exact import (
    IntMatrix,
    as_matrix,
    bilinear,
    determinant,
    rational_congruent_diagonalization,
    smith_normal_form,
    sparse_rows,
)


class LatticeError(ValueError):
    pass


class OddLatticeError(LatticeError):
    pass


# Cartan matrix of E8 (Bourbaki labelling, node 2 attached to node 4), negated
# so that the lattice is negative definite: every K3 lattice factor after the
# three hyperbolic planes has signature (0, 8).
E8_NEGATIVE_GRAM = (
    (-2, 0, 1, 0, 0, 0, 0, 0),
    (0, -2, 0, 1, 0, 0, 0, 0),
    (1, 0, -2, 1, 0, 0, 0, 0),
    (0, 1, 1, -2, 1, 0, 0, 0),
    (0, 0, 0, 1, -2, 1, 0, 0),
    (0, 0, 0, 0, 1, -2, 1, 0),
    (0, 0, 0, 0, 0, 1, -2, 1),
    (0, 0, 0, 0, 0, 0, 1, -2),
)


class Signature(NamedTuple):
    positive: int
    negative: int
    zero: int = 0

    def __str__(self) -> str:
        return f"({self.positive},{self.negative})" if not self.zero else f"({self.positive},{self.negative},{self.zero})"


@dataclass(frozen=True)
class GramLattice:
    """A free Z-module with a symmetric integer pairing.

    Odd forms are rejected unless ``allow_odd`` is set.
    """

    gram: IntMatrix
    label: str = ""
    allow_odd: bool = field(default=False, compare=False)

    def __post_init__(self):
        g = as_matrix(self.gram)
        object.__setattr__(self, "gram", g)
        if not g.is_symmetric():
            raise LatticeError("Gram matrix is not symmetric")
        if not self.allow_odd and any(g[i][i] % 2 for i in range(g.nrows)):
            raise OddLatticeError("odd lattice: diagonal entries must be even")
        object.__setattr__(self, "_sparse", sparse_rows(g))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], label: str = "", allow_odd: bool = False) -> "GramLattice":
        rows = [list(r) for r in rows]
        return cls(IntMatrix(rows, ncols=len(rows)), label, allow_odd)

    @property
    def rank(self) -> int:
        return self.gram.nrows

    @property
    def det(self) -> int:
        return determinant(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @property
    def is_nondegenerate(self) -> bool:
        return self.det != 0

    def pair(self, u: Sequence, v: Sequence):
        """Pairing of two coordinate vectors (ints or Fractions)."""
        if len(u) != self.rank or len(v) != self.rank:
            raise LatticeError(f"vector length does not match rank {self.rank}")
        return bilinear(u, self._sparse, v)

    def norm(self, v: Sequence):
        return self.pair(v, v)

    def vector(self, coords: Sequence[int]) -> "LatticeVector":
        return LatticeVector(tuple(coords), self)

    def basis_vector(self, i: int) -> "LatticeVector":
        return self.vector([int(i == j) for j in range(self.rank)])

    def relabel(self, label: str) -> "GramLattice":
        return GramLattice(self.gram, label, self.allow_odd)

    def scaled(self, k: int) -> "GramLattice":
        return GramLattice(IntMatrix(([k * a for a in row] for row in self.gram), ncols=self.rank), f"{self.label}({k})", self.allow_odd)


@dataclass(frozen=True)
class LatticeVector:
    coords: tuple
    home: GramLattice

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(a) for a in self.coords))
        if len(self.coords) != self.home.rank:
            raise LatticeError(f"vector has {len(self.coords)} coordinates, lattice rank is {self.home.rank}")

    def __neg__(self):
        return LatticeVector(tuple(-a for a in self.coords), self.home)

    def norm(self) -> int:
        return self.home.norm(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)


def inner_product(u: LatticeVector, v: LatticeVector) -> int:
    if u.home != v.home:
        raise LatticeError("lattice mismatch")
    return u.home.pair(u.coords, v.coords)


def lattice_U() -> GramLattice:
    return GramLattice.from_rows([[0, 1], [1, 0]], "U")


def lattice_E8() -> GramLattice:
    return GramLattice.from_rows(E8_NEGATIVE_GRAM, "E8(-1)")


def lattice_diag(*entries: int, label: str | None = None) -> GramLattice:
    """Orthogonal sum of rank-one lattices, e.g. ``lattice_diag(2, -2)``."""
    if label is None:
        label = "+".join(f"<{d}>" for d in entries)
    return GramLattice(IntMatrix.diagonal(list(entries)), label, allow_odd=any(d % 2 for d in entries))


def direct_sum(*parts: GramLattice, label: str | None = None) -> GramLattice:
    n = sum(p.rank for p in parts)
    rows = [[0] * n for _ in range(n)]
    off = 0
    for p in parts:
        for i in range(p.rank):
            for j in range(p.rank):
                rows[off + i][off + j] = p.gram[i][j]
        off += p.rank
    if label is None:
        label = "+".join(p.label for p in parts if p.rank)
    return GramLattice(IntMatrix(rows, ncols=n), label, allow_odd=any(p.allow_odd for p in parts))


def lattice_K3() -> GramLattice:
    """U + U + U + E8(-1) + E8(-1), basis in exactly that block order."""
    u, e8 = lattice_U(), lattice_E8()
    return direct_sum(u, u, u, e8, e8, label="K3")


def signature(lat: GramLattice) -> Signature:
    diag = rational_congruent_diagonalization(lat.gram)
    return Signature(
        sum(1 for d in diag if d > 0),
        sum(1 for d in diag if d < 0),
        sum(1 for d in diag if d == 0),
    )


def discriminant_group(lat: GramLattice) -> list[int]:
    """Elementary divisors > 1 of the discriminant group ``L^* / L``."""
    if lat.rank and lat.det == 0:
        raise LatticeError("degenerate form")
    divisors, _, _ = smith_normal_form(lat.gram)
    return [d for d in divisors if d > 1]


def is_unimodular(lat: GramLattice) -> bool:
    return abs(lat.det) == 1


# Block offsets of the K3 lattice basis, handy when writing coordinates by hand.
K3_BLOCKS = {"U1": 0, "U2": 2, "U3": 4, "E8a": 6, "E8b": 14}


def k3_vector(**parts: Sequence[int]) -> tuple[int, ...]:
    """Coordinates in the K3 basis from per-block pieces.

    >>> k3_vector(U1=(1, 1))[:4]
    (1, 1, 0, 0)
    """
    v = [0] * 22
    for name, coords in parts.items():
        off = K3_BLOCKS[name]
        for i, a in enumerate(coords):
            v[off + i] = a
    return tuple(v)
