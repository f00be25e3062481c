"""Sublattices: embeddings, saturation, complements, isotropic quotients and
the search for 1-admissible vectors."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .exact import (
    IntMatrix,
    as_matrix,
    determinant,
    hermite_normal_form,
    hnf_rows,
    integer_kernel,
    inverse_unimodular,
    rational_rank,
    smith_normal_form,
    solve_integer,
    solve_rational,
    vector_gcd,
    xgcd,
)
from .lattice import GramLattice, LatticeError, LatticeVector, signature

DEFAULT_HEIGHT = 10


@dataclass(frozen=True)
class Embedding:
    """Sublattice of ``ambient`` spanned by the rows of ``basis``."""

    ambient: GramLattice
    basis: IntMatrix
    label: str = ""
    induced_gram: IntMatrix = field(init=False, compare=False)

    def __post_init__(self):
        b = as_matrix(self.basis)
        if b.nrows == 0 and b.ncols != self.ambient.rank:
            b = IntMatrix.zeros(0, self.ambient.rank)
        object.__setattr__(self, "basis", b)
        if b.ncols != self.ambient.rank:
            raise LatticeError(f"basis has {b.ncols} columns, ambient rank is {self.ambient.rank}")
        if rational_rank(list(b)) != b.nrows:
            raise LatticeError("basis rows are linearly dependent")
        object.__setattr__(self, "induced_gram", b @ self.ambient.gram @ b.T)

    @classmethod
    def of(cls, ambient: GramLattice, rows: Sequence[Sequence[int]], label: str = "") -> "Embedding":
        return cls(ambient, IntMatrix([list(r) for r in rows], ncols=ambient.rank), label)

    @property
    def rank(self) -> int:
        return self.basis.nrows

    def lattice(self, label: str | None = None) -> GramLattice:
        return GramLattice(self.induced_gram, self.label if label is None else label, self.ambient.allow_odd)

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...] | None:
        """Integer coordinates of an ambient vector in this basis, if it is a member."""
        if self.rank == 0:
            return () if not any(v) else None
        return solve_integer(list(self.basis), v)

    def rational_coordinates(self, v: Sequence):
        if self.rank == 0:
            return () if not any(v) else None
        return solve_rational(list(self.basis), v)

    def contains(self, v: Sequence[int]) -> bool:
        return self.coordinates(v) is not None

    def lift(self, coeffs: Sequence) -> tuple:
        """Ambient coordinates of ``sum coeffs[i] * basis[i]``."""
        n = self.ambient.rank
        return tuple(sum(c * self.basis[i][j] for i, c in enumerate(coeffs) if c) for j in range(n))

    def vectors(self) -> list[tuple[int, ...]]:
        return list(self.basis)


def is_primitive(s: Embedding) -> bool:
    divisors, _, _ = smith_normal_form(s.basis)
    return all(d == 1 for d in divisors)


def saturate(s: Embedding) -> Embedding:
    """Primitive closure ``(Q-span of s) ∩ ambient``, in HNF."""
    # the saturation is the double left-kernel of the basis
    if s.rank == 0:
        return s
    perp = integer_kernel(s.basis.T)  # vectors w with basis @ w^T == 0
    sat = integer_kernel(perp.T) if perp.nrows else IntMatrix.identity(s.ambient.rank)
    return Embedding(s.ambient, sat, s.label)


def orthogonal_complement(s: Embedding, label: str = "") -> Embedding:
    if s.ambient.rank and s.ambient.det == 0:
        raise LatticeError("degenerate form")
    kernel = integer_kernel(s.ambient.gram @ s.basis.T)
    return Embedding(s.ambient, kernel, label)


def divisor(v: LatticeVector) -> int:
    """Positive generator of the ideal ``v · L``."""
    if v.is_zero():
        raise LatticeError("divisor of the zero vector")
    return vector_gcd(pairings(v))


def pairings(v: LatticeVector) -> tuple[int, ...]:
    g = v.home.gram
    return tuple(sum(a * g[i][j] for i, a in enumerate(v.coords) if a) for j in range(v.home.rank))


@dataclass(frozen=True)
class HyperbolicPair:
    """Isotropic ``e``, ``e_prime`` with ``e · e_prime == 1``; they span a copy of U."""

    e: LatticeVector
    e_prime: LatticeVector

    def __post_init__(self):
        if self.e.home != self.e_prime.home:
            raise LatticeError("lattice mismatch")
        home = self.e.home
        e, f = self.e.coords, self.e_prime.coords
        if home.norm(e) != 0:
            raise LatticeError(f"E is not isotropic: E·E = {home.norm(e)}")
        if home.norm(f) != 0:
            raise LatticeError(f"E' is not isotropic: E'·E' = {home.norm(f)}")
        if home.pair(e, f) != 1:
            raise LatticeError(f"E·E' = {home.pair(e, f)}, expected 1")
        if vector_gcd(e) != 1 or vector_gcd(f) != 1:
            raise LatticeError("vector not primitive")

    @classmethod
    def of(cls, home: GramLattice, e: Sequence[int], e_prime: Sequence[int]) -> "HyperbolicPair":
        return cls(home.vector(e), home.vector(e_prime))

    @property
    def home(self) -> GramLattice:
        return self.e.home

    def embedding(self, label: str = "P") -> Embedding:
        return Embedding.of(self.home, [self.e.coords, self.e_prime.coords], label)


@dataclass(frozen=True)
class QuotientPresentation:
    source: Embedding
    killed: LatticeVector
    section_basis: IntMatrix
    quotient: GramLattice

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of the class of ``v`` (a vector of ``E^⊥``) in the quotient basis."""
        rows = list(self.section_basis) + [self.killed.coords]
        c = solve_integer(rows, v)
        if c is None:
            raise LatticeError("vector is not in E^⊥")
        return c[:-1]


def quotient_by_isotropic(t: GramLattice, e: LatticeVector, label: str = "") -> QuotientPresentation:
    """Present ``E^⊥ / Z E`` with integral lifts of a quotient basis."""
    if e.home != t:
        raise LatticeError("lattice mismatch")
    if e.is_zero() or t.norm(e.coords) != 0:
        raise LatticeError("vector not isotropic")
    if vector_gcd(e.coords) != 1:
        raise LatticeError("vector not primitive")
    perp = orthogonal_complement(Embedding.of(t, [e.coords]), "E^perp")
    c = perp.coordinates(e.coords)
    assert c is not None  # e is isotropic, so e ∈ E^⊥, and E^⊥ is saturated
    k = perp.rank
    # unimodular W with W c^T = (1, 0, ..., 0)^T; columns of W^-1 extend c to a basis
    _, w = hermite_normal_form(IntMatrix([[a] for a in c], ncols=1))
    w_inv = inverse_unimodular(w)
    section_coeffs = [[w_inv[i][j] for i in range(k)] for j in range(1, k)]
    lifts = [perp.lift(coeffs) for coeffs in section_coeffs]
    section = hnf_rows(IntMatrix(lifts, ncols=t.rank)) if lifts else IntMatrix.zeros(0, t.rank)
    gram = section @ t.gram @ section.T
    # the form must not depend on the lift: shift every lift by E and recompute
    shifted = IntMatrix(([a + b for a, b in zip(row, e.coords)] for row in section), ncols=t.rank)
    if shifted @ t.gram @ shifted.T != gram:
        raise LatticeError("induced form on E^⊥/ZE is not well defined")
    quotient = GramLattice(gram, label or f"{t.label}/E", t.allow_odd)
    return QuotientPresentation(perp, e, section, quotient)


def _box_shell(n: int, h: int) -> Iterator[tuple[int, ...]]:
    """Vectors with max |coordinate| exactly ``h``.

    Order: coordinate values run 0, 1, -1, 2, -2, ...; the first coordinate
    varies fastest, so ``(1, 0, ..., 0)`` comes first in shell 1.
    """
    values = [0]
    for k in range(1, h + 1):
        values += [k, -k]
    for rev in itertools.product(values, repeat=n):
        if h in rev or -h in rev:
            yield rev[::-1]


def enumerate_box(n: int, height: int) -> Iterator[tuple[int, ...]]:
    for h in range(1, height + 1):
        yield from _box_shell(n, h)


def dual_partner(v: LatticeVector) -> tuple[int, ...]:
    """Some ``w`` with ``v · w == 1``; requires divisor(v) == 1."""
    a = pairings(v)
    g, w = 0, [0] * len(a)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        g, x, y = xgcd(g, ai)
        w = [x * c for c in w]
        w[i] += y
    if g != 1:
        raise LatticeError(f"vector has divisor {g}, no dual partner")
    return tuple(w)


def isotropic_partner(v: LatticeVector) -> LatticeVector:
    """The canonical isotropic partner ``w - (w·w / 2) v`` of an admissible ``v``."""
    w = dual_partner(v)
    half = v.home.norm(w)
    if half % 2:
        raise LatticeError("odd norm partner; lattice must be even")
    half //= 2
    return v.home.vector([a - half * b for a, b in zip(w, v.coords)])


def find_admissible_pair(t: GramLattice, height: int = DEFAULT_HEIGHT) -> HyperbolicPair | None:
    """First primitive isotropic vector of divisor 1 in the box, with its partner.

    Returns ``None`` when the box holds no admissible vector.
    """
    if height < 1:
        raise ValueError("height must be >= 1")
    n = t.rank
    if n < 2:
        return None
    sig = signature(t)
    if sig.zero == 0 and (sig.positive == 0 or sig.negative == 0):
        return None  # definite forms have no isotropic vectors
    g = t.gram
    rows = [tuple(r) for r in g]
    for v in enumerate_box(n, height):
        # pairings with the basis; v is isotropic iff v · (v G) == 0
        vg = [0] * n
        for i, a in enumerate(v):
            if a:
                row = rows[i]
                for j in range(n):
                    vg[j] += a * row[j]
        if sum(a * b for a, b in zip(v, vg)) != 0:
            continue
        if vector_gcd(v) != 1 or vector_gcd(vg) != 1:
            continue
        e = t.vector(v)
        return HyperbolicPair(e, isotropic_partner(e))
    return None


def split_hyperbolic(t: GramLattice, p: HyperbolicPair) -> tuple[Embedding, Embedding]:
    """Decompose ``t = P ⊕ P^⊥`` for the unimodular plane ``P`` spanned by the pair."""
    if p.home != t:
        raise LatticeError("lattice mismatch")
    p_embed = p.embedding()
    complement = orthogonal_complement(p_embed, "P^perp")
    if 2 + complement.rank != t.rank:
        raise LatticeError("rank is not additive over the split")
    stacked = p_embed.basis.vstack(complement.basis)
    if abs(determinant(stacked)) != 1:
        raise LatticeError("P and its complement do not span the lattice")
    return p_embed, complement


def quotient_isometry(qp: QuotientPresentation, complement: Embedding) -> IntMatrix:
    """Change of basis ``A`` with ``A · gram(quotient) · A^T == gram(complement)``.

    Row ``i`` of ``A`` holds the quotient coordinates of complement basis vector ``i``.
    Raises if ``A`` is not unimodular or the Gram matrices disagree.
    """
    k = qp.quotient.rank
    a = IntMatrix([qp.coordinates(v) for v in complement.basis], ncols=k)
    if abs(determinant(a)) != 1:
        raise LatticeError("complement does not map isomorphically onto E^⊥/ZE")
    if a @ qp.quotient.gram @ a.T != complement.induced_gram:
        raise LatticeError("complement and quotient forms disagree")
    return a
