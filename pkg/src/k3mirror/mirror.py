"""Mirror lattices, mirror scenarios and the duality check.

A scenario lives inside a fixed ambient lattice ``L`` (usually the K3 lattice
with its standard basis, which plays the role of the marking). Every derived
lattice is realized as an :class:`Embedding` in ``L`` so that later stages can
work with honest ambient coordinates. Hyperbolic pairs are stored in ambient
coordinates as well.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .exact import IntMatrix, determinant, hnf_rows, rational_rank
from .lattice import (
    GramLattice,
    LatticeError,
    discriminant_group,
    lattice_K3,
    signature,
)
from .sublattice import (
    DEFAULT_HEIGHT,
    Embedding,
    HyperbolicPair,
    find_admissible_pair,
    is_primitive,
    orthogonal_complement,
    quotient_by_isotropic,
    quotient_isometry,
    split_hyperbolic,
)

ISOMETRY_HEIGHT = 4
ISOMETRY_MAX_RANK = 8
# Box vectors enumerated per isometry search; beyond this the verdict degrades.
ISOMETRY_BUDGET = 250_000


class ScenarioError(LatticeError):
    pass


class DualityError(LatticeError):
    pass


def is_k3_lattice(lat: GramLattice) -> bool:
    return lat.gram == lattice_K3().gram


def polarization_t(m: GramLattice) -> int:
    """``t`` for a lattice of signature ``(1, t)``; raises otherwise."""
    sig = signature(m)
    if sig.positive != 1 or sig.zero != 0:
        raise ScenarioError("not a polarization lattice")
    return sig.negative


def moduli_dimension(m: GramLattice) -> int:
    return 19 - polarization_t(m)


def _check_primitive_polarization(m_pol: Embedding) -> None:
    if not is_primitive(m_pol):
        raise ScenarioError("M is not primitive in the ambient lattice")
    polarization_t(m_pol.lattice())


def pair_to_sublattice(pair: HyperbolicPair, sub: Embedding) -> HyperbolicPair:
    """Rewrite an ambient pair in the coordinates of ``sub``."""
    e = sub.coordinates(pair.e.coords)
    f = sub.coordinates(pair.e_prime.coords)
    if e is None or f is None:
        raise ScenarioError("pair not in T")
    lat = sub.lattice()
    return HyperbolicPair(lat.vector(e), lat.vector(f))


def pair_to_ambient(pair: HyperbolicPair, sub: Embedding) -> HyperbolicPair:
    amb = sub.ambient
    return HyperbolicPair(amb.vector(sub.lift(pair.e.coords)), amb.vector(sub.lift(pair.e_prime.coords)))


def _same_span(a: Embedding, b: Embedding) -> bool:
    return hnf_rows(a.basis) == hnf_rows(b.basis)


def mirror_embedding(m_pol: Embedding, pair: HyperbolicPair, t_lat: Embedding | None = None) -> Embedding:
    """Realize ``M̌ = P^⊥ ∩ M^⊥`` in ambient coordinates.

    ``pair`` is given in ambient coordinates. The result is cross-checked
    against the quotient presentation ``E^⊥ / Z E`` computed inside ``T``.
    """
    _check_primitive_polarization(m_pol)
    if pair.home != m_pol.ambient:
        raise LatticeError("lattice mismatch")
    if t_lat is None:
        t_lat = orthogonal_complement(m_pol, "T")
    pair_t = pair_to_sublattice(pair, t_lat)
    rows = list(m_pol.basis) + [pair.e.coords, pair.e_prime.coords]
    mcheck = orthogonal_complement(Embedding.of(m_pol.ambient, rows), "Mcheck")

    t = pair_t.home
    _, complement = split_hyperbolic(t, pair_t)
    qp = quotient_by_isotropic(t, pair_t.e)
    quotient_isometry(qp, complement)
    lifted = Embedding.of(m_pol.ambient, [t_lat.lift(r) for r in complement.basis])
    if not _same_span(lifted, mcheck):
        raise LatticeError("mirror realization disagrees with the split of T")
    return mcheck


def mirror_lattice(m_pol: Embedding, pair: HyperbolicPair) -> GramLattice:
    return mirror_embedding(m_pol, pair).lattice("Mcheck")


@dataclass(frozen=True)
class MirrorScenario:
    """``L ⊇ M ⊕ T`` with ``T ⊇ P ⊕ P' ⊕ R``.

    ``p_slag`` is the fibration plane P and ``p_prime`` the plane P' whose
    generators (E, E') enter the mirror map. ``m_check`` and ``m_prime`` are
    the abstract lattices; ``*_embedding`` fields are their realizations
    ``M̌ = P^⊥ ∩ T`` and ``M' = P'^⊥ ∩ T``.
    """

    ambient: GramLattice
    m_pol: Embedding
    t_lat: Embedding
    p_slag: HyperbolicPair
    p_prime: HyperbolicPair | None
    m_check_embedding: Embedding
    m_check: GramLattice
    m_prime_embedding: Embedding | None = None
    m_prime: GramLattice | None = None
    r_core: Embedding | None = None
    cone_ref: tuple | None = None

    @property
    def t(self) -> int:
        return polarization_t(self.m_pol.lattice())

    def swapped(self) -> "MirrorScenario":
        if self.p_prime is None:
            raise ScenarioError("scenario has no P'")
        return build_scenario(self.ambient, self.m_pol.basis, self.p_prime, self.p_slag, cone_ref=self.cone_ref)


def build_scenario(
    ambient: GramLattice,
    m_basis,
    p_slag: HyperbolicPair,
    p_prime: HyperbolicPair | None = None,
    *,
    cone_ref: Sequence | None = None,
    m_check: GramLattice | None = None,
    m_prime: GramLattice | None = None,
) -> MirrorScenario:
    """Derive T, M̌, M' and R from ``(L, M, P, P')``.

    ``m_check``/``m_prime`` override the abstract lattices (the realizations
    are always derived); :func:`duality_check` compares the two.
    """
    m_pol = Embedding(ambient, IntMatrix(list(m_basis), ncols=ambient.rank), "M")
    _check_primitive_polarization(m_pol)
    t_lat = orthogonal_complement(m_pol, "T")
    _check_index(ambient, m_pol, t_lat)
    mcheck_emb = mirror_embedding(m_pol, p_slag, t_lat)

    mprime_emb = r_core = None
    if p_prime is not None:
        pair_to_sublattice(p_prime, t_lat)
        mprime_emb = orthogonal_complement(
            Embedding.of(ambient, list(m_pol.basis) + [p_prime.e.coords, p_prime.e_prime.coords]), "Mprime"
        )
        rows = list(m_pol.basis) + [v.coords for v in (p_slag.e, p_slag.e_prime, p_prime.e, p_prime.e_prime)]
        if rational_rank(rows) == len(rows):
            r_core = orthogonal_complement(Embedding.of(ambient, rows), "R")
        if m_prime is None:
            m_prime = mprime_emb.lattice("Mprime")

    return MirrorScenario(
        ambient=ambient,
        m_pol=m_pol,
        t_lat=t_lat,
        p_slag=p_slag,
        p_prime=p_prime,
        m_check_embedding=mcheck_emb,
        m_check=m_check if m_check is not None else mcheck_emb.lattice("Mcheck"),
        m_prime_embedding=mprime_emb,
        m_prime=m_prime,
        r_core=r_core,
        cone_ref=tuple(cone_ref) if cone_ref is not None else None,
    )


def _check_index(ambient: GramLattice, m_pol: Embedding, t_lat: Embedding) -> None:
    """``|det M| |det T| = |det L| [L : M ⊕ T]^2``."""
    if m_pol.rank + t_lat.rank != ambient.rank:
        raise ScenarioError("rank(M) + rank(T) != rank(L)")
    index = abs(determinant(m_pol.basis.vstack(t_lat.basis)))
    lhs = abs(determinant(m_pol.induced_gram)) * abs(determinant(t_lat.induced_gram))
    if lhs != abs(ambient.det) * index * index:
        raise ScenarioError("determinant/index bookkeeping failed")


# ---------------------------------------------------------------------------
# Scenario conditions i, ii, iii
# ---------------------------------------------------------------------------

@dataclass
class ConditionResult:
    name: str
    passed: bool
    detail: str
    witness: list = field(default_factory=list)


def check_conditions(s: MirrorScenario, height: int = DEFAULT_HEIGHT) -> list[ConditionResult]:
    amb = s.ambient
    mcheck = s.m_check_embedding
    out = []

    # (i): P' exhibited as a primitive hyperbolic plane inside the M̌ realization
    if s.p_prime is None:
        out.append(ConditionResult("i", False, "scenario has no P'"))
    else:
        e, f = s.p_prime.e.coords, s.p_prime.e_prime.coords
        inside = mcheck.contains(e) and mcheck.contains(f)
        prim = False
        if inside:
            sub = Embedding.of(mcheck.lattice(), [mcheck.coordinates(e), mcheck.coordinates(f)])
            prim = is_primitive(sub)
        detail = "P' is a primitive U inside M̌" if inside and prim else (
            "P' is not contained in M̌" if not inside else "P' is not primitive in M̌")
        out.append(ConditionResult("i", inside and prim, detail, [list(e), list(f)]))

    # (ii): lattice-level form, an admissible pair found by search inside M̌
    found = find_admissible_pair(mcheck.lattice(), height)
    if found is None:
        out.append(ConditionResult("ii", False, f"no 1-admissible vector in M̌ up to height {height}"))
    else:
        amb_pair = pair_to_ambient(found, mcheck)
        out.append(ConditionResult(
            "ii", True, "M̌ contains a hyperbolic pair",
            [list(amb_pair.e.coords), list(amb_pair.e_prime.coords)],
        ))

    # (iii): P ⊥ P' and P ⊕ P' an orthogonal summand of T
    if s.p_prime is None:
        out.append(ConditionResult("iii", False, "scenario has no P'"))
    else:
        p, q = s.p_slag, s.p_prime
        cross = [amb.pair(a.coords, b.coords) for a in (p.e, p.e_prime) for b in (q.e, q.e_prime)]
        if any(cross):
            out.append(ConditionResult("iii", False, f"P and P' are not orthogonal: pairings {cross}", cross))
        else:
            ok = False
            detail = "P ⊕ P' is not an orthogonal summand of T"
            if s.r_core is not None:
                rows = [v.coords for v in (p.e, p.e_prime, q.e, q.e_prime)] + list(s.r_core.basis)
                coords = [s.t_lat.coordinates(r) for r in rows]
                if all(c is not None for c in coords) and len(coords) == s.t_lat.rank:
                    if abs(determinant(IntMatrix(coords, ncols=s.t_lat.rank))) == 1:
                        ok = True
                        detail = "T = P ⊕ P' ⊕ R"
            out.append(ConditionResult("iii", ok, detail, cross))
    return out


# ---------------------------------------------------------------------------
# Isometry testing
# ---------------------------------------------------------------------------

@dataclass
class IsometryReport:
    verdict: str  # "isometric-certified" | "invariant-equivalent" | "distinct"
    invariants_compared: dict
    certificate: IntMatrix | None = None
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.verdict != "distinct"


def lattice_invariants(lat: GramLattice) -> dict:
    sig = signature(lat)
    return {
        "rank": lat.rank,
        "signature": list(sig),
        "parity": "even" if lat.is_even else "odd",
        "discriminant": discriminant_group(lat) if lat.rank == 0 or lat.det else None,
    }


def _box_by_norm(g: IntMatrix, height: int, wanted: set) -> dict:
    n = g.nrows
    rows = [tuple(r) for r in g]
    out: dict[int, list] = {k: [] for k in wanted}
    for v in itertools.product(range(-height, height + 1), repeat=n):
        if not any(v):
            continue
        vg = [sum(v[i] * rows[i][j] for i in range(n) if v[i]) for j in range(n)]
        norm = sum(a * b for a, b in zip(v, vg))
        if norm in out:
            out[norm].append((v, vg))
    return out


def find_isometry(a: GramLattice, b: GramLattice, height: int = ISOMETRY_HEIGHT) -> IntMatrix | None:
    """Unimodular ``X`` with ``X^T gram(a) X == gram(b)``, searched in a box.

    Column ``j`` of ``X`` is the image of the ``j``-th basis vector of ``b``,
    written in the basis of ``a``. Backtracking over candidates of the right
    norm, pruned by the pairings with the columns already chosen.
    """
    n = a.rank
    if n != b.rank:
        return None
    if n == 0 or a.gram == b.gram:
        return IntMatrix.identity(n)
    gb = b.gram
    cands = _box_by_norm(a.gram, height, {gb[j][j] for j in range(n)})
    chosen: list = []

    def search(j: int):
        if j == n:
            x = IntMatrix(zip(*[c[0] for c in chosen]), ncols=n)
            return x if abs(determinant(x)) == 1 else None
        for v, vg in cands[gb[j][j]]:
            if all(sum(p * q for p, q in zip(c[0], vg)) == gb[i][j] for i, c in enumerate(chosen)):
                chosen.append((v, vg))
                x = search(j + 1)
                if x is not None:
                    return x
                chosen.pop()
        return None

    return search(0)


def compare_lattices(
    a: GramLattice,
    b: GramLattice,
    height: int = ISOMETRY_HEIGHT,
    max_rank: int = ISOMETRY_MAX_RANK,
    budget: int = ISOMETRY_BUDGET,
) -> IsometryReport:
    ia, ib = lattice_invariants(a), lattice_invariants(b)
    compared = {k: [ia[k], ib[k]] for k in ia}
    differing = [k for k in ia if ia[k] != ib[k]]
    if differing:
        return IsometryReport("distinct", compared, notes=[f"{k} differs" for k in differing])
    notes = []
    if a.gram == b.gram:
        return IsometryReport("isometric-certified", compared, IntMatrix.identity(a.rank), ["Gram matrices equal"])
    if a.rank > max_rank:
        notes.append(f"rank {a.rank} above certification limit {max_rank}")
    elif (2 * height + 1) ** a.rank > budget:
        notes.append(f"search box (2*{height}+1)^{a.rank} exceeds budget {budget}")
    else:
        x = find_isometry(a, b, height)
        if x is not None:
            return IsometryReport("isometric-certified", compared, x, [f"certificate found at height {height}"])
        notes.append(f"no certificate within height {height}")
    return IsometryReport("invariant-equivalent", compared, None, notes)


@dataclass
class DualityResult:
    report: IsometryReport
    double_mirror: Embedding
    pair: HyperbolicPair


def double_mirror(s: MirrorScenario, height: int = DEFAULT_HEIGHT) -> tuple[Embedding, HyperbolicPair]:
    """Mirror of the M̌ realization, via an admissible pair found in ``M̌^⊥``."""
    mcheck = s.m_check_embedding
    perp = orthogonal_complement(mcheck, "Mcheck^perp")
    found = find_admissible_pair(perp.lattice(), height)
    if found is None:
        raise DualityError("cannot form double mirror")
    pair = pair_to_ambient(found, perp)
    return mirror_embedding(mcheck, pair, perp), pair


def duality_check(s: MirrorScenario, height: int = DEFAULT_HEIGHT, iso_height: int = ISOMETRY_HEIGHT) -> DualityResult:
    dd, pair = double_mirror(s, height)
    realized = s.m_check_embedding.lattice("Mcheck")
    if s.m_check.gram != realized.gram:
        declared = compare_lattices(s.m_check, realized, iso_height)
        if declared.verdict == "distinct":
            declared.notes.insert(0, "declared M̌ does not match its realization in L")
            return DualityResult(declared, dd, pair)
    report = compare_lattices(s.m_pol.lattice("M"), dd.lattice("Mcheckcheck"), iso_height)
    return DualityResult(report, dd, pair)


def discover_scenario(ambient: GramLattice, m_basis, height: int = DEFAULT_HEIGHT) -> MirrorScenario:
    """Scenario with P found by search in T and P' found by search in M̌.

    P' is left unset when M̌ has no admissible vector within ``height``.
    """
    m_pol = Embedding(ambient, IntMatrix(list(m_basis), ncols=ambient.rank), "M")
    _check_primitive_polarization(m_pol)
    t_lat = orthogonal_complement(m_pol, "T")
    found = find_admissible_pair(t_lat.lattice(), height)
    if found is None:
        raise ScenarioError(f"no 1-admissible vector in T up to height {height}")
    p = pair_to_ambient(found, t_lat)
    mcheck = mirror_embedding(m_pol, p, t_lat)
    found = find_admissible_pair(mcheck.lattice(), height)
    pp = pair_to_ambient(found, mcheck) if found is not None else None
    return build_scenario(ambient, m_basis, p, pp)
