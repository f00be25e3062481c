"""Period points, complexified Kähler classes, the mirror map and the mu pipeline.

All classes are rational vectors in the coordinates of a single home lattice.
A complex vector ``x + i y`` is stored as its real and imaginary parts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Sequence

from .exact import IntMatrix, clear_denominators, integer_kernel, is_integral, rational_rank, solve_rational, to_fractions, vec_comb
from .lattice import GramLattice, LatticeError
from .mirror import MirrorScenario, ScenarioError
from .sublattice import Embedding, HyperbolicPair


class PeriodError(LatticeError):
    pass


class InvariantError(LatticeError):
    """A pairing identity that must hold exactly did not."""


class NormMismatchError(LatticeError):
    pass


def _zero(n: int) -> tuple:
    return (Fraction(0),) * n


@dataclass(frozen=True)
class PeriodPoint:
    """``Ω = x + i y`` with ``Ω·Ω = 0`` and ``Ω·Ω̄ > 0``."""

    x: tuple
    y: tuple
    home: GramLattice

    def __post_init__(self):
        object.__setattr__(self, "x", to_fractions(self.x))
        object.__setattr__(self, "y", to_fractions(self.y))
        if len(self.x) != self.home.rank or len(self.y) != self.home.rank:
            raise PeriodError("period coordinates do not match the home lattice rank")
        xx, yy, xy = self.home.norm(self.x), self.home.norm(self.y), self.home.pair(self.x, self.y)
        if xy != 0 or xx != yy:
            raise PeriodError(f"period not isotropic: x·x = {xx}, y·y = {yy}, x·y = {xy}")
        if xx <= 0:
            raise PeriodError(f"period not positive: x·x = {xx}")

    def pair_with(self, v: Sequence) -> tuple[Fraction, Fraction]:
        """Real and imaginary parts of ``Ω · v``."""
        return self.home.pair(self.x, v), self.home.pair(self.y, v)


@dataclass(frozen=True)
class ComplexifiedKahlerClass:
    """``B̌ + i ω̌`` with ``ω̌·ω̌ > 0`` in the cone component of ``cone_ref``."""

    b: tuple
    w: tuple
    home: GramLattice
    cone_ref: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "b", to_fractions(self.b))
        object.__setattr__(self, "w", to_fractions(self.w))
        if self.cone_ref is not None:
            object.__setattr__(self, "cone_ref", to_fractions(self.cone_ref))
        if self.home.norm(self.w) <= 0:
            raise PeriodError("Kähler direction must have positive norm")
        if self.cone_ref is not None and self.home.pair(self.w, self.cone_ref) <= 0:
            raise PeriodError("Kähler direction lies in the wrong component of the positive cone")


@dataclass(frozen=True)
class HyperkahlerTriple:
    """Classes ``(ω, x, y)``: pairwise orthogonal, equal positive norms."""

    kahler: tuple
    re_holo: tuple
    im_holo: tuple
    home: GramLattice

    def __post_init__(self):
        for name in ("kahler", "re_holo", "im_holo"):
            object.__setattr__(self, name, to_fractions(getattr(self, name)))
        check_triple(self.home, self.kahler, self.re_holo, self.im_holo)


def check_triple(home: GramLattice, w, x, y) -> None:
    for label, a, b in (("ω·x", w, x), ("ω·y", w, y), ("x·y", x, y)):
        val = home.pair(a, b)
        if val != 0:
            raise InvariantError(f"{label} = {val}, expected 0")
    ww, xx, yy = home.norm(w), home.norm(x), home.norm(y)
    if not (ww == xx == yy):
        raise InvariantError(f"norms differ: ω·ω = {ww}, x·x = {xx}, y·y = {yy}")
    if ww <= 0:
        raise InvariantError(f"ω·ω = {ww}, expected > 0")


@dataclass(frozen=True)
class BFieldResidue:
    residues: tuple

    @property
    def is_zero(self) -> bool:
        return not any(self.residues)


def _pair_vectors(pair: HyperbolicPair, home: GramLattice):
    if pair.home != home:
        raise LatticeError("lattice mismatch")
    return pair.e.coords, pair.e_prime.coords


def mirror_map(k: ComplexifiedKahlerClass, pair: HyperbolicPair) -> PeriodPoint:
    """``B̌ + iω̌ ↦ B̌ + E' + ½(ω̌² − B̌²)E + i(ω̌ − (ω̌·B̌)E)``."""
    home = k.home
    e, f = _pair_vectors(pair, home)
    for v in (k.b, k.w):
        if home.pair(v, e) or home.pair(v, f):
            raise PeriodError("class not in M'")
    ww, bb, wb = home.norm(k.w), home.norm(k.b), home.pair(k.w, k.b)
    x = vec_comb((1, k.b), (1, f), (Fraction(ww - bb, 2), e))
    y = vec_comb((1, k.w), (-wb, e))
    # identities of the formula; a failure here means the inputs were inconsistent
    if home.pair(x, y) != 0 or home.norm(x) != ww or home.norm(y) != ww:
        raise InvariantError("mirror map output violates x·y = 0, x² = y² = ω̌²")
    return PeriodPoint(x, y, home)


def normalize_period(p: PeriodPoint, pair: HyperbolicPair) -> PeriodPoint:
    """Rescale by ``1/(Ω·E)`` so that ``x·E = 1`` and ``y·E = 0``."""
    e, _ = _pair_vectors(pair, p.home)
    a, b = map(Fraction, p.pair_with(e))
    n = a * a + b * b
    if n == 0:
        raise PeriodError("period orthogonal to E; choose another admissible vector")
    # (x + iy)(a - ib) / (a² + b²)
    x = vec_comb((a / n, p.x), (b / n, p.y))
    y = vec_comb((a / n, p.y), (-b / n, p.x))
    return PeriodPoint(x, y, p.home)


def invert_mirror_map(p: PeriodPoint, pair: HyperbolicPair, cone_ref: Sequence | None = None) -> ComplexifiedKahlerClass:
    home = p.home
    e, f = _pair_vectors(pair, home)
    xe, ye = p.pair_with(e)
    if xe != 1 or ye != 0:
        raise PeriodError("normalize first")
    xf, yf = p.pair_with(f)
    b = vec_comb((1, p.x), (-xe, f), (-xf, e))
    w = vec_comb((1, p.y), (-yf, e))
    for v in (b, w):
        if home.pair(v, e) or home.pair(v, f):
            raise InvariantError("extracted class not orthogonal to E and E'")
    return ComplexifiedKahlerClass(b, w, home, cone_ref)


def b_field_residue(k: ComplexifiedKahlerClass, basis: Embedding | None = None) -> BFieldResidue:
    """Fractional parts of the B-field coordinates.

    With ``basis`` (a realization of M' in the home lattice) the coordinates
    are taken in that basis, otherwise in the home basis.
    """
    coords = k.b
    if basis is not None:
        coords = basis.rational_coordinates(k.b)
        if coords is None:
            raise PeriodError("B-field does not lie in the span of the given basis")
    return BFieldResidue(tuple(q - floor(q) for q in coords))


def zero_b_field(k: ComplexifiedKahlerClass) -> ComplexifiedKahlerClass:
    return ComplexifiedKahlerClass(_zero(len(k.b)), k.w, k.home, k.cone_ref)


def hyperkahler_rotate(t: HyperkahlerTriple) -> HyperkahlerTriple:
    """``(ω, x, y) ↦ (x, −ω, y)``."""
    return HyperkahlerTriple(t.re_holo, tuple(-a for a in t.kahler), t.im_holo, t.home)


def picard_lattice(ambient: GramLattice, p: PeriodPoint) -> Embedding:
    """Primitive sublattice of classes orthogonal to both ``x`` and ``y``."""
    if p.home != ambient:
        raise LatticeError("lattice mismatch")
    constraints = IntMatrix([clear_denominators(p.x), clear_denominators(p.y)], ncols=ambient.rank)
    kernel = integer_kernel(ambient.gram @ constraints.T)
    return Embedding(ambient, kernel, "Pic")


# ---------------------------------------------------------------------------
# The mu pipeline
# ---------------------------------------------------------------------------

@dataclass
class MuReport:
    normalized_period: PeriodPoint
    kahler_class: ComplexifiedKahlerClass  # (B̌, ω̌) extracted by inverting the mirror map
    residue: BFieldResidue
    b_integral: bool
    zeroed_period: PeriodPoint  # Ω₀ = φ(i ω̌)
    triple: HyperkahlerTriple
    rotated: HyperkahlerTriple
    new_period: PeriodPoint  # ω + i y, the holomorphic form after rotation
    picard: Embedding
    contains_mcheck: bool
    missing: list
    omega_in_p: bool
    plane_meets_p: int  # dim of span{Re Ω₀, Im Ω₀} ∩ P⊗Q


def lift_period(s: MirrorScenario, p: PeriodPoint) -> PeriodPoint:
    """Accept a period in ambient or T coordinates; return it in ambient coordinates."""
    if p.home == s.ambient:
        return p
    t = s.t_lat.lattice()
    if p.home.gram != t.gram:
        raise PeriodError("period must be given in ambient or T coordinates")
    return PeriodPoint(s.t_lat.lift(p.x), s.t_lat.lift(p.y), s.ambient)


def mu_pipeline(
    s: MirrorScenario,
    p: PeriodPoint,
    kahler: Sequence,
    cone_ref: Sequence | None = None,
) -> MuReport:
    """Set the B-field to zero and rotate; report the resulting Picard lattice.

    ``kahler`` is the Kähler class of X, a rational vector in ``M ⊗ Q`` whose
    norm must equal ``ω̌²`` (no square roots over Q, so no rescaling here).
    """
    if s.p_prime is None:
        raise ScenarioError("scenario has no P'")
    amb = s.ambient
    p = lift_period(s, p)
    for v in s.m_pol.basis:
        if amb.pair(p.x, v) or amb.pair(p.y, v):
            raise PeriodError("period is not orthogonal to M")
    kahler = to_fractions(kahler)
    if s.m_pol.rational_coordinates(kahler) is None:
        raise PeriodError("Kähler class does not lie in M ⊗ Q")
    kk = amb.norm(kahler)
    if kk <= 0:
        raise PeriodError("Kähler class must have positive norm")

    pair = s.p_prime
    normed = normalize_period(p, pair)
    if cone_ref is None:
        cone_ref = s.cone_ref
    k = invert_mirror_map(normed, pair, cone_ref)
    residue = b_field_residue(k, s.m_prime_embedding)
    b_integral = is_integral(k.b)
    if is_integral(normed.x) and not b_integral:
        raise InvariantError("x is integral but the extracted B-field is not")

    k0 = zero_b_field(k)
    omega0 = mirror_map(k0, pair)
    ww = amb.norm(k.w)
    if kk != ww:
        raise NormMismatchError(f"Kähler class not norm-matched; rescale (ω² = {kk}, ω̌² = {ww})")
    triple = HyperkahlerTriple(kahler, omega0.x, omega0.y, amb)
    rotated = hyperkahler_rotate(triple)
    new_period = PeriodPoint(kahler, omega0.y, amb)
    pic = picard_lattice(amb, new_period)

    missing = [list(v) for v in s.m_check_embedding.basis if not pic.contains(v)]
    p_vecs = [s.p_slag.e.coords, s.p_slag.e_prime.coords]
    omega_in_p = solve_rational(p_vecs, k.w) is not None
    plane = [omega0.x, omega0.y]
    meets = rational_rank(plane) + 2 - rational_rank(plane + p_vecs)

    return MuReport(
        normalized_period=normed,
        kahler_class=k,
        residue=residue,
        b_integral=b_integral,
        zeroed_period=omega0,
        triple=triple,
        rotated=rotated,
        new_period=new_period,
        picard=pic,
        contains_mcheck=not missing,
        missing=missing,
        omega_in_p=omega_in_p,
        plane_meets_p=meets,
    )
