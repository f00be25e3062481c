from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings, strategies as st

from k3mirror.lattice import direct_sum, lattice_U
from k3mirror.periods import (
    ComplexifiedKahlerClass,
    HyperkahlerTriple,
    NormMismatchError,
    PeriodError,
    PeriodPoint,
    b_field_residue,
    hyperkahler_rotate,
    invert_mirror_map,
    mirror_map,
    mu_pipeline,
    normalize_period,
    picard_lattice,
    zero_b_field,
)
from k3mirror.sublattice import HyperbolicPair

import oracles

U = lattice_U()
UU = direct_sum(U, U)
PAIR = HyperbolicPair.of(UU, (1, 0, 0, 0), (0, 1, 0, 0))


def _kahler(b, w, home=UU):
    return ComplexifiedKahlerClass(b, w, home)


def test_mirror_map_examples():
    p = mirror_map(_kahler((0, 0, 0, 0), (0, 0, 1, 1)), PAIR)
    assert p.x == (1, 1, 0, 0) and p.y == (0, 0, 1, 1)
    # B = e2 is isotropic and w·B = 1
    p = mirror_map(_kahler((0, 0, 1, 0), (0, 0, 1, 1)), PAIR)
    assert p.x == (1, 1, 1, 0) and p.y == (-1, 0, 1, 1)


def test_mirror_map_rejects_classes_outside_complement():
    with pytest.raises(PeriodError, match="not in M'"):
        mirror_map(_kahler((1, 0, 0, 0), (0, 0, 1, 1)), PAIR)


def test_inverse_examples():
    k = invert_mirror_map(PeriodPoint((1, 1, 1, 0), (-1, 0, 1, 1), UU), PAIR)
    assert k.b == (0, 0, 1, 0) and k.w == (0, 0, 1, 1)
    with pytest.raises(PeriodError, match="normalize first"):
        invert_mirror_map(PeriodPoint((2, 2, 2, 0), (-2, 0, 2, 2), UU), PAIR)


def test_normalize_examples():
    base = PeriodPoint((1, 1, 1, 0), (-1, 0, 1, 1), UU)
    assert normalize_period(PeriodPoint((2, 2, 2, 0), (-2, 0, 2, 2), UU), PAIR) == base
    # i * base
    assert normalize_period(PeriodPoint((1, 0, -1, -1), (1, 1, 1, 0), UU), PAIR) == base
    assert normalize_period(base, PAIR) == base


def test_normalize_rejects_period_orthogonal_to_E():
    u3 = direct_sum(U, U, U)
    pair = HyperbolicPair.of(u3, (1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0))
    p = PeriodPoint((0, 0, 1, 1, 0, 0), (0, 0, 0, 0, 1, 1), u3)
    with pytest.raises(PeriodError, match="orthogonal to E"):
        normalize_period(p, pair)


def test_residue_and_zeroing():
    k = _kahler((0, 0, 1, 0), (0, 0, 1, 1))
    assert b_field_residue(k).is_zero
    k = _kahler((0, 0, F(1, 2), F(-3, 2)), (0, 0, 1, 1))
    assert b_field_residue(k).residues == (0, 0, F(1, 2), F(1, 2))
    z = zero_b_field(k)
    assert z.b == (0, 0, 0, 0) and z.w == k.w


def test_rotation_has_order_four():
    u3 = direct_sum(U, U, U)
    t = HyperkahlerTriple((1, 1, 0, 0, 0, 0), (0, 0, 1, 1, 0, 0), (0, 0, 0, 0, 1, 1), u3)
    r = hyperkahler_rotate(t)
    assert r.kahler == t.re_holo and r.re_holo == tuple(-a for a in t.kahler) and r.im_holo == t.im_holo
    for _ in range(3):
        r = hyperkahler_rotate(r)
    assert r == t


def test_picard_example():
    pic = picard_lattice(UU, PeriodPoint((1, 1, 0, 0), (0, 0, 1, 1), UU))
    assert pic.rank == 2
    assert pic.induced_gram.tolist() == [[-2, 0], [0, -2]]
    kern = oracles.rational_kernel([[1, 1, 0, 0], [0, 0, 1, 1]], 4)
    for v in pic.basis:
        assert oracles.rational_solve(kern, v) is not None


# -- the mu pipeline ---------------------------------------------------------

def _planted_period(s, b, w):
    return mirror_map(ComplexifiedKahlerClass(b, w, s.ambient), s.p_prime)


def _oracle_picard_contains(s, kahler, y):
    g = s.ambient.gram.tolist()
    constraints = [oracles.matmul([list(kahler)], g)[0], oracles.matmul([list(y)], g)[0]]
    kern = oracles.rational_kernel(constraints, s.ambient.rank)
    return len(kern), all(oracles.rational_solve(kern, v) is not None for v in s.m_check_embedding.basis)


def test_mu_toy(toy):
    period = _planted_period(toy, (1, -1, 0, 0, 0, 0), (0, 0, 0, 0, 1, 1))
    kahler = (1, 1, 0, 0, 0, 0)
    rep = mu_pipeline(toy, period, kahler)
    assert rep.residue.is_zero and rep.b_integral
    assert rep.kahler_class.b == (1, -1, 0, 0, 0, 0)
    assert rep.zeroed_period.x == (0, 0, 1, 1, 0, 0)
    assert rep.zeroed_period.y == (0, 0, 0, 0, 1, 1)
    assert rep.contains_mcheck and not rep.missing
    assert rep.omega_in_p and rep.plane_meets_p == 1
    dim, contained = _oracle_picard_contains(toy, kahler, rep.zeroed_period.y)
    assert dim == rep.picard.rank == 4 and contained


def test_mu_k3(k3s):
    from k3mirror.lattice import k3_vector as K

    period = _planted_period(k3s, (0,) * 22, K(U3=(1, 1)))
    kahler = K(U1=(1, 1))
    rep = mu_pipeline(k3s, period, kahler)
    assert rep.contains_mcheck and rep.picard.rank == 20
    dim, contained = _oracle_picard_contains(k3s, kahler, rep.zeroed_period.y)
    assert dim == 20 and contained


def test_mu_half_integral_b(toy):
    h = F(1, 2)
    period = _planted_period(toy, (h, -h, 0, 0, 0, 0), (0, 0, 0, 0, 1, 1))
    rep = mu_pipeline(toy, period, (1, 1, 0, 0, 0, 0))
    assert not rep.b_integral
    assert not rep.residue.is_zero and h in rep.residue.residues
    assert rep.contains_mcheck  # B is discarded before rotating


def test_mu_norm_mismatch(toy):
    period = _planted_period(toy, (0,) * 6, (0, 0, 0, 0, 1, 1))
    with pytest.raises(NormMismatchError, match="not norm-matched"):
        mu_pipeline(toy, period, (2, 2, 0, 0, 0, 0))


def test_mu_period_in_T_coordinates(toy):
    amb = _planted_period(toy, (0,) * 6, (0, 0, 0, 0, 1, 1))
    t = toy.t_lat
    in_t = PeriodPoint(t.rational_coordinates(amb.x), t.rational_coordinates(amb.y), t.lattice())
    a = mu_pipeline(toy, amb, (1, 1, 0, 0, 0, 0))
    b = mu_pipeline(toy, in_t, (1, 1, 0, 0, 0, 0))
    assert a.picard.basis == b.picard.basis


rats = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@settings(max_examples=150, deadline=None)
@given(b=st.tuples(rats, rats, rats), w=st.tuples(rats, rats, rats), lam=st.tuples(rats, rats))
def test_round_trip_through_rescaling(toy, b, w, lam):
    # M' of the toy scenario is spanned by e1 - f1, e3, f3
    def emb(c):
        return (c[0], -c[0], 0, 0, c[1], c[2])

    bv, wv = emb(b), emb(w)
    assume(toy.ambient.norm(wv) > 0)
    assume(lam != (0, 0))
    k = ComplexifiedKahlerClass(bv, wv, toy.ambient)
    p = mirror_map(k, toy.p_prime)
    a, c = lam
    scaled = PeriodPoint(
        tuple(a * x - c * y for x, y in zip(p.x, p.y)),
        tuple(a * y + c * x for x, y in zip(p.x, p.y)),
        toy.ambient,
    )
    back = invert_mirror_map(normalize_period(scaled, toy.p_prime), toy.p_prime)
    assert back.b == k.b and back.w == k.w
