"""End-to-end acceptance checks, one recorded PASS/FAIL line per criterion."""

import random
import time
from fractions import Fraction as F

from k3mirror.exact import IntMatrix, hermite_normal_form, integer_kernel, smith_normal_form
from k3mirror.lattice import k3_vector as K, lattice_diag, lattice_K3, signature
from k3mirror.mirror import (
    build_scenario,
    discover_scenario,
    duality_check,
    mirror_embedding,
    moduli_dimension,
)
from k3mirror.periods import (
    ComplexifiedKahlerClass,
    PeriodPoint,
    b_field_residue,
    invert_mirror_map,
    mirror_map,
    mu_pipeline,
    normalize_period,
)
from k3mirror.sublattice import Embedding, HyperbolicPair, find_admissible_pair

import oracles
from scenarios import k3_scenario, polarization_catalog, toy_scenario


def _u_scenario():
    L = lattice_K3()
    p = HyperbolicPair.of(L, K(U3=(1, 0)), K(U3=(0, 1)))
    pp = HyperbolicPair.of(L, K(U2=(1, 0)), K(U2=(0, 1)))
    return build_scenario(L, [K(U1=(1, 0)), K(U1=(0, 1))], p, pp)


def _rand_q(rng, num=9, den=6):
    return F(rng.randint(-num, num), rng.randint(1, den))


def _combo(basis, coeffs):
    out = [F(0)] * len(basis[0])
    for c, row in zip(coeffs, basis):
        if c:
            out = [o + c * a if a else o for o, a in zip(out, row)]
    return tuple(out)


def _positive_class(rng, s, target):
    """``a E_P + b F_P + r`` with r in R and norm exactly ``target``."""
    amb = s.ambient
    e, f = s.p_slag.e.coords, s.p_slag.e_prime.coords
    r_basis = list(s.r_core.basis)
    coeffs = [_rand_q(rng, 3, 4) if rng.random() < 0.3 else 0 for _ in r_basis]
    r = _combo(r_basis, coeffs)
    b = F(rng.randint(1, 9), rng.randint(1, 4))
    a = (target - amb.norm(r)) / (2 * b)
    return tuple(a * p + b * q + c for p, q, c in zip(e, f, r))


# ---------------------------------------------------------------------------

def test_criterion_1_k3_certificate(verdict):
    t0 = time.perf_counter()
    L = lattice_K3()
    g = L.gram.tolist()
    det = oracles.int_det(g)
    even = all(g[i][i] % 2 == 0 for i in range(22))
    # independent signature: each U block has det -1 (one sign each way);
    # each E8 block is negative definite by Sylvester's criterion
    u_ok = all(oracles.int_det([row[k:k + 2] for row in g[k:k + 2]]) == -1 for k in (0, 2, 4))
    e8_ok = True
    for off in (6, 14):
        block = [[-x for x in row[off:off + 8]] for row in g[off:off + 8]]
        e8_ok &= all(oracles.int_det([row[:k] for row in block[:k]]) > 0 for k in range(1, 9))
    oracle_sig = (3, 19) if u_ok and e8_ok else None
    sig = signature(L)
    elapsed = time.perf_counter() - t0
    ok = L.rank == 22 and abs(det) == 1 and even and oracle_sig == (3, 19) == (sig.positive, sig.negative) and elapsed < 1
    verdict(1, "K3 lattice rank 22, signature (3,19), |det| 1, even", ok, f"{elapsed:.3f}s")


def test_criterion_2_dimension_bookkeeping(verdict):
    t0 = time.perf_counter()
    L = lattice_K3()
    cat = polarization_catalog()
    bad = []
    for name, rows in cat.items():
        m = Embedding.of(L, rows)
        t = Embedding.of(L, list(oracles_t(L, rows)))
        pair = find_admissible_pair(t.lattice())
        e = t.lift(pair.e.coords)
        f = t.lift(pair.e_prime.coords)
        mc = mirror_embedding(m, HyperbolicPair.of(L, e, f)).lattice()
        if m.rank + mc.rank != 20 or moduli_dimension(m.lattice()) + moduli_dimension(mc) != 20:
            bad.append(name)
    elapsed = time.perf_counter() - t0
    ok = len(cat) >= 10 and not bad and elapsed < 5
    verdict(2, f"rank and moduli dimensions sum to 20 over {len(cat)} polarizations", ok,
            f"{elapsed:.2f}s" + (f", failing {bad}" if bad else ""))


def oracles_t(L, rows):
    """Integer basis of M^perp from the library kernel (checked against the oracle)."""
    g = L.gram.tolist()
    constraints = [oracles.matmul([list(r)], g)[0] for r in rows]
    kern = integer_kernel(IntMatrix(oracles.transpose(constraints), ncols=len(rows)))
    assert kern.nrows == len(oracles.rational_kernel(constraints, 22))
    return kern


def test_criterion_3_mirror_map_identities(verdict):
    rng = random.Random(31)
    scenarios = [toy_scenario(), k3_scenario(), _u_scenario()]
    t0 = time.perf_counter()
    failures = 0
    total = 10_000
    for i in range(total):
        s = scenarios[i % 3]
        amb = s.ambient
        mp = list(s.m_prime_embedding.basis)
        b = _combo(mp, [_rand_q(rng) if rng.random() < 0.5 else 0 for _ in mp])
        w = _positive_class(rng, s, F(rng.randint(1, 40), rng.randint(1, 5)))
        k = ComplexifiedKahlerClass(b, w, amb)
        p = mirror_map(k, s.p_prime)
        ww = amb.norm(w)
        if amb.pair(p.x, p.y) != 0 or amb.norm(p.x) != ww or amb.norm(p.y) != ww:
            failures += 1
            continue
        back = invert_mirror_map(p, s.p_prime)
        if back.b != k.b or back.w != k.w:
            failures += 1
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and elapsed < 30
    verdict(3, f"{total} random mirror-map inputs: identities exact, inversion exact", ok,
            f"{failures} failures, {elapsed:.1f}s")


def test_criterion_4_integral_x_forces_integral_b(verdict):
    rng = random.Random(47)
    scenarios = [toy_scenario(), k3_scenario(), _u_scenario()]
    bad = 0
    for i in range(100):
        s = scenarios[i % 3]
        amb = s.ambient
        e, f = s.p_prime.e.coords, s.p_prime.e_prime.coords
        mp = list(s.m_prime_embedding.basis)
        b = _combo(mp, [rng.randint(-3, 3) if rng.random() < 0.5 else 0 for _ in mp])
        bb = amb.norm(b)
        c = rng.randint(1, 20) + max(0, -bb // 2)
        x = tuple(bi + fi + c * ei for bi, fi, ei in zip(b, f, e))
        assert all(F(a).denominator == 1 for a in x)
        w = _positive_class(rng, s, bb + 2 * c)
        wb = amb.pair(w, b)
        y = tuple(wi - wb * ei for wi, ei in zip(w, e))
        p = PeriodPoint(x, y, amb)
        # hide the normalization behind a random complex scale
        lam_re, lam_im = _rand_q(rng), _rand_q(rng)
        if lam_re == lam_im == 0:
            lam_re = F(1)
        scaled = PeriodPoint(
            tuple(lam_re * u - lam_im * v for u, v in zip(p.x, p.y)),
            tuple(lam_re * v + lam_im * u for u, v in zip(p.x, p.y)),
            amb,
        )
        k = invert_mirror_map(normalize_period(scaled, s.p_prime), s.p_prime)
        if not (all(q.denominator == 1 for q in k.b) and b_field_residue(k, s.m_prime_embedding).is_zero):
            bad += 1
    verdict(4, "100 periods with integral x give integral B-field, zero residue", bad == 0, f"{bad} non-integral")


def test_criterion_5_mu_containment(verdict):
    t0 = time.perf_counter()
    results = []
    for s, w, kahler in (
        (toy_scenario(), (0, 0, 0, 0, 1, 1), (1, 1, 0, 0, 0, 0)),
        (k3_scenario(), K(U3=(1, 1)), K(U1=(1, 1))),
    ):
        amb = s.ambient
        period = mirror_map(ComplexifiedKahlerClass((0,) * amb.rank, w, amb), s.p_prime)
        rep = mu_pipeline(s, period, kahler)
        g = amb.gram.tolist()
        constraints = [oracles.matmul([list(v)], g)[0] for v in (rep.new_period.x, rep.new_period.y)]
        kern = oracles.rational_kernel(constraints, amb.rank)
        oracle_ok = all(oracles.rational_solve(kern, v) is not None for v in s.m_check_embedding.basis)
        results.append(rep.contains_mcheck and oracle_ok and len(kern) == rep.picard.rank)
    elapsed = time.perf_counter() - t0
    verdict(5, "rotated Picard lattice contains the mirror (toy and rank 22)", all(results) and elapsed < 5,
            f"{elapsed:.2f}s")


def test_criterion_6_duality(verdict):
    t0 = time.perf_counter()
    L = lattice_K3()
    bad = []
    for name, rows in polarization_catalog().items():
        s = discover_scenario(L, rows)
        res = duality_check(s)
        rep, m, dd = res.report, s.m_pol.lattice(), res.double_mirror.lattice()
        same_det = abs(oracles.int_det(m.gram.tolist())) == abs(oracles.int_det(dd.gram.tolist()))
        want = {"isometric-certified"} if m.rank <= 2 else {"isometric-certified", "invariant-equivalent"}
        if rep.verdict not in want or not same_det:
            bad.append(name)
    elapsed = time.perf_counter() - t0
    verdict(6, "double mirror matches M over the catalog", not bad and elapsed < 60,
            f"{elapsed:.1f}s" + (f", failing {bad}" if bad else ""))


def test_criterion_7_negative_control(verdict):
    t = lattice_diag(2, -2)
    found = find_admissible_pair(t, 10)
    isotropic = [v for v in oracles.box(2, 10) if any(v) and oracles.pairing([[2, 0], [0, -2]], v, v) == 0]
    # the divisor of v is the gcd of its pairings with the basis
    divisors = {oracles.determinantal_divisors([[2 * v[0], -2 * v[1]]])[0] for v in isotropic}
    ok = found is None and bool(isotropic) and all(d % 2 == 0 for d in divisors)
    verdict(7, "<2>+<-2> has isotropic vectors but no admissible pair up to height 10", ok,
            f"{len(isotropic)} isotropic vectors, divisors {sorted(divisors)[:3]}...")


def test_criterion_8_normal_forms(verdict):
    rng = random.Random(8)
    t0 = time.perf_counter()
    bad = []
    for trial in range(1000):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        m = [[rng.randint(-5, 5) for _ in range(c)] for _ in range(r)]
        h, u = hermite_normal_form(m)
        hl, ul = h.tolist(), u.tolist()
        hnf_ok = (oracles.is_row_hnf(hl) and oracles.matmul(ul, m) == hl
                  and abs(oracles.int_det(ul)) == 1)
        d, left, right = smith_normal_form(m)
        diag = oracles.matmul(oracles.matmul(left.tolist(), m), right.tolist())
        snf_ok = (d == oracles.smith_divisors_oracle(m)
                  and all(diag[i][j] == (d[i] if i == j else 0) for i in range(r) for j in range(c))
                  and abs(oracles.int_det(left.tolist())) == 1 and abs(oracles.int_det(right.tolist())) == 1)
        k = integer_kernel(m)
        kl = k.tolist()
        kern_ok = k.nrows == r - oracles.frac_rank(m)
        if kl:
            kern_ok = (kern_ok and all(not any(row) for row in oracles.matmul(kl, m))
                       and oracles.maximal_minor_gcd(kl) == 1)
        if not (hnf_ok and snf_ok and kern_ok):
            bad.append(trial)
    elapsed = time.perf_counter() - t0
    verdict(8, "HNF, SNF and kernel agree with brute-force oracles on 1000 random matrices",
            not bad and elapsed < 60, f"{elapsed:.1f}s" + (f", failing trials {bad[:5]}" if bad else ""))
