import cmath
import math
import random
import warnings

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as hst

from nthsieve.algebra import IdealK, IdealList, canonical_decompose, is_squarefree, prime_ideals_upto
from nthsieve.characters import chi
from nthsieve.lfunctions import QuadratureError, gauss_epsilon
from nthsieve.mds import (MDSPoint, PoleProximityError, Surd, WeightSpec, Z_HEADER, c1_measure, check_z1_functional_equation,
                          conductor_measure, conj_psi, correction_A, correction_bound_exponent, dirichlet_D,
                          g_ideal, gamma_factor, gauss_coeff, l_star, l_star_euler, psi_value, quotient_check,
                          r_choice, v_decay_constant, weight_H, weight_P, weight_V, z_eval, z_grid, z_grid_csv,
                          z_naive, zeta_KS)

import oracles


def primes(st, k=10):
    return [P for P in prime_ideals_upto(st.n, 400) if st.in_IS(P)][:k]


def family(st, X):
    return [I for I in IdealList(st.n, X).ideals() if st.in_IS(I)]


# --- Gauss coefficients ------------------------------------------------------------------

def test_gauss_examples(st):
    P = primes(st)[0]
    assert gauss_coeff(3, 0, P) == 1
    assert gauss_coeff(0, 1, P) == 1
    assert gauss_coeff(1, 1, P) == 0


def test_gauss_table_matches_oracle(st):
    n = st.n
    for P in primes(st):
        for a in range(2 * n + 1):
            for b in range(2 * n + 1):
                got = gauss_coeff(a, b, P)
                want = oracles.gauss_table(a, b, P.norm, n)
                assert got.c * mp.sqrt(got.r) == pytest.approx(float(want), abs=0, rel=1e-14)
                assert (got.c ** 2 * got.r) == want ** 2 and (got.c >= 0) == (want >= 0)


def test_surd_normal_form():
    assert Surd.make(3, 12) == Surd(6, 3)
    assert Surd.make(0, 7) == 0
    with pytest.raises(ValueError):
        Surd.power(7, -1)


def test_g_multiplicative(st):
    rng = random.Random(11)
    pool = primes(st, 8)
    for _ in range(200):
        rng.shuffle(pool)
        left, right = pool[:3], pool[3:6]
        ex = lambda: [rng.randint(0, 2 * st.n) for _ in range(3)]
        mk = lambda ps, es: math.prod((P ** e for P, e in zip(ps, es)), start=IdealK.unit(st.n))
        a, b = mk(left, ex()), mk(left, ex())
        a2, b2 = mk(right, ex()), mk(right, ex())
        assert g_ideal(a, b) * g_ideal(a2, b2) == g_ideal(a * a2, b * b2)


# --- correction factor ---------------------------------------------------------------------

def _triple_sum(s, psi, a, st):
    """Enumerate ordered exponent triples over the primes of a2 directly."""
    a2 = canonical_decompose(a).nth_power_root
    fac = a2.factorization()
    ch = chi(a, st)
    n = st.n
    total = 0j
    for tri in oracles.ordered_factorizations3([e for _, e in fac]):
        b1 = b3 = IdealK.unit(n)
        sq = True
        for (P, _), (i, _j, k) in zip(fac, tri):
            b1 = b1 * P ** i
            b3 = b3 * P ** k
            sq &= k <= 1
        if not sq:
            continue
        mu = (-1) ** sum(1 for t in tri if t[2] == 1)
        total += mu * complex(ch(b3)) * psi_value(psi, b3, st) * b1.norm ** (-(n * s - n + 1)) * b3.norm ** (-s)
    return total


def test_correction_trivial(st):
    for a in family(st, 60):
        if canonical_decompose(a).nth_power_root.is_one():
            assert correction_A(2 + 1j, None, a, st) == 1
    with pytest.raises(ValueError):
        correction_A(2, None, st.S[0], st)


@pytest.mark.parametrize("s", [0.5 + 2j, 1.0, 2.3 - 1j])
def test_correction_prime_closed_form(st, s):
    n = st.n
    psi = tuple(1 for _ in st.invariants)
    P, Q = primes(st, 2)
    for a in (P ** n, Q * P ** n, Q ** 2 * P ** n):
        ch = chi(a, st)
        want = 1 + P.norm ** (n - 1 - n * s) - complex(ch(P)) * psi_value(psi, P, st) * P.norm ** (-s)
        got = correction_A(s, psi, a, st)
        assert got == pytest.approx(want, abs=1e-15)
        assert got == pytest.approx(_triple_sum(s, psi, a, st), abs=1e-15)


def test_correction_two_primes_enumeration(st):
    P, Q = primes(st, 2)
    a = P ** st.n * Q ** (2 * st.n)
    for s in (0.7, 1.5 + 3j):
        assert correction_A(s, None, a, st) == pytest.approx(_triple_sum(s, None, a, st), abs=1e-14)


@pytest.mark.parametrize("sigma", [0.5, 1.0, 1.5])
def test_correction_bound(st3, sigma):
    # recorded constant: the worst ratio seen over norm <= 3000 is about 1.28
    c = 2.0
    e = correction_bound_exponent(sigma, 3)
    for a in family(st3, 3000):
        a2 = canonical_decompose(a).nth_power_root
        if not a2.is_one():
            assert abs(correction_A(sigma + 0.3j, None, a, st3)) <= c * a2.norm ** e


# --- L* and D --------------------------------------------------------------------------------

def test_l_star_squarefree_is_plain_truncation(st3):
    a = primes(st3)[0] * primes(st3)[3]
    assert is_squarefree(a)
    ch = chi(a, st3)
    direct = sum(complex(ch(b)) * b.norm ** -2.0 for b in family(st3, 200))
    assert l_star(2, None, a, 200, st3).value == pytest.approx(direct, abs=1e-13)


def test_l_star_doubling(st3):
    a = primes(st3)[1] ** 4
    lo, hi = l_star(2, None, a, 1000, st3), l_star(2, None, a, 10000, st3)
    assert abs(lo.value - hi.value) <= lo.err


def test_l_star_vs_euler(st):
    psi = tuple(1 for _ in st.invariants)
    for a in (primes(st)[0], primes(st)[2] ** st.n * primes(st)[1]):
        v = l_star(3, psi, a, 10000, st).value
        assert abs(v - l_star_euler(3, psi, a, 20000, st)) <= 1e-8


def test_d_cutoff_one(st):
    w = 2 + 0.5j
    z = zeta_KS(st.n * w - st.n / 2 + 1, st)
    assert dirichlet_D(w, primes(st)[0], None, 1, st).value == pytest.approx(z, abs=1e-14)


def test_zeta_ks_euler(st3):
    val = zeta_KS(3, st3)
    euler = 1.0
    for P in prime_ideals_upto(3, 20000):
        if st3.in_IS(P):
            euler /= 1 - P.norm ** -3.0
    assert val == pytest.approx(euler, rel=1e-9)


def test_d_unit_ideal_terms(st3):
    # with a = (1) only b with every exponent in {0} or beta = 1 survive
    one = IdealK.unit(3)
    for b in family(st3, 300):
        g = g_ideal(one, b)
        ok = all(e == 1 for _, e in b.factorization())
        assert bool(g) == ok


def test_d_brute_force(st):
    n = st.n
    P = primes(st)[0]
    w = 2.0
    total = 0j
    for b in family(st, 300):
        g = 1
        for Q, beta in b.factorization():
            g *= float(oracles.gauss_table(P.valuation(Q), beta, Q.norm, n))
        if g == 0:
            continue
        b1 = canonical_decompose(b).squarefull_part
        ast = IdealK.unit(n) if P.divides(b1) else P
        eps = 1 if b.is_one() else gauss_epsilon(chi(b, st)).value
        total += eps * complex(chi(b, st)(ast)).conjugate() * g * b.norm ** -w
    total *= zeta_KS(n * w - n / 2 + 1, st)
    assert dirichlet_D(w, P, None, 300, st).value == pytest.approx(total, abs=1e-8)


# --- Z_1 and Z_2 --------------------------------------------------------------------------

def test_z1_matches_naive_small(st):
    psi = tuple(1 for _ in st.invariants)
    for s, w in ((2.5, 2.0), (2 + 1j, 3 - 0.5j)):
        a = z_eval(1, s, w, psi, None, (40, 40), st).value
        assert a == pytest.approx(z_naive(s, w, psi, None, (40, 40), st), abs=1e-12)


def test_z_leading_term(st3):
    s, w = 2.5, 3.0
    assert z_eval(1, s, w, None, None, (1, 1), st3).value == pytest.approx(1)
    want = zeta_KS(3 * w - 1.5 + 1, st3)
    assert z_eval(2, s, w, None, None, (1, 1), st3).value == pytest.approx(want)


def test_z_conjugation(st3):
    psi, psi2 = (1, 2), (0, 1)
    s, w = 2.2 + 0.7j, 2.5 - 1.1j
    for which in (1, 2):
        a = z_eval(which, s, w, psi, psi2, (12, 12), st3).value
        b = z_eval(which, s.conjugate(), w.conjugate(), conj_psi(psi, st3), conj_psi(psi2, st3), (12, 12), st3,
                   conjugate=True).value
        assert b == pytest.approx(a.conjugate(), abs=1e-12)


def test_z_region_warning(st3):
    with pytest.warns(UserWarning):
        v = z_eval(1, 1.2, 2, None, None, (5, 5), st3)
    assert math.isinf(v.err)
    with pytest.raises(ValueError):
        z_eval(3, 2, 2, None, None, (2, 2), st3)


def test_z_grid_csv(st3):
    rows = z_grid(1, [(2, 2), (1, 2)], (5, 5), st3)
    text = z_grid_csv(rows)
    lines = text.splitlines()
    assert lines[0] == ",".join(Z_HEADER)
    assert lines[2].split(",")[6] == "inf"


def test_mds_point_and_fe_hook(st3):
    assert MDSPoint(2, 2, (1, 0), None).check(st3)
    with pytest.raises(ValueError):
        MDSPoint(2, 2, (1,), None).check(st3)
    with pytest.raises(NotImplementedError):
        check_z1_functional_equation(None, 2, 2, None, None, (5, 5), st3)
    assert check_z1_functional_equation({(None, None): 1}, 2.5, 2.5, None, None, (5, 5), st3) == pytest.approx(0, abs=1e-12)


# --- Gamma factors -------------------------------------------------------------------------

def test_quotient_identity():
    rng = np.random.default_rng(0)
    for _ in range(20):
        s = complex(rng.uniform(0.2, 0.8), rng.uniform(-5, 5))
        w = complex(rng.uniform(0.2, 0.8), rng.uniform(-5, 5))
        assert quotient_check(s, w) <= 1e-10


@settings(max_examples=30, deadline=None)
@given(a=hst.floats(0.2, 3), b=hst.floats(-4, 4), c=hst.floats(0.2, 3), d=hst.floats(-4, 4))
def test_g1_reflection(a, b, c, d):
    s, w = complex(a, b), complex(c, d)
    try:
        g = gamma_factor(1, s, w)
    except PoleProximityError:
        assume(False)
    assert gamma_factor(1, s.conjugate(), w.conjugate()) == pytest.approx(g.conjugate(), rel=1e-12, abs=1e-300)


def test_g1_at_two_two():
    tp = 2 * math.pi
    want = math.gamma(2) * math.gamma(2) * math.gamma(9) / math.gamma(3) / (tp ** 1.5 * (3 * tp) ** 8.5)
    assert gamma_factor(1, 2, 2).real == pytest.approx(want, rel=1e-13)


def test_gamma_d_power():
    g2 = gamma_factor(2, 0.4 + 1j, 0.7, d=2)
    g4 = gamma_factor(2, 0.4 + 1j, 0.7, d=4)
    assert g4 == pytest.approx(g2 ** 2, rel=1e-12)


def test_pole_proximity():
    with pytest.raises(PoleProximityError):
        gamma_factor(1, 0, 2)
    with pytest.raises(PoleProximityError):
        gamma_factor(2, -1 + 1e-8, 2)
    assert gamma_factor(1, 0.5, 0.5) != 0


# --- measures ---------------------------------------------------------------------------

def test_measures():
    assert conductor_measure(0.5, 0.5) == pytest.approx(0.25 ** 2)
    assert conductor_measure(0.5, 0.5, d=4) == pytest.approx(0.25 ** 4)
    assert c1_measure(0, 0) == 1
    for t in (0.5, 3, -7):
        assert c1_measure(t, -t) == pytest.approx((1 + abs(t)) ** 2)
    assert r_choice(0, 49) == 7


# --- weights -----------------------------------------------------------------------------

@settings(max_examples=40)
@given(zr=hst.floats(0.05, 2), zi=hst.floats(-3, 3), wr=hst.floats(-2, 2), wi=hst.floats(-3, 3))
def test_weight_p(zr, zi, wr, wi):
    z, w = complex(zr, zi), complex(wr, wi)
    assert weight_P(z, 0) == pytest.approx(1, abs=1e-12)
    assert abs(weight_P(z, z)) <= 1e-12
    assert weight_P(z, w) == pytest.approx(weight_P(z, -w), rel=1e-10, abs=1e-12)


def test_weight_p_domain():
    with pytest.raises(ValueError):
        weight_P(1j, 0.3)


@pytest.mark.parametrize("t,u", [(0, 0), (2.0, -1.0), (5.0, 3.0)])
def test_weight_h(st3, t, u):
    spec = WeightSpec(t, u)
    assert len(set(spec.zeros)) == 4
    assert weight_H(spec, 0) == pytest.approx(1, abs=1e-12)
    for z in spec.zeros:
        assert abs(weight_H(spec, z)) <= 1e-8
    w = np.array([0.3 + 1j, 1.1 - 2j])
    assert np.allclose(weight_H(spec, w), weight_H(spec, -w), rtol=1e-10)


@pytest.mark.parametrize("sign", [1, -1])
def test_weight_v_decay(sign):
    spec = WeightSpec(1.0, 0.5)
    c = v_decay_constant(spec, sign)
    y = np.array([1.0, 10.0, 100.0])
    v = weight_V(spec, sign, y)
    assert np.all(np.abs(v) <= c * (1 + y) ** -3.0)


def test_weight_v_small_y_near_one():
    # residue 1 at w = 0; the other poles only fade once y is far below (6 pi)^-3
    spec = WeightSpec(0.0, 0.0)
    assert abs(weight_V(spec, 1, 1e-12, c=0.05, h=0.0025, T=30)[0] - 1) <= 1e-3


def test_weight_v_errors():
    spec = WeightSpec(0.0, 0.0)
    with pytest.raises(ValueError):
        weight_V(spec, 1, 0.0)
    with pytest.raises(QuadratureError):
        weight_V(spec, 1, 1.0, h=1.5)
    assert not issubclass(QuadratureError, ValueError)
    with pytest.raises(ValueError):
        v_decay_constant(spec, 1, A=5)
