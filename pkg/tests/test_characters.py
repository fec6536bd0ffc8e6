import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as hst
from sympy import isprime

from nthsieve.algebra import CycInt, IdealK, canonical_decompose, ideals_upto, is_squarefree, prime_ideals_upto
from nthsieve.characters import (HeckeChar, UnityRoot, chi, chi_eval, chi_eval_definition, decompose_char,
                                 power_residue_symbol, primitive_characters, reciprocity_factor)
from nthsieve.lfunctions import family

import oracles


def _family(st, N, squarefree=False):
    return [a for a in family(N, st, squarefree) if not a.is_one()]


# --- UnityRoot -------------------------------------------------------------------------

@settings(max_examples=200)
@given(n=hst.sampled_from([3, 4]), j=hst.integers(0, 20), k=hst.integers(0, 20), e=hst.integers(0, 30))
def test_unity_root_arithmetic(n, j, k, e):
    x, y = UnityRoot(j, n), UnityRoot(k, n)
    assert (x * y).k == (j + k) % n
    assert (x ** n).k == 0
    assert (x * UnityRoot.zero(n)).is_zero
    assert (x ** e).k == (j * e) % n
    assert complex(x) == pytest.approx(complex(np.exp(2j * np.pi * j / n)))


# --- residue symbol ------------------------------------------------------------------------

@pytest.mark.parametrize("n", [3, 4])
def test_symbol_matches_euler_criterion(n):
    rng = random.Random(n)
    split = [P for P in prime_ideals_upto(n, 400) if P.norm % n == 1 and isprime(P.norm)]
    for P in split:
        for _ in range(25):
            x = (rng.randint(-500, 500), rng.randint(-500, 500))
            got = power_residue_symbol(CycInt(*x, n), P)
            want = oracles.residue_symbol_exponent(x, P.gen.coeffs, n)
            assert got.k == want


def test_symbol_examples():
    n = 3
    P7 = [P for P in prime_ideals_upto(3, 7) if P.norm == 7][0]
    assert power_residue_symbol(CycInt(1, 0, n), P7).k == 0
    assert power_residue_symbol(CycInt(2, 0, n), IdealK.of(5, 0, 3)).k == 0
    assert pow(2, 8, 5) == 1
    z = power_residue_symbol(CycInt(0, 1, n), P7)
    assert z.k == oracles.residue_symbol_exponent((0, 1), P7.gen.coeffs, 3)
    assert (z ** 3).k == 0
    with pytest.raises(ValueError):
        power_residue_symbol(CycInt(2, 0, n), IdealK.of(3, 0, 3))


@pytest.mark.parametrize("n", [3, 4])
def test_symbol_multiplicative_in_modulus(n):
    rng = random.Random(7)
    primes = [P for P in prime_ideals_upto(n, 200) if P.norm % n == 1 and isprime(P.norm)]
    for _ in range(100):
        P, Q = rng.sample(primes, 2)
        x = CycInt(rng.randint(-300, 300), rng.randint(-300, 300), n)
        assert power_residue_symbol(x, P * Q) == power_residue_symbol(x, P) * power_residue_symbol(x, Q)


# --- the ray class setup ------------------------------------------------------------------

def test_setup_n3(st3):
    assert st3.c == IdealK.of(9, 0, 3)
    assert st3.group.order % 6 == 0
    assert all(3 % d == 0 for d in st3.invariants)
    assert tuple(st3.class_of(IdealK.unit(3))) == (0,) * len(st3.invariants)
    assert IdealK.unit(3) in [E for _, E, _ in st3.representatives()]


def test_setup_n4(st4):
    assert st4.c == IdealK.of(8, 8, 4)
    assert all(4 % d == 0 for d in st4.invariants)


def test_class_of_is_homomorphism(st):
    rng = random.Random(3)
    fam = _family(st, 400)
    for _ in range(100):
        a, b = rng.sample(fam, 2)
        assert tuple(st.class_of(a * b)) == st.class_add(st.class_of(a), st.class_of(b))


# --- chi_a --------------------------------------------------------------------------------

def test_chi_of_one_is_trivial(st):
    one = IdealK.unit(st.n)
    assert chi(one, st).is_trivial()
    for b in _family(st, 100):
        assert chi_eval(one, b, st).k == 0


def test_chi_of_nth_power_is_trivial(st):
    for a in _family(st, 30):
        ch = chi(a ** st.n, st)
        assert ch.is_trivial() and ch.conductor.is_one()
        for b in _family(st, 60):
            assert chi_eval(a ** st.n, b, st).k == 0


def test_chi_matches_definition(st):
    fam = _family(st, 120, squarefree=True)
    B = _family(st, 80)
    bad = 0
    for a in fam[:30]:
        for b in B:
            if a.coprime_to(b):
                bad += chi_eval(a, b, st) != chi_eval_definition(a, b, st)
    assert bad == 0


def test_chi_multiplicative(st):
    rng = random.Random(1)
    fam = _family(st, 200)
    for _ in range(200):
        a, b1, b2 = rng.sample(fam, 3)
        ch = chi(a, st)
        assert ch(b1) * ch(b2) == ch(b1 * b2)


def test_chi_values_are_nth_roots(st):
    for a in _family(st, 80):
        ch = chi(a, st)
        assert ch.check_consistent()
        for b in _family(st, 80):
            v = ch(b)
            assert v.is_zero == (not b.coprime_to(ch.conductor))
            assert (v ** st.n).is_zero or (v ** st.n).k == 0


def test_chi_product_rule(st):
    """chi_{ab} = chi_a chi_b when ab is n-th power free."""
    rng = random.Random(2)
    fam = _family(st, 150, squarefree=True)
    test = _family(st, 100)
    done = 0
    while done < 200:
        a, b = rng.sample(fam, 2)
        if not a.coprime_to(b):
            continue
        done += 1
        ca, cb, cab = chi(a, st), chi(b, st), chi(a * b, st)
        for x in test:
            if x.coprime_to(st.c * a * b):
                assert cab(x) == ca(x) * cb(x)


def test_chi_insensitive_to_nth_powers(st):
    rng = random.Random(4)
    fam = _family(st, 60)
    test = _family(st, 200)
    for _ in range(100):
        a, b = rng.sample(fam, 2)
        ca, cab = chi(a, st), chi(a * b ** st.n, st)
        for x in rng.sample(test, 50):
            if x.coprime_to(b):
                assert ca(x) == cab(x)


# --- conductors -------------------------------------------------------------------------

def test_conductor_examples(st3):
    assert chi(IdealK.unit(3), st3).conductor.is_one()
    P7 = [P for P in prime_ideals_upto(3, 7) if P.norm == 7][0]
    f = chi(P7, st3).conductor
    assert P7.divides(f) and f.divides(st3.c * P7)
    assert chi(P7 ** 3, st3).conductor.is_one()


def test_conductor_bracketing(st):
    fam = _family(st, 300, squarefree=True)
    for a in fam[:100]:
        f = chi(a, st).conductor
        a0 = canonical_decompose(a).squarefull_part.radical()
        assert a0.divides(f) and f.divides(st.c * a0)


def test_conductor_is_minimal(st3):
    """A proper divisor of the conductor never carries the same character."""
    for a in _family(st3, 60, squarefree=True)[:10]:
        ch = chi(a, st3)
        f = ch.conductor
        for P, _ in f.factorization():
            smaller = f.quotient(P)
            # a coprime pair congruent mod the smaller modulus with different values
            found = False
            for x in _family(st3, 400):
                if not x.coprime_to(f):
                    continue
                y = IdealK(x.gen + smaller.gen * CycInt(1, 0, 3))
                if y.coprime_to(f) and ch(x) != ch(y):
                    found = True
                    break
            assert found or ch.ell != 0


# --- decomposition and reciprocity -----------------------------------------------------

def test_decompose_trivial(st):
    cb, pb = decompose_char(IdealK.unit(st.n), st)
    assert cb.is_trivial() and pb.is_trivial()


def test_decompose_product(st):
    fam = _family(st, 200, squarefree=True)
    test = _family(st, 400)
    for b in fam[:40]:
        cb, pb = decompose_char(b, st)
        assert cb.conductor == b
        assert pb.conductor.divides(st.c)
        chib = chi(b, st)
        n_checked = 0
        for x in test:
            if x.coprime_to(st.c * b):
                assert complex(chib(x)) == pytest.approx(complex(cb(x)) * complex(pb(x)), abs=1e-12)
                n_checked += 1
        assert n_checked >= 100
        assert decompose_char(b, st) is decompose_char(b, st)


def test_decompose_conductor_norm500(st3):
    fam = _family(st3, 500, squarefree=True)
    for b in random.Random(9).sample(fam, 20):
        assert decompose_char(b, st3)[0].conductor == b


def test_decompose_rejects(st3):
    P = IdealK.of(3, 1, 3)
    with pytest.raises(ValueError):
        decompose_char(P * P, st3)
    with pytest.raises(ValueError):
        decompose_char(IdealK.of(2, 1, 3), st3)


def test_reciprocity_trivial_and_errors(st3):
    for b in _family(st3, 50):
        assert reciprocity_factor(IdealK.unit(3), b, st3).k == 0
    P = IdealK.of(3, 1, 3)
    with pytest.raises(ValueError):
        reciprocity_factor(P, P * IdealK.of(4, 1, 3), st3)


def test_reciprocity_class_invariant(st):
    fam = _family(st, 150, squarefree=True)
    cells, pairs = {}, 0
    for a, b in itertools.combinations(fam, 2):
        if not a.coprime_to(b):
            continue
        key = (tuple(st.class_of(a)), tuple(st.class_of(b)))
        cells.setdefault(key, set()).add(reciprocity_factor(a, b, st).k)
        pairs += 1
        if pairs >= 500:
            break
    assert pairs == 500
    assert all(len(v) == 1 for v in cells.values())


def test_cubic_reciprocity_for_primary_primes(st3):
    """For prime elements = 1 mod 9 both symbols agree (classical cubic reciprocity)."""
    prim = []
    for P in prime_ideals_upto(3, 800):
        if P.norm % 3 != 1 or not isprime(P.norm):
            continue
        for u in oracles.units(3):
            x = oracles.mul(u, P.gen.coeffs, 3)
            if (x[0] - 1) % 9 == 0 and x[1] % 9 == 0:
                prim.append(x)
    assert len(prim) >= 10
    for x, y in itertools.combinations(prim[:12], 2):
        sx = oracles.residue_symbol_exponent(x, y, 3)
        sy = oracles.residue_symbol_exponent(y, x, 3)
        assert sx == sy
        r = reciprocity_factor(IdealK(CycInt(*x, 3)), IdealK(CycInt(*y, 3)), st3)
        assert r.k == 0


# --- pair characters ------------------------------------------------------------------

def test_pair_conductor(st):
    fam = _family(st, 150, squarefree=True)
    done = 0
    for b1, b2 in itertools.combinations(fam, 2):
        if not b1.coprime_to(b2) or st.class_of(b1) != st.class_of(b2):
            continue
        for j in range(1, st.n):
            ch = ((chi(b1, st) ** j) * (chi(b2, st).conj() ** j)).primitivize()
            c1, _ = decompose_char(b1, st)
            c2, _ = decompose_char(b2, st)
            assert ch.conductor == b1 * b2
            assert ch == (c1 ** j) * (c2.conj() ** j)
        done += 1
        if done == 50:
            break
    assert done == 50


# --- the character corpus -------------------------------------------------------------------

def test_primitive_characters(st3):
    cs = primitive_characters(81, st3, pieces=False)
    assert all(c.conductor.norm <= 81 for c in cs)
    assert len({c.key() for c in cs}) == len(cs)
    assert all(c.check_consistent() and c.ell == 0 for c in cs)
    # the ray class characters of order n: every psi of R_c appears
    trivial_b = [c for c in cs if c.conductor.divides(st3.c)]
    assert len(trivial_b) == st3.r_order
    for c in cs:
        assert (c ** 3).is_trivial()
