import random
from math import isqrt

import pytest
from hypothesis import given, settings, strategies as hst
from sympy import isprime

from nthsieve.algebra import (CycInt, IdealK, IdealList, canonical_decompose, factor_ideal,
                              find_unit_congruent, ideals_upto, is_squarefree, mobius, norm,
                              prime_ideals_upto, residue_exp, ResidueRing)

import oracles

coord = hst.integers(-10**6, 10**6)


def test_norm_examples():
    assert norm(CycInt(0, 0, 3)) == 0
    assert norm(CycInt(1, 1, 3)) == 1
    assert norm(CycInt(3, 1, 3)) == 7
    assert norm(CycInt(3, 4, 4)) == 25


@pytest.mark.parametrize("n", [3, 4])
@settings(max_examples=300, deadline=None)
@given(a=coord, b=coord, c=coord, d=coord)
def test_norm_multiplicative(n, a, b, c, d):
    x, y = CycInt(a, b, n), CycInt(c, d, n)
    assert norm(x * y) == norm(x) * norm(y)
    assert (x * y).coeffs == oracles.mul((a, b), (c, d), n)
    assert (x + y) - y == x
    assert (norm(x) == 0) == (a == 0 and b == 0)


def test_norm_matches_embedding():
    rng = random.Random(5)
    for n in (3, 4):
        for _ in range(200):
            x = (rng.randint(-999, 999), rng.randint(-999, 999))
            assert norm(CycInt(*x, n)) == oracles.norm(x, n)


def test_factor_examples():
    assert factor_ideal(IdealK.of(1, 0, 3)) == []
    f7 = factor_ideal(IdealK.of(7, 0, 3))
    assert [(P.norm, e) for P, e in f7] == [(7, 1), (7, 1)] and f7[0][0] != f7[1][0]
    # no element of norm 5: 5 stays prime
    assert oracles.elements_of_norm(5, 3) == []
    assert [(P.norm, e) for P, e in factor_ideal(IdealK.of(5, 0, 3))] == [(25, 1)]
    with pytest.raises(ValueError):
        IdealK.of(0, 0, 3)


@pytest.mark.parametrize("n", [3, 4])
def test_factorization_recomposes(n):
    for I in ideals_upto(n, 10**4).ideals():
        f = I.factorization()
        g, N = CycInt(1, 0, n), 1
        for P, e in f:
            r = isqrt(P.norm)
            assert isprime(P.norm) or (r * r == P.norm and isprime(r))
            g = g * P.gen ** e
            N *= P.norm ** e
        assert IdealK(g) == I and N == I.norm
        assert len({P for P, _ in f}) == len(f)


def test_ideal_equality_is_associate_equality():
    for n in (3, 4):
        x = CycInt(5, 2, n)
        for a, b in oracles.units(n):
            assert IdealK(x * CycInt(a, b, n)) == IdealK(x)


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("mode", ["nth-power-free-split", "squarefree-squarefull-split"])
def test_decompose_recompose(n, mode):
    for I in ideals_upto(n, 10**4).ideals():
        d = canonical_decompose(I, mode)
        assert d.recompose() == I
        for P, e in d.squarefull_part.factorization():
            assert e < n
            if mode != "nth-power-free-split":
                assert e >= 2
        assert is_squarefree(d.squarefree_part)
        assert d.squarefree_part.coprime_to(d.squarefull_part)


def test_decompose_examples():
    one = IdealK.of(1, 0, 3)
    for mode in ("nth-power-free-split", "squarefree-squarefull-split"):
        d = canonical_decompose(one, mode)
        assert d.squarefree_part == d.squarefull_part == d.nth_power_root == one
    p1, p2 = IdealK.of(3, 1, 3), IdealK.of(4, 1, 3)
    d = canonical_decompose(p1 * p2 ** 3)
    assert d.squarefull_part == p1 and d.nth_power_root == p2
    d = canonical_decompose(p1 ** 2, "squarefree-squarefull-split")
    assert (d.squarefree_part, d.squarefull_part, d.nth_power_root) == (one, p1 ** 2, one)


def test_residue_exp_examples():
    m5 = IdealK.of(5, 0, 3)
    assert residue_exp(CycInt(2, 0, 3), 8, m5) == CycInt(1, 0, 3)
    assert 2 ** 8 % 5 == 1
    R = ResidueRing.of(m5)
    x = CycInt(17, -9, 3)
    assert residue_exp(x, 1, m5) == R.reduce(x)
    assert residue_exp(CycInt(1, 0, 3), 12345, m5) == CycInt(1, 0, 3)


@pytest.mark.parametrize("n", [3, 4])
def test_residue_exp_lagrange(n):
    rng = random.Random(11)
    primes = prime_ideals_upto(n, 1000)
    for P in rng.sample(primes, 20):
        order = P.norm - 1
        for _ in range(100):
            a = CycInt(rng.randint(-10**4, 10**4), rng.randint(-10**4, 10**4), n)
            if P.contains(a):
                continue
            assert P.contains(residue_exp(a, order, P) - 1)


def test_find_unit_congruent():
    n = 3
    c = IdealK(CycInt(1, -1, 3) ** 4)
    assert c == IdealK.of(9, 0, 3)
    assert find_unit_congruent(CycInt(1, 0, 3), c) == CycInt(1, 0, 3)
    x = (4, 3)
    brute = [u for u in oracles.units(n) if all(t % 9 == 0 for t in
                                                 (oracles.mul(u, x, n)[0] - 1, oracles.mul(u, x, n)[1]))]
    got = find_unit_congruent(CycInt(*x, n), c)
    assert (got.coeffs if got else None) == (brute[0] if brute else None)
    y = CycInt(2, 0, 3)
    brute = [u for u in oracles.units(n) if all(t % 9 == 0 for t in
                                                 (oracles.mul(u, (2, 0), n)[0] - 1, oracles.mul(u, (2, 0), n)[1]))]
    assert brute == [] and find_unit_congruent(y, c) is None


def test_ideal_list_order_and_masks():
    L = IdealList(3, 200)
    norms = list(L.norms)
    assert norms == sorted(norms)
    I = L.ideals()
    assert len(set(I)) == len(I)
    sq = L.squarefree_mask()
    assert all(bool(m) == is_squarefree(x) for m, x in zip(sq, I))
    assert all(mobius(x) == 0 for m, x in zip(sq, I) if not m)
