"""Power residue symbols and the primitive n-th order Hecke characters chi_a.

A character is held as
  * a table of exponents on (O/c')^x for a modulus c' supported on S,
  * local factors (./p)^m at primes p outside S,
  * an infinity type l, contributing (beta/|beta|)^l at a generator beta.
Values of exponent k mean zeta_n^k; -1 marks the value zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dfield
from functools import lru_cache

import numpy as np

from .algebra import (CycInt, IdealK, IdealList, ResidueRing, canonical_decompose, is_squarefree, congruent, crt,
                      embed, field, from_factorization, ideal_product, mul, primes_over,
                      residue_exp, units)

ZERO = -1


class UnityRoot:
    """0 or zeta_n^k, stored exactly."""

    __slots__ = ("k", "n")

    def __init__(self, k, n):
        self.k = None if k is None else int(k) % n
        self.n = n

    @classmethod
    def from_code(cls, code, n):
        """Array code: -1 means zero."""
        return cls(None if code < 0 else code, n)

    @classmethod
    def zero(cls, n):
        return cls(None, n)

    @property
    def is_zero(self):
        return self.k is None

    def __mul__(self, other):
        if self.is_zero or other.is_zero:
            return UnityRoot.zero(self.n)
        return UnityRoot(self.k + other.k, self.n)

    def __pow__(self, e):
        if self.is_zero:
            return UnityRoot.zero(self.n) if e else UnityRoot(0, self.n)
        return UnityRoot(self.k * e, self.n)

    def inverse(self):
        if self.is_zero:
            raise ZeroDivisionError("zero has no inverse")
        return UnityRoot(-self.k, self.n)

    def conj(self):
        return self if self.is_zero else UnityRoot(-self.k, self.n)

    def __eq__(self, other):
        if isinstance(other, int):
            return (not self.is_zero) and self.k == other % self.n
        return isinstance(other, UnityRoot) and (self.k, self.n) == (other.k, other.n)

    def __hash__(self):
        return hash((self.k, self.n))

    def __complex__(self):
        if self.is_zero:
            return 0j
        return complex(np.exp(2j * np.pi * self.k / self.n))

    def code(self):
        return ZERO if self.is_zero else self.k

    def __repr__(self):
        return "Zero" if self.is_zero else f"zeta{self.n}^{self.k}"


# --- symbols at primes -----------------------------------------------------------

def _pow_pairs(x0, x1, e, p, n):
    """(x0 + x1 zeta)^e in (Z/p)[zeta], vectorized over int64 arrays."""
    r0 = np.ones_like(x0)
    r1 = np.zeros_like(x1)
    b0, b1 = x0 % p, x1 % p
    while e:
        if e & 1:
            r0, r1 = mul(r0, r1, b0, b1, n)
            r0, r1 = r0 % p, r1 % p
        b0, b1 = mul(b0, b1, b0, b1, n)
        b0, b1 = b0 % p, b1 % p
        e >>= 1
    return r0, r1


def _pow_scalar(x, e, p):
    r = np.ones_like(x)
    b = x % p
    while e:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


TABLE_LIMIT = 400_000


@lru_cache(maxsize=2048)
def _symbol_table(n, pa, pb):
    P = IdealK(CycInt(pa, pb, n))
    return _symbol_direct(P, *ResidueRing.of(P).rep(np.arange(P.norm, dtype=np.int64)))


def _symbol_direct(P: IdealK, a, b):
    n = P.n
    R = ResidueRing.of(P)
    q = P.norm
    e = (q - 1) // n
    idx = R.index(a, b)
    out = np.full(idx.shape, ZERO, dtype=np.int8)
    if R.C == 1:  # residue field Z/p, zeta -> -B
        p = R.A
        t = _pow_scalar(idx, e, p)
        z = (-R.B) % p
        for k in range(n):
            out[t == pow(z, k, p)] = k
    else:  # inert: (Z/p)[zeta]
        p = R.A
        t0, t1 = _pow_pairs(a, b, e, p, n)
        zk = (1, 0)
        for k in range(n):
            out[(t0 == zk[0] % p) & (t1 == zk[1] % p)] = k
            zk = mul(zk[0], zk[1], 0, 1, n)
    out[idx == 0] = ZERO
    return out


def symbol_array(a, b, P: IdealK):
    """Exponents k of (x/P) for x = a + b zeta (arrays); -1 where P divides x."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if P.norm <= TABLE_LIMIT:
        return _symbol_table(P.n, P.gen.a, P.gen.b)[ResidueRing.of(P).index(a, b)]
    return _symbol_direct(P, a, b)


def _ram_primes(n):
    return [IdealK(CycInt(*g, n)) for g in primes_over(field(n).ram_prime, n)]


def symbol_at_prime(a: CycInt, P: IdealK) -> UnityRoot:
    """Euler criterion: the k with a^((NP-1)/n) = zeta^k mod P."""
    n = a.n
    if P.contains(a):
        return UnityRoot.zero(n)
    r = residue_exp(a, (P.norm - 1) // n, P)
    z = CycInt(0, 1, n)
    for k in range(n):
        if congruent(r, z ** k, P):
            return UnityRoot(k, n)
    raise AssertionError("Euler criterion did not land on a root of unity")


def power_residue_symbol(a: CycInt, b: IdealK) -> UnityRoot:
    """(a / b), extended multiplicatively over the prime factorization of b."""
    n = a.n
    for q in _ram_primes(n):
        if q.divides(b):
            raise ValueError(f"modulus {b} is not coprime to {n}")
    out = UnityRoot(0, n)
    for P, e in b.factorization():
        out = out * symbol_at_prime(a, P) ** e
    return out


# --- finite unit groups ----------------------------------------------------------

class UnitGroup:
    """(O/m)^x with generators chosen greedily and unique exponent vectors."""

    def __init__(self, m: IdealK):
        self.m = m
        self.ring = R = ResidueRing.of(m)
        self.n = m.n
        self.elements = R.units()
        self.order = len(self.elements)
        one = int(R.index(1, 0))
        self.one = one
        exps = {one: ()}
        gens, rel = [], []
        for x in self.elements:
            x = int(x)
            if x in exps:
                continue
            # adjoin x: H_new = {h * x^k}
            cur = dict(exps)
            new = {}
            k, xp = 1, x
            while xp not in cur:
                for h, v in cur.items():
                    new[int(R.mul_idx(h, xp))] = v + (k,)
                k += 1
                xp = int(R.mul_idx(xp, x))
                if xp in new:
                    break
            exps = {h: v + (0,) for h, v in cur.items()}
            exps.update(new)
            gens.append(x)
            rel.append(k)
            # pad older vectors
            width = len(gens)
            exps = {h: v + (0,) * (width - len(v)) for h, v in exps.items()}
            if len(exps) == self.order:
                break
        assert len(exps) == self.order
        self.gens = gens
        self.rel_orders = rel
        self.exps = exps

    def gen_elements(self):
        return [CycInt(*map(int, self.ring.rep(g)), self.n) for g in self.gens]

    def extend(self, gen_values, n):
        """Exponent table over O/m from values (mod n) on the generators."""
        table = np.full(self.ring.size, ZERO, dtype=np.int8)
        gv = np.array(gen_values, dtype=np.int64)
        for h, v in self.exps.items():
            table[h] = int(np.dot(gv, v)) % n if v else 0
        return table

    def element_order(self, x):
        R = self.ring
        k, y = 1, x
        while y != self.one:
            y = int(R.mul_idx(y, x))
            k += 1
        return k


def _nth_powers(ring, elements, n):
    r0, r1 = ring.rep(elements)
    p0, p1 = r0, r1
    for _ in range(n - 1):
        p0, p1 = mul(p0, p1, r0, r1, ring.n)
    return set(int(i) for i in ring.index(p0, p1))


def local_exponent(P: IdealK, n, slack=3):
    """Smallest e such that x = 1 mod P^e implies x is an n-th power mod P^(e+v)."""
    vn = IdealK(CycInt(n, 0, P.n)).valuation(P)
    if vn == 0:
        return 1
    e = 1
    while True:
        k = max(e + slack, 2 * vn + 1)
        Rk = ResidueRing.of(P ** k)
        G = Rk.units()
        pw = _nth_powers(Rk, G, n)
        Re = ResidueRing.of(P ** e)
        r0, r1 = Rk.rep(G)
        one_e = Re.index(r0, r1) == Re.index(1, 0)
        if all(int(x) in pw for x in G[one_e]):
            return e
        e += 1


# --- ray class setup -------------------------------------------------------------

@dataclass
class RayClassSetup:
    n: int
    field: str
    S: list
    c: IdealK
    exponents: dict
    group: UnitGroup  # (O/c)^x
    unit_idx: list  # images of global units
    nth_power_idx: set  # G^n
    coset_of: dict  # element -> canonical representative of its class in R_c
    invariants: tuple  # cyclic orders of R_c
    E0: list  # generating ideals
    class_table: dict  # coset representative -> exponent tuple
    slack: int = 3
    h_order: int = 0
    cache: dict = dfield(default_factory=dict, repr=False)

    @property
    def s_ideal(self):
        return ideal_product(self.S, self.n)

    @property
    def r_order(self):
        return int(np.prod(self.invariants)) if self.invariants else 1

    def m_E0(self):
        return [E.gen for E in self.E0]

    def representatives(self):
        """All E in the set of representatives, as (exponent tuple, E, m_E)."""
        out = []
        for e in itertools.product(*[range(d) for d in self.invariants]):
            m = CycInt(1, 0, self.n)
            for g, k in zip(self.E0, e):
                m = m * g.gen ** k
            out.append((e, IdealK(m), m))
        return out

    def in_IS(self, a: IdealK):
        return all(not P.divides(a) for P in self.S)

    def class_of(self, a: IdealK):
        if not self.in_IS(a):
            raise ValueError(f"{a} is not coprime to S")
        return self.class_of_element(a.gen)

    def class_of_element(self, x: CycInt):
        R = self.group.ring
        return self.class_table[self.coset_of[int(R.index(x.a, x.b))]]

    def class_add(self, e1, e2):
        return tuple((x + y) % d for x, y, d in zip(e1, e2, self.invariants))

    def describe(self):
        lines = [
            f"field {self.field}, n={self.n}",
            f"S = {[str(P.gen) for P in self.S]}",
            f"c = ({self.c.gen}) = " + " * ".join(f"({P.gen})^{e}" for P, e in self.exponents.items()),
            f"|(O/c)^x| = {self.group.order}, unit image {len(self.unit_idx)}",
            f"|H_c| = {self.h_order}, R_c = " + " x ".join(f"Z/{d}" for d in self.invariants),
            "E0 = " + ", ".join(f"({E.gen}) norm {E.norm}" for E in self.E0),
        ]
        return "\n".join(lines)


def _span(elems_orders, mul_fn, one):
    out = {one}
    for x, d in elems_orders:
        new = set()
        for h in out:
            y = h
            for _ in range(d):
                new.add(y)
                y = mul_fn(y, x)
        out = new
    return out


def build_ray_class_setup(n, field_tag=None, S=None, slack=3) -> RayClassSetup:
    fd = field(n)
    if field_tag not in (None, fd.name, {3: "Q(zeta3)", 4: "Q(i)"}[n], "auto"):
        raise ValueError(f"unsupported field {field_tag!r} for n={n}")
    ram = _ram_primes(n)
    S = list(ram) if S is None else sorted(set(S))
    for q in ram:
        if q not in S:
            raise ValueError(f"S must contain the prime {q} above {n}")
    exps = {P: local_exponent(P, n, slack) for P in S}
    c = ideal_product([P ** e for P, e in exps.items()], n)
    G = UnitGroup(c)
    R = G.ring
    unit_idx = sorted({int(R.index(u.a, u.b)) for u in units(n)})
    pw = _nth_powers(R, G.elements, n)
    K = {int(R.mul_idx(u, p)) for u in unit_idx for p in pw}
    coset_of = {}
    for x in G.elements:
        x = int(x)
        if x in coset_of:
            continue
        cos = {int(R.mul_idx(x, k)) for k in K}
        rep = min(cos)
        for y in cos:
            coset_of[y] = rep
    reps = sorted(set(coset_of.values()))
    qorder = len(reps)

    def qmul(x, y):
        return coset_of[int(R.mul_idx(x, y))]

    one = coset_of[G.one]

    def qord(x):
        k, y = 1, x
        while y != one:
            y = qmul(y, x)
            k += 1
        return k

    # invariant factors from element-order counts (R_c has exponent dividing n)
    if n == 3:
        r = 0
        while 3 ** r < qorder:
            r += 1
        inv = (3,) * r
    else:
        r2 = sum(1 for x in reps if qmul(x, x) == one)
        r = r2.bit_length() - 1
        s = (qorder.bit_length() - 1) - r
        inv = (4,) * s + (2,) * (r - s)
    assert int(np.prod(inv)) == qorder if inv else qorder == 1

    # E0: smallest-norm ideals in I(S) whose classes form a basis
    cands, seen = [], set()
    X = 50
    while len(cands) < 24 and X < 10 ** 5:
        cands, seen = [], set()
        L = IdealList(n, X)
        for i in range(len(L)):
            I = L.ideal(i)
            if any(P.divides(I) for P in S):
                continue
            q = coset_of[int(R.index(I.gen.a, I.gen.b))]
            if q == one or q in seen:
                continue
            seen.add(q)
            cands.append((I, q))
        if len(seen) == qorder - 1:
            break
        X *= 2
    E0 = []
    if inv:
        found = None
        for combo in itertools.permutations(range(len(cands)), len(inv)):
            if any(qord(cands[i][1]) != d for i, d in zip(combo, inv)):
                continue
            sp = _span([(cands[i][1], d) for i, d in zip(combo, inv)], qmul, one)
            if len(sp) == qorder:
                found = combo
                break
        if found is None:
            raise AssertionError("no basis of R_c among small ideals")
        E0 = [cands[i][0] for i in found]
    class_table = {}
    for e in itertools.product(*[range(d) for d in inv]):
        x = one
        for (I, q), k in zip([(E, coset_of[int(R.index(E.gen.a, E.gen.b))]) for E in E0], e):
            for _ in range(k):
                x = qmul(x, q)
        class_table[x] = e
    assert len(class_table) == qorder
    h_order = G.order // len(unit_idx)
    return RayClassSetup(n, fd.name, S, c, exps, G, unit_idx, pw, coset_of, inv, E0,
                         class_table, slack, h_order)


@lru_cache(maxsize=8)
def default_setup(n):
    return build_ray_class_setup(n)


# --- Hecke characters ---------------------------------------------------------------

class HeckeChar:
    """Hecke character of Z[zeta_n], primitive after `primitivize`.

    cmod   : modulus supported on S for the table part
    table  : exponent table over O/cmod (int8, -1 on non-units)
    locals : tuple of (prime, m) meaning (beta/P)^m
    ell    : infinity type; value picks up (beta/|beta|)^ell
    """

    def __init__(self, n, cmod: IdealK, table, locals_=(), ell=0, source=None, c_full=None):
        self.n = n
        self.cmod = cmod
        self.table = np.asarray(table, dtype=np.int8)
        self.locals = tuple((P, m % n) for P, m in locals_ if m % n)
        self.locals = tuple(sorted(self.locals, key=lambda t: (t[0].norm, t[0].key)))
        self.ell = int(ell)
        self.source = source
        self.c_full = c_full or cmod
        self._cond = None

    @classmethod
    def trivial(cls, n, c_full=None, source=None):
        one = IdealK.unit(n)
        return cls(n, one, [0], (), 0, source, c_full)

    # structure
    @property
    def conductor(self) -> IdealK:
        if self._cond is None:
            self._cond = ideal_product([self.cmod] + [P for P, _ in self.locals], self.n)
        return self._cond

    def is_trivial(self):
        return self.conductor.is_one() and self.ell == 0

    @property
    def order_type(self):
        return "ray" if self.ell == 0 else "groessen"

    def key(self):
        return (self.cmod.key, self.table.tobytes(), tuple((P.key, m) for P, m in self.locals), self.ell)

    def __eq__(self, other):
        return isinstance(other, HeckeChar) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        loc = ", ".join(f"({P.gen})^{m}" for P, m in self.locals)
        return (f"HeckeChar(n={self.n}, cond=({self.conductor.gen}), N={self.conductor.norm}, "
                f"S-part=({self.cmod.gen}), local=[{loc}], ell={self.ell})")

    # evaluation
    def exponents(self, a, b):
        """Exponent array (-1 = zero) of the finite part at generators a + b zeta."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        R = ResidueRing.of(self.cmod)
        e = self.table[R.index(a, b)].astype(np.int64)
        zero = e < 0
        for P, m in self.locals:
            s = symbol_array(a, b, P).astype(np.int64)
            zero |= s < 0
            e = e + m * s
        e = e % self.n
        e[zero] = ZERO
        return e

    def values(self, a, b):
        """Complex values at generators a + b zeta."""
        e = self.exponents(a, b)
        v = np.exp(2j * np.pi * e / self.n)
        if self.ell:
            z = embed(np.asarray(a, dtype=float), np.asarray(b, dtype=float), self.n)
            v = v * (z / np.abs(z)) ** self.ell
        v[e < 0] = 0
        return v

    def __call__(self, I):
        if isinstance(I, IdealK):
            x = I.gen
        else:
            x = I
        if self.ell:
            return complex(self.values([x.a], [x.b])[0])
        return UnityRoot.from_code(int(self.exponents([x.a], [x.b])[0]), self.n)

    # algebra
    def _lift_table(self, target: IdealK):
        """Table over O/target (cmod | target)."""
        if target == self.cmod:
            return self.table
        Rt = ResidueRing.of(target)
        R = ResidueRing.of(self.cmod)
        idx = np.arange(Rt.size, dtype=np.int64)
        r0, r1 = Rt.rep(idx)
        t = self.table[R.index(r0, r1)]
        t = np.where(Rt.unit_mask(), t, ZERO).astype(np.int8)
        return t

    def __pow__(self, j):
        t = np.where(self.table >= 0, (self.table.astype(np.int64) * j) % self.n, ZERO)
        return HeckeChar(self.n, self.cmod, t, [(P, m * j) for P, m in self.locals],
                         self.ell * j, self.source, self.c_full).primitivize()

    def conj(self):
        return self ** (self.n - 1) if self.ell == 0 else self._conj_full()

    def _conj_full(self):
        t = np.where(self.table >= 0, (-self.table.astype(np.int64)) % self.n, ZERO)
        return HeckeChar(self.n, self.cmod, t, [(P, -m) for P, m in self.locals], -self.ell,
                         self.source, self.c_full)

    def __mul__(self, other):
        if other.n != self.n:
            raise ValueError("mixed fields")
        big = self.c_full if self.c_full.norm >= other.c_full.norm else other.c_full
        t1, t2 = self._lift_table(big), other._lift_table(big)
        t = np.where((t1 >= 0) & (t2 >= 0), (t1.astype(np.int64) + t2) % self.n, ZERO)
        loc = {}
        for P, m in self.locals + other.locals:
            loc[P] = loc.get(P, 0) + m
        return HeckeChar(self.n, big, t, list(loc.items()), self.ell + other.ell, None,
                         big).primitivize()

    def primitivize(self):
        """Shrink the S-part of the modulus to the conductor."""
        n = self.n
        cm = self.cmod
        table = self.table
        for P, e in cm.factorization():
            R = ResidueRing.of(cm)
            U = R.units()
            r0, r1 = R.rep(U)
            best = e
            for e2 in range(e - 1, -1, -1):
                sub = cm.quotient(P ** (e - e2))
                Rs = ResidueRing.of(sub)
                ker = Rs.index(r0, r1) == Rs.index(1, 0)
                if np.all(table[U[ker]] == 0):
                    best = e2
                else:
                    break
            if best < e:
                sub = cm.quotient(P ** (e - best))
                Rs = ResidueRing.of(sub)
                newt = np.full(Rs.size, ZERO, dtype=np.int8)
                newt[Rs.index(r0, r1)] = table[U]
                # consistency: every fibre carries one value
                assert np.all(newt[Rs.index(r0, r1)] == table[U])
                cm, table = sub, newt
        out = HeckeChar(n, cm, table, self.locals, self.ell, self.source, self.c_full)
        return out

    def unit_values(self):
        """Finite-part exponents at the units (must match the infinity type)."""
        us = field(self.n).units
        return self.exponents([u[0] for u in us], [u[1] for u in us])

    def check_consistent(self):
        """Values must not depend on the choice of generator."""
        k = self.unit_values()
        u = np.array([complex(embed(a, b, self.n)) for a, b in field(self.n).units])
        lhs = np.exp(2j * np.pi * k / self.n)
        return bool(np.allclose(lhs * u ** self.ell, 1.0))


# --- the construction of chi_a ------------------------------------------------------

def star_element(a1: IdealK, setup: RayClassSetup):
    """alpha* = u * alpha_1 with u the first unit making u alpha_1 / m_E an n-th power mod c."""
    n = setup.n
    R = setup.group.ring
    cls = setup.class_of(a1)
    mE = CycInt(1, 0, n)
    for g, k in zip(setup.E0, cls):
        mE = mE * g.gen ** k
    inv = R.inverse(mE)
    for u in units(n):
        y = u * a1.gen * inv
        if int(R.index(y.a, y.b)) in setup.nth_power_idx:
            return u * a1.gen, u, mE, cls
    raise AssertionError("no unit brings alpha into the class of m_E")


def _symbol_exp(alpha: CycInt, beta: CycInt) -> int:
    v = power_residue_symbol(alpha, IdealK(beta))
    assert not v.is_zero
    return v.k


def _primitive_root_like(P: IdealK, n):
    """Small element g whose n-th power residue symbol at P generates mu_n."""
    R = ResidueRing.of(P)
    for idx in range(1, R.size):
        x0, x1 = R.rep(idx)
        g = CycInt(int(x0), int(x1), P.n)
        k = symbol_at_prime(g, P)
        if not k.is_zero and np.gcd(k.k, n) == 1:
            return g, k.k
    raise AssertionError("no generator of the residue character found")


def raw_character(alpha: CycInt, setup: RayClassSetup, source=None):
    """The character beta -> (alpha / beta) on ideals coprime to c*rad(alpha), before primitivizing.

    Returns (HeckeChar over the full c, dict of local exponents).
    """
    n = setup.n
    c = setup.c
    G = setup.group
    a_id = IdealK(alpha)
    primes = [P for P, _ in a_id.factorization()]
    a0 = ideal_product(primes, n)
    gen_vals = []
    for g in G.gen_elements():
        beta = g if a0.is_one() else crt([g, CycInt(1, 0, n)], [c, a0])
        gen_vals.append(_symbol_exp(alpha, beta))
    table = G.extend(gen_vals, n)
    locs = []
    for P in primes:
        gP, kg = _primitive_root_like(P, n)
        rest = a0.quotient(P)
        mods, res = [c, P], [CycInt(1, 0, n), gP]
        if not rest.is_one():
            mods.append(rest)
            res.append(CycInt(1, 0, n))
        beta = crt(res, mods)
        v = _symbol_exp(alpha, beta)
        m = (v * pow(kg, -1, n)) % n
        locs.append((P, m))
    ch = HeckeChar(n, c, table, locs, 0, source, c)
    if not ch.check_consistent():
        raise AssertionError(f"finite part of ({alpha}/.) is not trivial on units")
    return ch


def chi(a: IdealK, setup: RayClassSetup) -> HeckeChar:
    """The primitive character chi_a (cached on the setup)."""
    key = ("chi", a.key)
    hit = setup.cache.get(key)
    if hit is not None:
        return hit
    if not setup.in_IS(a):
        raise ValueError(f"{a} is not coprime to S")
    a1 = canonical_decompose(a).squarefull_part
    if a1.is_one():
        out = HeckeChar.trivial(setup.n, setup.c, source=a)
    else:
        k1 = ("chi", a1.key)
        out = setup.cache.get(k1)
        if out is None:
            alpha, *_ = star_element(a1, setup)
            out = raw_character(alpha, setup, source=a1).primitivize()
            setup.cache[k1] = out
    setup.cache[key] = out
    return out


def chi_eval(a: IdealK, b: IdealK, setup: RayClassSetup) -> UnityRoot:
    return chi(a, setup)(b)


def chi_eval_definition(a: IdealK, b: IdealK, setup: RayClassSetup) -> UnityRoot:
    """chi_a(b) straight from the definition (x m_E / b), for b coprime to a and S."""
    if not setup.in_IS(a):
        raise ValueError(f"{a} is not coprime to S")
    a1 = canonical_decompose(a).squarefull_part
    if a1.is_one():
        return UnityRoot(0, setup.n)
    if not a1.coprime_to(b) or not setup.in_IS(b):
        raise ValueError("definition route needs b coprime to a and S")
    alpha, *_ = star_element(a1, setup)
    return power_residue_symbol(alpha, b)


def conductor(ch: HeckeChar) -> IdealK:
    return ch.conductor


def _unit_gen_exponent(n):
    # u0 = 1+w = exp(i pi/3) for n=3; u0 = i for n=4; u0^l = zeta^k  <=>  l = c*k mod |U|
    return 2 if n == 3 else 1


def _min_rep(x, m):
    x %= m
    return x - m if x > m // 2 else x


def decompose_char(b: IdealK, setup: RayClassSetup):
    """chi_b = chi^(b) * psi_(b) with chi^(b) of conductor b and psi_(b) of conductor dividing c.

    When the b-component of chi_b is non-trivial on units, both factors carry an
    infinity type of opposite sign (the smallest one in absolute value).
    """
    n = setup.n
    if not setup.in_IS(b):
        raise ValueError(f"{b} is not coprime to S")
    if any(e > 1 for _, e in b.factorization()):
        raise ValueError(f"{b} is not squarefree")
    key = ("decomp", b.key)
    if key in setup.cache:
        return setup.cache[key]
    if b.is_one():
        t = HeckeChar.trivial(n, setup.c)
        out = (t, t)
    else:
        alpha, *_ = star_element(b, setup)
        raw = raw_character(alpha, setup, source=b)
        one = IdealK.unit(n)
        loc = HeckeChar(n, one, [0], raw.locals, 0, b, setup.c)
        u0 = field(n).units[1]
        k = int(loc.exponents([u0[0]], [u0[1]])[0])
        nU = field(n).n_units
        ell = _min_rep(_unit_gen_exponent(n) * k, nU)
        chi_b = HeckeChar(n, one, [0], raw.locals, -ell, b, setup.c)
        psi_b = HeckeChar(n, raw.cmod, raw.table, (), ell, b, setup.c).primitivize()
        assert chi_b.check_consistent() and psi_b.check_consistent()
        out = (chi_b, psi_b)
    setup.cache[key] = out
    return out


def reciprocity_factor(a: IdealK, b: IdealK, setup: RayClassSetup) -> UnityRoot:
    """chi_a(b) * chi_b(a)^(-1)."""
    if not a.coprime_to(b):
        raise ValueError(f"{a} and {b} are not coprime")
    x, y = chi_eval(a, b, setup), chi_eval(b, a, setup)
    if x.is_zero or y.is_zero:
        raise ValueError("reciprocity needs non-zero symbol values")
    return x * y.inverse()


def psi_character(coeffs, setup: RayClassSetup):
    """Character of R_c: class e -> zeta_n^(sum c_i e_i n/d_i)."""
    inv = setup.invariants
    if len(coeffs) != len(inv):
        raise ValueError("one coefficient per cyclic factor")
    coeffs = tuple(int(cf) % d for cf, d in zip(coeffs, inv))

    def psi(I: IdealK) -> UnityRoot:
        if not setup.in_IS(I):
            return UnityRoot.zero(setup.n)
        e = setup.class_of(I)
        return UnityRoot(sum(cf * x * (setup.n // d) for cf, x, d in zip(coeffs, e, inv)), setup.n)

    psi.coeffs = coeffs
    return psi


def all_psi(setup: RayClassSetup):
    return [psi_character(c, setup) for c in itertools.product(*[range(d) for d in setup.invariants])]


def psi_as_hecke(coeffs, setup: RayClassSetup) -> HeckeChar:
    """A character of R_c as a table character modulo c."""
    n = setup.n
    G = setup.group
    R = G.ring
    inv = setup.invariants
    table = np.full(R.size, ZERO, dtype=np.int8)
    for x in G.elements:
        e = setup.class_table[setup.coset_of[int(x)]]
        table[int(x)] = sum(c * k * (n // d) for c, k, d in zip(coeffs, e, inv)) % n
    return HeckeChar(n, setup.c, table, (), 0, ("psi", tuple(coeffs)), setup.c).primitivize()


def primitive_characters(max_norm, setup: RayClassSetup, pieces=True):
    """All primitive characters with conductor norm <= max_norm and order dividing n.

    These are the products prod_P chi_P^(j_P) * psi over squarefree b = prod P coprime
    to S and psi in the dual of R_c.  With ``pieces`` the factors chi^(b)^j and
    psi_(b)^j of the decomposition (which carry an infinity type) are added too.
    Sorted by conductor norm, deduplicated.
    """
    n = setup.n
    psis = [psi_as_hecke(c, setup) for c in itertools.product(*[range(d) for d in setup.invariants])]
    L = IdealList(n, int(max_norm))
    sq = [b for b in L.ideals() if setup.in_IS(b) and is_squarefree(b)]
    out = {}

    def add(ch):
        if ch.conductor.norm <= max_norm:
            out.setdefault(ch.key(), ch)

    for b in sq:
        primes = [P for P, _ in b.factorization()]
        bases = [chi(P, setup) for P in primes]
        for js in itertools.product(range(1, n), repeat=len(primes)):
            base = HeckeChar.trivial(n, setup.c)
            for ch, j in zip(bases, js):
                base = base * ch ** j
            for ps in psis:
                add(base * ps)
        if pieces and not b.is_one():
            cb, pb = decompose_char(b, setup)
            for j in range(1, n):
                add(cb ** j)
                add(pb ** j)
    return sorted(out.values(), key=lambda c: (c.conductor.norm, repr(c.key())))


__all__ = [
    "primitive_characters", "UnityRoot", "RayClassSetup", "HeckeChar", "power_residue_symbol", "symbol_at_prime",
    "symbol_array", "build_ray_class_setup", "default_setup", "chi", "chi_eval",
    "chi_eval_definition", "conductor", "decompose_char", "reciprocity_factor",
    "psi_character", "all_psi", "psi_as_hecke", "star_element", "raw_character",
    "local_exponent", "UnitGroup", "ZERO",
]
