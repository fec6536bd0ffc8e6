"""Exact arithmetic in Z[zeta_n] for n = 3 (Eisenstein integers) and n = 4 (Gaussian integers).

Elements are pairs (a, b) meaning a + b*zeta.  Ideals are principal; an ideal is
stored through the associate of its generator that lies in a fixed sector of
the complex plane, so equality of ideals is equality of pairs.

>>> x = CycInt(3, 1, 3)
>>> x.norm()
7
>>> factor_ideal(IdealK.of(7, 0, 3))
[(IdealK(3+1w), 1), (IdealK(3+2w), 1)]
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

import numpy as np
from sympy import factorint
from sympy.ntheory import sqrt_mod

SUPPORTED = (3, 4)


@dataclass(frozen=True)
class FieldData:
    n: int
    name: str
    disc: int  # |d_K|
    units: tuple  # fixed order: powers of a generator of the unit group
    zeta: complex
    different: tuple  # generator of the different ideal
    ram_prime: int  # the rational prime dividing n

    @property
    def n_units(self):
        return len(self.units)


FIELDS = {
    # (1 + w) = -w^2 generates the six units
    3: FieldData(3, "Q(zeta3)", 3, ((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)),
                 cmath.exp(2j * cmath.pi / 3), (1, 2), 3),
    4: FieldData(4, "Q(i)", 4, ((1, 0), (0, 1), (-1, 0), (0, -1)), 1j, (2, 0), 2),
}


def field(n):
    if n not in FIELDS:
        raise ValueError(f"unsupported field: n={n} (expected 3 or 4)")
    return FIELDS[n]


# --- raw pair arithmetic (works on python ints and on numpy arrays) ---------

def mul(a, b, c, d, n):
    if n == 3:
        return a * c - b * d, a * d + b * c - b * d
    return a * c - b * d, a * d + b * c


def norm_ab(a, b, n):
    if n == 3:
        return a * a - a * b + b * b
    return a * a + b * b


def conj_ab(a, b, n):
    if n == 3:
        return a - b, -b
    return a, -b


def embed(a, b, n):
    """Complex embedding with zeta -> exp(2 pi i / n)."""
    if n == 3:
        return (a - 0.5 * b) + 1j * (0.8660254037844386 * b)
    return a + 1j * b


def in_sector(a, b, n):
    if n == 3:
        return (b >= 0) & (a > b)
    return (a > 0) & (b >= 0)


def canonical_ab(a, b, n):
    """Associate of a + b zeta in the fundamental sector."""
    if a == 0 and b == 0:
        raise ValueError("zero has no canonical associate")
    for u in FIELDS[n].units:
        c, d = mul(a, b, u[0], u[1], n)
        if in_sector(c, d, n):
            return c, d
    raise AssertionError("unreachable")


def _round_div(x, y):
    # nearest integer to x / y for ints, ties towards +inf
    return (2 * x + y) // (2 * y)


def divround(a, b, c, d, n):
    """Nearest-lattice quotient of (a + b z) / (c + d z)."""
    N = norm_ab(c, d, n)
    e, f = conj_ab(c, d, n)
    p, q = mul(a, b, e, f, n)
    return _round_div(p, N), _round_div(q, N)


def exact_div(a, b, c, d, n):
    """(a + b z)/(c + d z) if exact, else None."""
    N = norm_ab(c, d, n)
    e, f = conj_ab(c, d, n)
    p, q = mul(a, b, e, f, n)
    if p % N or q % N:
        return None
    return p // N, q // N


class CycInt:
    """Element a + b*zeta_n of Z[zeta_n]."""

    __slots__ = ("a", "b", "n")

    def __init__(self, a, b=0, n=3):
        if n not in SUPPORTED:
            raise ValueError(f"unsupported field: n={n}")
        self.a = int(a)
        self.b = int(b)
        self.n = n

    @property
    def coeffs(self):
        return (self.a, self.b)

    def _co(self, other):
        if isinstance(other, CycInt):
            if other.n != self.n:
                raise ValueError("mixed fields")
            return other
        return CycInt(other, 0, self.n)

    def __add__(self, other):
        o = self._co(other)
        return CycInt(self.a + o.a, self.b + o.b, self.n)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._co(other)
        return CycInt(self.a - o.a, self.b - o.b, self.n)

    def __rsub__(self, other):
        return self._co(other) - self

    def __neg__(self):
        return CycInt(-self.a, -self.b, self.n)

    def __mul__(self, other):
        o = self._co(other)
        return CycInt(*mul(self.a, self.b, o.a, o.b, self.n), self.n)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative exponent")
        r, x = CycInt(1, 0, self.n), self
        while e:
            if e & 1:
                r = r * x
            x = x * x
            e >>= 1
        return r

    def __eq__(self, other):
        if isinstance(other, int):
            return self.a == other and self.b == 0
        return isinstance(other, CycInt) and (self.a, self.b, self.n) == (other.a, other.b, other.n)

    def __hash__(self):
        return hash((self.a, self.b, self.n))

    def __bool__(self):
        return bool(self.a or self.b)

    def __repr__(self):
        return f"CycInt({self.a}, {self.b}, n={self.n})"

    def __str__(self):
        z = "w" if self.n == 3 else "i"
        return f"{self.a}{self.b:+d}{z}"

    def norm(self):
        return norm_ab(self.a, self.b, self.n)

    def conj(self):
        return CycInt(*conj_ab(self.a, self.b, self.n), self.n)

    def trace(self):
        return 2 * self.a - self.b if self.n == 3 else 2 * self.a

    def to_complex(self):
        return complex(embed(self.a, self.b, self.n))

    def canonical(self):
        return CycInt(*canonical_ab(self.a, self.b, self.n), self.n)

    def is_unit(self):
        return self.norm() == 1

    def divmod(self, other):
        """Euclidean division with remainder of smaller norm."""
        o = self._co(other)
        q = CycInt(*divround(self.a, self.b, o.a, o.b, self.n), self.n)
        return q, self - q * o

    def __mod__(self, other):
        return self.divmod(other)[1]

    def divides(self, other):
        o = self._co(other)
        return exact_div(o.a, o.b, self.a, self.b, self.n) is not None

    def exact_quotient(self, other):
        o = self._co(other)
        r = exact_div(self.a, self.b, o.a, o.b, self.n)
        if r is None:
            raise ValueError(f"{o} does not divide {self}")
        return CycInt(*r, self.n)


def units(n):
    return [CycInt(a, b, n) for a, b in field(n).units]


def norm(x: CycInt) -> int:
    return x.norm()


def egcd(x: CycInt, y: CycInt):
    """Return (g, s, t) with g = s x + t y a gcd."""
    n = x.n
    r0, r1 = x, y
    s0, s1 = CycInt(1, 0, n), CycInt(0, 0, n)
    t0, t1 = CycInt(0, 0, n), CycInt(1, 0, n)
    while r1:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return r0, s0, t0


def cgcd(x: CycInt, y: CycInt) -> CycInt:
    return egcd(x, y)[0]


# --- prime ideals -----------------------------------------------------------

def split_type(p, n):
    if p == field(n).ram_prime:
        return "ramified"
    return "split" if p % n == 1 else "inert"


@lru_cache(maxsize=None)
def primes_over(p, n):
    """Canonical generators (pairs) of the primes above the rational prime p."""
    kind = split_type(p, n)
    if kind == "ramified":
        return (canonical_ab(1, -1, n) if n == 3 else canonical_ab(1, 1, n),)
    if kind == "inert":
        return ((p, 0),)
    if n == 3:
        s = sqrt_mod(-3 % p, p)
        r = (-1 + s) * pow(2, -1, p) % p  # root of r^2 + r + 1
    else:
        r = sqrt_mod(-1 % p, p)
    g = cgcd(CycInt(p, 0, n), CycInt(-r, 1, n))
    if g.norm() != p:
        raise AssertionError(f"split prime search failed for p={p}")
    pi = canonical_ab(g.a, g.b, n)
    pib = canonical_ab(*conj_ab(pi[0], pi[1], n), n)
    return tuple(sorted({pi, pib}))


def factor_element(a, b, n):
    """Factor the nonzero element a + b zeta into canonical primes: [((pa, pb), e)]."""
    N = norm_ab(a, b, n)
    if N == 0:
        raise ValueError("cannot factor zero")
    out = []
    for p, _ in sorted(factorint(N).items()):
        for pa, pb in primes_over(p, n):
            e = 0
            while True:
                q = exact_div(a, b, pa, pb, n)
                if q is None:
                    break
                a, b = q
                e += 1
            if e:
                out.append(((pa, pb), e))
    if norm_ab(a, b, n) != 1:
        raise AssertionError("factorization left a non-unit cofactor")
    out.sort(key=lambda t: (norm_ab(t[0][0], t[0][1], n), t[0]))
    return out


class IdealK:
    """Nonzero ideal of Z[zeta_n] held through its canonical generator."""

    __slots__ = ("gen", "_fac")

    _cache: dict = {}

    def __init__(self, gen: CycInt):
        if not gen:
            raise ValueError("the zero ideal is not supported")
        self.gen = gen.canonical()
        self._fac = None

    @classmethod
    def of(cls, a, b=0, n=3):
        return cls(CycInt(a, b, n))

    @classmethod
    def unit(cls, n):
        return cls(CycInt(1, 0, n))

    @property
    def n(self):
        return self.gen.n

    @property
    def key(self):
        return (self.gen.a, self.gen.b)

    @property
    def norm(self):
        return self.gen.norm()

    def factorization(self):
        if self._fac is None:
            k = (self.n, self.gen.a, self.gen.b)
            fac = IdealK._cache.get(k)
            if fac is None:
                fac = factor_element(self.gen.a, self.gen.b, self.n)
                IdealK._cache[k] = fac
            self._fac = [(IdealK(CycInt(pa, pb, self.n)), e) for (pa, pb), e in fac]
        return list(self._fac)

    def __mul__(self, other):
        return IdealK(self.gen * other.gen)

    def __pow__(self, e):
        return IdealK(self.gen ** e)

    def __eq__(self, other):
        return isinstance(other, IdealK) and self.gen == other.gen

    def __hash__(self):
        return hash(("ideal", self.gen.a, self.gen.b, self.gen.n))

    def __repr__(self):
        return f"IdealK({self.gen})"

    def __lt__(self, other):
        return (self.norm, self.key) < (other.norm, other.key)

    def divides(self, other):
        return self.gen.divides(other.gen)

    def quotient(self, other):
        return IdealK(self.gen.exact_quotient(other.gen))

    def is_prime(self):
        f = self.factorization()
        return len(f) == 1 and f[0][1] == 1

    def is_one(self):
        return self.norm == 1

    def contains(self, x: CycInt):
        return self.gen.divides(x)

    def coprime_to(self, other):
        return cgcd(self.gen, other.gen).norm() == 1

    def valuation(self, prime):
        for p, e in self.factorization():
            if p == prime:
                return e
        return 0

    def radical(self):
        return ideal_product([p for p, _ in self.factorization()], self.n)


def ideal_product(ideals, n):
    g = CycInt(1, 0, n)
    for I in ideals:
        g = g * I.gen
    return IdealK(g)


def ideal_gcd(I, J):
    return IdealK(cgcd(I.gen, J.gen))


def ideal_lcm(I, J):
    g = ideal_gcd(I, J)
    return IdealK((I.gen * J.gen).exact_quotient(g.gen))


def from_factorization(fac, n):
    g = CycInt(1, 0, n)
    for p, e in fac:
        g = g * p.gen ** e
    return IdealK(g)


def factor_ideal(a: IdealK):
    """Prime factorization [(prime, exponent)] ordered by norm."""
    if not isinstance(a, IdealK):
        raise TypeError("expected an IdealK")
    return a.factorization()


def is_squarefree(a: IdealK):
    return all(e == 1 for _, e in a.factorization())


def is_nth_power_free(a: IdealK, n=None):
    n = n or a.n
    return all(e < n for _, e in a.factorization())


def mobius(a: IdealK):
    f = a.factorization()
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def divisors(a: IdealK):
    out = [IdealK.unit(a.n)]
    for p, e in a.factorization():
        out = [d * p ** k for d in out for k in range(e + 1)]
    return sorted(out)


@dataclass(frozen=True)
class Decomposition:
    squarefree_part: IdealK
    squarefull_part: IdealK
    nth_power_root: IdealK
    mode: str

    def recompose(self):
        n = self.squarefree_part.n
        return self.squarefree_part * self.squarefull_part * self.nth_power_root ** n


MODES = ("nth-power-free-split", "squarefree-squarefull-split")


def canonical_decompose(a: IdealK, mode="nth-power-free-split") -> Decomposition:
    """a = a1 * a2^n (mode 1) or a0 * a1 * a2^n (mode 2)."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    n = a.n
    one = IdealK.unit(n)
    a0, a1, a2 = [], [], []
    for p, e in a.factorization():
        q, r = divmod(e, n)
        if q:
            a2.append((p, q))
        if r == 0:
            continue
        if mode == MODES[1] and r == 1:
            a0.append((p, 1))
        else:
            a1.append((p, r))
    d = Decomposition(from_factorization(a0, n) if mode == MODES[1] else one,
                      from_factorization(a1, n), from_factorization(a2, n), mode)
    assert d.recompose() == a
    return d


# --- residue rings O/(m) --------------------------------------------------------

class ResidueRing:
    """O/(m) with an index map x -> {0, ..., N(m)-1}, vectorized over numpy arrays.

    The lattice (m) has a basis {(A, 0), (B, C)} with A*C = N(m); the residue of
    (x0, x1) is indexed by r0 + A*r1 where r1 = x1 mod C.
    """

    def __init__(self, m: IdealK):
        self.m = m
        self.n = n = m.n
        a, b = m.gen.a, m.gen.b
        v1 = (a, b)
        v2 = mul(a, b, 0, 1, n)
        g, x, y = _ext_int(v1[1], v2[1])
        if g == 0:
            raise AssertionError("degenerate lattice")
        B = x * v1[0] + y * v2[0]
        C = g
        if C < 0:
            B, C = -B, -C
        A = abs((v1[1] // g) * v2[0] - (v2[1] // g) * v1[0])
        self.A, self.C = A, C
        self.B = B % A
        self.size = A * C
        assert self.size == m.norm
        self._unit_mask = None

    def index(self, x0, x1):
        q = x1 // self.C
        r1 = x1 - q * self.C
        r0 = (x0 - q * self.B) % self.A
        return r0 + self.A * r1

    def rep(self, idx):
        return idx % self.A, idx // self.A

    def small_rep(self, x0, x1):
        q = divround(int(x0), int(x1), self.m.gen.a, self.m.gen.b, self.n)
        qa, qb = mul(q[0], q[1], self.m.gen.a, self.m.gen.b, self.n)
        return int(x0) - qa, int(x1) - qb

    def reduce(self, x: CycInt) -> CycInt:
        return CycInt(*self.small_rep(x.a, x.b), self.n)

    def mul_idx(self, i, j):
        a0, a1 = self.rep(i)
        b0, b1 = self.rep(j)
        return self.index(*mul(a0, a1, b0, b1, self.n))

    def unit_mask(self):
        if self._unit_mask is None:
            idx = np.arange(self.size, dtype=np.int64)
            r0, r1 = self.rep(idx)
            mask = np.ones(self.size, dtype=bool)
            for p, _ in self.m.factorization():
                mask &= ResidueRing.of(p).index(r0, r1) != 0
            self._unit_mask = mask
        return self._unit_mask

    def units(self):
        return np.nonzero(self.unit_mask())[0]

    def inverse(self, x: CycInt) -> CycInt:
        g, s, _ = egcd(x, self.m.gen)
        if g.norm() != 1:
            raise ValueError(f"{x} is not invertible mod {self.m}")
        ginv = CycInt(*conj_ab(g.a, g.b, self.n), self.n)  # units: inverse = conj
        return self.reduce(s * ginv)

    @staticmethod
    @lru_cache(maxsize=4096)
    def _of(n, a, b):
        return ResidueRing(IdealK(CycInt(a, b, n)))

    @classmethod
    def of(cls, m: IdealK):
        return cls._of(m.n, m.gen.a, m.gen.b)


def _ext_int(a, b):
    """gcd with Bezout coefficients for python ints."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def crt(residues, moduli):
    """x with x = r_i mod m_i for pairwise coprime ideals m_i; small representative."""
    n = moduli[0].n
    x, M = CycInt(0, 0, n), CycInt(1, 0, n)
    for r, m in zip(residues, moduli):
        g, s, t = egcd(M, m.gen)
        if g.norm() != 1:
            raise ValueError("moduli are not coprime")
        gi = CycInt(*conj_ab(g.a, g.b, n), n)
        # x + M*k = r mod m  ->  k = (r - x) * M^{-1}
        k = ((r - x) * s * gi) % m.gen
        x = x + M * k
        M = M * m.gen
    return x % M


def residue_exp(a: CycInt, e: int, m: IdealK) -> CycInt:
    """a^e reduced mod m by square-and-multiply."""
    if e < 0:
        raise ValueError("negative exponent")
    R = ResidueRing.of(m)
    r, x = R.reduce(CycInt(1, 0, a.n)), R.reduce(a)
    while e:
        if e & 1:
            r = R.reduce(r * x)
        x = R.reduce(x * x)
        e >>= 1
    return r


def congruent(x: CycInt, y: CycInt, m: IdealK):
    return m.contains(x - y)


def find_unit_congruent(x: CycInt, c: IdealK):
    """First unit u in the fixed unit order with u*x = 1 mod c, or None."""
    for u in units(x.n):
        if congruent(u * x, CycInt(1, 0, x.n), c):
            return u
    return None


# --- bulk ideal enumeration ----------------------------------------------------

class IdealList:
    """All ideals of norm <= X (optionally in a norm window) as numpy arrays.

    Order: by norm, then by the canonical generator pair.
    """

    def __init__(self, n, X, lo=0):
        self.n = n
        X = int(X)
        r = isqrt(max(X, 0)) + 2
        if n == 3:
            # sector b >= 0, a > b; norm >= (a^2 + b^2)/2 bounds the box
            R = isqrt(2 * max(X, 0)) + 2
            a, b = np.meshgrid(np.arange(1, R + 1), np.arange(0, R + 1), indexing="ij")
        else:
            a, b = np.meshgrid(np.arange(1, r + 1), np.arange(0, r + 1), indexing="ij")
        a = a.ravel().astype(np.int64)
        b = b.ravel().astype(np.int64)
        keep = in_sector(a, b, n)
        a, b = a[keep], b[keep]
        N = norm_ab(a, b, n)
        keep = (N <= X) & (N > lo)
        a, b, N = a[keep], b[keep], N[keep]
        order = np.lexsort((b, a, N))
        self.a, self.b, self.norms = a[order], b[order], N[order]

    def __len__(self):
        return len(self.a)

    def ideal(self, i):
        return IdealK(CycInt(int(self.a[i]), int(self.b[i]), self.n))

    def ideals(self):
        return [self.ideal(i) for i in range(len(self))]

    def subset(self, mask):
        out = object.__new__(IdealList)
        out.n = self.n
        out.a, out.b, out.norms = self.a[mask], self.b[mask], self.norms[mask]
        return out

    def divisible_by(self, d: IdealK):
        R = ResidueRing.of(d)
        return R.index(self.a, self.b) == 0

    def coprime_to(self, m: IdealK):
        mask = np.ones(len(self), dtype=bool)
        for p, _ in m.factorization():
            mask &= ~self.divisible_by(p)
        return mask

    def squarefree_mask(self):
        X = int(self.norms.max()) if len(self) else 0
        mask = np.ones(len(self), dtype=bool)
        for p in prime_ideals_upto(self.n, isqrt(X)):
            mask &= ~self.divisible_by(p * p)
        return mask

    def complex(self):
        return embed(self.a.astype(float), self.b.astype(float), self.n)


def ideals_upto(n, X, lo=0):
    return IdealList(n, X, lo)


@lru_cache(maxsize=64)
def _primes_upto(n, X):
    from sympy import primerange
    out = []
    for p in primerange(2, X + 1):
        for g in primes_over(p, n):
            P = IdealK(CycInt(*g, n))
            if P.norm <= X:
                out.append(P)
    return tuple(sorted(out))


def prime_ideals_upto(n, X):
    """Prime ideals of norm <= X, sorted by norm."""
    return list(_primes_upto(n, int(X)))


__all__ = [
    "CycInt", "IdealK", "Decomposition", "ResidueRing", "IdealList", "FieldData", "FIELDS",
    "field", "units", "norm", "egcd", "cgcd", "factor_ideal", "canonical_decompose",
    "residue_exp", "find_unit_congruent", "crt", "ideals_upto", "prime_ideals_upto",
    "mobius", "divisors", "is_squarefree", "is_nth_power_free", "ideal_product",
    "ideal_gcd", "ideal_lcm", "from_factorization", "primes_over", "split_type",
    "embed", "mul", "norm_ab", "conj_ab", "canonical_ab",
]
