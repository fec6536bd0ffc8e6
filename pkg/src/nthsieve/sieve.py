"""Bilinear character sums over the family chi_a and estimates of their norms.

Dyadic ranges follow ``a ~ M  <=>  M < N(a) <= 2M``.  Norm suprema are only
bounded from below (random unimodular draws plus power iteration); any upper
bound is checked as a regression against recorded baselines.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import IdealK, IdealList, canonical_decompose
from .characters import RayClassSetup, chi, decompose_char, default_setup
from .lfunctions import GammaWindow, dual_values, gauss_epsilon, make_window

POWER_STEPS = 20


# --- ideal ranges -------------------------------------------------------------------

def dyadic(X, setup: RayClassSetup, squarefree=True):
    """Ideals a in I(S) with X < N(a) <= 2X (squarefree ones by default)."""
    hi = math.floor(2 * X)
    if hi < 1:
        return []
    L = IdealList(setup.n, hi)
    mask = L.norms > X
    for P in setup.S:
        mask &= ~L.divisible_by(P)
    if squarefree:
        mask &= L.squarefree_mask()
    return L.subset(mask).ideals()


@dataclass
class CoeffVector:
    ideals: list
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if len(self.ideals) != len(self.values):
            raise ValueError("one coefficient per ideal")

    @classmethod
    def support(cls, N, setup: RayClassSetup):
        return dyadic(N, setup)

    @classmethod
    def random(cls, N, setup: RayClassSetup, rng):
        b = dyadic(N, setup)
        return cls(b, np.exp(2j * np.pi * rng.random(len(b))))

    @classmethod
    def delta(cls, N, setup: RayClassSetup, k=0):
        b = dyadic(N, setup)
        v = np.zeros(len(b), dtype=complex)
        v[k] = 1
        return cls(b, v)

    @classmethod
    def zero(cls, N, setup: RayClassSetup):
        b = dyadic(N, setup)
        return cls(b, np.zeros(len(b), dtype=complex))

    def norm2(self):
        return math.fsum(np.abs(self.values) ** 2)

    def restrict(self, keep):
        keep = list(keep)
        return CoeffVector([self.ideals[i] for i in keep], self.values[keep])


# --- character matrices ----------------------------------------------------------------

def _roots(codes, j, n):
    """zeta_n^(j k) for codes k >= 0; zero for code -1."""
    out = np.exp(2j * np.pi * ((j * codes) % n) / n)
    out[codes < 0] = 0
    return out


def _points(ideals):
    a = np.array([I.gen.a for I in ideals], dtype=np.int64)
    b = np.array([I.gen.b for I in ideals], dtype=np.int64)
    return a, b


def chi_matrix(rows, cols, j, setup: RayClassSetup, transpose=False):
    """Matrix [chi_r^j(c)] (transpose=False) or [chi_c^j(r)] (transpose=True)."""
    n = setup.n
    A = np.zeros((len(rows), len(cols)), dtype=complex)
    if transpose:
        ra, rb = _points(rows)
        for k, c in enumerate(cols):
            A[:, k] = _roots(chi(c, setup).exponents(ra, rb), j, n)
    else:
        ca, cb = _points(cols)
        for k, r in enumerate(rows):
            A[k, :] = _roots(chi(r, setup).exponents(ca, cb), j, n)
    return A


def _check_j(j, n):
    if j % n == 0:
        raise ValueError(f"j={j} is divisible by n={n}")


# --- the Sigma quantities ------------------------------------------------------------------

def in_Xi(X, M):
    """Membership in the set of exponent-weighted dyadic tuples attached to M."""
    X = [float(x) for x in X]
    if any(x < 0.5 for x in X):
        return False
    p = math.prod(x ** (i + 1) for i, x in enumerate(X))
    q = math.prod((2 * x) ** (i + 1) for i, x in enumerate(X))
    return p < M <= q / 2


def dyadic_tuples(M, n):
    """All tuples (X_1..X_n) of dyadic sizes 2^k/2 that can carry an ideal of norm <= 2M."""
    sizes = [0.5 * 2 ** k for k in range(int(math.log2(4 * M)) + 2)]
    out = []
    for X in itertools.product(sizes, repeat=n):
        if math.prod(x ** (i + 1) for i, x in enumerate(X)) < 2 * M:
            out.append(X)
    return out


def _check_tuple(X, n):
    if len(X) != n:
        raise ValueError(f"X-tuple needs {n} entries")
    for x in X:
        if x < 0.5 or not math.log2(2 * x).is_integer():
            raise ValueError(f"X entry {x} is not a dyadic size 2^k/2")


def sigma(kind, M, N, lam: CoeffVector, j=1, setup: RayClassSetup = None, C=None, X=None,
          window=None):
    setup = setup or default_setup(3)
    n = setup.n
    _check_j(j, n)
    if kind == 1:
        rows = dyadic(M, setup)
        A = chi_matrix(rows, lam.ideals, j, setup)
        return float(np.sum(np.abs(A @ lam.values) ** 2))
    if kind == 2:
        rows = dyadic(M, setup, squarefree=False)
        A = chi_matrix(rows, lam.ideals, j, setup, transpose=True)
        return float(np.sum(np.abs(A @ lam.values) ** 2))
    if kind == 3:
        if C is None:
            raise ValueError("sigma 3 needs a class")
        K, keep = sigma3_matrix(M, lam.ideals, j, setup, C, window)
        v = lam.values[keep]
        return float(abs(np.conj(v) @ K.T @ v)) if len(v) else 0.0
    if kind == 4:
        if X is None:
            raise ValueError("sigma 4 needs an X-tuple")
        return sigma4(M, N, lam, X, j, setup)
    raise ValueError(f"unknown kind {kind}")


def sigma4(M, N, lam: CoeffVector, X, j=1, setup: RayClassSetup = None):
    """Rows a ~ M whose decomposition a_1 a_2^2 ... a_n^n has a_i ~ X_i.

    Built from tuples of ideals and multiplicativity of chi_b, independently of
    the factorization of the product.
    """
    setup = setup or default_setup(3)
    n = setup.n
    _check_tuple(X, n)
    pools = [dyadic(x, setup, squarefree=(i < n - 1)) if x >= 1 else [IdealK.unit(n)]
             for i, x in enumerate(X)]
    ba = [chi(b, setup) for b in lam.ideals]
    total = 0.0
    cache = {}

    def row(I, e):
        key = (I, e)
        if key not in cache:
            codes = np.array([c.exponents(np.array([I.gen.a]), np.array([I.gen.b]))[0] for c in ba])
            cache[key] = _roots(np.where(codes < 0, -1, codes * e), j, n)
        return cache[key]

    for tup in itertools.product(*pools):
        nrm = math.prod(I.norm ** (i + 1) for i, I in enumerate(tup))
        if not M < nrm <= 2 * M:
            continue
        sq = tup[: n - 1]
        if any(not sq[i].coprime_to(sq[k]) for i in range(len(sq)) for k in range(i + 1, len(sq))):
            continue
        v = np.ones(len(ba), dtype=complex)
        for i, I in enumerate(tup):
            if not I.is_one():
                v = v * row(I, i + 1)
        total += abs(v @ lam.values) ** 2
    return float(total)


def _pair_char(b1, b2, j, setup):
    return ((chi(b1, setup) ** j) * (chi(b2, setup).conj() ** j)).primitivize()


def sigma3_matrix(M, ideals, j, setup: RayClassSetup, C, window=None):
    """K[k, l] = sum_a W(N(a)/M) chi^j_{b_k, b_l}(a) for coprime b_k != b_l in class C."""
    W = make_window(window or GammaWindow(2))
    keep = [i for i, b in enumerate(ideals) if tuple(setup.class_of(b)) == tuple(C)]
    bs = [ideals[i] for i in keep]
    lo, hi = W.support()
    L = IdealList(setup.n, math.floor(M * hi))
    w = W(L.norms / M)
    K = np.zeros((len(bs), len(bs)), dtype=complex)
    for k, l in itertools.permutations(range(len(bs)), 2):
        if l < k or not bs[k].coprime_to(bs[l]):
            continue
        ch = _pair_char(bs[k], bs[l], j, setup)
        K[k, l] = np.sum(w * ch.values(L.a, L.b))
        K[l, k] = np.conj(K[k, l])
    return K, keep


def pair_root_number(b1, b2, j, setup: RayClassSetup):
    """Root number of the pair character assembled from its two factors (class constant 1)."""
    c1, p1 = decompose_char(b1, setup)
    c2, p2 = decompose_char(b2, setup)
    e1 = gauss_epsilon((c1 ** j).primitivize()).value
    e2 = gauss_epsilon((c2.conj() ** j).primitivize()).value
    return e1 * e2 * complex(p2(b2)).conjugate() ** j * complex(p1(b1)) ** j


def sigma3_poisson(M, N, lam: CoeffVector, j, setup: RayClassSetup, C, window=None, dual_cut=6.0):
    """The same quantity after the smoothed summation identity on every inner sum."""
    n = setup.n
    W = make_window(window or GammaWindow(2))
    keep = [i for i, b in enumerate(lam.ideals) if tuple(setup.class_of(b)) == tuple(C)]
    bs = [lam.ideals[i] for i in keep]
    v = lam.values[keep]
    total = 0j
    for k, l in itertools.permutations(range(len(bs)), 2):
        if not bs[k].coprime_to(bs[l]):
            continue
        ch = _pair_char(bs[k], bs[l], j, setup)
        q = bs[k].norm * bs[l].norm
        nu = abs(ch.ell)
        Wn = W.for_nu(nu)
        Ld = IdealList(n, math.floor(dual_cut * q / M))
        x = M * Ld.norms / q
        ux, inv = np.unique(x, return_inverse=True)
        inner = np.sum(dual_values(Wn, ux, n, nu)[inv] * np.conj(ch.values(Ld.a, Ld.b)))
        eps = pair_root_number(bs[k], bs[l], j, setup)
        total += v[k] * np.conj(v[l]) * M * eps / math.sqrt(q) * inner
    return float(abs(total))


# --- norm estimates --------------------------------------------------------------------

@dataclass
class SieveStats:
    kind: int
    M: float
    N: float
    j: int
    epsilon: float
    sigma: float
    rhs: float
    ratio: float
    strategy: str
    seed: int

    HEADER = ("kind", "M", "N", "j", "epsilon", "sigma", "rhs", "ratio", "strategy", "seed")

    def row(self):
        return [self.kind, f"{self.M:g}", f"{self.N:g}", self.j, f"{self.epsilon:g}",
                f"{self.sigma:.12g}", f"{self.rhs:.12g}", f"{self.ratio:.12g}", self.strategy, self.seed]

    @classmethod
    def to_csv(cls, stats, fh=None):
        out = fh or io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(cls.HEADER)
        for s in stats:
            w.writerow(s.row())
        return out.getvalue() if fh is None else None


def rhs_shape(M, N, eps=0.1):
    return (M + N + (M * N) ** (2 / 3)) * (M * N) ** eps


def _form(i, M, N, j, setup, C=None, window=None):
    """The matrix whose squared operator norm (i = 1, 2) or spectral radius (i = 3) is B_i."""
    cols = dyadic(N, setup)
    if i == 1:
        return chi_matrix(dyadic(M, setup), cols, j, setup), cols
    if i == 2:
        return chi_matrix(dyadic(M, setup, squarefree=False), cols, j, setup, transpose=True), cols
    if i == 3:
        K, keep = sigma3_matrix(M, cols, j, setup, C, window)
        return K, [cols[k] for k in keep]
    raise ValueError(f"unknown norm index {i}")


def _quad(i, A, v):
    if i == 3:
        return abs(np.conj(v) @ A @ v)
    return float(np.sum(np.abs(A @ v) ** 2))


def b_norm_estimate(i, M, N, j=1, trials=50, strategy="both", setup: RayClassSetup = None,
                    seed=0, eps=0.1, C=None, extra=()):
    """Best observed Sigma_i / sum |lambda|^2 (a lower bound for B_i).

    Trial k draws from its own generator seeded by (seed, k).  `extra` coefficient
    vectors are included as additional trials.
    """
    setup = setup or default_setup(3)
    _check_j(j, setup.n)
    if i == 3 and C is None:
        best = None
        for C0 in sorted({tuple(setup.class_of(b)) for b in dyadic(N, setup)}):
            s = b_norm_estimate(3, M, N, j, trials, strategy, setup, seed, eps, C0, extra)
            best = s if best is None or s.ratio > best.ratio else best
        if best is None:
            return SieveStats(i, M, N, j, eps, 0.0, rhs_shape(M, N, eps), 0.0, strategy, seed)
        return best
    A, cols = _form(i, M, N, j, setup, C)
    rhs1 = rhs_shape(M, N, eps)
    best, tag = 0.0, "random"
    if len(cols) and A.size:
        for k in range(trials if strategy in ("random", "both") else 0):
            rng = np.random.default_rng([seed, k])
            v = np.exp(2j * np.pi * rng.random(len(cols)))
            val = _quad(i, A, v) / len(cols)
            if val > best:
                best, tag = val, "random"
        for lam in extra:
            idx = {b: k for k, b in enumerate(cols)}
            v = np.zeros(len(cols), dtype=complex)
            for b, x in zip(lam.ideals, lam.values):
                if b in idx:
                    v[idx[b]] = x
            nv = float(np.sum(np.abs(v) ** 2))
            if nv > 0:
                best = max(best, _quad(i, A, v) / nv)
        if strategy in ("power", "both"):
            rng = np.random.default_rng([seed, trials])
            v = rng.standard_normal(len(cols)) + 1j * rng.standard_normal(len(cols))
            H = A if i == 3 else np.conj(A.T) @ A
            for _ in range(POWER_STEPS):
                v = H @ v
                nv = np.linalg.norm(v)
                if nv == 0:
                    break
                v /= nv
            val = _quad(i, A, v) / float(np.sum(np.abs(v) ** 2)) if np.linalg.norm(v) else 0.0
            if val > best:
                best, tag = val, "power"
    return SieveStats(i, M, N, j, eps, best, rhs1, best / rhs1, tag, seed)


def large_sieve_ratio(M, N, trials=200, eps=0.1, setup: RayClassSetup = None, seed=0, j=1):
    """Best observed Sigma_1 / ((MN)^eps (M + N + (MN)^(2/3)) sum |lambda|^2)."""
    if M < 0.5 or N < 0.5:
        raise ValueError("need M, N >= 1/2")
    return b_norm_estimate(1, M, N, j, trials, "both", setup, seed, eps)


def log_slope(stats):
    """Least-squares slope of log(ratio) against log(MN)."""
    x = np.log([s.M * s.N for s in stats])
    y = np.log([s.ratio for s in stats])
    return float(np.polyfit(x, y, 1)[0])


# --- the exponent recursion ------------------------------------------------------------

def exponent_recursion(alpha0, k):
    """[alpha_0, ..., alpha_k] under alpha -> 2 - 2/(3 alpha - 1); exact for rational input.

    >>> [str(a) for a in exponent_recursion(2, 2)]
    ['2', '8/5', '28/19']
    """
    exact = isinstance(alpha0, (int, Fraction))
    a = Fraction(alpha0) if exact else float(alpha0)
    if a <= Fraction(4, 3):
        raise ValueError("alpha0 must exceed 4/3")
    out = [a]
    for _ in range(k):
        a = 2 - 2 / (3 * a - 1) if not exact else 2 - Fraction(2) / (3 * a - 1)
        out.append(a)
    return out


__all__ = [
    "CoeffVector", "SieveStats", "dyadic", "chi_matrix", "sigma", "sigma4", "sigma3_matrix",
    "sigma3_poisson", "pair_root_number", "in_Xi", "dyadic_tuples", "b_norm_estimate",
    "large_sieve_ratio", "log_slope", "rhs_shape", "exponent_recursion",
]
