"""Double Dirichlet series built from the family chi_a: coefficients, truncated
evaluation in the region of absolute convergence, archimedean factors and the
weight functions used for approximate functional equations.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath as mp
import numpy as np
from scipy.special import loggamma
from sympy import factorint

from .algebra import IdealK, IdealList, canonical_decompose, divisors, field, mobius
from .characters import RayClassSetup, UnityRoot, chi, default_setup, psi_as_hecke, psi_character
from .lfunctions import ComplexVal, QuadratureError, gauss_epsilon, kappa, working_dps, zeta_k_oracle


class PoleProximityError(ValueError):
    """A Gamma argument lies within 1e-6 of a pole."""


# --- exact Gauss coefficients -----------------------------------------------------------

@dataclass(frozen=True)
class Surd:
    """c * sqrt(r) with r a squarefree positive integer."""
    c: int
    r: int = 1

    @classmethod
    def make(cls, c, r=1):
        if c == 0:
            return cls(0, 1)
        out = 1
        for p, e in factorint(r).items():
            c *= p ** (e // 2)
            out *= p ** (e % 2)
        return cls(c, out)

    @classmethod
    def power(cls, base, half_exp, c=1):
        """c * base^(half_exp / 2)."""
        if half_exp < 0:
            raise ValueError("negative exponent")
        return cls.make(c * base ** (half_exp // 2), base ** (half_exp % 2))

    def __mul__(self, o):
        return Surd.make(self.c * o.c, self.r * o.r)

    def __float__(self):
        return self.c * math.sqrt(self.r)

    def __bool__(self):
        return self.c != 0

    def __eq__(self, o):
        if isinstance(o, int):
            o = Surd(o)
        return isinstance(o, Surd) and (self.c, self.r) == (o.c, o.r)

    def __hash__(self):
        return hash((self.c, self.r))


def gauss_coeff(alpha, beta, P: IdealK) -> Surd:
    """g(p^alpha, p^beta) for a prime ideal p, exactly.

    >>> P = IdealK.of(3, 1, n=3)
    >>> P.norm
    7
    >>> gauss_coeff(0, 1, P), gauss_coeff(1, 1, P), gauss_coeff(5, 3, P), gauss_coeff(2, 3, P)
    (Surd(c=1, r=1), Surd(c=0, r=1), Surd(c=6, r=7), Surd(c=-1, r=7))
    """
    n = P.n
    q = P.norm
    if beta == 0:
        return Surd(1)
    if beta % n == 0:
        if alpha >= beta:
            return Surd.power(q, beta - 2, q - 1)
        if alpha == beta - 1:
            return Surd.power(q, beta - 2, -1)
        return Surd(0)
    if alpha == beta - 1:
        return Surd.power(q, beta - 1)
    return Surd(0)


def g_ideal(a: IdealK, b: IdealK) -> Surd:
    """Product of the local coefficients over the primes dividing b."""
    fa = dict(a.factorization())
    out = Surd(1)
    for P, beta in b.factorization():
        out = out * gauss_coeff(fa.get(P, 0), beta, P)
        if not out:
            break
    return out


# --- characters of R_c ------------------------------------------------------------------

def _psi_key(psi):
    return None if psi is None else tuple(int(x) for x in psi)


def psi_value(psi, I: IdealK, setup: RayClassSetup) -> complex:
    if not setup.in_IS(I):
        return 0j
    if psi is None:
        return 1 + 0j
    return complex(psi_character(psi, setup)(I))


def psi_values(psi, L: IdealList, setup: RayClassSetup):
    mask = np.ones(len(L), dtype=bool)
    for P in setup.S:
        mask &= ~L.divisible_by(P)
    if psi is None:
        return mask.astype(complex)
    return psi_as_hecke(tuple(psi), setup).values(L.a, L.b) * mask


def conj_psi(psi, setup: RayClassSetup):
    return None if psi is None else tuple((-x) % d for x, d in zip(psi, setup.invariants))


@dataclass
class MDSPoint:
    s: complex
    w: complex
    psi: tuple = None
    psi2: tuple = None

    def check(self, setup: RayClassSetup):
        """psi, psi' must be homomorphisms of R_c: one residue per cyclic factor."""
        for p in (self.psi, self.psi2):
            if p is not None and len(p) != len(setup.invariants):
                raise ValueError("character needs one coefficient per cyclic factor")
        return True


# --- correction factor, L*, D --------------------------------------------------------------

def _family_char(a, setup, conjugate):
    ch = chi(a, setup)
    return ch.conj() if conjugate else ch


def correction_A(s, psi, a: IdealK, setup: RayClassSetup = None, conjugate=False) -> complex:
    """Sum over ordered triples b1 b2 b3 = a2 (a = a1 a2^n) of chi_a(b3) mu(b3) psi(b3) N(b1)^-(ns-n+1) N(b3)^-s."""
    setup = setup or default_setup(3)
    if not setup.in_IS(a):
        raise ValueError(f"{a} is not in I(S)")
    n = setup.n
    s = complex(s)
    a2 = canonical_decompose(a).nth_power_root
    if a2.is_one():
        return 1 + 0j
    ch = _family_char(a, setup, conjugate)
    total = 0j
    for b3 in divisors(a2):
        mu = mobius(b3)
        if mu == 0:
            continue
        c3 = mu * complex(ch(b3)) * psi_value(psi, b3, setup) * b3.norm ** (-s)
        if c3 == 0:
            continue
        rest = a2.quotient(b3)
        for b1 in divisors(rest):
            total += c3 * b1.norm ** (-(n * s - n + 1))
    return total


def correction_bound_exponent(sigma, n):
    return max(0.0, n * (1 - sigma) - 1) + 0.1


@lru_cache(maxsize=8)
def _ideal_list(n, X):
    return IdealList(n, X)


def _tail_bound(n, sigma, X):
    from .lfunctions import zeta_tail_bound
    return zeta_tail_bound(n, sigma, X)


def zeta_KS(z, setup: RayClassSetup):
    """Dedekind zeta with the Euler factors at S removed (closed form via Hurwitz zeta)."""
    val = zeta_k_oracle(setup.n, z, dps=min(working_dps(), 30))
    for P in setup.S:
        val *= 1 - P.norm ** (-complex(z))
    return val


def zeta_K_S_upper(z, setup: RayClassSetup):
    """Euler product over the primes of S only."""
    out = 1 + 0j
    for P in setup.S:
        out /= 1 - P.norm ** (-complex(z))
    return out


def l_star(s, psi, a: IdealK, X, setup: RayClassSetup = None, conjugate=False) -> ComplexVal:
    """L_{S u S_a}(s, psi chi_a) truncated at N <= X, times the correction factor."""
    setup = setup or default_setup(3)
    s = complex(s)
    L = _ideal_list(setup.n, int(X))
    ch = _family_char(a, setup, conjugate)
    v = psi_values(psi, L, setup) * ch.values(L.a, L.b) * np.exp(-s * np.log(L.norms.astype(float)))
    part = complex(math.fsum(v.real), math.fsum(v.imag))
    A = correction_A(s, psi, a, setup, conjugate)
    err = len(L) * 1e-16 + (_tail_bound(setup.n, s.real, X) if s.real > 1 else math.inf)
    return ComplexVal.of(part * A, err * abs(A))


def l_star_euler(s, psi, a: IdealK, P_max, setup: RayClassSetup = None) -> complex:
    """Euler-product route: prod over primes outside S u S_a of (1 - psi chi_a(p) N(p)^-s)^-1, times A."""
    from .algebra import prime_ideals_upto
    setup = setup or default_setup(3)
    s = complex(s)
    ch = chi(a, setup)
    out = 1 + 0j
    for P in prime_ideals_upto(setup.n, P_max):
        x = psi_value(psi, P, setup) * complex(ch(P))
        if x:
            out /= 1 - x * P.norm ** (-s)
    return out * correction_A(s, psi, a, setup)


def _a_star(a: IdealK, b: IdealK):
    b1 = canonical_decompose(b).squarefull_part
    out = IdealK.unit(a.n)
    for P, e in a.factorization():
        if not P.divides(b1):
            out = out * P ** e
    return out


def _eps_of(b: IdealK, setup: RayClassSetup, conjugate):
    key = ("eps", b.key, conjugate)
    hit = setup.cache.get(key)
    if hit is None:
        hit = gauss_epsilon(_family_char(b, setup, conjugate)).value
        setup.cache[key] = hit
    return hit


def dirichlet_D(w, a: IdealK, psi, cutoff, setup: RayClassSetup = None, conjugate=False) -> ComplexVal:
    """zeta_{K,S}(nw - n/2 + 1) * sum_{b in I(S), N(b) <= cutoff} eps(chi_b) conj(chi_b)(a*) psi(b) g(a, b) N(b)^-w."""
    setup = setup or default_setup(3)
    n = setup.n
    w = complex(w)
    total = 0j
    terms = 0
    for b in (_ideal_list(n, int(cutoff)).ideals() if cutoff >= 1 else []):
        if not setup.in_IS(b):
            continue
        g = g_ideal(a, b)
        if not g:
            continue
        x = psi_value(psi, b, setup)
        if b.is_one():
            total += 1
            continue
        ast = _a_star(a, b)
        cb = complex(_family_char(b, setup, conjugate)(ast)).conjugate()
        total += _eps_of(b, setup, conjugate) * cb * x * float(g) * b.norm ** (-w)
        terms += 1
    z = zeta_KS(n * w - n / 2 + 1, setup)
    # |eps| = 1, |g(a, b)| <= N(b)^(1/2) tau(b): tail of sum N^(1/2 - Re w + 0.1)
    sig = w.real - 0.6
    err = _tail_bound(n, sig, max(cutoff, 1)) * 4 if sig > 1 else math.inf
    return ComplexVal.of(z * total, abs(z) * err + 1e-15 * max(1, terms))


# --- Z_1, Z_2 ---------------------------------------------------------------------------

def z_eval(which, s, w, psi=None, psi2=None, cutoffs=(100, 100), setup: RayClassSetup = None,
           conjugate=False) -> ComplexVal:
    """Truncated Z_1 (sum over a of L*(s, psi, a) psi'(a) N(a)^-w) or Z_2 (sum of D(w, a, psi') psi(a) N(a)^-s).

    `conjugate=True` runs the same construction over the conjugate family conj(chi_a).
    Outside Re s, Re w >= 2 the error field is infinite (a warning, not a failure).
    """
    setup = setup or default_setup(3)
    n = setup.n
    s, w = complex(s), complex(w)
    A, B = cutoffs
    total = ComplexVal(0.0)
    fam = [I for I in (_ideal_list(n, int(A)).ideals() if A >= 1 else []) if setup.in_IS(I)]
    for a in fam:
        if which == 1:
            inner = l_star(s, psi, a, B, setup, conjugate)
            coef = psi_value(psi2, a, setup) * a.norm ** (-w)
        elif which == 2:
            inner = dirichlet_D(w, a, psi2, B, setup, conjugate)
            coef = psi_value(psi, a, setup) * a.norm ** (-s)
        else:
            raise ValueError("which must be 1 or 2")
        total = total + inner * coef
    outer = w.real if which == 1 else s.real
    inner_sig = s.real if which == 1 else w.real
    if min(outer, inner_sig) < 2:
        warnings.warn("evaluation outside the certified region Re s, Re w >= 2")
        return ComplexVal(total.re, total.im, math.inf)
    # outer tail: |inner| <= zeta_K(Re)-size times N(a)^0.5 (correction-factor divisor bound)
    big = abs(zeta_k_oracle(n, inner_sig)) * (2 if which == 1 else 4 * abs(zeta_k_oracle(n, n * inner_sig - n / 2 + 1)))
    tail = big * _tail_bound(n, outer - 0.5, max(A, 1))
    return ComplexVal(total.re, total.im, total.err + tail)


def z_naive(s, w, psi=None, psi2=None, cutoffs=(100, 100), setup: RayClassSetup = None) -> complex:
    """Brute-force double series for Z_1 from prime values of the symbol and multiplicativity."""
    from .characters import chi_eval_definition
    setup = setup or default_setup(3)
    n = setup.n
    s, w = complex(s), complex(w)
    A, B = cutoffs
    bs = [b for b in _ideal_list(n, int(B)).ideals() if setup.in_IS(b)]
    facs = [b.factorization() for b in bs]
    primes = sorted({P for f in facs for P, _ in f}, key=lambda P: (P.norm, P.key))
    total = 0j
    for a in _ideal_list(n, int(A)).ideals():
        if not setup.in_IS(a):
            continue
        a1 = canonical_decompose(a).squarefull_part
        pv = {}
        for P in primes:
            pv[P] = 0j if P.divides(a1) else complex(chi_eval_definition(a, P, setup))
        inner = 0j
        for b, f in zip(bs, facs):
            x = psi_value(psi, b, setup)
            for P, e in f:
                x *= pv[P] ** e
                if x == 0:
                    break
            inner += x * b.norm ** (-s)
        total += inner * correction_A(s, psi, a, setup) * psi_value(psi2, a, setup) * a.norm ** (-w)
    return total


@dataclass
class ZRow:
    s: complex
    w: complex
    Z: ComplexVal
    cutoffs: tuple

    def row(self):
        e = "inf" if math.isinf(self.Z.err) else f"{self.Z.err:.3g}"
        return [f"{self.s.real:g}", f"{self.s.imag:g}", f"{self.w.real:g}", f"{self.w.imag:g}",
                f"{self.Z.re:.15g}", f"{self.Z.im:.15g}", e, self.cutoffs[0], self.cutoffs[1]]


Z_HEADER = ("re_s", "im_s", "re_w", "im_w", "re_Z", "im_Z", "err", "cutoff_a", "cutoff_b")


def z_grid(which, points, cutoffs, setup: RayClassSetup = None, psi=None, psi2=None):
    rows = []
    for s, w in points:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            rows.append(ZRow(complex(s), complex(w), z_eval(which, s, w, psi, psi2, cutoffs, setup), tuple(cutoffs)))
    return rows


def z_grid_csv(rows, fh=None):
    out = fh or io.StringIO()
    wr = csv.writer(out, lineterminator="\n")
    wr.writerow(Z_HEADER)
    for r in rows:
        wr.writerow(r.row())
    return out.getvalue() if fh is None else None


def check_z1_functional_equation(alpha, s, w, psi, psi2, cutoffs, setup: RayClassSetup = None):
    """Residual of Z_1(s, w; psi, psi') = sum alpha[rho, rho'] Z_1(w, s; rho, rho').

    No coefficient matrix is built in; `alpha` must be supplied as a mapping
    {(rho, rho'): complex}.  Passing None raises.
    """
    if alpha is None:
        raise NotImplementedError("supply the functional-equation coefficients to run this check")
    lhs = z_eval(1, s, w, psi, psi2, cutoffs, setup).value
    rhs = sum(c * z_eval(1, w, s, r, r2, cutoffs, setup).value for (r, r2), c in alpha.items())
    return abs(lhs - rhs)


# --- archimedean factors ----------------------------------------------------------------

def _pole_check(*args):
    for z in args:
        z = complex(z)
        if z.real <= 0.5 and abs(z.imag) < 1e-6 and abs(z.real - round(z.real)) < 1e-6:
            raise PoleProximityError(f"Gamma argument {z} is at a pole")


def _gamma_nz_over_z(z, n):
    """Gamma(n z) / Gamma(z), continuous at z = 0 with value 1/n."""
    if abs(z) < mp.mpf(10) ** (-mp.mp.dps + 5):
        return mp.mpf(1) / n
    return mp.gamma(n * z) / mp.gamma(z)


def gamma_factor(which, s, w, n=3, d=2):
    """G_1 or G_2 exactly as displayed (with the d/2 power)."""
    with mp.workdps(working_dps()):
        s, w = mp.mpc(s), mp.mpc(w)
        tp = 2 * mp.pi
        if which == 1:
            z = s + w - 1
            _pole_check(s, w, n * z if abs(z) > 1e-12 else 1)
            core = mp.gamma(s) * mp.gamma(w) * _gamma_nz_over_z(z, n) / (tp ** 1.5 * (tp * n) ** (n * z - 0.5))
        elif which == 2:
            z = w - 0.5
            _pole_check(s, s + w - 0.5, n * z if abs(z) > 1e-12 else 1)
            core = mp.gamma(s) * mp.gamma(s + w - 0.5) * _gamma_nz_over_z(z, n) / (tp ** (2 * s + 1) * (tp * n) ** (n * z - 0.5))
        else:
            raise ValueError("which must be 1 or 2")
        return complex(core ** (mp.mpf(d) / 2))


def quotient_check(s, w, n=3, d=2):
    with mp.workdps(working_dps()):
        s, w = mp.mpc(s), mp.mpc(w)
        lhs = mp.mpc(gamma_factor(2, 1 - s, w + s - 0.5, n, d)) / mp.mpc(gamma_factor(1, s, w, n, d))
        rhs = (mp.gamma(1 - s) / (mp.gamma(s) * (2 * mp.pi) ** (1.5 - 2 * s))) ** (mp.mpf(d) / 2)
        return float(abs(lhs - rhs) / max(1, abs(rhs)))


def conductor_measure(s, w, n=3, d=2):
    s, w = complex(s), complex(w)
    return (abs(s) * abs(s + w) ** (n - 1) * abs(w)) ** d


def c1_measure(t, u, n=3, d=2):
    return ((1 + abs(u)) * (1 + abs(u + t)) ** (n - 1)) ** d


def r_choice(t, P, d=2):
    return (1 + abs(t)) ** (d / 2) * math.sqrt(P)


# --- weights ------------------------------------------------------------------------

def weight_P(z, w):
    z = complex(z)
    if z.real == 0:
        raise ValueError("P_z needs Re z != 0")
    w = np.asarray(w, dtype=complex)
    return (1 - 2.0 ** (z - w)) * (1 - 2.0 ** (z + w)) / (1 - 2.0 ** z) ** 2


@dataclass
class WeightSpec:
    t: float
    u: float
    A: int = 3
    n: int = 3
    d: int = 2

    @property
    def zeros(self):
        t, u, n = self.t, self.u, self.n
        return (0.5 - 1j * u, -0.5 - 1j * u, 1 / n - 1j * (u + t), -1 / n - 1j * (u + t))


def weight_H(spec: WeightSpec, w):
    w = np.asarray(w, dtype=complex)
    A, n, d = spec.A, spec.n, spec.d
    out = np.cos(np.pi * w / (3 * A)) ** (-3 * A * n * d)
    for z in spec.zeros:
        out = out * weight_P(z, w)
    return out


def _log_g1(s, w, n, d):
    z = s + w - 1
    small = np.abs(z) < 1e-12
    zz = np.where(small, 1.0, z)
    lr = np.where(small, -math.log(n), loggamma(n * zz) - loggamma(zz))
    core = (loggamma(s) + loggamma(w) + lr - 1.5 * math.log(2 * math.pi)
            - (n * z - 0.5) * math.log(2 * math.pi * n))
    return core * d / 2


def _v_integrand(spec: WeightSpec, sign, c, h, T):
    t, u, n, d = spec.t, spec.u, spec.n, spec.d
    tau = np.arange(-T, T + h / 2, h)
    w = c + 1j * tau
    s1 = 0.5 + sign * 1j * t
    w1 = 0.5 + sign * 1j * u + w
    base = _log_g1(np.array(0.5 + 1j * t), np.array(0.5 + 1j * u), n, d)
    ratio = np.exp(_log_g1(np.full_like(w, s1), w1, n, d) - base)
    return w, ratio * weight_H(spec, w) / w * h / (2 * np.pi)


def weight_V(spec: WeightSpec, sign, y, c=1.0, h=0.02, T=12.0, check=True):
    """V(y) = (1/2 pi i) int_(c) G_1(1/2 +- it, 1/2 +- iu + w) / G_1(1/2 + it, 1/2 + iu) H(w) (sqrt(C_1) y)^-w dw/w."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any(y <= 0):
        raise ValueError("V needs y > 0")
    C1 = c1_measure(spec.t, spec.u, spec.n, spec.d)

    def run(hh):
        w, K = _v_integrand(spec, sign, c, hh, T)
        return np.exp(-np.outer(np.log(math.sqrt(C1) * y), w)) @ K

    val = run(h)
    if check:
        alt = run(2 * h)
        diff = float(np.max(np.abs(val - alt)))
        if not np.isfinite(diff) or diff > 1e-8 * max(1.0, float(np.max(np.abs(val)))):
            raise QuadratureError(f"V quadrature unsettled ({diff:.2e})")
    return val


def v_decay_constant(spec: WeightSpec, sign, A=None, h=0.02, T=12.0):
    """c_A with |V(y)| <= c_A (1 + y)^-A for y >= 1, from the integral on Re w = A."""
    A = A or spec.A
    if A >= 1.5 * spec.A:
        raise ValueError("line Re w = A must stay inside the holomorphy strip of H")
    C1 = c1_measure(spec.t, spec.u, spec.n, spec.d)
    w, K = _v_integrand(spec, sign, float(A), h, T)
    B = float(np.sum(np.abs(K))) * C1 ** (-A / 2)
    return 2 ** A * B


__all__ = [
    "Surd", "gauss_coeff", "g_ideal", "correction_A", "correction_bound_exponent", "l_star",
    "l_star_euler", "dirichlet_D", "z_eval", "z_naive", "z_grid", "z_grid_csv", "Z_HEADER",
    "MDSPoint", "gamma_factor", "quotient_check", "conductor_measure", "c1_measure", "r_choice",
    "weight_P", "weight_H", "weight_V", "WeightSpec", "v_decay_constant", "check_z1_functional_equation",
    "PoleProximityError", "zeta_KS", "conj_psi", "psi_values", "psi_value",
]
