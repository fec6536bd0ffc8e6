"""Hecke L-functions of the characters in `characters`: partial sums, root numbers,
the smoothed summation identity, central values and the experiment drivers.

Bulk sums run in float64 with exact integer phases; contour kernels and root
numbers are computed with mpmath at the working precision and then rounded.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field as dfield
from fractions import Fraction
from functools import lru_cache

import mpmath as mp
import numpy as np
from scipy.special import loggamma

from .algebra import CycInt, IdealK, IdealList, ResidueRing, canonical_decompose, field, mobius
from .characters import HeckeChar, RayClassSetup, chi, default_setup

DEFAULT_DPS = 50


def working_dps():
    env = os.environ.get("NTHSIEVE_PRECISION")
    return int(env) if env else DEFAULT_DPS


class QuadratureError(RuntimeError):
    """A contour quadrature did not settle to the requested tolerance."""


@dataclass
class ComplexVal:
    re: float
    im: float = 0.0
    err: float = 0.0

    @classmethod
    def of(cls, z, err=0.0):
        z = complex(z)
        return cls(z.real, z.imag, float(err))

    @property
    def value(self):
        return complex(self.re, self.im)

    def __complex__(self):
        return self.value

    def __abs__(self):
        return abs(self.value)

    def __add__(self, o):
        o = o if isinstance(o, ComplexVal) else ComplexVal.of(o)
        return ComplexVal.of(self.value + o.value, self.err + o.err)

    __radd__ = __add__

    def __sub__(self, o):
        o = o if isinstance(o, ComplexVal) else ComplexVal.of(o)
        return ComplexVal.of(self.value - o.value, self.err + o.err)

    def __mul__(self, o):
        o = o if isinstance(o, ComplexVal) else ComplexVal.of(o)
        e = abs(self.value) * o.err + abs(o.value) * self.err + self.err * o.err
        return ComplexVal.of(self.value * o.value, e)

    __rmul__ = __mul__

    def conj(self):
        return ComplexVal(self.re, -self.im, self.err)


def kappa(n):
    """Residue of the Dedekind zeta function at s = 1."""
    return math.pi / (3 * math.sqrt(3)) if n == 3 else math.pi / 4


# --- partial sums ------------------------------------------------------------------

def _ideal_values(ch: HeckeChar, L: IdealList):
    return ch.values(L.a, L.b)


def l_partial(ch: HeckeChar, s, X, tail=False, coprime_to=None) -> ComplexVal:
    """sum of chi(b) N(b)^(-s) over N(b) <= X (optionally only b coprime to an ideal)."""
    s = complex(s)
    if X < 1:
        return ComplexVal(0.0, 0.0, 0.0)
    L = IdealList(ch.n, X)
    if coprime_to is not None:
        L = L.subset(L.coprime_to(coprime_to))
    v = _ideal_values(ch, L) * np.exp(-s * np.log(L.norms.astype(float)))
    total = complex(math.fsum(v.real), math.fsum(v.imag))
    err = len(L) * 1e-16 * max(1.0, float(np.max(np.abs(v))) if len(v) else 1.0)
    if tail:
        err += zeta_tail_bound(ch.n, s.real, X)
    return ComplexVal.of(total, err)


def zeta_tail_bound(n, sigma, X):
    """Bound for sum over N(a) > X of N(a)^(-sigma), sigma > 1 (partial summation)."""
    if sigma <= 1:
        return math.inf
    k = kappa(n)
    X = float(X)
    return sigma * (k * X ** (1 - sigma) / (sigma - 1) + 4 * X ** (0.5 - sigma) / (sigma - 0.5)
                    + X ** (-sigma) / sigma)


# --- Gauss sums and root numbers -----------------------------------------------------

def _different(n):
    return CycInt(*field(n).different, n)


def gauss_sum(ch: HeckeChar, gamma: CycInt = None):
    """tau = sum over x mod f of chi_f(x) e(Tr(x / gamma)), with (gamma) = f * different."""
    n = ch.n
    f = ch.conductor
    if gamma is None:
        gamma = f.gen * _different(n)
    R = ResidueRing.of(f)
    idx = np.arange(R.size, dtype=np.int64)
    x0, x1 = R.rep(idx)
    e = ch.exponents(x0, x1)
    keep = e >= 0
    x0, x1, e = x0[keep], x1[keep], e[keep]
    g = gamma.conj()
    # Tr(x * conj(gamma)) / N(gamma)
    from .algebra import mul
    p0, p1 = mul(x0, x1, g.a, g.b, n)
    tr = (2 * p0 - p1) if n == 3 else 2 * p0
    Ng = gamma.norm()
    ph = (tr % Ng).astype(np.float64) / Ng + e.astype(np.float64) / n
    z = np.exp(2j * np.pi * ph)
    return complex(math.fsum(z.real), math.fsum(z.imag)), gamma


def gauss_epsilon(ch: HeckeChar) -> ComplexVal:
    """Root number of L(s, chi) for a primitive character (any infinity type)."""
    if ch.is_trivial():
        return ComplexVal(1.0, 0.0, 0.0)
    prim = ch.primitivize()
    if prim.conductor != ch.conductor:
        raise ValueError("gauss_epsilon needs a primitive character")
    tau, gamma = gauss_sum(ch)
    Nf = ch.conductor.norm
    eps = tau / math.sqrt(Nf)
    if ch.ell:
        z = gamma.to_complex()
        eps *= (z / abs(z)) ** ch.ell * (1j) ** (-abs(ch.ell))
    err = 1e-15 * math.sqrt(Nf) * 4
    return ComplexVal.of(eps, err)


# --- windows -----------------------------------------------------------------------

class Window:
    name = "window"

    def for_nu(self, nu):
        return self

    def __call__(self, x):
        raise NotImplementedError

    def mellin(self, s):
        raise NotImplementedError

    def support(self):
        """(lo, hi) outside of which W is below 1e-22 relative."""
        raise NotImplementedError

    def is_zero(self):
        return False


class ZeroWindow(Window):
    name = "zero"

    def __call__(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def mellin(self, s):
        return mp.mpf(0)

    def support(self):
        return (1.0, 1.0)

    def is_zero(self):
        return True


class BumpWindow(Window):
    """exp(-1/(1-u^2)) on [lo, hi], u the affine image in [-1, 1]."""

    name = "bump"

    def __init__(self, lo=1.0, hi=2.0):
        if not 0 < lo < hi:
            raise ValueError("need 0 < lo < hi")
        self.lo, self.hi = float(lo), float(hi)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        u = (2 * x - self.lo - self.hi) / (self.hi - self.lo)
        out = np.zeros_like(u)
        m = np.abs(u) < 1
        out[m] = np.exp(-1.0 / (1.0 - u[m] ** 2))
        return out

    def mellin(self, s):
        lo, hi = self.lo, self.hi

        def f(x):
            u = (2 * x - lo - hi) / (hi - lo)
            if abs(u) >= 1:
                return mp.mpf(0)
            return mp.exp(-1 / (1 - u * u)) * x ** (s - 1)

        return mp.quad(f, [lo, (lo + hi) / 2, hi])

    def support(self):
        return (self.lo, self.hi)

    def __repr__(self):
        return f"BumpWindow({self.lo}, {self.hi})"


class GammaWindow(Window):
    """x^k e^(-x): not compactly supported, but its dual kernel decays exponentially."""

    name = "gamma"

    def __init__(self, k=2):
        if k < 1:
            raise ValueError("k >= 1 keeps the contour shift free of poles")
        self.k = int(k) if float(k).is_integer() else float(k)

    def for_nu(self, nu):
        # the dual kernel decays rapidly only when k - nu/2 is a non-negative integer
        half = abs(nu) / 2
        k = max(math.floor(self.k) + half % 1, half)
        return self if k == self.k else GammaWindow(k)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return x ** self.k * np.exp(-x)

    def mellin(self, s):
        return mp.gamma(s + self.k)

    def support(self):
        # x^k e^-x < 1e-22 * peak
        hi = 60.0 + 2 * self.k * math.log(60.0 + self.k)
        return (1e-22 ** (1.0 / self.k), hi)

    def dual_closed_form(self, x, n, nu=0):
        """Dual kernel via Laguerre polynomials (nu even, k >= nu/2)."""
        m = self.k - nu / 2
        if m < 0 or not float(m).is_integer():
            raise ValueError("closed form needs k - nu/2 to be a non-negative integer")
        m = int(m)
        d = field(n).disc
        b = 4 * mp.pi ** 2 * mp.mpf(x) / d
        return (2 * mp.pi / mp.sqrt(d)) * mp.factorial(m) * b ** (nu / 2) * mp.exp(-b) * mp.laguerre(m, nu, b)

    def __repr__(self):
        return f"GammaWindow({self.k})"


def make_window(spec):
    if isinstance(spec, Window):
        return spec
    if spec in (None, "bump"):
        return BumpWindow()
    if spec == "zero":
        return ZeroWindow()
    if isinstance(spec, str) and spec.startswith("gamma"):
        k = spec[5:].strip(":") or "2"
        return GammaWindow(float(k))
    raise ValueError(f"unknown window {spec!r}")


# --- the dual kernel -------------------------------------------------------------------

class DualKernel:
    """W-dot(x) = (1/2 pi i) int W^(1-z) G(z+nu/2)/G(1-z+nu/2) (|d|/4pi^2)^(z-1/2) x^(-z) dz.

    Evaluated by the trapezoid rule on Re z = c; node values at mpmath precision.
    """

    def __init__(self, window: Window, n, nu=0, c=None, h=0.05, T=None, dps=None):
        self.window, self.n, self.nu = window, n, int(nu)
        dps = dps or working_dps()
        d = field(n).disc
        if c is None:
            c = (window.k + 1) / 2 if isinstance(window, GammaWindow) else 0.5
        if T is None:
            T = 70.0 if isinstance(window, GammaWindow) else 400.0
        self.c, self.h, self.T = c, h, T
        t = np.arange(-T, T + h / 2, h)
        with mp.workdps(dps):
            A = mp.mpf(d) / (4 * mp.pi ** 2)
            vals = []
            for tj in t:
                z = mp.mpc(c, tj)
                w = window.mellin(1 - z)
                g = mp.exp(mp.loggamma(z + mp.mpf(nu) / 2) - mp.loggamma(1 - z + mp.mpf(nu) / 2))
                vals.append(complex(w * g * A ** (z - mp.mpf(1) / 2)))
        self.t = t
        self.K = np.array(vals) * h / (2 * math.pi)

    def __call__(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        lx = np.log(x)[:, None]
        z = self.c + 1j * self.t[None, :]
        out = np.exp(-z * lx) @ self.K
        return out.real if self.nu == 0 and isinstance(self.window, (GammaWindow, BumpWindow)) else out


@lru_cache(maxsize=64)
def dual_kernel(window_key, n, nu, h=0.05):
    return DualKernel(make_window(window_key), n, nu, h=h)


def dual_hankel(window: Window, x, n, nu=0, nodes=4000):
    """Same kernel as (2 pi / sqrt|d|) int W(y) J_nu(4 pi sqrt(x y / |d|)) dy (float64)."""
    from scipy.special import jv
    d = field(n).disc
    lo, hi = window.support()
    y, w = np.polynomial.legendre.leggauss(nodes)
    y = lo + (hi - lo) * (y + 1) / 2
    w = w * (hi - lo) / 2
    x = np.atleast_1d(np.asarray(x, dtype=float))
    J = jv(nu, 4 * np.pi * np.sqrt(np.outer(x, y) / d))
    return (2 * np.pi / math.sqrt(d)) * (J * (window(y) * w)[None, :]).sum(axis=1)


def _window_key(W):
    if isinstance(W, GammaWindow):
        return f"gamma:{W.k}"
    if isinstance(W, BumpWindow):
        return ("bump", W.lo, W.hi) if (W.lo, W.hi) != (1.0, 1.0) else "bump"
    return W.name


def dual_values(W: Window, x, n, nu=0):
    """W-dot at the points x, by Mellin contour quadrature (Hankel quadrature for bumps)."""
    if isinstance(W, BumpWindow):
        return dual_hankel(W, x, n, nu)
    key = _window_key(W)
    K = dual_kernel(key, n, nu)
    return K(x)


def check_quadrature(W: Window, n, nu=0, xs=(0.05, 0.5, 2.0), tol=1e-10):
    """Compare two step sizes; raise QuadratureError if they disagree."""
    if isinstance(W, BumpWindow):
        a = dual_hankel(W, xs, n, nu, nodes=3000)
        b = dual_hankel(W, xs, n, nu, nodes=6000)
    else:
        key = _window_key(W)
        a = dual_kernel(key, n, nu, 0.05)(xs)
        b = dual_kernel(key, n, nu, 0.1)(xs)
    diff = float(np.max(np.abs(a - b)))
    if not np.isfinite(diff) or diff > tol:
        raise QuadratureError(f"dual kernel quadrature unsettled: step difference {diff:.2e}")
    return diff


# --- the smoothed identity ---------------------------------------------------------

@dataclass
class SmoothedCheck:
    lhs: complex
    rhs: complex
    residual: float
    polar: complex
    epsilon: complex
    decay: dict
    n_lhs: int
    n_rhs: int


def smoothed_sum_sides(ch: HeckeChar, W, M, dual_cut=None) -> SmoothedCheck:
    W = make_window(W)
    M = float(M)
    n = ch.n
    if W.is_zero():
        return SmoothedCheck(0j, 0j, 0.0, 0j, 1, {}, 0, 0)
    nu = abs(ch.ell)
    W = W.for_nu(nu)
    lo, hi = W.support()
    L = IdealList(n, math.floor(M * hi))
    if isinstance(W, BumpWindow):
        L = L.subset(L.norms > M * lo)
    lhs_terms = W(L.norms / M) * ch.values(L.a, L.b)
    lhs = complex(math.fsum(lhs_terms.real), math.fsum(lhs_terms.imag))
    Nf = ch.conductor.norm
    eps = gauss_epsilon(ch).value
    if dual_cut is None:
        dual_cut = 6.0 if isinstance(W, GammaWindow) else 2000.0
    Ld = IdealList(n, math.floor(dual_cut * Nf / M))
    check_quadrature(W, n, nu)
    x = M * Ld.norms / Nf
    ux, inv = np.unique(x, return_inverse=True)
    wd = dual_values(W, ux, n, nu)[inv]
    conj_vals = np.conj(ch.values(Ld.a, Ld.b))
    dual = wd * conj_vals
    rhs = M * eps / math.sqrt(Nf) * complex(math.fsum(dual.real), math.fsum(dual.imag))
    polar = 0j
    if ch.is_trivial():
        with mp.workdps(working_dps()):
            polar = M * complex(W.mellin(1)) * kappa(n)
    rhs += polar
    # empirical decay: sup of |W-dot(x)| x^A on a grid
    grid = np.geomspace(1.0, max(dual_cut, 2.0), 40)
    wg = np.abs(dual_values(W, grid, n, nu))
    decay = {A: float(np.max(wg * grid ** A)) for A in (1, 2, 4)}
    return SmoothedCheck(lhs, rhs, abs(lhs - rhs), polar, eps, decay, len(L), len(Ld))


def smoothed_sum_check(ch: HeckeChar, W, M, dual_cut=None) -> float:
    """|left - right| in the smoothed summation identity for a primitive character."""
    return smoothed_sum_sides(ch, W, M, dual_cut).residual


# --- central values ------------------------------------------------------------------

@dataclass
class AFE:
    """Pieces of the approximate functional equation at one s."""
    value: complex
    err: float
    length: int


def _u_kernel_nodes(s, nu, c, h=0.1, T=60.0):
    t = np.arange(-T, T + h / 2, h)
    u = c + 1j * t
    return u, np.exp(loggamma(s + u + nu / 2)) / u * h / (2 * np.pi)


def u_weight(s, y, Q, nu=0, c=None, h=0.1):
    """U_s(y) = (1/2 pi i) int_(c) G(s+u+nu/2) (Q/y)^u du/u, so that U_s / G(s+nu/2) -> 1 as y -> 0."""
    if c is None:
        # stay a unit distance right of u = 0 and of the gamma poles
        c = max(1.0, 1.0 - complex(s).real - nu / 2)
    u, K = _u_kernel_nodes(complex(s), nu, c, h)
    ly = np.log(Q / np.asarray(y, dtype=float))[:, None]
    return np.exp(u[None, :] * ly) @ K


def l_value(ch: HeckeChar, s, length_factor=1.0, eps=None) -> ComplexVal:
    """L(s, chi) by the approximate functional equation (any s away from the poles)."""
    n = ch.n
    s = complex(s)
    nu = abs(ch.ell)
    d = field(n).disc
    Nf = ch.conductor.norm
    Q = math.sqrt(d * Nf) / (2 * math.pi)
    if eps is None:
        eps = gauss_epsilon(ch).value
    # U_s(y) ~ e^(-y/Q) once y/Q exceeds |s|
    Y = Q * (45.0 + 1.6 * (abs(s.imag) + abs(s.real))) * length_factor
    L = IdealList(n, math.floor(Y))
    ux, inv = np.unique(L.norms, return_inverse=True)
    vals = ch.values(L.a, L.b)
    logs = np.log(L.norms.astype(float))

    U1 = u_weight(s, ux, Q, nu)[inv]
    U2 = u_weight(1 - s, ux, Q, nu)[inv]
    t1 = vals * np.exp(-s * logs) * U1
    t2 = np.conj(vals) * np.exp(-(1 - s) * logs) * U2
    fac = eps * Q ** (1 - 2 * s)
    lam = np.sum(t1) + fac * np.sum(t2)
    if ch.is_trivial():
        r1 = Q * kappa(n)
        lam -= (r1 / (1 - s) - r1 / (-s)) * Q ** (-s)
    g = np.exp(loggamma(s + nu / 2))
    total = lam / g
    # truncation estimate from the outer half of the terms, plus rounding
    tail = L.norms > Y / 2
    err = float(np.sum(np.abs(t1[tail])) + abs(fac) * np.sum(np.abs(t2[tail]))) / abs(g)
    scale = float(np.sum(np.abs(t1)) + abs(fac) * np.sum(np.abs(t2))) / abs(g)
    err = max(err, 1e-14 * max(1.0, scale))
    return ComplexVal.of(total, err)


def l_central(ch: HeckeChar, t=0.0, length_factor=1.0) -> ComplexVal:
    return l_value(ch, 0.5 + 1j * t, length_factor)


def zeta_k_oracle(n, s, dps=30):
    """zeta_K(s) = zeta(s) L(s, chi_d) through Hurwitz zeta values."""
    with mp.workdps(dps):
        s = mp.mpc(s)
        if n == 3:
            Ld = mp.power(3, -s) * (mp.zeta(s, mp.mpf(1) / 3) - mp.zeta(s, mp.mpf(2) / 3))
        else:
            Ld = mp.power(4, -s) * (mp.zeta(s, mp.mpf(1) / 4) - mp.zeta(s, mp.mpf(3) / 4))
        return complex(mp.zeta(s) * Ld)


# --- experiment drivers --------------------------------------------------------------

@dataclass
class LRecord:
    ideal: IdealK
    norm: int
    L: ComplexVal
    nonzero: bool
    weight: float = 1.0  # (N a_2)^(n-2)


@dataclass
class LReport:
    N: float
    t: float
    records: list = dfield(default_factory=list)

    @property
    def moment(self):
        return math.fsum(abs(r.L.value) ** 2 for r in self.records)

    @property
    def weighted_moment(self):
        return math.fsum(abs(r.L.value) ** 2 * r.weight for r in self.records)

    @property
    def nonvanishing(self):
        return sum(1 for r in self.records if r.nonzero)

    def normalized(self, eps=0.1, d=2):
        return self.moment / (self.N ** (1 + eps) * (1 + abs(self.t)) ** (d * (1 + eps) / 2))

    def to_csv(self, fh=None):
        out = fh or io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["norm_a", "ideal_gen_a", "ideal_gen_b", "re_L", "im_L", "err", "nonzero"])
        for r in self.records:
            w.writerow([r.norm, r.ideal.gen.a, r.ideal.gen.b, f"{r.L.re:.15g}", f"{r.L.im:.15g}",
                        f"{r.L.err:.3g}", int(r.nonzero)])
        return out.getvalue() if fh is None else None


def family(N, setup: RayClassSetup, squarefree=False):
    """Ideals of I(S) with norm <= N in the fixed enumeration order."""
    if N < 1:
        return []
    L = IdealList(setup.n, N)
    mask = np.ones(len(L), dtype=bool)
    for P in setup.S:
        mask &= ~L.divisible_by(P)
    if squarefree:
        mask &= L.squarefree_mask()
    return L.subset(mask).ideals()


def nonzero_flag(L: ComplexVal):
    return abs(L.value) > max(10 * L.err, 1e-6)


def second_moment(N, t=0.0, setup: RayClassSetup = None) -> LReport:
    setup = setup or default_setup(3)
    rep = LReport(N, t)
    for a in family(N, setup):
        ch = chi(a, setup)
        val = l_central(ch, t)
        a2 = canonical_decompose(a).nth_power_root
        rep.records.append(LRecord(a, a.norm, val, nonzero_flag(val), float(a2.norm) ** (setup.n - 2)))
    return rep


def nonvanishing_count(N, setup: RayClassSetup = None, report: LReport = None):
    """(count, fraction) of a in I(S), N(a) <= N, with L(1/2, chi_a) detectably non-zero."""
    setup = setup or default_setup(3)
    if N < 1:
        return 0, 0.0
    rep = report if report is not None and report.t == 0 else second_moment(N, 0.0, setup)
    k = rep.nonvanishing
    return k, k / max(1, len(rep.records))


def mollifier_MX(ch: HeckeChar, s, X, setup: RayClassSetup = None) -> ComplexVal:
    """sum over b in I(S), N(b) <= X of mu(b) chi(b) N(b)^(-s)."""
    n = ch.n
    if X < 1:
        return ComplexVal(0.0)
    L = IdealList(n, X)
    S = setup.S if setup is not None else [p for p, _ in IdealK.of(n, 0, n).factorization()]
    mask = np.ones(len(L), dtype=bool)
    for P in S:
        mask &= ~L.divisible_by(P)
    L = L.subset(mask & L.squarefree_mask())
    mu = np.array([mobius(L.ideal(i)) for i in range(len(L))], dtype=float)
    v = mu * ch.values(L.a, L.b) * np.exp(-complex(s) * np.log(L.norms.astype(float)))
    return ComplexVal.of(complex(math.fsum(v.real), math.fsum(v.imag)), len(L) * 1e-16)


def l_S_partial(ch: HeckeChar, s, X, setup: RayClassSetup = None):
    S = setup.s_ideal if setup is not None else IdealK.of(ch.n, 0, ch.n)
    return l_partial(ch, s, X, tail=True, coprime_to=S)


# --- the zero-density exponent ---------------------------------------------------------

def _g_branches(sigma: Fraction):
    hi = 2 * (10 * sigma - 7) * (1 - sigma) / (24 * sigma - 12 * sigma ** 2 - 11)
    lo = 8 * (1 - sigma) / (7 - 6 * sigma)
    return hi, lo


def density_exponent_g(sigma, branch=None) -> Fraction:
    """g(sigma) for 1/2 < sigma <= 1 (exact); `branch` in {'high', 'low'} forces one formula."""
    s = Fraction(sigma) if not isinstance(sigma, float) else Fraction(str(sigma))
    if branch is None and not (Fraction(1, 2) < s <= 1):
        raise ValueError(f"sigma={sigma} outside (1/2, 1]")
    hi, lo = _g_branches(s)
    if branch == "high":
        return hi
    if branch == "low":
        return lo
    return hi if s > Fraction(5, 6) else lo


# --- optional: zero counting by the argument principle ------------------------------------

def count_zeros(ch: HeckeChar, sigma, T, steps=400):
    """Number of zeros of L(s, chi) with sigma <= Re s <= 2, |Im s| <= T (argument principle).

    Not part of any acceptance criterion: the corresponding bound is asymptotic.
    """
    eps = gauss_epsilon(ch).value
    pts = []
    k = steps // 4
    for j in range(k):
        pts.append(complex(sigma + (2 - sigma) * j / k, -T))
    for j in range(k):
        pts.append(complex(2, -T + 2 * T * j / k))
    for j in range(k):
        pts.append(complex(2 - (2 - sigma) * j / k, T))
    for j in range(k):
        pts.append(complex(sigma, T - 2 * T * j / k))
    pts.append(pts[0])
    vals = [l_value(ch, z, eps=eps).value for z in pts]
    arg = 0.0
    for a, b in zip(vals, vals[1:]):
        arg += math.atan2((b / a).imag, (b / a).real)
    return round(arg / (2 * math.pi))


__all__ = [
    "ComplexVal", "LReport", "LRecord", "QuadratureError", "SmoothedCheck", "Window", "BumpWindow",
    "GammaWindow", "ZeroWindow", "make_window", "DualKernel", "dual_values", "dual_hankel",
    "l_partial", "gauss_sum", "gauss_epsilon", "smoothed_sum_check", "smoothed_sum_sides",
    "l_value", "l_central", "zeta_k_oracle", "second_moment", "nonvanishing_count",
    "mollifier_MX", "density_exponent_g", "count_zeros", "family", "kappa", "working_dps",
]
