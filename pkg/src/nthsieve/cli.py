"""Batch driver: ``nthsieve run CONFIG``, ``nthsieve plot CURVE ...``, ``nthsieve verify-setup``.

Config files are INI with three sections; every key has a default and unknown
keys are rejected before any computation starts::

    [setup]
    n = 3
    precision = 50

    [run]
    experiment = recursion
    seed = 0
    output = out

    [params]
    alpha0 = 2
    k = 50
"""

from __future__ import annotations

import argparse
import configparser
import contextlib
import csv
import io
import itertools
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, field as dfield
from fractions import Fraction
from importlib import resources

EXIT_OK, EXIT_CONFIG, EXIT_ASSERT, EXIT_QUAD = 0, 2, 3, 4

EXPERIMENTS = ("symbols", "conductors", "reciprocity", "fe-residual", "second-moment",
               "nonvanishing", "sieve-grid", "recursion", "mds-grid", "g-sigma")
CURVES = ("g-sigma", "sieve-ratio-vs-MN", "moment-vs-N")

DEFAULTS = {
    "setup": {"n": "3", "field": "auto", "S": "default", "precision": "50"},
    "run": {"experiment": "", "seed": "0", "output": "out"},
    "params": {
        "N": "50", "M": "10,100", "t": "0", "sigma_from": "0.51", "sigma_to": "1.0",
        "sigma_step": "0.01", "trials": "200", "epsilon": "0.1", "j": "1", "grid": "8,16,32,64",
        "cutoff_a": "100", "cutoff_b": "100", "s_values": "2,3", "w_values": "2,3",
        "alpha0": "2", "k": "50", "tol": "1e-10", "max_conductor": "300", "window": "gamma:2",
        "threshold": "0.3",
    },
}
FIELD_TAGS = {3: ("auto", "Q(zeta3)"), 4: ("auto", "Q(i)")}


class ConfigError(ValueError):
    pass


class AssertionFailure(RuntimeError):
    pass


def _floats(text):
    return [float(x) for x in str(text).split(",") if x.strip()]


@dataclass
class RunConfig:
    n: int = 3
    field: str = "auto"
    S: str = "default"
    precision: int = 50
    experiment: str = ""
    seed: int = 0
    output: str = "out"
    params: dict = dfield(default_factory=lambda: dict(DEFAULTS["params"]))

    @classmethod
    def from_file(cls, path):
        if not os.path.exists(path):
            raise ConfigError(f"config file {path} not found")
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    @classmethod
    def from_text(cls, text):
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str
        try:
            cp.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(str(exc)) from exc
        for sec in cp.sections():
            if sec not in DEFAULTS:
                raise ConfigError(f"unknown section [{sec}]")
            for key in cp[sec]:
                if key not in DEFAULTS[sec]:
                    raise ConfigError(f"unknown key '{key}' in [{sec}]")
        get = lambda sec, key: cp.get(sec, key, fallback=DEFAULTS[sec][key])
        try:
            cfg = cls(
                n=int(get("setup", "n")), field=get("setup", "field"), S=get("setup", "S"),
                precision=int(get("setup", "precision")), experiment=get("run", "experiment").strip(),
                seed=int(get("run", "seed")), output=get("run", "output"),
                params={k: get("params", k) for k in DEFAULTS["params"]},
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        cfg.validate()
        return cfg

    def validate(self):
        if self.n not in (3, 4):
            raise ConfigError("n must be 3 or 4")
        if self.field not in FIELD_TAGS[self.n]:
            raise ConfigError(f"field tag {self.field!r} does not match n={self.n}")
        if self.S != "default":
            raise ConfigError("only S = default is supported")
        if self.precision < 16:
            raise ConfigError("precision must be at least 16 digits")
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        for key in ("N", "t", "sigma_from", "sigma_to", "sigma_step", "epsilon", "alpha0", "tol",
                    "max_conductor", "threshold"):
            try:
                float(self.params[key])
            except ValueError as exc:
                raise ConfigError(f"parameter {key} is not a number") from exc
        for key in ("trials", "j", "cutoff_a", "cutoff_b", "k"):
            try:
                int(self.params[key])
            except ValueError as exc:
                raise ConfigError(f"parameter {key} is not an integer") from exc
        for key in ("M", "grid", "s_values", "w_values"):
            try:
                _floats(self.params[key])
            except ValueError as exc:
                raise ConfigError(f"parameter {key} is not a number list") from exc

    def p(self, key, cast=float):
        return cast(self.params[key])


@dataclass
class RunReport:
    config: dict
    files: list = dfield(default_factory=list)
    checks: list = dfield(default_factory=list)
    wall_time: float = 0.0

    def check(self, name, ok, detail=""):
        self.checks.append({"name": name, "passed": bool(ok), "detail": detail})

    @property
    def passed(self):
        return all(c["passed"] for c in self.checks)


def _write_csv(path, header, rows):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


def _write_text(path, text):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def load_baselines():
    with resources.files("nthsieve").joinpath("data/baselines.json").open(encoding="utf-8") as fh:
        return json.load(fh)


@contextlib.contextmanager
def _precision(cfg):
    """Config precision for the duration of a run; the environment variable wins."""
    if "NTHSIEVE_PRECISION" in os.environ:
        yield
        return
    os.environ["NTHSIEVE_PRECISION"] = str(cfg.precision)
    try:
        yield
    finally:
        del os.environ["NTHSIEVE_PRECISION"]


# --- experiments ----------------------------------------------------------------------

def _exp_symbols(cfg, rep, out):
    from .algebra import IdealList
    from .characters import chi, default_setup
    from .lfunctions import family
    st = default_setup(cfg.n)
    fam = [a for a in family(cfg.p("N"), st, squarefree=True)]
    rows, bad = [], 0
    for a in fam:
        ch = chi(a, st)
        if not (ch ** cfg.n).is_trivial():
            bad += 1
        for b in fam:
            v = ch(b)
            rows.append([a.norm, a.gen.a, a.gen.b, b.norm, b.gen.a, b.gen.b, v.code()])
    rep.files.append(_write_csv(os.path.join(out, "symbols.csv"),
                                ["norm_a", "a_gen_a", "a_gen_b", "norm_b", "b_gen_a", "b_gen_b", "code"], rows))
    rep.check("chi_a^n trivial", bad == 0, f"{bad} failures over {len(fam)} ideals")


def _exp_conductors(cfg, rep, out):
    from .algebra import canonical_decompose
    from .characters import chi, default_setup
    from .lfunctions import family
    st = default_setup(cfg.n)
    rows, bad = [], 0
    for a in family(cfg.p("N"), st, squarefree=True):
        f = chi(a, st).conductor
        a0 = a.radical() if a.norm > 1 else a
        ok = a0.divides(f) and f.divides(st.c * a0)
        bad += not ok
        rows.append([a.norm, a.gen.a, a.gen.b, f.norm, f.gen.a, f.gen.b, int(ok)])
    rep.files.append(_write_csv(os.path.join(out, "conductors.csv"),
                                ["norm_a", "a_gen_a", "a_gen_b", "norm_f", "f_gen_a", "f_gen_b", "bracketed"], rows))
    rep.check("a0 | cond | c a0", bad == 0, f"{bad} failures")


def _exp_reciprocity(cfg, rep, out):
    from .characters import default_setup, reciprocity_factor
    from .lfunctions import family
    st = default_setup(cfg.n)
    fam = family(cfg.p("N"), st, squarefree=True)
    seen, rows, bad = {}, [], 0
    for a, b in itertools.combinations(fam, 2):
        if not a.coprime_to(b):
            continue
        key = (tuple(st.class_of(a)), tuple(st.class_of(b)))
        v = reciprocity_factor(a, b, st).code()
        if seen.setdefault(key, v) != v:
            bad += 1
    for (ca, cb), v in sorted(seen.items()):
        rows.append([" ".join(map(str, ca)), " ".join(map(str, cb)), v])
    rep.files.append(_write_csv(os.path.join(out, "reciprocity.csv"), ["class_a", "class_b", "code"], rows))
    rep.check("reciprocity factor constant on class pairs", bad == 0, f"{bad} conflicts, {len(seen)} class pairs")


def _exp_fe_residual(cfg, rep, out):
    from .characters import default_setup, primitive_characters
    from .lfunctions import gauss_epsilon, smoothed_sum_check
    st = default_setup(cfg.n)
    corpus = primitive_characters(cfg.p("max_conductor"), st)
    rows, worst, worst_eps = [], 0.0, 0.0
    for ch in corpus:
        eps = gauss_epsilon(ch)
        worst_eps = max(worst_eps, abs(abs(eps.value) - 1))
        for M in _floats(cfg.params["M"]):
            r = smoothed_sum_check(ch, cfg.params["window"], M)
            worst = max(worst, r)
            f = ch.conductor
            rows.append([f.norm, f.gen.a, f.gen.b, ch.ell, f"{M:g}", f"{eps.re:.15g}", f"{eps.im:.15g}", f"{r:.3e}"])
    rep.files.append(_write_csv(os.path.join(out, "fe_residual.csv"),
                                ["norm_f", "f_gen_a", "f_gen_b", "ell", "M", "re_eps", "im_eps", "residual"], rows))
    rep.check("|eps| = 1 within 1e-10", worst_eps <= 1e-10, f"max deviation {worst_eps:.2e}")
    rep.check("smoothed identity residual <= 1e-6", worst <= 1e-6, f"max residual {worst:.2e} over {len(corpus)} characters")


def _moment_key(n, N, t):
    return f"n{n}:N{int(N)}:t{t:g}"


def _exp_second_moment(cfg, rep, out):
    from .characters import default_setup
    from .lfunctions import second_moment
    st = default_setup(cfg.n)
    N, t = cfg.p("N"), cfg.p("t")
    r = second_moment(N, t, st)
    rep.files.append(_write_text(os.path.join(out, "second_moment.csv"), r.to_csv()))
    norm = r.normalized(0.1, 2)
    summary = [[f"{N:g}", f"{t:g}", len(r.records), f"{r.moment:.12g}", f"{r.weighted_moment:.12g}", f"{norm:.12g}"]]
    rep.files.append(_write_csv(os.path.join(out, "second_moment_summary.csv"),
                                ["N", "t", "count", "moment", "weighted_moment", "normalized"], summary))
    base = load_baselines()["second_moment"].get(_moment_key(cfg.n, N, t))
    if base is None:
        rep.check("normalized moment within baseline", True, "no baseline recorded for this (n, N, t)")
    else:
        rep.check("normalized moment within baseline", norm <= 1.05 * base, f"{norm:.6g} vs baseline {base:.6g}")


def _exp_nonvanishing(cfg, rep, out):
    from .characters import default_setup
    from .lfunctions import nonvanishing_count, second_moment
    st = default_setup(cfg.n)
    N = cfg.p("N")
    r = second_moment(N, 0.0, st)
    k, frac = nonvanishing_count(N, st, report=r)
    rep.files.append(_write_text(os.path.join(out, "nonvanishing.csv"), r.to_csv()))
    rep.files.append(_write_csv(os.path.join(out, "nonvanishing_summary.csv"), ["N", "count", "total", "fraction"],
                                [[f"{N:g}", k, len(r.records), f"{frac:.6f}"]]))
    rep.check(f"non-vanishing fraction >= {cfg.p('threshold'):g}", frac >= cfg.p("threshold"), f"fraction {frac:.4f}")


def _exp_sieve_grid(cfg, rep, out):
    from .characters import default_setup
    from .sieve import SieveStats, large_sieve_ratio, log_slope
    st = default_setup(cfg.n)
    grid = _floats(cfg.params["grid"])
    stats = [large_sieve_ratio(M, N, cfg.p("trials", int), cfg.p("epsilon"), st, cfg.seed, cfg.p("j", int))
             for M in grid for N in grid]
    rep.files.append(_write_text(os.path.join(out, "sieve_grid.csv"), SieveStats.to_csv(stats)))
    slope = log_slope(stats)
    rep.check("log-ratio slope in [-0.1, 0.1]", -0.1 <= slope <= 0.1, f"slope {slope:.4f}")
    base = load_baselines()["sieve"].get(f"n{cfg.n}:j{cfg.p('j', int)}")
    worst = max(s.ratio for s in stats)
    if base is None:
        rep.check("max ratio within baseline", True, "no baseline recorded")
    else:
        rep.check("max ratio within baseline", worst <= 1.05 * base, f"{worst:.6g} vs baseline {base:.6g}")


def _exp_recursion(cfg, rep, out):
    from .sieve import exponent_recursion
    a0 = Fraction(cfg.params["alpha0"])
    seq = exponent_recursion(a0, cfg.p("k", int))
    rows = [[i, str(a), f"{float(a):.17g}"] for i, a in enumerate(seq)]
    rep.files.append(_write_csv(os.path.join(out, "recursion.csv"), ["step", "alpha_exact", "alpha"], rows))
    dec = all(x > y for x, y in zip(seq, seq[1:]))
    gap = float(seq[-1] - Fraction(4, 3))
    rep.check("strictly decreasing", dec)
    rep.check(f"final value within {cfg.p('tol'):g} of 4/3", abs(gap) <= cfg.p("tol"), f"gap {gap:.3e}")


def _exp_mds_grid(cfg, rep, out):
    from .characters import default_setup
    from .mds import z_grid, z_grid_csv
    st = default_setup(cfg.n)
    pts = [(s, w) for s in _floats(cfg.params["s_values"]) for w in _floats(cfg.params["w_values"])]
    cut = (cfg.p("cutoff_a", int), cfg.p("cutoff_b", int))
    rows = z_grid(1, pts, cut, st)
    rep.files.append(_write_text(os.path.join(out, "mds_grid.csv"), z_grid_csv(rows)))
    rep.check("values finite", all(math.isfinite(r.Z.re) and math.isfinite(r.Z.im) for r in rows))


def _exp_g_sigma(cfg, rep, out):
    path = os.path.join(out, "g_sigma.csv")
    rows = g_sigma_rows(cfg.p("sigma_from"), cfg.p("sigma_to"), cfg.p("sigma_step"))
    rep.files.append(_write_csv(path, ["sigma", "g"], [[f"{s:.10g}", f"{float(g):.15g}"] for s, g in rows]))
    vals = [g for _, g in rows]
    rep.check("monotone decreasing", all(x > y for x, y in zip(vals, vals[1:])))


RUNNERS = {
    "symbols": _exp_symbols, "conductors": _exp_conductors, "reciprocity": _exp_reciprocity,
    "fe-residual": _exp_fe_residual, "second-moment": _exp_second_moment,
    "nonvanishing": _exp_nonvanishing, "sieve-grid": _exp_sieve_grid, "recursion": _exp_recursion,
    "mds-grid": _exp_mds_grid, "g-sigma": _exp_g_sigma,
}


def run(cfg: RunConfig) -> RunReport:
    t0 = time.perf_counter()
    rep = RunReport(config=asdict(cfg))
    with _precision(cfg):
        RUNNERS[cfg.experiment](cfg, rep, cfg.output)
    rep.wall_time = time.perf_counter() - t0
    return rep


# --- plot data ------------------------------------------------------------------------

def _steps(lo, hi, step):
    if step <= 0:
        raise ValueError("step must be positive")
    if hi < lo:
        raise ValueError("empty range")
    k = int(math.floor((hi - lo) / step + 1e-9))
    return [round(lo + i * step, 12) for i in range(k + 1)]


def g_sigma_rows(lo, hi, step):
    from .lfunctions import density_exponent_g
    return [(s, density_exponent_g(Fraction(str(s)))) for s in _steps(lo, hi, step)]


def emit_plot_data(curve, lo, hi, step, out_path, n=3, seed=0):
    if curve not in CURVES:
        raise ValueError(f"unsupported curve {curve!r}; choose from {', '.join(CURVES)}")
    if curve == "g-sigma":
        rows = [[f"{s:.10g}", f"{float(g):.15g}"] for s, g in g_sigma_rows(lo, hi, step)]
        return _write_csv(out_path, ["sigma", "g"], rows)
    from .characters import default_setup
    st = default_setup(n)
    xs = _steps(lo, hi, step)
    if curve == "sieve-ratio-vs-MN":
        from .sieve import large_sieve_ratio
        rows = []
        for x in xs:
            s = large_sieve_ratio(x, x, 200, 0.1, st, seed)
            rows.append([f"{x * x:g}", f"{s.ratio:.12g}"])
        return _write_csv(out_path, ["MN", "ratio"], rows)
    from .lfunctions import second_moment
    rows = []
    for x in xs:
        r = second_moment(x, 0.0, st)
        rows.append([f"{x:g}", f"{r.moment:.12g}", f"{r.normalized(0.1, 2):.12g}"])
    return _write_csv(out_path, ["N", "moment", "normalized"], rows)


# --- verify-setup ----------------------------------------------------------------------

def verify_setup(n=3, limit=100, stream=None):
    """Brute-force check that reciprocity factors only depend on classes mod c; print R_c."""
    from .characters import default_setup, reciprocity_factor
    from .lfunctions import family
    stream = stream or sys.stdout
    st = default_setup(n)
    print(st.describe(), file=stream)
    fam = family(limit, st, squarefree=True)
    seen, bad, pairs = {}, 0, 0
    for a, b in itertools.combinations(fam, 2):
        if not a.coprime_to(b):
            continue
        pairs += 1
        key = (tuple(st.class_of(a)), tuple(st.class_of(b)))
        v = reciprocity_factor(a, b, st).code()
        bad += seen.setdefault(key, v) != v
    print(f"reciprocity brute force: {pairs} coprime pairs, {len(seen)} class pairs, {bad} conflicts", file=stream)
    return bad == 0


# --- entry point ---------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="nthsieve", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run one experiment from a config file")
    r.add_argument("config")
    p = sub.add_parser("plot", help="write plot data as CSV")
    p.add_argument("curve", choices=CURVES)
    p.add_argument("--from", dest="lo", type=float, required=True)
    p.add_argument("--to", dest="hi", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, default=3, choices=(3, 4))
    v = sub.add_parser("verify-setup", help="check the ray class setup and print R_c")
    v.add_argument("--n", type=int, default=3, choices=(3, 4))
    v.add_argument("--limit", type=int, default=100)
    return ap


def main(argv=None):
    from .lfunctions import QuadratureError
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "run":
            cfg = RunConfig.from_file(args.config)
            rep = run(cfg)
            for c in rep.checks:
                print(f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}  {c['detail']}".rstrip())
            for f in rep.files:
                print(f"wrote {f}")
            _write_text(os.path.join(cfg.output, "report.json"), json.dumps(asdict(rep), indent=2, default=str) + "\n")
            return EXIT_OK if rep.passed else EXIT_ASSERT
        if args.cmd == "plot":
            try:
                path = emit_plot_data(args.curve, args.lo, args.hi, args.step, args.out, args.n)
            except ValueError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_CONFIG
            print(f"wrote {path}")
            return EXIT_OK
        return EXIT_OK if verify_setup(args.n, args.limit) else EXIT_ASSERT
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QuadratureError as exc:
        print(f"quadrature failure: {exc}", file=sys.stderr)
        return EXIT_QUAD
    except AssertionError as exc:
        print(f"assertion failure: {exc}", file=sys.stderr)
        return EXIT_ASSERT


if __name__ == "__main__":
    sys.exit(main())
