"""Experiment runner: reproduces the outage/capacity/design curves as CSV.

Subcommands: outage, capacity, gain-vs-width, ports-vs-gain,
width-vs-ports, design, selftest.  Flags override a ``key = value``
config file; identical spec + seed give byte-identical CSV regardless of
``--threads``.  Exit codes: 0 success, 2 all design cells infeasible,
1 error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import analytic, design, montecarlo
from .channel import FamaScenario, make_geometry
from .errors import (ExactCapError, FamaLabError, InfeasibleDesignError,
                     PrecisionLossError)

CSV_HEADER = ("gamma_db,N,W,NI,sigma,sigma_i,method,value,ci_halfwidth,"
              "capacity_lb,mult_gain,note")

AXES = ("gamma_db", "n_ports", "n_interferers", "width", "mult_gain")
OUTAGE_METHODS = ("exact", "bound-I", "bound-II", "mc")

DEFAULTS = {
    "gamma_db": 10.0,
    "ports": 20,
    "width": 0.5,
    "interferers": 5,
    "sigma": 1.0,
    "sigma_i": None,         # None -> sqrt(NI) * sigma
    "methods": "auto",
    "trials": 100_000,
    "seed": 12345,
    "threads": None,         # None -> FAMA_LAB_THREADS or cpu count
    "mult_gain": 2.0,
    "mu": None,
    "values": None,
    "axis": None,
    "out": None,
    "outer_nodes": 64,
    "inner_nodes": 64,
    "tolerance": 1e-9,
    "tail_cutoff": 45.0,
    "refine_mc": False,
    "plot_script": None,
    "config": None,
}


def fmt(x) -> str:
    """Floats at 9 significant digits; ints verbatim; None empty."""
    if x is None or x == "":
        return ""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    return f"{x:.9g}"


@dataclass
class Row:
    gamma_db: float
    n_ports: int
    width: float
    n_interferers: int
    sigma: float
    sigma_i: float
    method: str
    value: float | None
    ci_halfwidth: float | None
    capacity_lb: float | None
    mult_gain: float | None
    note: str = ""

    def render(self) -> str:
        note = self.note.replace(",", ";").replace("\n", " ")
        return ",".join([
            fmt(self.gamma_db), fmt(self.n_ports), fmt(self.width),
            fmt(self.n_interferers), fmt(self.sigma), fmt(self.sigma_i),
            self.method, fmt(self.value), fmt(self.ci_halfwidth),
            fmt(self.capacity_lb), fmt(self.mult_gain), note,
        ])


@dataclass
class SweepSpec:
    """Axis + fixed parameters + methods for one experiment."""

    command: str
    axis: str
    axis_values: list
    gamma_db: float
    n_ports: int
    width: float
    n_interferers: int
    sigma: float
    sigma_i: float | None
    methods: tuple
    trials: int
    seed: int
    mult_gain: float
    mu: float | None
    refine_mc: bool = False
    quad: analytic.QuadratureSettings = field(
        default_factory=analytic.QuadratureSettings)

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"unknown axis {self.axis!r}")
        if not self.axis_values:
            raise ValueError("axis values must be nonempty")
        if any(b <= a for a, b in zip(self.axis_values, self.axis_values[1:])):
            raise ValueError("axis values must be strictly increasing")
        if "mc" in self.methods and self.trials < 1000:
            raise ValueError("mc method requires trials >= 1000")
        bad = set(self.methods) - set(OUTAGE_METHODS) - {"auto"}
        if bad:
            raise ValueError(f"unknown methods: {sorted(bad)}")

    def point(self, axis_value):
        """Fixed parameters with the axis value substituted."""
        p = {
            "gamma_db": self.gamma_db, "n_ports": self.n_ports,
            "width": self.width, "n_interferers": self.n_interferers,
            "mult_gain": self.mult_gain,
        }
        p[self.axis] = axis_value
        if self.axis in ("n_ports", "n_interferers"):
            p[self.axis] = int(round(axis_value))
        return p


def scenario_for(spec: SweepSpec, p: dict) -> FamaScenario:
    gamma = 10.0 ** (p["gamma_db"] / 10.0)
    sigma_i = spec.sigma_i
    if sigma_i is None:
        sigma_i = math.sqrt(p["n_interferers"]) * spec.sigma
    return FamaScenario(make_geometry(p["n_ports"], p["width"]), spec.sigma,
                        sigma_i, p["n_interferers"], gamma)


def _metric_cols(eps: float, n_interferers: int, gamma: float):
    cap, gain = montecarlo.network_metrics_from_outage(eps, n_interferers, gamma)
    return cap, gain


def _outage_rows_for_point(spec: SweepSpec, p: dict) -> list[Row]:
    sc = scenario_for(spec, p)
    methods = spec.methods
    if methods == ("auto",):
        base = "exact" if sc.geometry.n_ports <= analytic.EXACT_CAP else "bound-I"
        methods = (base, "mc") if spec.trials >= 1000 else (base,)
    rows = []
    for method in methods:
        value = ci = cap = gain = None
        note = ""
        try:
            if method == "exact":
                if sc.geometry.n_ports > analytic.EXACT_CAP:
                    raise ExactCapError(
                        f"exact method limited to N <= {analytic.EXACT_CAP}",
                        cap=analytic.EXACT_CAP)
                est = analytic.outage_exact(sc, spec.quad)
            elif method == "bound-I":
                est = analytic.outage_ub_integral(sc, spec.quad)
            elif method == "bound-II":
                mu_eq = float(max(abs(sc.geometry.mu))) if len(sc.geometry.mu) else 0.0
                val = analytic.outage_ub_closed_detailed(
                    sc.geometry.n_ports, mu_eq, sc.q)
                est = montecarlo.OutageEstimate(
                    val.value, 0, 0.0, "bound-II",
                    note=f"mu=max|mu_k|={mu_eq:.6g}"
                         + ("; clamped" if val.clamped else ""))
            elif method == "mc":
                est = montecarlo.estimate_outage(sc, spec.trials, spec.seed)
            else:  # pragma: no cover - blocked by SweepSpec validation
                raise ValueError(method)
            value = est.probability
            ci = est.ci_halfwidth
            note = est.note
            cap, gain = _metric_cols(value, sc.n_interferers, sc.gamma)
        except PrecisionLossError as exc:
            note = f"precision loss: {exc}"
        rows.append(Row(p["gamma_db"], sc.geometry.n_ports, sc.geometry.width,
                        sc.n_interferers, spec.sigma, sc.sigma_i, method,
                        value, ci, cap, gain, note))
    return rows


def _target_for(spec: SweepSpec, p: dict) -> design.DesignTarget:
    gamma = 10.0 ** (p["gamma_db"] / 10.0)
    sigma_i = spec.sigma_i
    q = None
    if sigma_i is not None:
        q = sigma_i**2 * gamma / spec.sigma**2
    return design.DesignTarget(p["mult_gain"], gamma, p["n_interferers"], q)


def _mc_refine(spec: SweepSpec, p: dict, n_bound: int, budget: float) -> Row:
    """Bisect the smallest N whose MC outage meets the budget (99% CI)."""
    gamma_db = p["gamma_db"]

    def ok(n: int) -> bool:
        pp = dict(p, n_ports=n)
        sc = scenario_for(spec, pp)
        est = montecarlo.estimate_outage(sc, spec.trials, spec.seed)
        return est.probability + est.ci_halfwidth <= budget

    lo, hi = 1, n_bound
    if not ok(hi):
        return Row(gamma_db, n_bound, p["width"], p["n_interferers"],
                   spec.sigma, spec.sigma_i or math.sqrt(p["n_interferers"]),
                   "mc-refined", None, None, None, p["mult_gain"],
                   f"bound N={n_bound} does not meet the budget at "
                   f"{spec.trials} trials")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    sigma_i = spec.sigma_i if spec.sigma_i is not None else \
        math.sqrt(p["n_interferers"]) * spec.sigma
    gamma = 10.0 ** (gamma_db / 10.0)
    return Row(gamma_db, hi, p["width"], p["n_interferers"], spec.sigma,
               sigma_i, "mc-refined", float(hi), None,
               p["mult_gain"] * math.log2(1.0 + gamma), p["mult_gain"],
               f"Monte Carlo refinement below bound N={n_bound}")


def _design_rows_for_point(spec: SweepSpec, p: dict) -> list[Row]:
    gamma = 10.0 ** (p["gamma_db"] / 10.0)
    sigma_i = spec.sigma_i if spec.sigma_i is not None else \
        math.sqrt(p["n_interferers"]) * spec.sigma
    common = dict(gamma_db=p["gamma_db"], width=p["width"],
                  n_interferers=p["n_interferers"], sigma=spec.sigma,
                  sigma_i=sigma_i)
    cap_target = p["mult_gain"] * math.log2(1.0 + gamma)
    rows = []

    def emit(method, n_ports, value, note=""):
        rows.append(Row(common["gamma_db"], n_ports, common["width"],
                        common["n_interferers"], spec.sigma, sigma_i, method,
                        value, None, cap_target if value is not None else None,
                        p["mult_gain"], note))

    try:
        target = _target_for(spec, p)
    except ValueError as exc:
        emit("design", p["n_ports"], None, f"infeasible: {exc}")
        return rows

    wants_ports = spec.command in ("ports-vs-gain", "design")
    wants_width = spec.command in ("width-vs-ports", "design")

    if wants_ports:
        try:
            n_gen = design.min_ports_general(target, p["width"])
            emit("min-ports-general", n_gen, float(n_gen))
            if spec.refine_mc:
                rows.append(_mc_refine(spec, p, n_gen, target.outage_budget))
        except InfeasibleDesignError as exc:
            emit("min-ports-general", p["n_ports"], None,
                 f"infeasible: {exc.reason}")
        if spec.mu is not None:
            try:
                n_eq = design.min_ports_equal_corr(target, spec.mu, spec.quad)
                emit("min-ports-equal-corr", n_eq, float(n_eq),
                     note=f"mu={spec.mu:.6g}")
            except InfeasibleDesignError as exc:
                emit("min-ports-equal-corr", p["n_ports"], None,
                     f"infeasible: {exc.reason}")
    if wants_width:
        try:
            w_min = design.min_width(target, p["n_ports"])
            emit("min-width", p["n_ports"], w_min)
        except InfeasibleDesignError as exc:
            emit("min-width", p["n_ports"], None, f"infeasible: {exc.reason}")
        except FamaLabError as exc:
            emit("min-width", p["n_ports"], None, str(exc))
        try:
            cm = design.critical_mu(target, p["n_ports"])
            emit("critical-mu", p["n_ports"],
                 cm.exact if cm.exact is not None else cm.approx,
                 note=(f"approx={cm.approx:.9g}"
                       + (f"; {cm.note}" if cm.note else "")))
        except InfeasibleDesignError as exc:
            emit("critical-mu", p["n_ports"], None, f"infeasible: {exc.reason}")
    return rows


def run_sweep(spec: SweepSpec, threads: int = 1) -> list[Row]:
    """One list of CSV rows per axis value, computed on a worker pool but
    always returned in axis order."""
    worker = (_design_rows_for_point
              if spec.command in ("ports-vs-gain", "width-vs-ports", "design")
              else _outage_rows_for_point)
    points = [spec.point(v) for v in spec.axis_values]
    if threads <= 1 or len(points) == 1:
        chunks = [worker(spec, p) for p in points]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda p: worker(spec, p), points))
    return [row for chunk in chunks for row in chunk]


def render_csv(rows: list[Row]) -> str:
    return "\n".join([CSV_HEADER] + [r.render() for r in rows]) + "\n"


# ----------------------------------------------------------------------
# Plot script emitter
# ----------------------------------------------------------------------

_PLOT_KINDS = {
    "outage-vs-N": ("N", "value", "method", True),
    "capacity-vs-gamma": ("gamma_db", "capacity_lb", "NI", False),
    "gain-vs-width": ("W", "mult_gain", "N", False),
    "ports-vs-gain": ("mult_gain", "value", "W", False),
    "width-vs-ports": ("N", "value", "NI", False),
}


def emit_plot_script(csv_path: str, figure_kind: str) -> str:
    """Write a standalone gnuplot script next to the CSV; returns its path."""
    if figure_kind not in _PLOT_KINDS:
        raise ValueError(
            f"unknown figure kind {figure_kind!r}; choose from "
            f"{sorted(_PLOT_KINDS)}")
    if not os.path.exists(csv_path):
        raise FileNotFoundError(f"CSV not found: {csv_path}")
    xcol, ycol, series_col, logy = _PLOT_KINDS[figure_kind]
    with open(csv_path) as fh:
        header = fh.readline().strip().split(",")
        idx = {name: i + 1 for i, name in enumerate(header)}
        seen = []
        for line in fh:
            parts = line.rstrip("\n").split(",")
            key = parts[idx[series_col] - 1]
            if key not in seen:
                seen.append(key)
    lines = [
        f"# gnuplot script generated by fama-lab ({figure_kind})",
        'set datafile separator ","',
        "set key autotitle columnhead outside",
        f'set xlabel "{xcol}"',
        f'set ylabel "{ycol}"',
        "set logscale y" if logy else "unset logscale y",
        "set term pngcairo size 900,600",
        f'set output "{csv_path}.png"',
    ]
    pieces = []
    for key in seen:
        cond = f'strcol("{series_col}") eq "{key}"'
        pieces.append(
            f'"{csv_path}" using (column("{xcol}")):({cond} ? '
            f'column("{ycol}") : NaN) with linespoints '
            f'title "{series_col}={key}"')
    lines.append("plot \\\n    " + ", \\\n    ".join(pieces))
    out_path = csv_path + ".gp"
    with open(out_path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return out_path


# ----------------------------------------------------------------------
# Self-test suite
# ----------------------------------------------------------------------

def _selftest_checks():
    import numpy as np
    from scipy import integrate

    from . import specfun

    def lemma1():
        worst = 0.0
        for a in (0.2, 1.5, 3.0):
            for b in (0.2, 1.5, 3.0):
                for cc in (0.2, 1.5, 3.0):
                    lhs, _ = integrate.quad(
                        lambda x: x * math.exp(-0.5 * x * x + cc * x)
                        * specfun.bessel_i0_scaled(cc * x)
                        * specfun.marcum_q1(b, a * x), 0, 50, limit=200)
                    s = math.sqrt(a * a + 1.0)
                    rhs = (math.exp(0.5 * cc * cc)
                           * specfun.marcum_q1(b / s, a * cc / s)
                           - (a * a / (s * s))
                           * math.exp((cc * cc - b * b) / (2 * s * s)
                                      + a * b * cc / (s * s))
                           * specfun.bessel_i0_scaled(a * b * cc / (s * s)))
                    worst = max(worst, abs(lhs - rhs))
        return worst <= 1e-7, f"max |lhs-rhs| = {worst:.2e}"

    def lemma2():
        grid = np.linspace(0.0, 5.0, 26)
        worst = 0.0
        for a in grid:
            for b in grid:
                lb = math.exp(-0.5 * (a - b) ** 2) * specfun.bessel_i0_scaled(a * b)
                worst = max(worst, lb - specfun.marcum_q1(a, b))
        return worst <= 1e-12, f"max violation = {worst:.2e}"

    def i0_bound():
        xs = np.linspace(0.0, 60.0, 601)
        worst = min(specfun.bessel_i0_scaled(x) * (1.0 + 2.0 * x) for x in xs)
        return worst >= 1.0 - 1e-12, f"min i0e(x)(1+2x) = {worst:.6f}"

    def appendix_c():
        worst = 0.0
        for k in range(1, 9):
            for a in (0.5, 1.0, 2.0):
                for b in (0.5, 1.0, 2.0):
                    lhs, _ = integrate.quad(
                        lambda x: (math.exp(-a * x) / (1.0 + b * x)) ** k,
                        0, np.inf, limit=200)
                    rhs = specfun.expint_en_scaled(k, k * a / b) / b
                    worst = max(worst, abs(lhs - rhs))
        return worst <= 1e-8, f"max |lhs-rhs| = {worst:.2e}"

    def en_recurrence():
        worst = 0.0
        for k in (0, 1, 2, 8, 64, 511):
            for x in (0.2, 1.0, 1.5, 2.0, 10.0, 80.0):
                r = (k * specfun.expint_en(k + 1, x)
                     + x * specfun.expint_en(k, x) - math.exp(-x))
                worst = max(worst, abs(r))
        return worst <= 1e-9, f"max residual = {worst:.2e}"

    def envelope_antitone():
        mus = (0.9, 0.6, 0.4, 0.25, 0.1, 0.05)
        rhos = [specfun.j0_envelope_inverse(m) for m in mus]
        ok = all(r2 >= r1 for r1, r2 in zip(rhos, rhos[1:]))
        return ok, "rho* nondecreasing as mu* decreases"

    def n1_sanity():
        worst = 0.0
        for q in (0.1, 1.0, 10.0):
            sc = FamaScenario(make_geometry(1, 0.0), 1.0, math.sqrt(q), 1, 1.0)
            ref = q / (1.0 + q)
            worst = max(worst,
                        abs(analytic.outage_exact(sc).probability - ref),
                        abs(analytic.outage_ub_integral(sc).probability - ref))
        return worst <= 1e-8, f"max |err| = {worst:.2e}"

    def dominance():
        rng = np.random.default_rng(20240501)
        worst = -1.0
        for _ in range(8):
            n = int(rng.integers(2, 6))
            w = float(rng.uniform(0.3, 3.0))
            ni = int(rng.integers(1, 11))
            gdb = float(rng.uniform(0.0, 20.0))
            sc = FamaScenario(make_geometry(n, w), 1.0, math.sqrt(ni), ni,
                              10 ** (gdb / 10))
            gap = (analytic.outage_exact(sc).probability
                   - analytic.outage_ub_integral(sc).probability)
            worst = max(worst, gap)
        return worst <= 1e-9, f"max exact-bound gap = {worst:.2e}"

    def determinism():
        spec = SweepSpec("outage", "n_ports", [2, 4, 8], 10.0, 20, 0.5, 2,
                         1.0, None, ("bound-I", "mc"), 5000, 99, 2.0, None)
        a = render_csv(run_sweep(spec, threads=1))
        b = render_csv(run_sweep(spec, threads=3))
        return a == b, "threads=1 vs threads=3 CSVs byte-identical"

    return [
        ("lemma-1 identity (closed form vs quadrature)", lemma1),
        ("lemma-2 Marcum lower bound", lemma2),
        ("I0 lower bound e^x/(1+2x)", i0_bound),
        ("appendix-C E_k integral identity", appendix_c),
        ("E_k recurrence k E_{k+1} + x E_k = e^{-x}", en_recurrence),
        ("envelope inverse antitone", envelope_antitone),
        ("single-port sanity q/(1+q)", n1_sanity),
        ("bound dominance on random scenarios", dominance),
        ("sweep determinism across thread counts", determinism),
    ]


def run_selftest() -> int:
    failures = 0
    for name, check in _selftest_checks():
        try:
            ok, detail = check()
        except Exception as exc:  # pragma: no cover - defensive
            ok, detail = False, f"raised {exc!r}"
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        failures += 0 if ok else 1
    return 0 if failures == 0 else 1


# ----------------------------------------------------------------------
# Argument handling
# ----------------------------------------------------------------------

def load_config(path: str) -> dict:
    """Plain ``key = value`` lines; '#' starts a comment."""
    cfg = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            cfg[key] = val
    return cfg


_INT_KEYS = {"ports", "interferers", "trials", "seed", "threads",
             "outer_nodes", "inner_nodes"}
_FLOAT_KEYS = {"gamma_db", "width", "sigma", "sigma_i", "mult_gain", "mu",
               "tolerance", "tail_cutoff"}
_BOOL_KEYS = {"refine_mc"}


def _coerce(key: str, val: str):
    if key in _INT_KEYS:
        return int(val)
    if key in _FLOAT_KEYS:
        return float(val)
    if key in _BOOL_KEYS:
        return val.strip().lower() in ("1", "true", "yes", "on")
    return val


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    add = common.add_argument
    add("--config", help="key = value file; flags override it")
    add("--out", help="CSV output path (default stdout)")
    add("--axis", choices=AXES, help="sweep axis")
    add("--values", help="comma-separated axis values")
    add("--gamma-db", type=float, dest="gamma_db", help="SIR target [dB]")
    add("--ports", type=int, help="number of ports N")
    add("--width", type=float, help="antenna width W [wavelengths]")
    add("--interferers", type=int, help="number of interferers N_I")
    add("--sigma", type=float, help="desired-channel RMS (default 1)")
    add("--sigma-i", type=float, dest="sigma_i",
        help="interference RMS (default sqrt(N_I) sigma)")
    add("--methods", help="comma list of exact,bound-I,bound-II,mc or auto")
    add("--trials", type=int, help="Monte Carlo trials per point")
    add("--seed", type=int, help="RNG seed")
    add("--threads", type=int,
        help="worker threads (default FAMA_LAB_THREADS or CPU count)")
    add("--mult-gain", type=float, dest="mult_gain",
        help="target multiplexing gain m for design commands")
    add("--mu", type=float, help="equal-correlation mu for design commands")
    add("--refine-mc", action="store_true", dest="refine_mc", default=None,
        help="Monte Carlo refinement of bound-based port counts")
    add("--plot-script", dest="plot_script", choices=sorted(_PLOT_KINDS),
        help="also emit a gnuplot script for the CSV")

    parser = argparse.ArgumentParser(
        prog="fama-lab",
        description="Fluid antenna multiple access performance laboratory")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("outage", "outage probability sweep (default axis: n_ports)"),
        ("capacity", "outage capacity sweep (default axis: gamma_db)"),
        ("gain-vs-width", "multiplexing gain vs antenna width"),
        ("ports-vs-gain", "minimum ports vs target multiplexing gain"),
        ("width-vs-ports", "minimum width vs port count"),
        ("design", "single-point inverse design report"),
        ("selftest", "run the lemma/identity property suite"),
    ]:
        sub.add_parser(name, parents=[common], help=help_)
    return parser


_DEFAULT_AXIS = {
    "outage": ("n_ports", "2,5,10,20,30"),
    "capacity": ("gamma_db", "-5,0,5,10,15,20"),
    "gain-vs-width": ("width", "0.2,0.35,0.5,0.75,1,1.5,2,3"),
    "ports-vs-gain": ("mult_gain", "1,2,3,4,5"),
    "width-vs-ports": ("n_ports", "8,16,32,64,128,256"),
    "design": ("n_ports", None),   # single point: axis collapses
}


def _resolve(args: argparse.Namespace) -> dict:
    cfg = load_config(args.config) if args.config else {}
    merged = dict(DEFAULTS)
    for key, val in cfg.items():
        if key not in DEFAULTS:
            raise ValueError(f"unknown config key {key!r}")
        merged[key] = _coerce(key, val)
    for key in DEFAULTS:
        cli_val = getattr(args, key, None)
        if cli_val is not None:
            merged[key] = cli_val
    return merged


def _spec_from(command: str, merged: dict) -> SweepSpec:
    axis, default_values = _DEFAULT_AXIS[command]
    if merged["axis"]:
        axis = merged["axis"]
    raw_values = merged["values"] or default_values
    if command == "design":
        axis_values = [merged["ports"]]
        axis = "n_ports"
    else:
        if raw_values is None:
            raise ValueError(f"{command} needs --values")
        axis_values = [float(v) for v in str(raw_values).replace(",", " ").split()]
        if axis in ("n_ports", "n_interferers"):
            axis_values = [int(round(v)) for v in axis_values]
    methods = tuple(m.strip() for m in str(merged["methods"]).split(",") if m.strip())
    quad = analytic.QuadratureSettings(
        merged["outer_nodes"], merged["inner_nodes"], merged["tail_cutoff"],
        merged["tolerance"])
    return SweepSpec(command, axis, axis_values, merged["gamma_db"],
                     merged["ports"], merged["width"], merged["interferers"],
                     merged["sigma"], merged["sigma_i"], methods,
                     merged["trials"], merged["seed"], merged["mult_gain"],
                     merged["mu"], bool(merged["refine_mc"]), quad)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "selftest":
        return run_selftest()
    try:
        merged = _resolve(args)
        spec = _spec_from(args.command, merged)
        threads = merged["threads"]
        if threads is None:
            threads = int(os.environ.get("FAMA_LAB_THREADS", 0)) or \
                (os.cpu_count() or 1)
        rows = run_sweep(spec, threads=threads)
        text = render_csv(rows)
        if merged["out"]:
            with open(merged["out"], "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        if merged["plot_script"]:
            if not merged["out"]:
                raise ValueError("--plot-script requires --out")
            emit_plot_script(merged["out"], merged["plot_script"])
        computed = [r for r in rows if r.value is not None]
        infeasible = [r for r in rows if r.value is None
                      and r.note.startswith("infeasible")]
        if not computed and infeasible:
            return 2
        return 0
    except (FamaLabError, ValueError, OSError) as exc:
        print(f"fama-lab: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
