"""Command-line front end.

Exit codes: 0 success, 1 validation threshold missed, 2 invalid
specification, 3 runtime failure (singularity, divergence, precision loss).
"""
import argparse
import csv
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError, PoleError, PrecisionError, SingularityError, SpecError
from .fracop import power_rule
from .solvers import (
    AbelSpec,
    BesselSpec,
    OscillatorSpec,
    abel_ode,
    bessel_ode,
    gen_oscillator_ode,
    solve_abel,
    solve_bessel,
    solve_oscillator,
    transform_ode,
)
from .svg import Series, line_plot
from .validate import RkConfig, boundary_scan, phase_boundary, series_identity_check, validate_solution

EXIT_OK, EXIT_FAIL, EXIT_SPEC, EXIT_RUNTIME = 0, 1, 2, 3
OUT_DIR_ENV = "CXORDER_OUT_DIR"

FAMILY_PARAMS = {
    "abel": ("a", "b", "c", "f0"),
    "bessel": ("a", "b", "c", "f0"),
    "oscillator": ("p", "n", "an", "bn"),
}

PRESETS = {
    "fig2a": dict(family="abel", params=dict(a=3.1, b=0.8, c=0.7, f0=0.5),
                  window=(0.0, 2.0, 256), threshold=1e-6),
    "fig2b": dict(family="bessel", params=dict(a=0.7, b=math.sqrt(6.3), c=1.3, f0=1.0),
                  window=(0.01, 3.0, 256), threshold=1e-6),
    "fig2c": dict(family="oscillator", params=dict(p=-1.21, n=7.1, an=-1.5, bn=3.5),
                  window=(0.05, 10.0, 256), threshold=1e-5),
}

FIG1_ORDERS = (-1.0, -0.5, 0.0, 0.5, 1.0)
FIG3_ORDERS = tuple(round(-2 + 0.05 * k, 10) for k in range(81))


class CliError(Exception):
    pass


def parse_complex(text):
    """Accept ``re``, ``re+imI`` or ``imI`` (``i``/``j`` also work)."""
    s = str(text).strip().replace(" ", "")
    if s and s[-1] in "Ii":
        s = s[:-1] + "j"
    try:
        return complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def parse_window(text):
    """``start:end:count`` with inclusive endpoints."""
    parts = str(text).split(":")
    try:
        if len(parts) != 3:
            raise ValueError
        start, end, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be start:end:count, got {text!r}") from None
    if not end > start or count < 2:
        raise argparse.ArgumentTypeError("window needs end > start and count >= 2")
    return start, end, count


@dataclass
class RunConfig:
    command: str
    family: str = None
    params: dict = field(default_factory=dict)
    window: tuple = None
    out: str = None
    fmt: str = "csv"

    def require(self):
        missing = [k for k in FAMILY_PARAMS[self.family] if self.params.get(k) is None]
        if missing:
            raise SpecError(f"family {self.family} needs --{' --'.join(missing)}")


# output --------------------------------------------------------------------

def _cell(v):
    if v is None:
        return "nan"
    return repr(float(v))


def expand_columns(columns):
    """Split complex-valued columns into ``name_re``/``name_im`` pairs."""
    out = {}
    for name, values in columns.items():
        arr = np.asarray(values)
        if np.iscomplexobj(arr):
            out[f"{name}_re"] = arr.real
            out[f"{name}_im"] = arr.imag
        else:
            out[name] = arr.astype(float)
    return out


def write_csv(path, columns):
    cols = expand_columns(columns)
    names = list(cols)
    n = len(next(iter(cols.values())))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        for i in range(n):
            w.writerow([_cell(cols[k][i]) for k in names])
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    names = rows[0]
    data = np.array([[float(x) for x in r] for r in rows[1:]], dtype=float).reshape(-1, len(names))
    return {k: data[:, i] for i, k in enumerate(names)}


def _out_base(out, default_name):
    if out:
        p = Path(out)
        if p.suffix in (".csv", ".svg"):
            p = p.with_suffix("")
        return p
    return Path(os.environ.get(OUT_DIR_ENV, ".")) / default_name


def _emit(cfg, default_name, columns, plot):
    base = _out_base(cfg.out, default_name)
    base.parent.mkdir(parents=True, exist_ok=True)
    written = []
    if cfg.fmt in ("csv", "both"):
        written.append(write_csv(base.with_suffix(".csv"), columns))
    if cfg.fmt in ("svg", "both"):
        path = base.with_suffix(".svg")
        path.write_text(plot())
        written.append(path)
    for p in written:
        print(f"wrote {p}", file=sys.stderr)
    return written


# family plumbing ------------------------------------------------------------

def build_family(cfg, v=None, c=None):
    """Spec, ODE and closed-form evaluator for ``cfg.family``."""
    cfg.require()
    P = cfg.params
    if cfg.family == "abel":
        spec = AbelSpec(P["a"], P["b"], P["c"], P["f0"])
        return spec, abel_ode(spec), solve_abel(spec)
    if cfg.family == "bessel":
        spec = BesselSpec(P["a"], P["b"], P["c"], P["f0"])
        return spec, bessel_ode(spec), solve_bessel(spec)
    spec = OscillatorSpec(P["p"], P["n"], P["an"], P["bn"])
    if v is not None or c is not None:
        fam = transform_ode(spec, 1 if v is None else v, 1 if c is None else c)
        return spec, fam.ode, fam.solution
    return spec, gen_oscillator_ode(spec), solve_oscillator(spec)


def _family_cfg(args, command):
    params = {k: getattr(args, k, None) for k in ("a", "b", "c", "f0", "p", "n", "an", "bn")}
    window = args.t
    family = args.family
    preset = getattr(args, "preset", None)
    if preset:
        pr = PRESETS[preset]
        family = pr["family"]
        params = {**pr["params"], **{k: v for k, v in params.items() if v is not None}}
        window = window or pr["window"]
    if family is None:
        raise SpecError("--family or --preset is required")
    if family == "oscillator":
        params.pop("c", None)
    return RunConfig(command, family, params, window, args.out, args.format)


def _ode_text(ode, var="t"):
    def poly(terms):
        if not terms:
            return "0"
        return " + ".join(f"({_cstr(x.coef)}) {var}^({_cstr(x.exponent)})" for x in terms)
    lhs = f"F'' + [{poly(ode.damping)}] F' + " if ode.order == 2 else "F' + "
    return f"{lhs}[{poly(ode.stiffness)}] F = {poly(ode.forcing)}"


def _cstr(z):
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.10g}"
    return f"{z.real:.10g}{z.imag:+.10g}I"


# commands -------------------------------------------------------------------

def cmd_solve(args):
    cfg = _family_cfg(args, "solve")
    if cfg.window is None:
        raise SpecError("--t start:end:count is required")
    spec, ode, sol = build_family(cfg, args.v, args.tc)
    t = np.linspace(*cfg.window)
    F = np.asarray(sol(t), dtype=np.complex128)
    label = f"{cfg.family} solution"
    _emit(cfg, f"solve_{cfg.family}", {"t": t, "F": F}, lambda: line_plot(
        [Series(list(t), list(F.real), "Re F")] +
        ([Series(list(t), list(F.imag), "Im F", dashed=True)] if np.any(F.imag) else []),
        title=label, xlabel="t", ylabel="F(t)"))
    return EXIT_OK


def cmd_generate(args):
    cfg = _family_cfg(args, "generate")
    spec, ode, sol = build_family(cfg, args.v, args.tc)
    var = "w" if cfg.family == "oscillator" and args.v is None and args.tc is None else "t"
    print(_ode_text(ode, var))
    rows = {"role": [], "coef": [], "exponent": []}
    roles = {"damping": 0.0, "stiffness": 1.0, "forcing": 2.0}
    for role in roles:
        for term in getattr(ode, role):
            rows["role"].append(roles[role])
            rows["coef"].append(term.coef)
            rows["exponent"].append(term.exponent)
    if cfg.out:
        columns = {"role": np.array(rows["role"]),
                   "coef": np.array(rows["coef"], dtype=np.complex128),
                   "exponent": np.array(rows["exponent"], dtype=np.complex128)}
        write_csv(_out_base(cfg.out, "ode").with_suffix(".csv"), columns)
    return EXIT_OK


def cmd_validate(args):
    cfg = _family_cfg(args, "validate")
    if cfg.window is None:
        raise SpecError("--t start:end:count is required")
    threshold = args.threshold
    if threshold is None:
        threshold = PRESETS[args.preset]["threshold"] if args.preset else 1e-6
    spec, ode, sol = build_family(cfg, args.v, args.tc)
    start, end, count = cfg.window
    rk_cfg = RkConfig(start, end, h=args.h, n_grid=count)
    rep = validate_solution(ode, sol, rk_cfg, perturb_ic=args.perturb_ic)
    _emit(cfg, f"validate_{cfg.family}",
          {"t": rep.grid, "closed_form": rep.closed_form, "rk": rep.rk, "abs_err": rep.abs_err},
          lambda: line_plot([Series(list(rep.grid), list(rep.closed_form.real), "closed form"),
                             Series(list(rep.grid), list(rep.rk.real), "RK4", dashed=True)],
                            title=f"{cfg.family}: closed form vs RK4", xlabel="t",
                            ylabel="Re F(t)"))
    print(rep.summary(), file=sys.stderr)
    print(f"max_rel_err={rep.max_rel_err!r}")
    return EXIT_OK if rep.max_rel_err <= threshold else EXIT_FAIL


def cmd_boundary(args):
    cfg = RunConfig("boundary", out=args.out, fmt=args.format)
    kw = dict(N=args.N, X=args.X, eps=args.eps, dx=args.dx)
    if args.r is not None:
        res = phase_boundary(args.kind, args.r, **kw)
        print(f"x_star={'none' if res.x_star is None else repr(res.x_star)}")
        return EXIT_OK
    lo, hi, count = args.r_grid
    orders = np.linspace(lo, hi, count)
    res = boundary_scan(args.kind, orders, **kw)
    xs = [math.nan if b.x_star is None else b.x_star for b in res]
    for b in res:
        print(f"r={b.r!r} x_star={'none' if b.x_star is None else repr(b.x_star)}")
    _emit(cfg, f"boundary_{args.kind}", {"r": orders, "x_star": np.array(xs)},
          lambda: line_plot([Series(list(orders), xs, args.kind, dashed=args.kind == "sin")],
                            title="left boundary of phase-shift region", xlabel="r",
                            ylabel="x*"))
    return EXIT_OK


def cmd_series_check(args):
    res = series_identity_check(args.w, args.c, args.n, args.M, method=args.method)
    print(f"residual={res!r}")
    return EXIT_OK


# figures --------------------------------------------------------------------

def _fig1(cfg):
    x = np.linspace(0.01, 2.0, 200)
    cols = {"x": x}
    series = []
    for r in FIG1_ORDERS:
        y = np.array([power_rule(r, 1, 0, xi) for xi in x]).real
        cols[f"r={r:g}"] = y
        series.append(Series(list(x), list(y), f"r = {r:g}"))
    return cols, lambda: line_plot(series, title="order-r derivatives of x", xlabel="x",
                                   ylabel="D^r x")


def _fig2(cfg, name):
    pr = PRESETS[name]
    rc = RunConfig("figure", pr["family"], dict(pr["params"]), pr["window"])
    spec, ode, sol = build_family(rc)
    start, end, count = pr["window"]
    rep = validate_solution(ode, sol, RkConfig(start, end, n_grid=count))
    print(f"{name}: {rep.summary()}", file=sys.stderr)
    cols = {"t": rep.grid, "closed_form": rep.closed_form, "rk": rep.rk}
    return cols, lambda: line_plot(
        [Series(list(rep.grid), list(rep.closed_form.real), "exact"),
         Series(list(rep.grid), list(rep.rk.real), "Runge-Kutta", dashed=True)],
        title=f"{pr['family']} family", xlabel="w" if pr["family"] == "oscillator" else "t",
        ylabel="F")


def _fig3(cfg):
    orders = np.array(FIG3_ORDERS)
    cols = {"r": orders}
    series = []
    for kind in ("cos", "sin"):
        xs = [math.nan if b.x_star is None else b.x_star for b in boundary_scan(kind, orders)]
        cols[f"x_star_{kind}"] = np.array(xs)
        series.append(Series(list(orders), xs, kind, dashed=kind == "sin"))
    return cols, lambda: line_plot(series, title="left boundaries of phase-shift domains",
                                   xlabel="r", ylabel="x*")


def cmd_figure(args):
    cfg = RunConfig("figure", out=args.out, fmt=args.format)
    if args.name == "fig1":
        cols, plot = _fig1(cfg)
    elif args.name == "fig3":
        cols, plot = _fig3(cfg)
    else:
        cols, plot = _fig2(cfg, args.name)
    _emit(cfg, args.name, cols, plot)
    return EXIT_OK


# parser ---------------------------------------------------------------------

def _add_family_args(p, presets=True):
    p.add_argument("--family", choices=sorted(FAMILY_PARAMS))
    if presets:
        p.add_argument("--preset", choices=sorted(PRESETS))
    for name in ("a", "b", "f0", "p", "n"):
        p.add_argument(f"--{name}", type=parse_complex)
    p.add_argument("--c", type=parse_complex,
                   help="ODE parameter c (abel, bessel) or transform exponent (oscillator)")
    p.add_argument("--an", "--a-n", dest="an", type=parse_complex)
    p.add_argument("--bn", "--b-n", dest="bn", type=parse_complex)
    p.add_argument("--v", type=parse_complex, help="oscillator transform scale, w = v t^c")
    p.add_argument("--t", type=parse_window, metavar="START:END:COUNT")


def _add_output_args(p):
    p.add_argument("--out", help="output path stem (extension picked from --format)")
    p.add_argument("--format", choices=("csv", "svg", "both"), default="csv")


def build_parser():
    ap = argparse.ArgumentParser(prog="cxorder",
                                 description="Complex-order derivatives and exact ODE solutions.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="evaluate a closed-form solution on a grid")
    _add_family_args(p)
    _add_output_args(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("generate", help="print the ODE satisfied by a family member")
    _add_family_args(p)
    p.add_argument("--out", help="also write the coefficient table as CSV")
    p.set_defaults(func=cmd_generate, format="csv")

    p = sub.add_parser("validate", help="compare a closed form against RK4")
    _add_family_args(p)
    _add_output_args(p)
    p.add_argument("--h", type=float, default=1e-4)
    p.add_argument("--threshold", type=float)
    p.add_argument("--perturb-ic", type=float, default=1.0,
                   help="scale the initial conditions (negative control)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("boundary", help="left boundary of the phase-shift region")
    p.add_argument("--kind", choices=("sin", "cos"), required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--r", type=float)
    g.add_argument("--r-grid", type=parse_window, metavar="START:END:COUNT")
    p.add_argument("--N", type=int, default=40)
    p.add_argument("--X", type=float, default=25.0)
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--dx", type=float, default=0.01)
    _add_output_args(p)
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("series-check", help="residual of the telescoping identity for 1")
    p.add_argument("--w", type=parse_complex, required=True)
    p.add_argument("--c", type=parse_complex, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--M", type=int, default=25)
    p.add_argument("--method", choices=("exact", "float"), default="exact")
    p.set_defaults(func=cmd_series_check)

    p = sub.add_parser("figure", help="reproduce a figure preset (CSV + SVG)")
    p.add_argument("name", choices=("fig1", "fig2a", "fig2b", "fig2c", "fig3"))
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "svg", "both"), default="both")
    p.set_defaults(func=cmd_figure)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    if hasattr(args, "c") and args.command in ("solve", "generate", "validate"):
        # --c is the transform exponent for the oscillator family
        fam = args.family or (PRESETS[args.preset]["family"] if args.preset else None)
        args.tc = args.c if fam == "oscillator" else None
    try:
        return args.func(args)
    except (SingularityError, OverflowError, PrecisionError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (SpecError, PoleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC


if __name__ == "__main__":
    sys.exit(main())
