"""``quietzone`` command-line front end.

Exit status: 0 on success, 2 for invalid input, 3 when a series or
quadrature fails to converge.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .amplitudes import compute_amplitudes, source_field_many
from .diagnostics import diagnose
from .cylwave import Point2
from .errors import ConfigurationError, QuietzoneError, TruncationError
from .fieldgrid import FieldKind, GridSpec, evaluate_grid, export_csv, export_pgm
from .geometry import SourceConfig, outer_radius, symmetric_config
from .incident import Coefficients, PlaneWave
from .scattering import Cylinder, scattered_flux, total_field_many

NEAR_WARN = 1e-4


def default_N(config):
    """``max(10, ceil(k (b + a)) + 20)`` using the outer radius for ``b + a``."""
    return max(10, int(math.ceil(config.k * outer_radius(config))) + 20)


# -- argument parsing ------------------------------------------------------------

def _symmetric(text):
    try:
        M, b = text.split(",")
        return int(M), float(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected M,b (e.g. 4,1), got {text!r}")


def _common(p, grid=False):
    g = p.add_argument_group("configuration")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--symmetric", type=_symmetric, metavar="M,b",
                     help="M equal sources on a circle of radius b")
    src.add_argument("--config", metavar="JSON", help="source layout file")
    g.add_argument("--k", type=float, help="wavenumber (overrides the file)")
    inc = g.add_mutually_exclusive_group()
    inc.add_argument("--psi-deg", "--plane-wave-deg", dest="psi_deg", type=float, default=0.0,
                     help="plane-wave direction in degrees (default 0)")
    inc.add_argument("--coeff-file", metavar="JSON",
                     help="incident coefficients as [[n, re, im], ...]")
    g.add_argument("--N", type=int, help="source order truncation (default by rule)")
    g.add_argument("--P", type=int, help="fixed p-sum truncation (default adaptive)")
    p.add_argument("--out", metavar="DIR", help="directory for written artifacts")
    if grid:
        _grid_flags(p)


def _grid_flags(p):
    g = p.add_argument_group("grid")
    g.add_argument("--mode", choices=("abs", "re"), default="abs")
    g.add_argument("--clip", type=float, default=2.0)
    g.add_argument("--nx", type=int, default=401)
    g.add_argument("--ny", type=int)
    g.add_argument("--half-width", type=float,
                   help="half side of the square window (default 2.5 x outer radius)")


def build_parser():
    parser = argparse.ArgumentParser(prog="quietzone",
                                     description="Active exterior cloaking with closed-form source amplitudes.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("amplitudes", help="compute source amplitudes and write JSON")
    _common(p)

    p = sub.add_parser("diagnose", help="far/near-field coefficient table as CSV")
    _common(p)
    p.add_argument("--orders", type=int, default=10, help="report |n| <= this (default 10)")

    p = sub.add_parser("field", help="render a field on a grid (CSV and PGM)")
    _common(p, grid=True)
    p.add_argument("--what", choices=("total", "source", "incident"), default="total")

    p = sub.add_parser("scatter", help="cylinder at the origin with the cloak on or off")
    _common(p, grid=True)
    p.add_argument("--cyl-radius", type=float, default=1.0)
    p.add_argument("--cyl-bc", choices=("soft", "hard"), default="hard")
    p.add_argument("--cloak", choices=("on", "off"), default="on")

    p = sub.add_parser("reproduce", help="regenerate the data behind a named figure")
    p.add_argument("figure", help="figure id, or 'list'")
    p.add_argument("--out", metavar="DIR", default=".")
    p.add_argument("--nx", type=int, default=401, help="grid size for field figures")
    return parser


# -- resolution --------------------------------------------------------------------------

class Run:
    """Fully resolved inputs for one command."""

    def __init__(self, args):
        self.args = args
        if args.symmetric:
            M, b = args.symmetric
            if args.k is None:
                raise ConfigurationError("--k is required with --symmetric")
            self.config = symmetric_config(M, b, args.k)
        else:
            try:
                self.config = SourceConfig.from_json(args.config)
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigurationError(f"cannot read {args.config}: {exc}") from exc
            if args.k is not None:
                self.config = self.config.with_k(args.k)
        if args.coeff_file:
            try:
                self.incident = Coefficients.from_file(args.coeff_file)
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigurationError(f"cannot read {args.coeff_file}: {exc}") from exc
        else:
            self.incident = PlaneWave.from_degrees(args.psi_deg)
        self.N = default_N(self.config) if args.N is None else args.N
        if self.N < 0:
            raise ConfigurationError("--N must be non-negative")
        self.P = args.P
        self.out = args.out

    def describe(self):
        c = self.config
        b = max(s.position.radius for s in c.sites)
        a = max(s.radius for s in c.sites)
        if isinstance(self.incident, PlaneWave):
            inc = f"psi={math.degrees(self.incident.psi):.6g}deg"
        else:
            inc = f"coefficients(|n|<={self.incident.truncation})"
        P = "adaptive" if self.P is None else self.P
        return f"M={c.M} b={b:.6g} a={a:.6g} k={c.k:.6g} {inc} N={self.N} P={P}"

    def amplitudes(self):
        return compute_amplitudes(self.config, self.incident, self.N, self.P)

    def path(self, name):
        os.makedirs(self.out, exist_ok=True)
        return os.path.join(self.out, name)


def _grid_spec(args, config):
    half = args.half_width or 2.5 * outer_radius(config)
    ny = args.ny or args.nx
    if args.nx < 1 or ny < 1:
        raise ConfigurationError("grid must have at least one cell")
    sx = 2 * half / (args.nx - 1) if args.nx > 1 else 1.0
    sy = 2 * half / (ny - 1) if ny > 1 else 1.0
    return GridSpec(Point2(-half, -half), sx, sy, args.nx, ny)


def _write_grid(grid, base, mode, clip):
    export_csv(grid, base + ".csv")
    export_pgm(grid, base + ".pgm", mode=mode, clip=clip)
    return [base + ".csv", base + ".pgm"]


def _singular(config):
    return [(s.position.x, s.position.y) for s in config.sites]


# -- commands ----------------------------------------------------------------------------

def cmd_amplitudes(run, stdout):
    amps = run.amplitudes()
    text = amps.to_json()
    if run.out:
        path = run.path("amplitudes.json")
        with open(path, "w") as fh:
            fh.write(text + "\n")
        print(f"wrote {path}", file=sys.stderr)
    else:
        stdout.write(text + "\n")
    return 0


def diagnose_csv(report):
    lines = ["n,abs_F,abs_A_plus_E,weighted"]
    for n, F, r, w in zip(report.orders, report.F, report.residual, report.weighted_residual):
        lines.append(f"{n},{abs(F):.17g},{r:.17g},{w:.17g}")
    lines.append(f"sigma_r,{report.flux:.17g},,")
    return "\n".join(lines) + "\n"


def cmd_diagnose(run, stdout):
    amps = run.amplitudes()
    report = diagnose(run.config, run.incident, amps, run.args.orders)
    text = diagnose_csv(report)
    stdout.write(text)
    if run.out:
        with open(run.path("diagnose.csv"), "w") as fh:
            fh.write(text)
    if report.max_near > NEAR_WARN:
        print(f"warning: max |A_n+E_n| = {report.max_near:.3e} exceeds {NEAR_WARN:g}; "
              "the near field needs a larger N", file=sys.stderr)
    return 0


def cmd_field(run, stdout):
    args = run.args
    cfg, f, k = run.config, run.incident, run.config.k
    amps = run.amplitudes() if args.what != "incident" else None
    if args.what == "incident":
        def ev(xs, ys):
            return f.evaluate_many(k, xs, ys)
        kind = FieldKind.INCIDENT
    elif args.what == "source":
        def ev(xs, ys):
            return source_field_many(cfg, amps, xs, ys)
        kind = FieldKind.SOURCE
    else:
        def ev(xs, ys):
            return total_field_many(k, f, xs, ys, None, cfg, amps)
        kind = FieldKind.TOTAL
    sing = _singular(cfg) if amps is not None else ()
    grid = evaluate_grid(_grid_spec(args, cfg), ev, args.clip, sing, kind=kind)
    for p in _write_grid(grid, run.path("field"), args.mode, args.clip):
        stdout.write(p + "\n")
    return 0


def scatter_grid(spec, k, f, cyl, config, amps, clip):
    def ev(xs, ys):
        return total_field_many(k, f, xs, ys, cyl, config, amps)

    def inside(xs, ys):
        return np.hypot(xs, ys) <= cyl.radius

    sing = _singular(config) if amps is not None else ()
    return evaluate_grid(spec, ev, clip, sing, excluded=inside, kind=FieldKind.TOTAL)


def cmd_scatter(run, stdout):
    args = run.args
    cfg, f, k = run.config, run.incident, run.config.k
    cyl = Cylinder(args.cyl_radius, args.cyl_bc)
    on = args.cloak == "on"
    amps = run.amplitudes() if on else None
    flux = scattered_flux(cyl, k, f, cfg if on else None, amps)
    grid = scatter_grid(_grid_spec(args, cfg), k, f, cyl, cfg if on else None, amps, args.clip)
    paths = _write_grid(grid, run.path("scatter"), args.mode, args.clip)
    stdout.write(f"scattered_flux,{flux:.17g}\n")
    for p in paths:
        stdout.write(p + "\n")
    return 0


# -- figure reproduction -------------------------------------------------------------------

FIGURES = {
    "fig5": "far-field |F_n|, M=3, b=1, psi=7deg, k=1..5, N in {10,15}",
    "fig6": "far-field |F_n|, M in {3,8}, b=1, psi=7deg, k=1, N in {5,10,15}",
    "fig7": "near-field |A_n+E_n|, M in {6,8}, b=1, psi=7deg, k=5, N in {20,40,60,80,100,130}",
    "fig8": "near-field |A_n+E_n|, M in {3,4,5,6}, b=1, psi=7deg, k in {1,5}, N=130",
    "fig9": "near-field |A_n+E_n|, M in {4,6,8,10}, b=1, psi=7deg, k=1..5, N=130",
    "fig10": "|total| around a hard cylinder a0=1, M=5, b=4, k=5, psi=17deg, N=60, cloak off/on",
    "fig11": "Re total around a hard cylinder, same setup as fig10",
    "fig12": "|total| around a soft cylinder, same setup as fig10",
    "figx1": "|total|, M=4, b=1, psi=17deg, k=2, N=60, clip 2",
    "figx2": "Re total, M=4, b=1, psi=17deg, k=10, N=60",
    "figx3": "Re total, M=4, b=1, psi=17deg, k=10, N=10",
    "figx4": "Re total, M=4, b=1, psi=17deg, k=10, N=5",
    "figx5": "Re total, M=7, b=1, psi=17deg, k=10, N=5",
}

_SWEEPS = {
    "fig5": ("far", [3], range(1, 6), [10, 15]),
    "fig6": ("far", [3, 8], [1], [5, 10, 15]),
    "fig7": ("near", [6, 8], [5], [20, 40, 60, 80, 100, 130]),
    "fig8": ("near", [3, 4, 5, 6], [1, 5], [130]),
    "fig9": ("near", [4, 6, 8, 10], range(1, 6), [130]),
}

_RENDERS = {
    "figx1": (4, 2.0, 60, "abs"),
    "figx2": (4, 10.0, 60, "re"),
    "figx3": (4, 10.0, 10, "re"),
    "figx4": (4, 10.0, 5, "re"),
    "figx5": (7, 10.0, 5, "re"),
}

_SCATTER = {"fig10": ("hard", "abs"), "fig11": ("hard", "re"), "fig12": ("soft", "abs")}


def _sweep(fig, out):
    kind, Ms, ks, Ns = _SWEEPS[fig]
    f = PlaneWave.from_degrees(7.0)
    header = "M,k,N,n,abs_F" if kind == "far" else "M,k,N,n,abs_A_plus_E,weighted"
    rows = [header]
    for M in Ms:
        for k in ks:
            cfg = symmetric_config(M, 1.0, float(k))
            for N in Ns:
                rep = diagnose(cfg, f, compute_amplitudes(cfg, f, N))
                for i, n in enumerate(rep.orders):
                    if kind == "far":
                        rows.append(f"{M},{k},{N},{n},{abs(rep.F[i]):.17g}")
                    else:
                        rows.append(f"{M},{k},{N},{n},{rep.residual[i]:.17g},"
                                    f"{rep.weighted_residual[i]:.17g}")
    path = os.path.join(out, f"{fig}.csv")
    with open(path, "w") as fh:
        fh.write("\n".join(rows) + "\n")
    return [path]


def _render(fig, out, nx):
    M, k, N, mode = _RENDERS[fig]
    cfg = symmetric_config(M, 1.0, k)
    f = PlaneWave.from_degrees(17.0)
    amps = compute_amplitudes(cfg, f, N)
    spec = GridSpec.for_config(cfg, nx)
    grid = evaluate_grid(spec, lambda xs, ys: total_field_many(k, f, xs, ys, None, cfg, amps),
                         2.0, _singular(cfg), kind=FieldKind.TOTAL)
    return _write_grid(grid, os.path.join(out, fig), mode, 2.0)


def _scatter_pair(fig, out, nx):
    bc, mode = _SCATTER[fig]
    k = 5.0
    cfg = symmetric_config(5, 4.0, k)
    f = PlaneWave.from_degrees(17.0)
    cyl = Cylinder(1.0, bc)
    amps = compute_amplitudes(cfg, f, 60)
    spec = GridSpec.for_config(cfg, nx)
    paths = []
    for tag, c, a in (("off", None, None), ("on", cfg, amps)):
        grid = scatter_grid(spec, k, f, cyl, c, a, 2.0)
        paths += _write_grid(grid, os.path.join(out, f"{fig}_{tag}"), mode, 2.0)
    return paths


def cmd_reproduce(args, stdout):
    fig = args.figure.lower()
    if fig not in FIGURES:
        listing = "\n".join(f"  {k:6s} {v}" for k, v in FIGURES.items())
        if fig != "list":
            print(f"unknown figure {args.figure!r}; available:", file=sys.stderr)
            print(listing, file=sys.stderr)
            return 2
        stdout.write(listing + "\n")
        return 0
    if args.nx < 1:
        raise ConfigurationError("--nx must be positive")
    os.makedirs(args.out, exist_ok=True)
    print(f"# {fig}: {FIGURES[fig]}", file=sys.stderr)
    if fig in _SWEEPS:
        paths = _sweep(fig, args.out)
    elif fig in _RENDERS:
        paths = _render(fig, args.out, args.nx)
    else:
        paths = _scatter_pair(fig, args.out, args.nx)
    for p in paths:
        stdout.write(p + "\n")
    return 0


COMMANDS = {
    "amplitudes": cmd_amplitudes,
    "diagnose": cmd_diagnose,
    "field": cmd_field,
    "scatter": cmd_scatter,
}


def run(argv=None, stdout=None):
    """Parse ``argv`` and execute; returns the exit status."""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        if args.command == "reproduce":
            return cmd_reproduce(args, stdout)
        r = Run(args)
        if args.command in ("field", "scatter") and not r.out:
            r.out = "."
        print(f"# resolved: {r.describe()}", file=sys.stderr)
        return COMMANDS[args.command](r, stdout)
    except TruncationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (QuietzoneError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())
