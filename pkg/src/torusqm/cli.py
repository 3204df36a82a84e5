"""torusqm command-line interface.

Subcommands: eval, grid, zeros, verify, green, planewave, report.

Options may also come from a flat ``key = value`` file passed with
``--config``; keys carry a section prefix (``geometry.R = 2``,
``state.family = well``) and command-line flags win over the file.

Exit codes: 0 success, 2 invalid input, 3 verification failure.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__, green, specfun, verify, wavefn
from .coords import MoonSpencerPoint, ToroidalPoint, TorusGeometry
from .errors import TorusQMError

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 2, 3
FAMILIES = ("free", "well", "moonspencer", "magnetic", "case1", "case2", "bessel2")


class ConfigError(ValueError):
    pass


def fmt(x) -> str:
    return "%.17g" % x


def read_config(path: str) -> dict:
    """Parse ``section.key = value`` lines; '#' starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.rsplit(".", 1)[-1].replace("-", "_")] = value
    return out


def _triple(text: str):
    parts = [float(t) for t in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated numbers")
    return tuple(parts)


def _axis(text: str):
    """'start:stop:count' (endpoint included) or a single value."""
    parts = text.split(":")
    if len(parts) == 1:
        return np.array([float(parts[0])])
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected start:stop:count")
    n = int(parts[2])
    if n < 1:
        raise argparse.ArgumentTypeError("count must be >= 1")
    return np.linspace(float(parts[0]), float(parts[1]), n)


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key = value file with section prefixes")
    g = p.add_argument_group("geometry")
    g.add_argument("--R", type=float, default=1.0)
    g.add_argument("--s_y", "--sy", dest="s_y", type=int, default=1)
    g.add_argument("--s_z", "--sz", dest="s_z", type=int, default=-1)
    g.add_argument("--hbar", type=float, default=1.0)
    g.add_argument("--mass", type=float, default=0.5)
    o = p.add_argument_group("output")
    o.add_argument("--format", choices=("csv", "json"), default="csv")
    o.add_argument("--output", "-o", help="write to this path instead of standard output")
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)


def _state_args(p: argparse.ArgumentParser):
    s = p.add_argument_group("state")
    s.add_argument("--family", choices=FAMILIES, default="free")
    s.add_argument("--m", type=int, default=0)
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--a", type=float, default=None, help="well minor radius (default R)")
    s.add_argument("--k", type=float, default=1.0)
    s.add_argument("--c1", type=complex, default=1.0)
    s.add_argument("--c2", type=complex, default=0.0)
    s.add_argument("--charge", type=float, default=1.0)
    s.add_argument("--B0", type=float, default=0.0)
    s.add_argument("--branch", type=int, choices=(1, 2), default=1)
    s.add_argument("--variant", choices=("printed", "consistent"), default="printed")
    s.add_argument("--anchor", type=float, default=0.5)
    for name in ("U1", "V0", "V1", "V2", "V3", "T2"):
        s.add_argument(f"--{name}", type=float, default=0.0)
    s.add_argument("--U2", type=float, default=-1.0)
    s.add_argument("--V4", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="torusqm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"torusqm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a state at one point")
    _common(p)
    _state_args(p)
    p.add_argument("--point", type=_triple, default=None, help="w,u,v (or tau,theta,phi for moonspencer)")

    p = sub.add_parser("grid", help="tabulate sigma |psi|^2 on a (w, u, v) grid")
    _common(p)
    _state_args(p)
    p.add_argument("--w", type=_axis, default=None, help="start:stop:count (default 0:a or 0:0.9R with 11 nodes)")
    p.add_argument("--nu", type=int, default=33, help="poloidal nodes on [0, 2pi)")
    p.add_argument("--nv", type=int, default=33, help="toroidal nodes on [0, 2pi)")
    p.add_argument("--surface", default=None, help="level surface, e.g. w=1")

    p = sub.add_parser("zeros", help="positive zeros of J_m")
    _common(p)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--count", type=int, default=5)

    p = sub.add_parser("verify", help="run verification suites")
    _common(p)
    p.add_argument("--suite", default="all", choices=("all",) + tuple(verify.SUITES))

    p = sub.add_parser("green", help="Green function in series and closed forms")
    _common(p)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--field", type=_triple, default=(0.3, 0.0, 0.0), help="w,u,v")
    p.add_argument("--source", type=_triple, default=(0.7, 1.0, 0.0), help="w,u,v")
    p.add_argument("--M", type=int, default=None, help="mode cutoff (default ceil(k w_>) + 30)")

    p = sub.add_parser("planewave", help="plane-wave mode sum")
    _common(p)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--uk", type=float, default=0.0)
    p.add_argument("--vk", type=float, default=0.0)
    p.add_argument("--point", type=_triple, default=(0.5, 0.0, 0.0), help="w,u,v")
    p.add_argument("--M", type=int, default=None)

    p = sub.add_parser("report", help="series/closed Green-function consistency report")
    _common(p)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--pairs", type=int, default=100)
    return parser


def parse(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        values = read_config(args.config)
        sp = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sp._actions}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        sp.set_defaults(**values)
        args = parser.parse_args(argv)
    return args


# ---------------------------------------------------------------------------
# helpers


def geometry(args) -> TorusGeometry:
    return TorusGeometry(R=args.R, s_y=args.s_y, s_z=args.s_z, hbar=args.hbar, mass=args.mass)


def build_state(args, g: TorusGeometry):
    f = args.family
    if f == "free":
        return wavefn.FreeToroidal(args.m, args.k)
    if f == "well":
        return wavefn.WellEigenstate(args.m, args.n, args.a if args.a is not None else g.R, R=g.R)
    if f == "moonspencer":
        return wavefn.MoonSpencer(args.k, args.c1, args.c2)
    if f == "magnetic":
        return wavefn.Magnetic(args.m, args.k, args.charge, args.B0, hbar=g.hbar, variant=args.variant)
    if f == "case1":
        p = wavefn.PotentialCase1Params(args.U1, args.U2, args.V1, args.V2, args.T2)
        return wavefn.PotentialCase1(args.m, args.k, p, args.branch, variant=args.variant)
    if f == "case2":
        p = wavefn.PotentialCase2Params(args.V0, args.V1, args.V2, args.V3, args.V4)
        return wavefn.PotentialCase2(args.m, args.k, p, args.branch, anchor=args.anchor, variant=args.variant)
    return wavefn.BesselCase2(args.m, args.k, args.V0, args.V2, args.c1, args.c2)


def state_metadata(args) -> dict:
    keys = ["family", "m", "n", "a", "k", "branch", "variant"]
    extra = {
        "moonspencer": ["c1", "c2"], "magnetic": ["charge", "B0"], "case1": ["U1", "U2", "V1", "V2", "T2"],
        "case2": ["V0", "V1", "V2", "V3", "V4", "anchor"], "bessel2": ["V0", "V2", "c1", "c2"],
    }.get(args.family, [])
    out = {}
    for key in keys + extra:
        val = getattr(args, key)
        out[key] = str(val) if isinstance(val, complex) else val
    return out


def metadata(args, g: TorusGeometry, **extra) -> dict:
    md = {
        "tool": "torusqm",
        "version": __version__,
        "command": args.command,
        "geometry": {"R": g.R, "s_y": g.s_y, "s_z": g.s_z, "hbar": g.hbar, "mass": g.mass},
        "seed": args.seed,
    }
    md.update(extra)
    return md


def _cell(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return fmt(float(x))


def _json_num(x):
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, str):
        return x
    x = float(x)
    return x if math.isfinite(x) else None


def emit_table(args, columns, rows, md: dict) -> str:
    if args.format == "csv":
        buf = io.StringIO()
        buf.write(",".join(columns) + "\n")
        for r in rows:
            buf.write(",".join(_cell(x) for x in r) + "\n")
        return buf.getvalue()
    payload = {"metadata": md, "columns": list(columns), "rows": [[_json_num(x) for x in r] for r in rows]}
    # repr of floats is shortest round-trip, so 17 significant digits are never needed
    return json.dumps(payload, indent=1, allow_nan=False) + "\n"


def write(args, text: str):
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def threads() -> int:
    try:
        n = int(os.environ.get("TORUSQM_THREADS", "0"))
    except ValueError:
        n = 0
    return max(1, min(n, os.cpu_count() or 1)) if n > 0 else 1


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args):
    g = geometry(args)
    s = build_state(args, g)
    if args.point is None:
        raise ConfigError("--point is required")
    a, b, c = args.point
    if isinstance(s, wavefn.MoonSpencer):
        val = wavefn.evaluate(g, s, MoonSpencerPoint(a, b, c))
        cols = ("tau", "theta", "phi", "re", "im", "abs")
    else:
        val = wavefn.evaluate(g, s, ToroidalPoint(a, b, c))
        cols = ("w", "u", "v", "re", "im", "abs")
    row = (a, b, c, val.real, val.imag, abs(val))
    write(args, emit_table(args, cols, [row], metadata(args, g, state=state_metadata(args))))
    return EXIT_OK


def grid_axes(args, g, s):
    if args.surface:
        name, _, value = args.surface.partition("=")
        if name.strip() != "w" or not value:
            raise ConfigError("--surface must look like w=VALUE")
        w = np.array([float(value)])
    elif args.w is not None:
        w = args.w
    else:
        top = s.a if isinstance(s, wavefn.WellEigenstate) else 0.9 * g.R
        w = np.linspace(0.0, top, 11)
    if args.nu < 1 or args.nv < 1:
        raise ConfigError("--nu and --nv must be positive")
    u = 2 * math.pi * np.arange(args.nu) / args.nu
    v = 2 * math.pi * np.arange(args.nv) / args.nv
    return w, u, v


def cmd_grid(args):
    g = geometry(args)
    s = build_state(args, g)
    w, u, v = grid_axes(args, g, s)
    grid = wavefn.density_grid(g, s, w, u, v, threads=threads())
    md = metadata(args, g, state=state_metadata(args), grid={"w": [float(x) for x in w], "nu": args.nu,
                                                           "nv": args.nv})
    write(args, emit_table(args, wavefn.GRID_COLUMNS, grid.rows(), md))
    return EXIT_OK


def cmd_zeros(args):
    if args.count < 1:
        raise ConfigError("--count must be >= 1")
    zs = specfun.bessel_j_zeros(args.m, args.count)
    rows = [(args.m, i + 1, z) for i, z in enumerate(zs)]
    write(args, emit_table(args, ("m", "n", "zero"), rows, metadata(args, geometry(args))))
    return EXIT_OK


def cmd_verify(args):
    run = verify.run_suite(args.suite, seed=args.seed)
    if args.format == "csv":
        text = "".join(r.line() + "\n" for r in run.results)
        text += f"overall: {'PASS' if run.passed else 'FAIL'} seed={run.seed}\n"
    else:
        payload = {
            "metadata": metadata(args, geometry(args), suite=args.suite),
            "results": [{"name": r.name, "passed": r.passed, "value": _json_num(r.value),
                         "tolerance": r.tolerance, "detail": r.detail} for r in run.results],
            "passed": run.passed,
        }
        text = json.dumps(payload, indent=1) + "\n"
    write(args, text)
    return EXIT_OK if run.passed else EXIT_FAILED


def cmd_green(args):
    g = geometry(args)
    f, s = ToroidalPoint(*args.field), ToroidalPoint(*args.source)
    ser = green.green_series(g, f, s, args.k, args.M)
    clo = green.green_closed(g, f, s, args.k)
    ratio = ser.value / clo
    rows = [
        ("series", ser.value.real, ser.value.imag),
        ("closed", clo.real, clo.imag),
        ("ratio", ratio.real, ratio.imag),
        ("graf_core", ser.core.real, ser.core.imag),
        ("distance", green.cross_section_distance(f, s), 0.0),
        ("tail", ser.tail, 0.0),
    ]
    write(args, emit_table(args, ("quantity", "re", "im"), rows, metadata(args, g, k=args.k, M_max=ser.M_max)))
    return EXIT_OK


def cmd_planewave(args):
    g = geometry(args)
    p = ToroidalPoint(*args.point)
    r = green.plane_wave_series(g, (args.k, args.uk, args.vk), p, args.M)
    rows = [("value", r.value.real, r.value.imag), ("core", r.core.real, r.core.imag),
            ("ratio", (r.value / r.core).real, (r.value / r.core).imag)]
    write(args, emit_table(args, ("quantity", "re", "im"), rows, metadata(args, g, k=args.k, M_max=r.M_max)))
    return EXIT_OK


def cmd_report(args):
    g = geometry(args)
    rep = green.consistency_report(g, args.k, n_pairs=args.pairs, seed=args.seed)
    if args.format == "csv":
        text = "".join(line + "\n" for line in rep.lines())
    else:
        c = rep.constant
        payload = {"metadata": metadata(args, g, k=args.k), "pairs": len(rep.ratios),
                   "constant": [c.real, c.imag], "variance": rep.variance,
                   "v_dependence_error": rep.v_dependence_error, "proportional": rep.proportional}
        text = json.dumps(payload, indent=1) + "\n"
    write(args, text)
    return EXIT_OK if rep.proportional else EXIT_FAILED


COMMANDS = {
    "eval": cmd_eval, "grid": cmd_grid, "zeros": cmd_zeros, "verify": cmd_verify,
    "green": cmd_green, "planewave": cmd_planewave, "report": cmd_report,
}


def run(argv=None) -> int:
    try:
        args = parse(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_INVALID
    except (ConfigError, OSError) as exc:
        print(f"torusqm: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        return COMMANDS[args.command](args)
    except (TorusQMError, ValueError, KeyError) as exc:
        print(f"torusqm {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main():
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # downstream reader closed early (e.g. `| head`); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = 0
    sys.exit(code)


if __name__ == "__main__":
    main()
