"""Command-line front end.

Exit status: 0 success, 2 usage error, 3 degenerate state, 4 verification
failure, 5 convergence failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from .errors import BoundsError, ConvergenceError, DegenerateStateError, UndefinedWitnessError
from .pnd import eta, klyshko, pnd
from .states import StateSpec
from .sweep import (
    PRESETS,
    QUANTITIES,
    SweepAxis,
    SweepConfig,
    expand_preset,
    parse_number,
    render,
    run_sweep,
    spec_from_params,
)
from .verify import DEFAULT_GRID, FAULTS, QUICK_GRID, run_verify
from .wigner import nonclassical_volume, wigner_grid
from .witnesses import witness_report

OUTPUT_DIR_ENV = "NONCLASSICAL_OUTPUT_DIR"

EXIT_OK, EXIT_USAGE, EXIT_DEGENERATE, EXIT_VERIFY, EXIT_CONVERGENCE = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("state")
    g.add_argument("--op", choices=["add", "sub"], default="add")
    g.add_argument("--m", type=int, default=0, help="photons added or subtracted")
    g.add_argument("--alpha-mod", type=parse_number, help="|alpha|")
    g.add_argument("--alpha-arg", type=parse_number, help="arg(alpha); accepts e.g. pi/3")
    g.add_argument("--alpha-re", type=float)
    g.add_argument("--alpha-im", type=float)
    g.add_argument("--r", type=float, default=0.0, help="squeezing amplitude")
    g.add_argument("--phi", type=parse_number, default=0.0, help="squeezing phase")


def _spec_params(args) -> dict:
    params = {"op": args.op, "m": args.m, "r": args.r, "phi": args.phi}
    for k in ("alpha_mod", "alpha_arg", "alpha_re", "alpha_im"):
        v = getattr(args, k)
        if v is not None:
            params[k] = v
    return params


def _spec(args) -> StateSpec:
    try:
        return spec_from_params(_spec_params(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _add_output(p, formats, default):
    p.add_argument("--format", choices=formats, default=default)
    p.add_argument("-o", "--output", help="output file ('-' or omitted: stdout)")


def _emit(text: str | bytes, output: str | None) -> None:
    if output in (None, "-"):
        if isinstance(text, bytes):
            sys.stdout.buffer.write(text)
        else:
            sys.stdout.write(text)
        return
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(text, bytes):
        path.write_bytes(text)
    else:
        path.write_text(text, newline="")


def _fmt(v) -> str:
    return "undefined" if v is None else f"{v:.12g}"


def cmd_witness(args) -> int:
    spec = _spec(args)
    rep = witness_report(spec)
    if args.format == "json":
        out = json.dumps(rep.to_json(), indent=1) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        row = rep.row()
        w.writerow(rep.columns())
        w.writerow(["" if row[c] is None else (repr(row[c]) if isinstance(row[c], float) else row[c])
                    for c in rep.columns()])
        out = buf.getvalue()
    else:
        lines = [str(spec)]
        for name, value in rep.values().items():
            note = ""
            if name in rep.boundary:
                note = "boundary"
            elif rep.flags.get(name):
                note = "nonclassical"
            lines.append(f"{name:<4} {_fmt(value):>20}  {note}".rstrip())
        out = "\n".join(lines) + "\n"
    _emit(out, args.output)
    return EXIT_OK


def cmd_pnd(args) -> int:
    spec = _spec(args)
    dist = pnd(spec, args.n_max)
    try:
        eta_value = eta(dist)
    except UndefinedWitnessError:
        eta_value = None
    B = {n: klyshko(dist, n) for n in range(dist.n_report - 1)}
    if args.format == "json":
        doc = {"spec": spec.to_record(), "P": dist.probabilities.tolist(), "B": list(B.values()),
               "eta": eta_value, "tail_mass": dist.tail_mass}
        out = json.dumps(doc, indent=1) + "\n"
    else:
        head = " ".join(f"{k}={v}" for k, v in spec.to_record().items())
        lines = [f"# {head}", f"# tail_mass={dist.tail_mass!r} eta={eta_value!r}", "n,P_n,B_n"]
        for n, p in enumerate(dist.probabilities):
            lines.append(f"{n},{float(p)!r},{B[n]!r}" if n in B else f"{n},{float(p)!r},")
        out = "\n".join(lines) + "\n"
    _emit(out, args.output)
    return EXIT_OK


def cmd_wigner(args) -> int:
    spec = _spec(args)
    grid = wigner_grid(spec, tuple(args.x_range) if args.x_range else None,
                       tuple(args.p_range) if args.p_range else None, args.nx, args.np)
    if args.format == "binary":
        if args.output in (None, "-") and sys.stdout.isatty():
            raise UsageError("binary output needs --output or a redirected stdout")
        _emit(grid.to_bytes(), args.output)
    else:
        _emit(grid.to_csv(), args.output)
    return EXIT_OK


def cmd_volume(args) -> int:
    spec = _spec(args)
    res = nonclassical_volume(spec, tol=args.tol)
    doc = {"spec": spec.to_record(), "delta": res.delta,
           "integration_radius": res.integration_radius, "estimated_tail": res.estimated_tail,
           "refinement_levels": res.refinement_levels}
    if args.format == "json":
        out = json.dumps(doc, indent=1) + "\n"
    else:
        out = "\n".join(f"{k}: {v}" for k, v in doc.items()) + "\n"
    _emit(out, args.output)
    return EXIT_OK


def _output_dir(args) -> Path:
    return Path(args.output_dir or os.environ.get(OUTPUT_DIR_ENV) or ".")


def cmd_sweep(args) -> int:
    if args.list_presets:
        for name, cfg in PRESETS.items():
            axes = "; ".join(a.describe() for a in cfg.axes)
            print(f"{name:<14} {cfg.quantity:<8} {cfg.caption}  [{axes}]")
        return EXIT_OK
    if args.preset:
        if args.sweep:
            raise UsageError("--preset and --sweep are exclusive")
        try:
            configs = expand_preset(args.preset)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        configs = [SweepConfig(c.name, c.template, c.axes, c.quantity, c.options, None,
                               args.format, c.caption) for c in configs]
    else:
        if not args.sweep:
            raise UsageError("give --preset NAME or at least one --sweep name:start:stop:steps")
        try:
            axes = tuple(SweepAxis.parse(s) for s in args.sweep)
            template = {k: v for k, v in _spec_params(args).items()
                        if k not in {a.name for a in axes}}
            configs = [SweepConfig(args.name, template, axes, args.quantity, {}, args.output,
                                   args.format)]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    for cfg in configs:
        text = render(cfg, run_sweep(cfg, workers=args.workers))
        if cfg.output == "-":
            _emit(text, "-")
            continue
        path = Path(cfg.output) if cfg.output else _output_dir(args) / f"{cfg.name}.{cfg.format}"
        _emit(text, str(path))
        print(path)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_verify(QUICK_GRID if args.quick else DEFAULT_GRID, fault=args.inject_fault,
                        workers=args.workers)
    if args.format == "json":
        _emit(json.dumps(report.to_json(), indent=1) + "\n", args.output)
    else:
        _emit(report.format_text() + "\n", args.output)
    if not report.passed:
        for line in report.failing():
            print("FAIL " + line, file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nonclassical",
        description="Nonclassicality witnesses of photon-added and photon-subtracted "
                    "squeezed coherent states.")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", help="file of key = value lines mirroring the flags")
        p.set_defaults(func=func)
        return p

    p = command("witness", cmd_witness, "all moment-based witnesses of one state")
    _add_spec_args(p)
    _add_output(p, ["text", "json", "csv"], "text")

    p = command("pnd", cmd_pnd, "photon-number distribution with Klyshko's B(n) and eta")
    _add_spec_args(p)
    p.add_argument("--n-max", type=int, default=None, help="last n (default: until converged)")
    _add_output(p, ["csv", "json"], "csv")

    p = command("wigner", cmd_wigner, "Wigner function on a phase-space grid, gamma = (x+ip)/sqrt2")
    _add_spec_args(p)
    p.add_argument("--x-range", type=float, nargs=2, metavar=("X0", "X1"))
    p.add_argument("--p-range", type=float, nargs=2, metavar=("P0", "P1"))
    p.add_argument("--nx", type=int, default=101)
    p.add_argument("--np", type=int, default=101)
    _add_output(p, ["csv", "binary"], "csv")

    p = command("volume", cmd_volume, "nonclassical volume of the Wigner function")
    _add_spec_args(p)
    p.add_argument("--tol", type=float, default=1e-6)
    _add_output(p, ["text", "json"], "text")

    p = command("sweep", cmd_sweep, "parameter sweeps and figure presets")
    _add_spec_args(p)
    p.add_argument("--preset", help="preset or figure name, e.g. fig3a or fig3")
    p.add_argument("--list-presets", action="store_true")
    p.add_argument("--sweep", action="append", metavar="NAME:START:STOP:STEPS",
                   help="swept parameter (once or twice); NAME in m, alpha_re, alpha_im, "
                        "alpha_mod, alpha_arg, r, phi")
    p.add_argument("--quantity", choices=QUANTITIES, default="witness")
    p.add_argument("--name", default="sweep")
    p.add_argument("--output-dir", help=f"directory for preset files (default: ${OUTPUT_DIR_ENV} or .)")
    p.add_argument("--workers", type=int, default=1)
    _add_output(p, ["csv", "json"], "csv")

    p = command("verify", cmd_verify, "closed forms against the Fock-space oracle")
    p.add_argument("--quick", action="store_true", help="m <= 1 and p, q <= 2")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--inject-fault", choices=FAULTS, help=argparse.SUPPRESS)
    _add_output(p, ["text", "json"], "text")
    return parser


def read_config(path: str) -> list[tuple[str, str]]:
    """``key = value`` lines; '#' starts a comment; keys use - or _."""
    items = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            items.append((key.strip().replace("_", "-"), value.strip()))
    return items


def _config_argv(parser, command: str, items) -> list[str]:
    subparser = parser._subparsers._group_actions[0].choices[command]
    argv = []
    for key, value in items:
        flag = "--" + key
        action = subparser._option_string_actions.get(flag)
        if action is None or key == "config":
            raise UsageError(f"unknown config key {key!r} for {command}")
        if action.nargs == 0:
            if value.lower() in ("1", "true", "yes", "on"):
                argv.append(flag)
            elif value.lower() not in ("0", "false", "no", "off"):
                raise UsageError(f"config key {key!r} expects a boolean")
        elif action.nargs in (2, "+"):
            argv += [flag, *value.split()]
        else:
            argv += [flag, value]
    return argv


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            # config values come first so that explicit flags override them
            extra = _config_argv(parser, args.command, read_config(args.config))
            args = parser.parse_args([args.command, *extra, *argv[argv.index(args.command) + 1:]])
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"nonclassical: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateStateError as exc:
        print(f"nonclassical: degenerate state: {exc}; it has zero norm and cannot be "
              "normalised", file=sys.stderr)
        return EXIT_DEGENERATE
    except ConvergenceError as exc:
        print(f"nonclassical: no convergence: {exc}; last estimates {list(exc.estimates)}",
              file=sys.stderr)
        return EXIT_CONVERGENCE
    except (BoundsError, ValueError) as exc:
        print(f"nonclassical: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"nonclassical: I/O error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # argparse
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
