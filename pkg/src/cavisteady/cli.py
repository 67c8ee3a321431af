"""Command-line front end: single solves and one-dimensional scans.

    cavisteady solve --n 4 --nmax 2 --u 6 --omega 0.7 --j 0.2 --methods exact,pert2
    cavisteady scan --scan j:0:1:51 --n 4 --nmax 2 --u 6 --omega 0.7 \
        --methods exact,pert0,pert1,pert2 --out fig1ab.csv

A JSON config file (--config) mirrors the flags; explicit flags override
it. Exit codes: 0 success, 2 invalid configuration, 3 solver failure on a
single solve.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import CavisteadyError
from .eom import assemble_system, dump_system
from .params import validate_params
from .scan import METHODS, ScanConfig, rows_to_csv, rows_to_json, run_scan

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavisteady",
        description="Steady states of a driven-dissipative Kerr cavity ring "
        "(all rates in units of gamma0).",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("solve", "solve at one parameter point"),
        ("scan", "sweep one parameter"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON file with these flags as keys")
        p.add_argument("--n", type=int, help="number of cavities (default 1)")
        p.add_argument("--nmax", type=int, help="exponent truncation (default 2)")
        p.add_argument("--delta", type=float, help="detuning omega_a - omega_L")
        p.add_argument("--u", type=float, help="Kerr strength")
        p.add_argument("--j", type=float, help="tunneling rate")
        p.add_argument("--omega", type=float, help="coherent drive amplitude")
        p.add_argument("--gamma0", type=float, help="decay rate unit (default 1)")
        p.add_argument("--nthermal", type=float, help="bath occupation (default 0)")
        p.add_argument(
            "--method",
            "--methods",
            dest="methods",
            help=f"comma-separated subset of {','.join(METHODS)}",
        )
        p.add_argument(
            "--observables",
            help="comma-separated subset of n_a,g2,nn (default all)",
        )
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="output format")
        p.add_argument(
            "--appendix-verbatim",
            action="store_true",
            default=None,
            help="drop the pump contribution to the diagonal decay term",
        )
        p.add_argument(
            "--oracle-cut", type=int, help="Fock cutoff for the oracle method"
        )
        p.add_argument("--workers", type=int, help="parallel scan workers")
        if name == "scan":
            p.add_argument(
                "--scan",
                required=False,
                dest="scan_spec",
                help="<name:from:to:steps> with name in j,delta,omega,n_thermal",
            )
        else:
            p.add_argument(
                "--dump-system",
                help="write the tagged nonzeros of (M, I) to this path",
            )
    return parser


def _merged_options(args: argparse.Namespace) -> dict:
    options: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            options.update(json.load(fh))
    for key in (
        "n",
        "nmax",
        "delta",
        "u",
        "j",
        "omega",
        "gamma0",
        "nthermal",
        "methods",
        "observables",
        "out",
        "format",
        "appendix_verbatim",
        "oracle_cut",
        "workers",
        "scan_spec",
        "dump_system",
    ):
        value = getattr(args, key, None)
        if value is not None:
            options[key] = value
    return options


def _config_from_options(options: dict, need_scan: bool) -> ScanConfig:
    params = validate_params(
        {
            "delta": options.get("delta", 0.0),
            "u": options.get("u", 0.0),
            "j": options.get("j", 0.0),
            "omega": options.get("omega", 0.0),
            "gamma0": options.get("gamma0", 1.0),
            "n_thermal": options.get("nthermal", 0.0),
            "n_cavities": options.get("n", 1),
            "n_max": options.get("nmax", 2),
            "appendix_verbatim": options.get("appendix_verbatim", False),
        }
    )
    methods = tuple(
        m.strip() for m in str(options.get("methods", "exact")).split(",") if m.strip()
    )
    observables = tuple(
        o.strip()
        for o in str(options.get("observables", "n_a,g2,nn")).split(",")
        if o.strip()
    )
    scan_param, start, stop, steps = "", 0.0, 0.0, 1
    if need_scan:
        spec = options.get("scan_spec") or options.get("scan")
        if not spec:
            raise ValueError("scan requires --scan <name:from:to:steps>")
        parts = str(spec).split(":")
        if len(parts) != 4:
            raise ValueError(f"bad scan spec {spec!r}")
        scan_param = parts[0]
        start, stop = float(parts[1]), float(parts[2])
        steps = int(parts[3])
    return ScanConfig(
        base=params,
        scan_param=scan_param,
        start=start,
        stop=stop,
        steps=steps,
        methods=methods,
        observables=observables,
        oracle_cut=options.get("oracle_cut"),
        workers=int(options.get("workers", 1)),
    )


def _emit(config: ScanConfig, rows, options: dict) -> None:
    fmt = options.get("format", "csv")
    text = rows_to_json(config, rows) if fmt == "json" else rows_to_csv(config, rows)
    out = options.get("out")
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        options = _merged_options(args)
        config = _config_from_options(options, need_scan=args.command == "scan")
    except (CavisteadyError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "solve" and options.get("dump_system"):
        dump_system(assemble_system(config.base), options["dump_system"])

    rows = run_scan(config)
    if args.command == "solve":
        failed = [r for r in rows if r.error]
        if failed:
            for r in failed:
                print(f"error [{r.method}]: {r.error}", file=sys.stderr)
            _emit(config, rows, options)
            return EXIT_SOLVER
    _emit(config, rows, options)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
