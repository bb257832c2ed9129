"""Command-line interface.

Scalar subcommands evaluate one parameter point and print a one-row table;
``sweep`` runs a JSON-configured grid and writes one CSV/JSON file per task.
Exit codes: 0 success, 1 configuration or I/O error, 2 when any evaluated
row carries an error.
"""

import argparse
import csv
import json
import sys
from pathlib import Path

from . import sweep as sweep_mod
from .errors import ConfigError
from .sweep import EDSettings, PartitionSettings, evaluate_row, task_columns

_SCALAR_TASKS = ("critical", "gap", "spectrum", "free-energy", "partition", "ed-compare")


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for row failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_model_arguments(parser) -> None:
    parser.add_argument("--omega0", type=float, default=1.0, help="boson mode frequency (default 1)")
    parser.add_argument("--Omega", type=float, default=1.0, help="atomic level splitting (default 1)")
    parser.add_argument("--g1", type=float, default=0.0, help="rotating coupling (default 0)")
    parser.add_argument("--g2", type=float, default=0.0, help="counter-rotating coupling (default 0)")
    parser.add_argument("--beta", type=float, default=1.0,
                        help="inverse temperature; accepts 'inf' (default 1)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="stdout table format (default csv)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fulldicke",
                     description="Phase structure of the full Dicke model in the thermodynamic limit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    helps = {
        "critical": "critical inverse temperature for the given couplings",
        "gap": "phase label, effective frequency and order parameter",
        "spectrum": "collective excitation energies",
        "free-energy": "per-atom free energy",
        "partition": "asymptotic log partition ratio ln(Z/Z0)",
        "ed-compare": "finite-N exact diagonalization vs the mean field",
    }
    for task in _SCALAR_TASKS:
        sp = sub.add_parser(task, help=helps[task])
        _add_model_arguments(sp)
        if task == "partition":
            sp.add_argument("--n-atoms", type=int, default=100, help="atom number N (default 100)")
            sp.add_argument("--cutoff", type=int, default=512,
                            help="Matsubara frequency cutoff (default 512)")
        if task == "ed-compare":
            sp.add_argument("--n-atoms", type=int, default=6, help="atom number N (default 6)")
            sp.add_argument("--n-max", type=int, default=None,
                            help="Fock cutoff (default: auto from the mean field)")
            sp.add_argument("--k-gaps", type=int, default=2,
                            help="number of excitation gaps to report (default 2)")
        sp.set_defaults(func=_run_scalar, task=task)

    sp = sub.add_parser("sweep", help="run a parameter sweep from a JSON config")
    sp.add_argument("config", help="path to the sweep configuration (JSON)")
    sp.add_argument("--workers", type=int, default=1, help="parallel workers (default 1)")
    sp.add_argument("--max-ed-workers", type=int, default=None,
                    help="cap on concurrent ed-compare workers (memory bound)")
    sp.set_defaults(func=_run_sweep)
    return parser


def _print_rows(rows: list, columns: list, fmt: str) -> None:
    if fmt == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([sweep_mod._format_cell(row[c]) for c in columns])
    else:
        payload = [{c: sweep_mod._jsonable(row[c]) for c in columns} for row in rows]
        json.dump(payload[0] if len(payload) == 1 else payload, sys.stdout, indent=1)
        sys.stdout.write("\n")


def _run_scalar(args) -> int:
    ed = EDSettings(
        n_atoms=getattr(args, "n_atoms", 6),
        n_max=getattr(args, "n_max", None),
        k_gaps=getattr(args, "k_gaps", 2),
    )
    part = PartitionSettings(
        n_atoms=getattr(args, "n_atoms", 100),
        cutoff=getattr(args, "cutoff", 512),
    )
    values = {"omega0": args.omega0, "Omega": args.Omega, "g1": args.g1,
              "g2": args.g2, "beta": args.beta}
    row = evaluate_row(args.task, values, ed, part)
    _print_rows([row], task_columns(args.task, ed), args.format)
    return 2 if row["error"] else 0


def _run_sweep(args) -> int:
    spec = sweep_mod.parse_config(Path(args.config).read_bytes())
    tables = sweep_mod.run_sweep(spec, workers=args.workers,
                                 max_ed_workers=args.max_ed_workers)
    paths = sweep_mod.emit_output(tables, spec)
    for task in spec.tasks:
        print(f"wrote {paths[task]}")
    return 2 if sweep_mod.error_count(tables) else 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
