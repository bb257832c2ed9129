"""Parameter sweeps: JSON configuration, parallel grid evaluation, and
CSV/JSON table emission.

Grid points evaluate independently through the library operations; per-point
failures are recorded in an ``error`` column and never abort a sweep.  Output
is deterministic: row-major grid order, shortest round-trip float formatting,
identical bytes regardless of the worker count.
"""

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import exactdiag, meanfield, spectrum
from .errors import ConfigError
from .meanfield import GapSolution, Phase
from .model import ModelParams

PARAM_NAMES = ("omega0", "Omega", "g1", "g2", "beta")
TASKS = ("critical", "gap", "spectrum", "free-energy", "partition", "ed-compare")

_DEFAULT_FIXED = {"omega0": 1.0, "Omega": 1.0, "g1": 0.0, "g2": 0.0, "beta": 1.0}
# CSV/JSON field names are snake_case; the atomic splitting column is "omega"
_INPUT_COLUMNS = {"omega0": "omega0", "Omega": "omega", "g1": "g1", "g2": "g2", "beta": "beta"}


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def values(self) -> tuple[float, ...]:
        if self.spacing == "log":
            grid = np.geomspace(self.start, self.stop, self.count)
        else:
            grid = np.linspace(self.start, self.stop, self.count)
        return tuple(float(v) for v in grid)


@dataclass(frozen=True)
class EDSettings:
    n_atoms: int = 6
    n_max: int | None = None
    k_gaps: int = 2


@dataclass(frozen=True)
class PartitionSettings:
    n_atoms: int = 100
    cutoff: int = 512


@dataclass(frozen=True)
class SweepSpec:
    axes: tuple[Axis, ...]
    fixed: dict
    tasks: tuple[str, ...]
    out_format: str = "csv"
    out_path: str = "sweep.csv"
    ed: EDSettings = field(default_factory=EDSettings)
    partition: PartitionSettings = field(default_factory=PartitionSettings)


def _reject_unknown(doc: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in {where or 'top-level object'}")


def _as_number(value, where: str, allow_inf: bool = False) -> float:
    if allow_inf and value == "inf":
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    v = float(value)
    if not math.isfinite(v):
        raise ConfigError(f"{where}: expected a finite number, got {value!r}")
    return v


def _as_int(value, where: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: expected an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"{where}: must be >= {minimum}, got {value}")
    return value


def _parse_axis(doc, index: int) -> Axis:
    where = f"axes[{index}]"
    if not isinstance(doc, dict):
        raise ConfigError(f"{where}: expected an object")
    _reject_unknown(doc, {"name", "start", "stop", "count", "spacing"}, where)
    for key in ("name", "start", "stop", "count"):
        if key not in doc:
            raise ConfigError(f"{where}: missing required key '{key}'")
    name = doc["name"]
    if name not in PARAM_NAMES:
        raise ConfigError(f"{where}.name: must be one of {PARAM_NAMES}, got {name!r}")
    start = _as_number(doc["start"], f"{where}.start")
    stop = _as_number(doc["stop"], f"{where}.stop")
    count = _as_int(doc["count"], f"{where}.count", 2)
    spacing = doc.get("spacing", "linear")
    if spacing not in ("linear", "log"):
        raise ConfigError(f"{where}.spacing: must be 'linear' or 'log', got {spacing!r}")
    if spacing == "log" and (start <= 0.0 or stop <= 0.0):
        raise ConfigError(f"{where}: log spacing requires positive start and stop")
    return Axis(name, start, stop, count, spacing)


def parse_config(text) -> SweepSpec:
    """Validate a JSON sweep document; unknown keys are rejected."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ConfigError("top-level document must be a JSON object")
    _reject_unknown(doc, {"axes", "fixed", "tasks", "output", "ed", "partition"}, "")

    axes_doc = doc.get("axes")
    if not isinstance(axes_doc, list) or not 1 <= len(axes_doc) <= 2:
        raise ConfigError("axes: expected a list of 1 or 2 axis objects")
    axes = tuple(_parse_axis(a, i) for i, a in enumerate(axes_doc))
    names = [a.name for a in axes]
    if len(set(names)) != len(names):
        raise ConfigError(f"axes: duplicate axis name {names[0]!r}")

    fixed = dict(_DEFAULT_FIXED)
    fixed_doc = doc.get("fixed", {})
    if not isinstance(fixed_doc, dict):
        raise ConfigError("fixed: expected an object")
    for key, value in fixed_doc.items():
        if key not in PARAM_NAMES:
            raise ConfigError(f"fixed.{key}: unknown parameter (use one of {PARAM_NAMES})")
        if key in names:
            raise ConfigError(f"fixed.{key}: conflicts with an axis of the same name")
        fixed[key] = _as_number(value, f"fixed.{key}", allow_inf=(key == "beta"))
    for name in names:
        fixed.pop(name, None)

    tasks_doc = doc.get("tasks", ["gap"])
    if not isinstance(tasks_doc, list):
        raise ConfigError("tasks: expected a list")
    for task in tasks_doc:
        if task not in TASKS:
            raise ConfigError(f"tasks: unknown task {task!r} (use subset of {TASKS})")
    if len(set(tasks_doc)) != len(tasks_doc):
        raise ConfigError("tasks: duplicate task name")

    out_format, out_path = "csv", "sweep.csv"
    output_doc = doc.get("output", {})
    if not isinstance(output_doc, dict):
        raise ConfigError("output: expected an object")
    _reject_unknown(output_doc, {"format", "path"}, "output")
    if "format" in output_doc:
        out_format = output_doc["format"]
        if out_format not in ("csv", "json"):
            raise ConfigError(f"output.format: must be 'csv' or 'json', got {out_format!r}")
    if "path" in output_doc:
        out_path = output_doc["path"]
        if not isinstance(out_path, str) or not out_path:
            raise ConfigError("output.path: expected a non-empty string")

    ed_doc = doc.get("ed", {})
    if not isinstance(ed_doc, dict):
        raise ConfigError("ed: expected an object")
    _reject_unknown(ed_doc, {"n_atoms", "n_max", "k_gaps"}, "ed")
    ed = EDSettings(
        n_atoms=_as_int(ed_doc.get("n_atoms", 6), "ed.n_atoms", 1),
        n_max=None if ed_doc.get("n_max") is None else _as_int(ed_doc["n_max"], "ed.n_max", 0),
        k_gaps=_as_int(ed_doc.get("k_gaps", 2), "ed.k_gaps", 0),
    )

    part_doc = doc.get("partition", {})
    if not isinstance(part_doc, dict):
        raise ConfigError("partition: expected an object")
    _reject_unknown(part_doc, {"n_atoms", "cutoff"}, "partition")
    part = PartitionSettings(
        n_atoms=_as_int(part_doc.get("n_atoms", 100), "partition.n_atoms", 1),
        cutoff=_as_int(part_doc.get("cutoff", 512), "partition.cutoff", 1),
    )

    return SweepSpec(axes, fixed, tuple(tasks_doc), out_format, out_path, ed, part)


def grid_points(spec: SweepSpec) -> list[dict]:
    """Full parameter assignments in row-major order over the axes."""
    points = []
    if len(spec.axes) == 1:
        combos = [(v,) for v in spec.axes[0].values()]
    else:
        combos = [(v0, v1) for v0 in spec.axes[0].values() for v1 in spec.axes[1].values()]
    for combo in combos:
        values = dict(spec.fixed)
        for axis, v in zip(spec.axes, combo):
            values[axis.name] = v
        points.append(values)
    return points


def task_columns(task: str, ed: EDSettings) -> list[str]:
    base = ["omega0", "omega", "g1", "g2", "beta"]
    if task == "critical":
        cols = base + ["has_transition", "beta_c"]
    elif task == "gap":
        cols = base + ["beta_c", "phase", "omega_delta", "b0_sq"]
    elif task == "spectrum":
        cols = base + ["case_tag", "goldstone", "e1", "e2"]
    elif task == "free-energy":
        cols = base + ["phase", "f"]
    elif task == "partition":
        cols = base + [
            "n_atoms", "cutoff", "phase", "goldstone_case",
            "phi", "log_correction", "log_ratio",
        ]
    elif task == "ed-compare":
        cols = base + [
            "n_atoms", "n_max", "ed_free_energy", "mf_free_energy",
            "ed_photon_density", "mf_b0_sq", "ed_inversion",
        ]
        cols += [f"ed_gap_{i + 1}" for i in range(ed.k_gaps)]
        cols += ["parity_residual", "nsum_residual", "ndiff_residual"]
    else:
        raise ConfigError(f"unknown task {task!r}")
    return cols + ["error"]


def _gap_or_normal(p: ModelParams, beta: float) -> GapSolution:
    if p.g_sum == 0.0:
        return GapSolution.normal(p)
    return meanfield.solve_gap(p, beta)


def _fill_row(task: str, p: ModelParams, beta: float, ed: EDSettings,
              part: PartitionSettings, row: dict) -> None:
    if task == "critical":
        bc = meanfield.critical_beta(p)
        row["has_transition"] = bc is not None
        row["beta_c"] = "none" if bc is None else bc
    elif task == "gap":
        bc = meanfield.critical_beta(p)
        gap = meanfield.solve_gap(p, beta)
        row["beta_c"] = "none" if bc is None else bc
        row["phase"] = gap.phase.value
        row["omega_delta"] = gap.omega_delta
        row["b0_sq"] = gap.b0_sq
    elif task == "spectrum":
        gap = _gap_or_normal(p, beta)
        if gap.phase is Phase.SUPERRADIANT:
            result = spectrum.spectrum_superradiant(p, beta)
        else:
            result = spectrum.spectrum_normal(p, beta)
        row["case_tag"] = result.case_tag.value
        row["goldstone"] = result.goldstone
        row["e1"], row["e2"] = result.energies
    elif task == "free-energy":
        gap = _gap_or_normal(p, beta)
        row["phase"] = gap.phase.value
        row["f"] = meanfield.free_energy_per_atom(p, beta)
    elif task == "partition":
        row["n_atoms"] = part.n_atoms
        row["cutoff"] = part.cutoff
        gap = _gap_or_normal(p, beta)
        row["phase"] = gap.phase.value
        asym = meanfield.log_partition_ratio(p, beta, part.n_atoms, part.cutoff)
        row["goldstone_case"] = asym.goldstone_case
        row["phi"] = asym.phi
        row["log_correction"] = asym.log_correction
        row["log_ratio"] = asym.total
    elif task == "ed-compare":
        n_max = ed.n_max if ed.n_max is not None else exactdiag.default_n_max(p, beta, ed.n_atoms)
        row["n_atoms"] = ed.n_atoms
        row["n_max"] = n_max
        cfg = exactdiag.EDConfig(ed.n_atoms, n_max, p, beta)
        result = exactdiag.thermal_observables(cfg, k_gaps=ed.k_gaps)
        gap = _gap_or_normal(p, beta)
        row["ed_free_energy"] = result.free_energy_per_atom
        row["mf_free_energy"] = meanfield.free_energy_per_atom(p, beta)
        row["ed_photon_density"] = result.photon_density
        row["mf_b0_sq"] = gap.b0_sq
        row["ed_inversion"] = result.inversion
        for i in range(ed.k_gaps):
            row[f"ed_gap_{i + 1}"] = result.gaps[i] if i < len(result.gaps) else None
        row["parity_residual"] = result.parity_residual
        row["nsum_residual"] = result.nsum_residual
        row["ndiff_residual"] = result.ndiff_residual


def evaluate_row(task: str, values: dict, ed: EDSettings, part: PartitionSettings) -> dict:
    """One grid point of one task; failures land in the error column."""
    row = {column: None for column in task_columns(task, ed)}
    for name, column in _INPUT_COLUMNS.items():
        row[column] = values[name]
    row["error"] = ""
    p = ModelParams(values["omega0"], values["Omega"], values["g1"], values["g2"])
    try:
        _fill_row(task, p, values["beta"], ed, part, row)
    except Exception as exc:  # per-row capture: a sweep never aborts
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _evaluate_star(args) -> dict:
    return evaluate_row(*args)


def run_sweep(spec: SweepSpec, workers: int = 1, max_ed_workers: int | None = None) -> dict:
    """Evaluate every task on the grid; returns {task: [row, ...]}.

    Rows are in row-major grid order regardless of the worker count.  ED rows
    are memory-heavy, so their pool can be capped separately.
    """
    points = grid_points(spec)
    tables = {}
    for task in spec.tasks:
        pool_size = workers
        if task == "ed-compare" and max_ed_workers is not None:
            pool_size = max(1, min(workers, max_ed_workers))
        args = [(task, values, spec.ed, spec.partition) for values in points]
        if pool_size <= 1 or len(args) <= 1:
            rows = [evaluate_row(*a) for a in args]
        else:
            chunk = max(1, len(args) // (4 * pool_size))
            with ProcessPoolExecutor(max_workers=pool_size) as pool:
                rows = list(pool.map(_evaluate_star, args, chunksize=chunk))
        tables[task] = rows
    return tables


def error_count(tables: dict) -> int:
    return sum(1 for rows in tables.values() for row in rows if row["error"])


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)  # shortest round-trip decimal
    return str(value)


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)  # JSON has no Infinity literal
    return value


def write_rows(rows: list, columns: list, path: Path, fmt: str) -> None:
    """Write one task table; CSV uses RFC-4180 quoting, JSON an object array."""
    if fmt == "csv":
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_format_cell(row[c]) for c in columns])
    else:
        payload = [{c: _jsonable(row[c]) for c in columns} for row in rows]
        with path.open("w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")


def output_paths(spec: SweepSpec) -> dict:
    """One output file per task, derived from the configured path."""
    base = Path(spec.out_path)
    stem = base.name
    for ext in (".csv", ".json"):
        if stem.endswith(ext):
            stem = stem[: -len(ext)]
    return {
        task: base.with_name(f"{stem}_{task.replace('-', '_')}.{spec.out_format}")
        for task in spec.tasks
    }


def emit_output(tables: dict, spec: SweepSpec) -> dict:
    """Write every task table; returns {task: path}.  Files are written even
    when rows carry errors; unwritable paths raise OSError."""
    paths = output_paths(spec)
    for task in spec.tasks:
        write_rows(tables[task], task_columns(task, spec.ed), paths[task], spec.out_format)
    return paths
