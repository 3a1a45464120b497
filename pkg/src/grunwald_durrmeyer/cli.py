"""Command-line front end: ``gdur verify | converge | rates | kernels``.

Configuration comes from built-in defaults, then an optional flat
``key = value`` file (``--config``), then command-line flags, later sources
winning.  Exit status is 0 when everything passes, 1 when a verification
check fails and 2 for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import math
import sys
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import analysis
from .errors import ConfigurationError, DomainError, EvaluationError
from .functions import BATTERY, battery_function, constant
from .kernel import kernel_matrix
from .operators import Resolution, apply_operator, durrmeyer_operator, norm_label, parse_norm
from .quadrature import default_rule, lp_norm, sup_norm_on_grid, uniform_grid

log = logging.getLogger("grunwald_durrmeyer")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

MASS_TOLERANCE = 1e-8
IDENTITY_TOLERANCE = 1e-9
DUAL_PATH_SAMPLES_PER_N = 2000


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class StudyConfig:
    n_values: tuple[int, ...] = (1, 2, 4, 8, 16, 32, 64)
    functions: tuple[str, ...] = tuple(BATTERY)
    operators: tuple[str, ...] = ("durrmeyer",)
    norms: tuple[str, ...] = ("sup", "L1", "L2")
    panels_per_n: int = 4
    points_per_panel: int = 10
    grid_points: int = 2001
    output_format: str = "csv"
    seed: int = 0
    force_resolution: bool = False
    model: str = "auto"
    out: str | None = field(default=None, compare=False)
    input: str | None = field(default=None, compare=False)

    def validate(self) -> "StudyConfig":
        if not self.n_values:
            raise UsageError("n_values must be nonempty")
        if any(n < 1 for n in self.n_values):
            raise UsageError("n_values must be positive integers")
        if list(self.n_values) != sorted(set(self.n_values)):
            raise UsageError("n_values must be sorted and distinct")
        for label in self.functions:
            if label not in BATTERY:
                raise UsageError(f"unknown function {label!r}; choose from {', '.join(BATTERY)}")
        for op in self.operators:
            if op not in ("grunwald", "durrmeyer"):
                raise UsageError(f"unknown operator {op!r}")
        for norm in self.norms:
            try:
                parse_norm(norm)
            except DomainError as exc:
                raise UsageError(str(exc)) from None
        if self.panels_per_n < 1 or self.points_per_panel < 2:
            raise UsageError("panels_per_n must be >= 1 and points_per_panel >= 2")
        if self.panels_per_n < 4 and not self.force_resolution:
            raise UsageError("panels_per_n < 4 under-resolves the kernels; pass --force-resolution to override")
        if self.grid_points < 2:
            raise UsageError("grid must have at least 2 points")
        if self.output_format not in ("csv", "json"):
            raise UsageError("format must be csv or json")
        if self.model != "auto":
            try:
                analysis.RateModel.parse(self.model)
            except (DomainError, ValueError) as exc:
                raise UsageError(str(exc)) from None
        return self

    @property
    def resolution(self) -> Resolution:
        return Resolution(self.panels_per_n, self.points_per_panel, self.grid_points, self.force_resolution)

    def canonical(self) -> dict:
        data = asdict(self)
        data.pop("out")
        data.pop("input")
        return data

    @property
    def digest(self) -> str:
        text = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()


COMMAND_DEFAULTS = {
    "verify": {},
    "converge": {"n_values": (8, 16, 32, 64, 128, 256)},
    "rates": {"n_values": (8, 16, 32, 64, 128, 256)},
    "kernels": {"n_values": (8,), "grid_points": 201},
}


def _split(text: str) -> list[str]:
    return [part.strip() for part in str(text).split(",") if part.strip()]


def _to_bool(text) -> bool:
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {text!r}")


_CONVERTERS = {
    "n_values": lambda v: tuple(int(x) for x in _split(v)),
    "functions": lambda v: tuple(_split(v)),
    "operators": lambda v: tuple(_split(v)),
    "norms": lambda v: tuple(_split(v)),
    "panels_per_n": int,
    "points_per_panel": int,
    "grid_points": int,
    "output_format": str,
    "seed": int,
    "force_resolution": _to_bool,
    "model": str,
    "out": str,
    "input": str,
}

# Config-file keys and the fields they set; flags use the same names with dashes.
_KEY_ALIASES = {"n": "n_values", "grid": "grid_points", "format": "output_format"}


def read_config_file(path) -> dict:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key = key.strip().replace("-", "_")
        key = _KEY_ALIASES.get(key, key)
        if key not in _CONVERTERS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def build_config(command: str, file_values: dict, cli_values: dict) -> StudyConfig:
    merged = dict(COMMAND_DEFAULTS.get(command, {}))
    for source in (file_values, cli_values):
        for key, value in source.items():
            if value is None:
                continue
            try:
                merged[key] = _CONVERTERS[key](value) if isinstance(value, str) else value
            except ValueError as exc:
                raise UsageError(f"bad value for {key}: {value!r} ({exc})") from None
    return replace(StudyConfig(), **merged).validate()


# --------------------------------------------------------------------------
# output


def fmt(value) -> str:
    """Shortest round-trip text for floats (at most 17 significant digits)."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return repr(value) if math.isfinite(value) else ("nan" if math.isnan(value) else repr(value))
    return str(value)


def _json_value(value):
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def render(rows: list[dict], columns: list[str], config: StudyConfig, command: str) -> str:
    if config.output_format == "json":
        payload = [{c: _json_value(row[c]) for c in columns} for row in rows]
        return json.dumps(payload, indent=1) + "\n"
    buffer = io.StringIO(newline="")
    canonical = json.dumps(config.canonical(), sort_keys=True, separators=(",", ":"))
    buffer.write(f"# gdur {command} config_sha256={config.digest} config={canonical}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row[c]) for c in columns])
    return buffer.getvalue()


def emit(text: str, config: StudyConfig, stream) -> None:
    if config.out:
        Path(config.out).write_text(text, newline="")
    else:
        stream.write(text)


def read_records(path) -> list[analysis.ConvergenceRecord]:
    """Load ``converge`` output (CSV with a ``#`` header line, or JSON)."""
    text = Path(path).read_text()
    if text.lstrip().startswith("["):
        rows = json.loads(text)
    else:
        lines = [line for line in text.splitlines() if not line.startswith("#")]
        rows = list(csv.DictReader(lines))
    records = []
    for row in rows:
        error = row["error"]
        records.append(
            analysis.ConvergenceRecord(
                n=int(row["n"]),
                function_label=row["function"],
                operator=row["operator"],
                norm=row["norm"],
                error=float("nan") if error in (None, "", "nan") else float(error),
                model_value=float(row["model_value"]),
            )
        )
    return records


# --------------------------------------------------------------------------
# commands


VERIFY_COLUMNS = ["check", "n", "value", "expected", "deviation", "tolerance", "passed"]


def _check(rows, check, n, value, expected, deviation, tolerance):
    rows.append(
        {
            "check": check,
            "n": n,
            "value": float(value),
            "expected": float(expected),
            "deviation": float(deviation),
            "tolerance": tolerance,
            "passed": bool(deviation < tolerance),
        }
    )


def run_verify(config: StudyConfig) -> list[dict]:
    """Identity checks for every ``n``: kernel mass, partition of unity,
    cardinality, direct/series agreement and reproduction of constants."""
    rng = np.random.default_rng(config.seed)
    grid = uniform_grid(config.grid_points)
    rows: list[dict] = []
    for n in config.n_values:
        rule = default_rule(n, (), config.panels_per_n, config.points_per_panel)
        masses = kernel_matrix(n, rule.nodes) @ rule.weights
        worst = int(np.argmax(np.abs(masses - math.pi / n)))
        _check(rows, "kernel_mass", n, masses[worst], math.pi / n, abs(masses[worst] - math.pi / n), MASS_TOLERANCE)

        sums = kernel_matrix(n, grid).sum(axis=0)
        i = int(np.argmax(np.abs(sums - 1.0)))
        _check(rows, "partition_of_unity", n, sums[i], 1.0, abs(sums[i] - 1.0), IDENTITY_TOLERANCE)

        dev = analysis.cardinality_deviation(n, "direct")
        _check(rows, "cardinality", n, dev, 0.0, dev, IDENTITY_TOLERANCE)

        k = np.floor(rng.random(DUAL_PATH_SAMPLES_PER_N) * n).astype(int) + 1
        shift = math.pi / (2 * n)
        t = -shift + rng.random(DUAL_PATH_SAMPLES_PER_N) * (math.pi + 2 * shift)
        keep = analysis.distance_to_singularity(n, k, t) >= 1e-3
        dev = analysis.dual_path_deviation(np.full(int(keep.sum()), n), k[keep], t[keep])
        _check(rows, "dual_path", n, dev, 0.0, dev, IDENTITY_TOLERANCE)

        values = durrmeyer_operator(n, constant(1.0, "one"), rule, force=True)(grid)
        i = int(np.argmax(np.abs(values - 1.0)))
        _check(rows, "constant_reproduction", n, values[i], 1.0, abs(values[i] - 1.0), IDENTITY_TOLERANCE)
    return rows


CONVERGE_COLUMNS = ["n", "function", "operator", "norm", "error", "model_value", "wall_ms"]


def model_for(norm: str, n: int) -> float:
    p = parse_norm(norm)
    if math.isinf(p):
        return analysis.RateModel("log_over_n").value(n)
    return analysis.m_n(n, p)


def run_converge(config: StudyConfig) -> list[dict]:
    """One row per (n, function, operator, norm), sorted in that order."""
    resolution = config.resolution
    grid = uniform_grid(config.grid_points)
    rows = []
    for n in config.n_values:
        for label in sorted(config.functions):
            f = battery_function(label)
            for op in sorted(config.operators):
                start = time.perf_counter()
                try:
                    approx = apply_operator(op, n, f, resolution)
                    setup_error = None
                except (EvaluationError, ConfigurationError) as exc:
                    approx, setup_error = None, exc
                setup_ms = 1000.0 * (time.perf_counter() - start)
                for norm in sorted(config.norms, key=lambda s: (parse_norm(s), s)):
                    p = parse_norm(norm)
                    start = time.perf_counter()
                    error = math.nan
                    if approx is None:
                        log.warning("n=%d %s %s: %s", n, label, op, setup_error)
                    else:
                        try:
                            residual = lambda t, a=approx, g=f: a(t) - g(t)
                            if math.isinf(p):
                                error = sup_norm_on_grid(residual, grid)
                            else:
                                error = lp_norm(resolution.rule(n, f.breakpoints), residual, p)
                        except EvaluationError as exc:
                            log.warning("n=%d %s %s %s: %s", n, label, op, norm, exc)
                    rows.append(
                        {
                            "n": n,
                            "function": label,
                            "operator": op,
                            "norm": norm_label(p),
                            "error": error,
                            "model_value": model_for(norm, n),
                            "wall_ms": round(setup_ms + 1000.0 * (time.perf_counter() - start), 3),
                        }
                    )
    return rows


RATES_COLUMNS = ["function", "operator", "norm", "model", "points", "slope", "intercept", "r_squared", "max_ratio", "min_ratio", "status"]


def run_rates(config: StudyConfig, records: list[analysis.ConvergenceRecord]) -> list[dict]:
    """Fit each (function, operator, norm) group against its rate model."""
    groups: dict[tuple, list] = {}
    for record in records:
        groups.setdefault((record.function_label, record.operator, record.norm), []).append(record)
    rows = []
    for key in sorted(groups):
        group = sorted(groups[key], key=lambda r: r.n)
        if config.model == "auto":
            model_label = "log_over_n" if key[2] == "sup" else f"m_n({parse_norm(key[2]):g})"
        else:
            model = analysis.RateModel.parse(config.model)
            model_label = model.label
            group = [replace(r, model_value=model.value(r.n)) for r in group]
        row = {"function": key[0], "operator": key[1], "norm": key[2], "model": model_label}
        try:
            fit = analysis.rate_fit(group)
        except DomainError:
            row.update(points=0, slope=math.nan, intercept=math.nan, r_squared=math.nan,
                       max_ratio=math.nan, min_ratio=math.nan, status="insufficient")
        else:
            row.update(points=fit.points, slope=fit.slope, intercept=fit.intercept, r_squared=fit.r_squared,
                       max_ratio=fit.max_ratio, min_ratio=fit.min_ratio, status="ok")
        rows.append(row)
    return rows


def format_rates_table(rows: list[dict]) -> str:
    header = f"{'function':<10} {'operator':<10} {'norm':<5} {'model':<12} {'slope':>8} {'R^2':>8} {'max_ratio':>10}"
    lines = [header, "-" * len(header)]
    for row in rows:
        if row["status"] != "ok":
            lines.append(f"{row['function']:<10} {row['operator']:<10} {row['norm']:<5} {row['model']:<12} {'(fewer than 4 usable points)':>28}")
            continue
        lines.append(
            f"{row['function']:<10} {row['operator']:<10} {row['norm']:<5} {row['model']:<12} "
            f"{row['slope']:8.4f} {row['r_squared']:8.5f} {row['max_ratio']:10.4g}"
        )
    return "\n".join(lines) + "\n"


def kernel_rows(n: int, grid_points: int) -> tuple[list[dict], list[str]]:
    grid = uniform_grid(grid_points)
    values = kernel_matrix(n, grid)
    names = [f"S_{k}" for k in range(1, n + 1)]
    sums = values.sum(axis=0)
    leb = np.abs(values).sum(axis=0)
    rows = []
    for j, t in enumerate(grid):
        row = {"t": float(t)}
        row.update({name: float(values[k, j]) for k, name in enumerate(names)})
        row["sum"] = float(sums[j])
        row["lebesgue_sum"] = float(leb[j])
        rows.append(row)
    return rows, ["t", *names, "sum", "lebesgue_sum"]


# --------------------------------------------------------------------------
# argument parsing


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value configuration file")
    common.add_argument("--n", dest="n_values", help="comma-separated degrees, e.g. 8,16,32")
    common.add_argument("--functions", help=f"comma-separated battery labels ({', '.join(BATTERY)})")
    common.add_argument("--operators", help="comma-separated subset of grunwald,durrmeyer")
    common.add_argument("--norms", help="comma-separated norms: sup, L1, L2, L<p>")
    common.add_argument("--panels-per-n", dest="panels_per_n", type=int)
    common.add_argument("--points-per-panel", dest="points_per_panel", type=int)
    common.add_argument("--grid", dest="grid_points", type=int, help="evaluation grid size")
    common.add_argument("--format", dest="output_format", choices=("csv", "json"))
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--force-resolution", dest="force_resolution", action="store_const", const=True)
    common.add_argument("--seed", type=int)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="gdur", description="Grunwald-Durrmeyer operator studies")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="identity checks; exit 1 on any breach")
    sub.add_parser("converge", parents=[common], help="error table over n, functions, operators, norms")
    rates = sub.add_parser("rates", parents=[common], help="log-log rate fits")
    rates.add_argument("--model", help="auto, log_over_n, inv_n_pow:<alpha> or m_n:<p>")
    rates.add_argument("--input", help="converge output to fit (computed inline when omitted)")
    sub.add_parser("kernels", parents=[common], help="kernel values on a grid")
    return parser


_CONFIG_FIELDS = set(_CONVERTERS)


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    cli_values = {k: v for k, v in vars(args).items() if k in _CONFIG_FIELDS}
    try:
        file_values = read_config_file(args.config) if args.config else {}
        config = build_config(args.command, file_values, cli_values)
        if args.command == "kernels" and len(config.n_values) != 1:
            raise UsageError("kernels takes exactly one --n")
        if args.command == "rates" and config.input is None and len(config.n_values) < 4:
            raise UsageError("rates needs at least 4 values of n")
    except (UsageError, OSError) as exc:
        print(f"gdur: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.command == "verify":
        rows = run_verify(config)
        emit(render(rows, VERIFY_COLUMNS, config, "verify"), config, stdout)
        failed = [r for r in rows if not r["passed"]]
        for r in failed:
            print(f"gdur: FAILED {r['check']} n={r['n']} deviation={r['deviation']:.3e} tolerance={r['tolerance']:g}", file=sys.stderr)
        return EXIT_FAILED if failed else EXIT_OK

    if args.command == "converge":
        rows = run_converge(config)
        emit(render(rows, CONVERGE_COLUMNS, config, "converge"), config, stdout)
        return EXIT_OK

    if args.command == "rates":
        try:
            records = read_records(config.input) if config.input else [
                analysis.ConvergenceRecord(r["n"], r["function"], r["operator"], r["norm"], r["error"], r["model_value"])
                for r in run_converge(config)
            ]
        except (OSError, KeyError, ValueError) as exc:
            print(f"gdur: error: cannot read records: {exc}", file=sys.stderr)
            return EXIT_USAGE
        rows = run_rates(config, records)
        if len({r.n for r in records}) < 4:
            print("gdur: error: fewer than 4 distinct n values in the records", file=sys.stderr)
            return EXIT_USAGE
        sys.stderr.write(format_rates_table(rows))
        emit(render(rows, RATES_COLUMNS, config, "rates"), config, stdout)
        return EXIT_OK

    rows, columns = kernel_rows(config.n_values[0], config.grid_points)
    emit(render(rows, columns, config, "kernels"), config, stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
