"""Simulation commands registered on the Flask CLI (``netlab <command>`` or ``flask --app app <command>``).

Settings are resolved per command: flags, then the ``--config`` key=value file,
then environment variables and settings.ini, then built-in defaults. Every
command writes ``manifest.ini`` with the effective settings next to its output.
"""

import configparser
import functools
import logging
import os
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import click
from flask import Blueprint, current_app

from app.config import (
    FALSE_VALUES,
    TRUE_VALUES,
    get_allow_indifferent_adds,
    get_detect_cycles,
    get_idle_terminate,
    get_master_seed,
    get_max_iterations,
    get_output_dir,
    get_progress,
    get_repetitions,
    get_sweep_densities,
    get_sweep_n,
    get_sweep_step,
    get_tau_fraction,
    get_workers,
)
from app.game.classifier import classify
from app.game.dynamics import run_once
from app.game.oracle import check_extremal_bounds, enumerate_graphs, recertify, write_dump
from app.game.pos import pos_grid
from app.game.sweep import (
    REGIONS_HEADER,
    SWEEP_HEADER,
    TRAJECTORY_HEADER,
    region_rows,
    run_sweep,
    sweep_rows,
    trajectory_rows,
)
from app.game.verification import verify_predictions
from app.models import (
    ClaimStatus,
    ClassifierConfig,
    InvariantViolation,
    NetlabError,
    Params,
    ParamsError,
    PosMethod,
    SimConfig,
    SweepSpec,
)
from app.models.graph import read_edge_list, write_edge_list
from app.utils import (
    format_decimal,
    format_grid_value,
    format_rational,
    get_timezone_timestamp,
    mix_seed,
    parse_range,
    rational_range,
    write_csv,
)
from app.utils.validation import (
    MAX_ITERATIONS,
    MAX_REPETITIONS,
    validate_density,
    validate_node_count,
    validate_params,
    validate_positive_int,
    validate_rational,
    validate_seed,
    validate_step,
)

logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_IO = 2
EXIT_INVARIANT = 3


class SimCommand(click.Command):
    """Command whose unknown flags and missing arguments exit with EXIT_USAGE."""

    def parse_args(self, ctx: click.Context, args: List[str]) -> List[str]:
        try:
            return super().parse_args(ctx, args)
        except click.UsageError as e:
            e.exit_code = EXIT_USAGE
            raise


sim_bp = Blueprint("sim", __name__, cli_group=None)
sim_bp.cli.command_class = SimCommand

ATLAS_DEFAULT_N = 6
SETTINGS_SECTION = "settings"
SETTING_KEYS = (
    "n",
    "delta-range",
    "cost-range",
    "step",
    "densities",
    "reps",
    "seed",
    "max-iters",
    "idle-terminate",
    "allow-indifferent-adds",
    "detect-cycles",
    "tau-fraction",
    "workers",
    "out",
    "progress",
    "delta",
    "cost",
    "density",
    "method",
)
VERIFY_HEADER = ["delta", "cost", "claim", "status", "detail"]
POS_HEADER = [
    "delta",
    "cost",
    "kind",
    "value",
    "method",
    "region",
    "best_stable_utility",
    "efficient_utility",
    "exhaustive",
]


def exit_codes(func):
    """Map library errors onto the command exit codes (1 usage, 2 I/O, 3 invariant violation)."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return func(*args, **kwargs)
        except InvariantViolation as e:
            logger.error(f"Invariant violation in {ctx.info_name}: {str(e)}", exc_info=True)
            click.echo(f"Error: {e}", err=True)
            ctx.exit(EXIT_INVARIANT)
        except OSError as e:
            logger.error(f"I/O error in {ctx.info_name}: {str(e)}")
            click.echo(f"Error: {e}", err=True)
            ctx.exit(EXIT_IO)
        except (NetlabError, ValueError) as e:
            click.echo(f"Error: {e}", err=True)
            ctx.exit(EXIT_USAGE)

    return wrapper


def read_settings_file(path: str) -> Dict[str, str]:
    """Read a key=value settings file; keys are the flag names without leading dashes.

    Raises:
        OSError: the file cannot be read
        ParamsError: malformed lines or unknown keys
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    try:
        parser.read_string(f"[{SETTINGS_SECTION}]\n{text}", source=path)
    except configparser.Error as e:
        raise ParamsError(f"Invalid settings file {path}: {e}")

    settings = {}
    for key, value in parser.items(SETTINGS_SECTION):
        name = key.strip().lower().replace("_", "-")
        if name not in SETTING_KEYS:
            raise ParamsError(f"Unknown setting {key!r} in {path}")
        settings[name] = value.strip()
    return settings


def configured_defaults() -> Dict[str, Any]:
    """Defaults from settings.ini and the environment."""
    return {
        "n": get_sweep_n(),
        "step": get_sweep_step(),
        "delta-range": None,
        "cost-range": None,
        "densities": get_sweep_densities(),
        "reps": get_repetitions(),
        "seed": get_master_seed(),
        "max-iters": get_max_iterations(),
        "idle-terminate": get_idle_terminate(),
        "allow-indifferent-adds": get_allow_indifferent_adds(),
        "detect-cycles": get_detect_cycles(),
        "tau-fraction": get_tau_fraction(),
        "workers": get_workers(),
        "out": get_output_dir(),
        "progress": get_progress(),
        "delta": None,
        "cost": None,
        "density": None,
        "method": PosMethod.CLOSED_FORM.value,
    }


def resolve_settings(config_path: Optional[str], flags: Dict[str, Any], **command_defaults) -> Dict[str, Any]:
    """Merge defaults, the optional settings file and the given flags (flags win)."""
    settings = configured_defaults()
    settings.update({key.replace("_", "-"): value for key, value in command_defaults.items()})
    if config_path:
        settings.update(read_settings_file(config_path))
    settings.update({key.replace("_", "-"): value for key, value in flags.items() if value is not None})
    for axis in ("delta-range", "cost-range"):
        if settings[axis] is None:
            settings[axis] = f"{settings['step']}:1"
    return settings


def _checked(result: Tuple[bool, str, Any]) -> Any:
    is_valid, error, value = result
    if not is_valid:
        raise ParamsError(error)
    return value


def _as_bool(value: Any, name: str) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in TRUE_VALUES:
        return True
    if text in FALSE_VALUES:
        return False
    raise ParamsError(f"{name} must be true or false, got {value!r}")


def _workers(value: Any) -> int:
    try:
        workers = int(str(value).strip())
    except ValueError:
        raise ParamsError(f"workers must be an integer, got {value!r}")
    if workers < 0:
        raise ParamsError("workers must be 0 (all cores) or positive")
    return workers


def _grid_axis(text: str, step: Fraction, name: str) -> Tuple[Fraction, ...]:
    start, stop = parse_range(text)
    values = tuple(rational_range(start, stop, step))
    if not all(0 < v <= 1 for v in values):
        raise ParamsError(f"{name} range {text} must lie within (0, 1]")
    return values


def build_sweep_spec(settings: Dict[str, Any]) -> SweepSpec:
    """Validate resolved settings into a SweepSpec.

    Raises:
        ParamsError: any setting is malformed or out of range
    """
    step = _checked(validate_step(settings["step"]))
    n_values = tuple(
        _checked(validate_node_count(part, minimum=2)) for part in str(settings["n"]).split(",") if part.strip()
    )
    densities = tuple(
        _checked(validate_density(part)) for part in str(settings["densities"]).split(",") if part.strip()
    )
    if not n_values or not densities:
        raise ParamsError("At least one node count and one density are required")
    return SweepSpec(
        n_values=n_values,
        delta_values=_grid_axis(settings["delta-range"], step, "delta"),
        cost_values=_grid_axis(settings["cost-range"], step, "cost"),
        densities=densities,
        repetitions=_checked(validate_positive_int(settings["reps"], "reps", MAX_REPETITIONS)),
        master_seed=_checked(validate_seed(settings["seed"])),
        output_dir=str(settings["out"]),
        max_iterations=_checked(validate_positive_int(settings["max-iters"], "max-iters", MAX_ITERATIONS)),
        idle_terminate=_checked(validate_positive_int(settings["idle-terminate"], "idle-terminate", MAX_ITERATIONS)),
        allow_indifferent_adds=_as_bool(settings["allow-indifferent-adds"], "allow-indifferent-adds"),
        detect_cycles=_as_bool(settings["detect-cycles"], "detect-cycles"),
        tau_fraction=_checked(validate_rational(settings["tau-fraction"], "tau-fraction")),
        workers=_workers(settings["workers"]),
        progress=_as_bool(settings["progress"], "progress"),
    )


def write_manifest(directory: str, command: str, settings: Dict[str, Any]) -> str:
    """Record the effective settings of a command run as ``manifest.ini``."""
    manifest = configparser.ConfigParser(interpolation=None)
    manifest["manifest"] = {
        "command": command,
        "version": current_app.version,
        "created": get_timezone_timestamp().isoformat(timespec="seconds"),
    }
    manifest[SETTINGS_SECTION] = {key: str(value) for key, value in settings.items() if value is not None}
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, "manifest.ini")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        manifest.write(f)
    return path


def sweep_options(func):
    """Flags shared by the grid commands (sweep, regions)."""
    options = [
        click.option("--n", "n", default=None, help="Node counts, comma separated"),
        click.option("--delta-range", default=None, help="delta range start:stop (default step:1)"),
        click.option("--cost-range", default=None, help="cost range start:stop (default step:1)"),
        click.option("--step", default=None, help="Grid step, e.g. 1/20"),
        click.option("--densities", default=None, help="Initial densities, comma separated"),
        click.option("--reps", default=None, help="Runs per cell"),
        click.option("--seed", default=None, help="Master seed"),
        click.option("--max-iters", default=None, help="Iteration cap per run"),
        click.option("--idle-terminate", default=None, help="Idle iterations that end a run"),
        click.option("--allow-indifferent-adds/--no-allow-indifferent-adds", default=None),
        click.option("--workers", default=None, help="Worker processes (0 = all cores)"),
        click.option("--out", default=None, help="Output directory"),
        click.option("--progress/--no-progress", default=None),
        click.option("--config", "config_path", default=None, help="key=value settings file"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


@sim_bp.cli.command("sweep")
@sweep_options
@exit_codes
def cmd_sweep(config_path, **flags):
    """Run the dynamics over a (delta, cost, density, n) grid and write sweep.csv."""
    settings = resolve_settings(config_path, flags)
    spec = build_sweep_spec(settings)
    results = run_sweep(spec)
    path = os.path.join(spec.output_dir, "sweep.csv")
    rows = write_csv(path, SWEEP_HEADER, sweep_rows(results))
    write_manifest(spec.output_dir, "sweep", settings)
    logger.info(f"Sweep finished: {rows} cells")
    click.echo(f"Wrote {rows} cells to {path}")


@sim_bp.cli.command("regions")
@sweep_options
@exit_codes
def cmd_regions(config_path, **flags):
    """Compare observed stable structures against the predicted regions and write regions.csv."""
    settings = resolve_settings(config_path, flags)
    spec = build_sweep_spec(settings)
    results = run_sweep(spec)
    rows = list(region_rows(results))
    path = os.path.join(spec.output_dir, "regions.csv")
    write_csv(path, REGIONS_HEADER, rows)
    write_manifest(spec.output_dir, "regions", settings)
    mismatches = sum(1 for row in rows if row[-1] == 0)
    click.echo(f"Wrote {len(rows)} region cells to {path} ({mismatches} differ from the prediction)")


@sim_bp.cli.command("run")
@click.option("--n", "n", default=None, help="Node count")
@click.option("--delta", default=None, help="Link benefit, e.g. 1/2")
@click.option("--cost", default=None, help="Link cost, e.g. 1/2")
@click.option("--density", default=None, help="Initial density")
@click.option("--seed", default=None, help="Master seed")
@click.option("--max-iters", default=None)
@click.option("--idle-terminate", default=None)
@click.option("--allow-indifferent-adds/--no-allow-indifferent-adds", default=None)
@click.option("--out", default=None, help="Output directory")
@click.option("--config", "config_path", default=None, help="key=value settings file")
@exit_codes
def cmd_run(config_path, **flags):
    """Simulate one run and write trajectory.csv and final_graph.txt."""
    settings = resolve_settings(
        config_path, flags, n=get_sweep_n().split(",")[0], density=get_sweep_densities().split(",")[0]
    )
    if settings["delta"] is None or settings["cost"] is None:
        raise ParamsError("--delta and --cost are required")
    params = _checked(validate_params(settings["delta"], settings["cost"], relaxed=True))
    cfg = SimConfig(
        n=_checked(validate_node_count(settings["n"], minimum=2)),
        density=_checked(validate_density(settings["density"])),
        params=params,
        max_iterations=_checked(validate_positive_int(settings["max-iters"], "max-iters", MAX_ITERATIONS)),
        idle_terminate=_checked(validate_positive_int(settings["idle-terminate"], "idle-terminate", MAX_ITERATIONS)),
        repetitions=1,
        master_seed=_checked(validate_seed(settings["seed"])),
        allow_indifferent_adds=_as_bool(settings["allow-indifferent-adds"], "allow-indifferent-adds"),
        detect_cycles=_as_bool(settings["detect-cycles"], "detect-cycles"),
        tau_fraction=_checked(validate_rational(settings["tau-fraction"], "tau-fraction")),
    )
    run = run_once(cfg, mix_seed(cfg.master_seed, 0, 0))

    out = str(settings["out"])
    write_csv(os.path.join(out, "trajectory.csv"), TRAJECTORY_HEADER, trajectory_rows(run))
    write_edge_list(run.final_graph, os.path.join(out, "final_graph.txt"))
    write_manifest(out, "run", settings)
    state = "converged" if run.converged else "stopped at the iteration cap"
    click.echo(f"{run.label.value} after {run.iterations_used} iterations ({state}, {run.acts} acts)")


@sim_bp.cli.command("atlas")
@click.option("--n", "n", default=None, help="Node count (oracle limit applies)")
@click.option("--step", default=None, help="Grid step; the grid runs step..1")
@click.option("--delta", default=None, help="Also dump the stable graphs at this delta")
@click.option("--cost", default=None, help="Also dump the stable graphs at this cost")
@click.option("--workers", default=None, help="Worker processes (0 = all cores)")
@click.option("--out", default=None, help="Output directory")
@click.option("--progress/--no-progress", default=None)
@click.option("--config", "config_path", default=None, help="key=value settings file")
@exit_codes
def cmd_atlas(config_path, **flags):
    """Enumerate every graph on n nodes and check the analytic claims; writes verify_n<N>.csv."""
    settings = resolve_settings(config_path, flags, n=ATLAS_DEFAULT_N)
    n = _checked(validate_node_count(settings["n"], minimum=2))
    step = _checked(validate_step(settings["step"]))
    workers = _workers(settings["workers"])
    progress = _as_bool(settings["progress"], "progress")
    out = str(settings["out"])

    visited, violations = check_extremal_bounds(n)
    if violations:
        raise InvariantViolation(f"{violations} of {visited} graphs on {n} nodes break the extremal bounds")

    report = verify_predictions(n, step, workers=workers, progress=progress)
    rows = (
        [format_grid_value(c.delta), format_grid_value(c.cost), c.claim, c.status.value, c.detail] for c in report
    )
    write_csv(os.path.join(out, f"verify_n{n}.csv"), VERIFY_HEADER, rows)

    if settings["delta"] is not None or settings["cost"] is not None:
        params = _checked(validate_params(settings["delta"], settings["cost"], relaxed=True))
        result = enumerate_graphs(n, params, workers=workers)
        recertify(result)
        write_dump(result, os.path.join(out, f"stable_n{n}.txt"))
    write_manifest(out, "atlas", settings)

    counts = {status: sum(1 for c in report if c.status == status) for status in ClaimStatus}
    click.echo(
        f"n={n}: {counts[ClaimStatus.PASS]} passed, {counts[ClaimStatus.FAIL]} failed, "
        f"{counts[ClaimStatus.AUDIT]} conjecture audits"
    )


@sim_bp.cli.command("pos")
@click.option("--n", "n", default=None, help="Node count")
@click.option("--step", default=None, help="Grid step")
@click.option("--method", default=None, help="closed_form or oracle")
@click.option("--out", default=None, help="Output directory")
@click.option("--config", "config_path", default=None, help="key=value settings file")
@exit_codes
def cmd_pos(config_path, **flags):
    """Price of stability over the interior (delta, cost) grid; writes pos.csv."""
    settings = resolve_settings(config_path, flags, n=get_sweep_n().split(",")[0])
    n = _checked(validate_node_count(settings["n"], minimum=2))
    step = _checked(validate_step(settings["step"]))
    method = PosMethod(str(settings["method"]).strip().lower())
    out = str(settings["out"])

    rows = []
    for delta, cost, verdict in pos_grid(n, step, method):
        rows.append(
            [
                format_grid_value(delta),
                format_grid_value(cost),
                verdict.kind.value,
                "" if verdict.value is None else format_decimal(verdict.value),
                verdict.method.value,
                verdict.region,
                format_decimal(verdict.best_stable_utility),
                format_decimal(verdict.efficient_utility),
                int(verdict.exhaustive),
            ]
        )
    path = os.path.join(out, "pos.csv")
    write_csv(path, POS_HEADER, rows)
    write_manifest(out, "pos", settings)
    click.echo(f"Wrote {len(rows)} PoS cells to {path}")


@sim_bp.cli.command("classify")
@click.argument("path")
@click.option("--tau-fraction", default=None, help="Near-structure threshold as a fraction of (n-1)^2")
@exit_codes
def cmd_classify(path, tau_fraction):
    """Classify the graph stored in an edge-list file."""
    fraction = _checked(validate_rational(tau_fraction or get_tau_fraction(), "tau-fraction"))
    result = classify(read_edge_list(path), ClassifierConfig(fraction))
    matches = sorted(result.all_matches, key=lambda label: label.rank)
    click.echo(f"primary: {result.primary.value}")
    click.echo("all_matches: " + ",".join(label.value for label in matches))
    for label, value in sorted(result.msd.items(), key=lambda item: item[0].rank):
        click.echo(f"msd {label.value}: {format_rational(value)}")
