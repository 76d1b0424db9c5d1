"""Console script for auxcheck."""
from __future__ import annotations

import logging
from collections.abc import Callable
from pathlib import Path
from typing import Annotated, Optional

import typer
from rich.console import Console
from rich.table import Table

from . import logger
from .catalog import checks, entries, get_entry
from .exceptions import AuxCheckError
from .explorer import PASS, Verdict
from .suite import run_suite
from .utils.config_utils import (load_config, resolve_state_cap,
                                 resolve_workers)
from .utils.logging_utils import setup_logging
from .values import format_value

app = typer.Typer(help="Model-check catalog specifications and their auxiliary variables.",
                  no_args_is_help=True)
console = Console()

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2

SpecOpt = Annotated[str, typer.Option("--spec", "-s", help="Catalog spec name (see `auxcheck list`).")]
ConfigOpt = Annotated[Optional[Path], typer.Option("--config", "-c", help="JSON model config.")]
WorkersOpt = Annotated[Optional[int], typer.Option("--workers", "-w", help="Threads expanding each BFS level.")]
StateCapOpt = Annotated[Optional[int], typer.Option("--state-cap", help="Abort after this many distinct states.")]
JsonOpt = Annotated[bool, typer.Option("--json", help="Print the verdict as JSON.")]


@app.callback()
def main(
    log_level: Annotated[str, typer.Option(help="DEBUG, INFO, WARNING or ERROR.")] = "WARNING",
    log_file: Annotated[Path, typer.Option(help="File receiving the log.")] = Path("auxcheck.log"),
    console_log: Annotated[bool, typer.Option(help="Also log to stderr.")] = True,
):
    """Console script for auxcheck."""
    level = logging.getLevelName(log_level.upper())
    if not isinstance(level, int):
        raise typer.BadParameter(f"Unknown log level {log_level!r}", param_hint="--log-level")
    setup_logging(log_file=log_file, log_level=level, console=console_log)


def print_verdict(verdict: Verdict, as_json: bool) -> None:
    if as_json:
        console.print_json(verdict.to_json())
        return
    style = "green" if verdict.passed else "red"
    console.print(f"[bold {style}]{verdict.status}[/bold {style}] {verdict.detail}")
    if verdict.trace is None:
        return
    table = Table(title="Counterexample trace")
    table.add_column("#", justify="right")
    table.add_column("Action")
    table.add_column("Binders")
    table.add_column("State")
    for n, step in enumerate(verdict.trace):
        binders = ", ".join(f"{k}={format_value(v)}" for k, v in step.env.sorted_items())
        state = "\n".join(f"{k} = {format_value(v)}" for k, v in step.state.sorted_items())
        table.add_row(str(n), step.action, binders, state)
    console.print(table)


def _run(check: Callable[..., Verdict], *args: str, config: Path | None, workers: int | None,
         state_cap: int | None, as_json: bool) -> None:
    """Run a named check and exit 0 on PASS, 1 on FAIL and 2 on error."""
    try:
        cfg = load_config(config) if config is not None else None
        verdict = check(*args, cfg=cfg, workers=resolve_workers(workers), state_cap=resolve_state_cap(state_cap))
    except AuxCheckError as e:
        logger.error(f"{type(e).__name__}: {e}")
        console.print(f"[bold red]ERROR[/bold red] {e}")
        raise typer.Exit(EXIT_ERROR) from e
    print_verdict(verdict, as_json)
    raise typer.Exit(EXIT_PASS if verdict.status == PASS else EXIT_FAIL)


@app.command("list")
def list_specs(
    spec: Annotated[Optional[str], typer.Argument(help="Show the details of one spec.")] = None,
):
    """List catalog specs, or the mappings and properties of one."""
    if spec is None:
        table = Table(title="Catalog")
        table.add_column("Spec")
        table.add_column("Description")
        for entry in entries():
            table.add_row(entry.name, entry.description)
        console.print(table)
        return
    try:
        entry = get_entry(spec)
    except AuxCheckError as e:
        console.print(f"[bold red]ERROR[/bold red] {e}")
        raise typer.Exit(EXIT_ERROR) from e
    console.print(f"[bold]{entry.name}[/bold] {entry.description}")
    if entry.required_params:
        console.print(f"Needs: {', '.join(entry.required_params)}")
    console.print_json(data=entry.default_config.to_document())
    for name, m in entry.mappings.items():
        note = " (expected to fail)" if m.expect_fail else ""
        console.print(f"mapping {name} -> {m.target}: {m.description}{note}")
    for kind, names in (("invariant", entry.invariants), ("target", entry.targets),
                        ("action property", entry.action_properties)):
        for name in names:
            console.print(f"{kind} {name}")


@app.command()
def check_invariant(spec: SpecOpt, invariant: Annotated[str, typer.Option("--inv", "-i")],
                    config: ConfigOpt = None, workers: WorkersOpt = None, state_cap: StateCapOpt = None,
                    json: JsonOpt = False):
    """Check that a state predicate holds in every reachable state."""
    _run(checks.invariant, spec, invariant, config=config, workers=workers, state_cap=state_cap, as_json=json)


@app.command()
def check_refinement(spec: SpecOpt, mapping: Annotated[str, typer.Option("--mapping", "-m")],
                     config: ConfigOpt = None, workers: WorkersOpt = None, state_cap: StateCapOpt = None,
                     json: JsonOpt = False):
    """Check that a spec implements another under a refinement mapping."""
    _run(checks.refinement, spec, mapping, config=config, workers=workers, state_cap=state_cap, as_json=json)


@app.command()
def check_equivalence(spec: SpecOpt, mapping: Annotated[str, typer.Option("--mapping", "-m")],
                      back: Annotated[str, typer.Option("--back", help="Mapping from the target back to --spec.")],
                      config: ConfigOpt = None, workers: WorkersOpt = None, state_cap: StateCapOpt = None,
                      json: JsonOpt = False):
    """Check refinement in both directions."""
    _run(checks.equivalence, spec, mapping, back, config=config, workers=workers, state_cap=state_cap,
         as_json=json)


@app.command()
def check_action_prop(spec: SpecOpt, prop: Annotated[str, typer.Option("--prop", "-p")],
                      config: ConfigOpt = None, workers: WorkersOpt = None, state_cap: StateCapOpt = None,
                      json: JsonOpt = False):
    """Check that every non-stuttering reachable step satisfies an action property."""
    _run(checks.action_property, spec, prop, config=config, workers=workers, state_cap=state_cap, as_json=json)


@app.command()
def check_proph_conditions(spec: SpecOpt, config: ConfigOpt = None, workers: WorkersOpt = None,
                           state_cap: StateCapOpt = None, json: JsonOpt = False):
    """Check the conditions that make a prophecy variable sound."""
    _run(checks.proph_conditions, spec, config=config, workers=workers, state_cap=state_cap, as_json=json)


@app.command()
def check_stutter_conditions(spec: SpecOpt, config: ConfigOpt = None, workers: WorkersOpt = None,
                             state_cap: StateCapOpt = None, json: JsonOpt = False):
    """Check the conditions that make a stuttering variable sound."""
    _run(checks.stutter_conditions, spec, config=config, workers=workers, state_cap=state_cap, as_json=json)


@app.command()
def check_history(spec: SpecOpt, config: ConfigOpt = None, workers: WorkersOpt = None,
                  state_cap: StateCapOpt = None, json: JsonOpt = False):
    """Check that erasing the history variable gives back the original spec."""
    _run(checks.history_projection, spec, config=config, workers=workers, state_cap=state_cap, as_json=json)


@app.command()
def find_trace(spec: SpecOpt, target: Annotated[str, typer.Option("--target", "-t")],
               config: ConfigOpt = None, workers: WorkersOpt = None, state_cap: StateCapOpt = None,
               json: JsonOpt = False):
    """Search for a reachable state satisfying a target; exits 1 with the trace when one is found."""
    _run(checks.trace_search, spec, target, config=config, workers=workers, state_cap=state_cap, as_json=json)


@app.command("run-suite")
def run_suite_command(
    long: Annotated[bool, typer.Option("--long", help="Include the long Afek model.")] = False,
    case: Annotated[Optional[list[str]], typer.Option("--case", help="Run only the named case(s).")] = None,
    workers: WorkersOpt = None,
    state_cap: StateCapOpt = None,
):
    """Run every catalog theorem and compare each verdict with its expected outcome."""
    try:
        results = run_suite(long, resolve_workers(workers), resolve_state_cap(state_cap), case)
    except AuxCheckError as e:
        logger.error(f"{type(e).__name__}: {e}")
        console.print(f"[bold red]ERROR[/bold red] {e}")
        raise typer.Exit(EXIT_ERROR) from e
    table = Table(title="Acceptance suite")
    table.add_column("Case")
    table.add_column("Expected")
    table.add_column("Got")
    table.add_column("Detail")
    for result in results:
        style = "green" if result.as_expected else "red"
        table.add_row(result.case.name, result.case.expected,
                      f"[{style}]{result.verdict.status}[/{style}]", result.verdict.detail)
    console.print(table)
    raise typer.Exit(EXIT_PASS if all(r.as_expected for r in results) else EXIT_FAIL)


if __name__ == "__main__":
    app()
