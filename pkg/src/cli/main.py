"""Main CLI application for paxos-mc."""

import sys
from pathlib import Path
from typing import List, Optional

import click
import typer

from cli.commands import check_command, config_app
from cli.options import (
    build_protocol_config,
    current_limits,
    flag,
    load_settings,
    merge_run_options,
)
from paxos_mc.config import config_service
from paxos_mc.constants import (
    PROJECT_NAME,
    VERDICT_EXIT_CODES,
    ChannelMode,
    ExitCode,
    ReceiveMode,
    Variant,
    Verdict,
)
from paxos_mc.explorer import explore
from paxos_mc.schema import ResultRow, SweepSpec, describe_error
from paxos_mc.trace import TraceError, read_trace, replay, write_trace
from paxos_mc.utils.ui import (
    console,
    error,
    info,
    print_report,
    print_trace,
    success,
    warning,
)
from paxos_mc.workflows.sweep import (
    csv_writer,
    parse_caps,
    parse_majorities,
    parse_range,
    run_sweep,
)

app = typer.Typer(
    name=PROJECT_NAME,
    help="Explicit-state model checker for single-decree Paxos",
    no_args_is_help=True,
    rich_markup_mode="rich",
)

# -------------------------------
# Sub-Apps
# -------------------------------

app.add_typer(config_app, name="config")
app.command(name="check", help="Run the reduction and equivalence property suites.")(
    check_command
)


# -------------------------------
# Command: run (single configuration)
# -------------------------------
@app.command(name="run", help="Explore one configuration and report its verdict.")
def run_command(
    proposers: Optional[int] = typer.Option(None, "--proposers", "-p", help="Number of proposers"),
    acceptors: Optional[int] = typer.Option(None, "--acceptors", "-a", help="Number of acceptors"),
    maj: Optional[int] = typer.Option(None, "--maj", "-m", help="Quorum size [default: A/2+1]"),
    cap: Optional[str] = typer.Option(None, "--cap", help="Channel capacity or 'auto' (A*P)"),
    variant: Optional[Variant] = typer.Option(None, "--variant", case_sensitive=False),
    learners: Optional[str] = typer.Option(
        None, "--learners", help="'abstract' or 'concrete:N'"
    ),
    receive: Optional[ReceiveMode] = typer.Option(None, "--receive", case_sensitive=False),
    channel_mode: Optional[ChannelMode] = typer.Option(
        None, "--channel-mode", case_sensitive=False
    ),
    faithful_optimized_acceptor: bool = typer.Option(
        False,
        "--faithful-optimized-acceptor",
        help="Optimized acceptors update rnd on a fresh prepare without sending a promise",
    ),
    max_states: Optional[int] = typer.Option(None, "--max-states", help="0 = unbounded"),
    max_depth: Optional[int] = typer.Option(None, "--max-depth", help="0 = unbounded"),
    time_budget: Optional[float] = typer.Option(None, "--time-budget", help="Seconds; 0 = none"),
    jobs: Optional[int] = typer.Option(None, "--jobs", "-j", help="Worker processes"),
    exhaustive_violations: bool = typer.Option(
        False, "--exhaustive-violations", help="Keep exploring after the first violation"
    ),
    check_invariants: bool = typer.Option(
        False, "--check-invariants", help="Check round-value uniqueness on every state"
    ),
    trace_out: Optional[Path] = typer.Option(None, "--trace-out", help="Write the trace here"),
    csv_output: bool = typer.Option(False, "--csv", help="Print one CSV row instead of a table"),
    run_file: Optional[Path] = typer.Option(
        None, "--config", "-c", help="key=value run file; flags override it"
    ),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Verbose output"),
    dev: bool = typer.Option(False, "--dev", help="Enable dev mode (.env)"),
):
    """Explore one configuration; exit 0 safe, 1 unsafe, 2 limit exceeded, 64 usage."""
    values = merge_run_options(
        run_file,
        {
            "proposers": proposers,
            "acceptors": acceptors,
            "maj": maj,
            "cap": cap,
            "variant": variant,
            "learners": learners,
            "receive": receive,
            "channel_mode": channel_mode,
            "faithful_optimized_acceptor": faithful_optimized_acceptor or None,
            "max_states": max_states,
            "max_depth": max_depth,
            "time_budget": time_budget,
            "jobs": jobs,
            "exhaustive_violations": exhaustive_violations or None,
            "check_invariants": check_invariants or None,
        },
    )
    load_settings(
        dev,
        verbose,
        max_states=values.get("max_states"),
        max_depth=values.get("max_depth"),
        time_budget=values.get("time_budget"),
        jobs=values.get("jobs"),
    )
    settings = config_service.config

    try:
        cfg = build_protocol_config(values, settings.CHANNEL_MODE)
        exhaustive = flag(values, "exhaustive_violations")
        invariants = flag(values, "check_invariants")
    except ValueError as e:
        error(f"Invalid configuration: {describe_error(e)}")
        raise typer.Exit(ExitCode.USAGE)

    if not csv_output:
        info(f"Exploring {cfg.label()}")
    report = explore(
        cfg,
        current_limits(),
        workers=settings.JOBS,
        exhaustive_violations=exhaustive,
        check_invariants=invariants,
    )

    if csv_output:
        csv_writer(sys.stdout).writerow(ResultRow.from_report(report).to_csv_dict())
    else:
        print_report(report)
        print_trace(report.trace)

    if report.verdict == Verdict.UNSAFE:
        warning(f"Safety violated after {len(report.trace or [])} steps")
        if trace_out is not None:
            write_trace(trace_out, cfg, report.trace or [])
            success(f"Trace written to {trace_out}")
    elif report.verdict == Verdict.LIMIT_EXCEEDED:
        warning("Search bound hit before the state space was exhausted")
    else:
        success(f"No violation in {report.states_explored} states")

    raise typer.Exit(VERDICT_EXIT_CODES[report.verdict])


# -------------------------------
# Command: sweep (parameter grid)
# -------------------------------
@app.command(name="sweep", help="Explore a parameter grid and stream CSV rows.")
def sweep_command(
    proposers: str = typer.Option("2", "--proposers", "-p", help="Range, e.g. 2 or 2-3"),
    acceptors: str = typer.Option("2-4", "--acceptors", "-a", help="Range, e.g. 2,3,4"),
    maj: str = typer.Option("all", "--maj", "-m", help="'default', 'all' (1..A) or a range"),
    cap: str = typer.Option("auto", "--cap", help="'auto' (A*P) or a range"),
    variants: Optional[List[Variant]] = typer.Option(
        None, "--variant", case_sensitive=False, help="Repeatable [default: baseline]"
    ),
    receive_modes: Optional[List[ReceiveMode]] = typer.Option(
        None, "--receive", case_sensitive=False, help="Repeatable [default: first]"
    ),
    channel_mode: Optional[ChannelMode] = typer.Option(
        None, "--channel-mode", case_sensitive=False
    ),
    max_states: Optional[int] = typer.Option(None, "--max-states", help="0 = unbounded"),
    max_depth: Optional[int] = typer.Option(None, "--max-depth", help="0 = unbounded"),
    time_budget: Optional[float] = typer.Option(None, "--time-budget", help="Seconds per run"),
    jobs: Optional[int] = typer.Option(None, "--jobs", "-j", help="Concurrent grid points"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="CSV file [default: stdout]"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Verbose output"),
    dev: bool = typer.Option(False, "--dev", help="Enable dev mode (.env)"),
):
    """Sweep a grid; invalid points are skipped, limits are recorded per row."""
    load_settings(
        dev,
        verbose,
        max_states=max_states,
        max_depth=max_depth,
        time_budget=time_budget,
        jobs=jobs,
    )
    settings = config_service.config

    try:
        spec = SweepSpec(
            proposers=parse_range(proposers),
            acceptors=parse_range(acceptors),
            maj=parse_majorities(maj),
            caps=parse_caps(cap),
            variants=variants or [Variant.BASELINE],
            receive_modes=receive_modes or [ReceiveMode.FIRST],
            channel_mode=channel_mode or settings.CHANNEL_MODE,
            limits=current_limits(),
        )
    except ValueError as e:
        error(f"Invalid sweep: {describe_error(e)}")
        raise typer.Exit(ExitCode.USAGE)

    if out is None:
        run_sweep(spec, sys.stdout, jobs=settings.JOBS)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        with out.open("w", encoding="utf-8", newline="") as f:
            rows = run_sweep(spec, f, jobs=settings.JOBS)
        success(f"{len(rows)} row(s) written to {out}")


# -------------------------------
# Command: replay (trace file)
# -------------------------------
@app.command(name="replay", help="Re-apply a trace file and check that it ends in a violation.")
def replay_command(
    trace: Path = typer.Option(..., "--trace", "-t", help="Trace file written by run --trace-out"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Verbose output"),
    dev: bool = typer.Option(False, "--dev", help="Enable dev mode (.env)"),
):
    """Exit 0 when the replayed trace ends in a violation, 1 otherwise."""
    load_settings(dev, verbose)
    try:
        cfg, steps = read_trace(trace)
    except TraceError as e:
        error(f"Cannot read trace: {e}")
        raise typer.Exit(ExitCode.USAGE)

    info(f"Replaying {len(steps)} step(s) on {cfg.label()}")
    try:
        final = replay(cfg, steps)
    except TraceError as e:
        error(f"Replay failed: {e}")
        raise typer.Exit(ExitCode.UNSAFE)

    if final.violated:
        success("Trace ends in a safety violation")
        raise typer.Exit(ExitCode.SUCCESS)
    warning("Trace replays but ends without a violation")
    raise typer.Exit(ExitCode.UNSAFE)


# -------------------------------
# Version and main
# -------------------------------
@app.command()
def version() -> None:
    """Show version information."""
    from paxos_mc import __version__

    console.print(f"{PROJECT_NAME} version {__version__}")


def main() -> None:
    """Entry point for the CLI."""
    try:
        code = app(standalone_mode=False)
    except click.UsageError as e:
        error(e.format_message())
        code = ExitCode.USAGE
    except (KeyboardInterrupt, click.exceptions.Abort):
        console.print()
        warning("Interrupted by user")
        code = ExitCode.USER_CANCEL
    sys.exit(code if isinstance(code, int) else ExitCode.SUCCESS)


if __name__ == "__main__":
    main()
