"""
User Interface utilities for paxos-mc.
Handles console output (via Rich) and logging integration.

Status messages go to stderr; stdout is reserved for results (tables, CSV).
"""

import logging
from typing import TYPE_CHECKING, Iterable, Optional

from rich.console import Console
from rich.table import Table

from paxos_mc.constants import PROJECT_NAME, CheckStatus, Verdict

if TYPE_CHECKING:
    from paxos_mc.schema import CheckResult, Report, TraceStep

# 1. 初始化 Rich Console 和 Logger
console = Console()
err_console = Console(stderr=True)
logger = logging.getLogger(PROJECT_NAME)

VERDICT_STYLES = {
    Verdict.SAFE: "green",
    Verdict.UNSAFE: "red",
    Verdict.LIMIT_EXCEEDED: "yellow",
}
STATUS_STYLES = {
    CheckStatus.PASS: "green",
    CheckStatus.FAIL: "red",
    CheckStatus.INCONCLUSIVE: "yellow",
}


# ---------------------------------------------------------
# 1. Output Functions (UI + Logging)
# ---------------------------------------------------------


def debug(message: str) -> None:
    """Log as DEBUG only."""
    logger.debug(message)


def success(message: str) -> None:
    """Print success message and log as INFO."""
    err_console.print(f"[green]✓[/green] {message}")
    logger.info(message)


def error(message: str) -> None:
    """Print error message and log as ERROR."""
    err_console.print(f"[red]✗[/red] {message}")
    logger.error(message)


def warning(message: str) -> None:
    """Print warning message and log as WARNING."""
    err_console.print(f"[yellow]⚠[/yellow] {message}")
    logger.warning(message)


def info(message: str) -> None:
    """Print info message and log as INFO."""
    err_console.print(f"[blue]ℹ[/blue] {message}")
    logger.info(message)


def step(message: str) -> None:
    """Print a step execution message."""
    err_console.print(f"[bold blue]➤[/bold blue] {message}")
    logger.info(f"Step: {message}")


# ---------------------------------------------------------
# 2. Rich Visualization Components
# ---------------------------------------------------------


def print_report(report: "Report") -> None:
    """Print a single exploration result as a table."""
    cfg = report.config
    logger.info(f"Report for {cfg.label()}: {report.verdict}")

    table = Table(title=f"paxos-mc {cfg.label()}", show_header=True, header_style="bold cyan")
    table.add_column("Key", style="green")
    table.add_column("Value", style="white")

    style = VERDICT_STYLES[report.verdict]
    table.add_row("Verdict", f"[{style}]{report.verdict}[/{style}]")
    table.add_row("States", str(report.states_explored))
    table.add_row("Transitions", str(report.transitions_fired))
    table.add_row("Max depth", str(report.max_depth))
    table.add_row("Time (ms)", f"{report.wall_time_ms:.1f}")
    if report.violating_states > 1:
        table.add_row("Violating states", str(report.violating_states))
    if report.trace is not None:
        table.add_row("Trace length", str(len(report.trace)))
    if report.outcomes:
        table.add_row("Outcomes", ", ".join(f"({r},{v})" for r, v in report.outcomes))

    console.print(table)


def print_trace(trace: Optional[list["TraceStep"]], limit: int = 40) -> None:
    """Print the tail of a counterexample trace."""
    if not trace:
        return
    steps = trace[-limit:]
    table = Table(title="Counterexample", show_header=True, header_style="bold red")
    for column in ("#", "Actor", "Rule", "Message", "Changes"):
        table.add_column(column)
    for s in steps:
        table.add_row(str(s.index), s.actor, s.rule, s.message, s.changes)
    console.print(table)


def print_checks(results: Iterable["CheckResult"]) -> None:
    """Print one row per property check."""
    table = Table(title="Property checks", show_header=True, header_style="bold cyan")
    table.add_column("Property", style="green")
    table.add_column("Status")
    table.add_column("Configs")
    table.add_column("Detail", style="white")

    for result in results:
        style = STATUS_STYLES[result.status]
        logger.info(f"{result.name}: {result.status} {result.detail}")
        table.add_row(
            result.name,
            f"[{style}]{result.status}[/{style}]",
            "; ".join(result.configs),
            result.detail,
        )
    console.print(table)
