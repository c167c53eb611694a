"""Check CLI: the reduction, equivalence and quorum property suites."""

from typing import List, Optional

import typer

from cli.options import current_limits, load_settings
from paxos_mc.config import config_service
from paxos_mc.constants import DEFAULT_SUITES, CheckStatus, ExitCode, Suite, Variant
from paxos_mc.schema import CheckPlan, describe_error
from paxos_mc.utils.ui import error, print_checks, print_trace, success, warning
from paxos_mc.workflows.reductions import ReductionChecker
from paxos_mc.workflows.sweep import parse_range


def check_command(
    suites: Optional[List[Suite]] = typer.Option(
        None,
        "--suite",
        "-s",
        case_sensitive=False,
        help="Repeatable [default: all but acceptor-bound]",
    ),
    acceptors: str = typer.Option("2,3", "--acceptors", "-a", help="A of the two-proposer suites"),
    quorum_acceptors: str = typer.Option(
        "2-4", "--quorum-acceptors", help="A of the quorum suites"
    ),
    bound_acceptors: str = typer.Option(
        "2-5", "--bound-acceptors", help="A of the exploratory acceptor-bound sweep"
    ),
    max_proposers: int = typer.Option(3, "--max-proposers", help="Largest P of proposer-reduction"),
    variant: Optional[Variant] = typer.Option(
        None, "--variant", case_sensitive=False, help="Override each suite's model variant"
    ),
    max_states: Optional[int] = typer.Option(None, "--max-states", help="0 = unbounded"),
    max_depth: Optional[int] = typer.Option(None, "--max-depth", help="0 = unbounded"),
    time_budget: Optional[float] = typer.Option(None, "--time-budget", help="Seconds per run"),
    jobs: Optional[int] = typer.Option(None, "--jobs", "-j", help="Worker processes per run"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Verbose output"),
    dev: bool = typer.Option(False, "--dev", help="Enable dev mode (.env)"),
):
    """Exit 0 when every suite passes, 1 on a failure, 3 when a bound made a suite inconclusive."""
    load_settings(
        dev,
        verbose,
        max_states=max_states,
        max_depth=max_depth,
        time_budget=time_budget,
        jobs=jobs,
    )

    try:
        plan = CheckPlan(
            suites=suites or list(DEFAULT_SUITES),
            acceptors=parse_range(acceptors),
            quorum_acceptors=parse_range(quorum_acceptors),
            bound_acceptors=parse_range(bound_acceptors),
            max_proposers=max_proposers,
            variant=variant,
            limits=current_limits(),
        )
    except ValueError as e:
        error(f"Invalid check plan: {describe_error(e)}")
        raise typer.Exit(ExitCode.USAGE)

    checker = ReductionChecker(plan.limits, workers=config_service.config.JOBS)
    results = checker.run(plan)
    print_checks(results)
    for result in results:
        if result.trace is not None:
            warning(f"Counterexample for {result.name}")
            print_trace(result.trace)

    statuses = {r.status for r in results}
    if CheckStatus.FAIL in statuses:
        error("Some properties failed")
        raise typer.Exit(ExitCode.UNSAFE)
    if CheckStatus.INCONCLUSIVE in statuses:
        warning("Some properties are inconclusive: a search bound was hit")
        raise typer.Exit(ExitCode.INCONCLUSIVE)
    success("All properties hold")
    raise typer.Exit(ExitCode.SUCCESS)
