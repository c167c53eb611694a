"""Option helpers shared by the commands: settings loading and run-file merging."""

from pathlib import Path
from typing import Any, Optional

import typer
from pydantic import TypeAdapter, ValidationError

from paxos_mc.config import config_service, load_run_file
from paxos_mc.constants import ChannelMode, ExitCode
from paxos_mc.schema import Limits, ProtocolConfig, describe_error, parse_learners
from paxos_mc.utils.ui import error

# keys of a run file, spelled like the `run` flags
RUN_FILE_KEYS = frozenset(
    {
        "proposers",
        "acceptors",
        "maj",
        "cap",
        "variant",
        "learners",
        "receive",
        "channel_mode",
        "faithful_optimized_acceptor",
        "max_states",
        "max_depth",
        "time_budget",
        "jobs",
        "exhaustive_violations",
        "check_invariants",
    }
)
_FLAG = TypeAdapter(bool)


def load_settings(dev: bool, verbose: bool, **overrides: Any) -> None:
    """Load the profile with CLI overrides; bad values exit with the usage code."""
    try:
        config_service.load_config(dev_mode=dev, verbose=verbose, **overrides)
    except ValidationError as e:
        error(f"Invalid setting: {describe_error(e)}")
        raise typer.Exit(ExitCode.USAGE)


def merge_run_options(run_file: Optional[Path], cli_values: dict[str, Any]) -> dict[str, Any]:
    """CLI values override run file values; unset CLI options are None."""
    file_values: dict[str, Any] = {}
    if run_file is not None:
        try:
            file_values = load_run_file(run_file)
        except FileNotFoundError as e:
            error(str(e))
            raise typer.Exit(ExitCode.USAGE)
        unknown = sorted(file_values.keys() - RUN_FILE_KEYS)
        if unknown:
            error(f"Unknown keys in {run_file}: {', '.join(unknown)}")
            raise typer.Exit(ExitCode.USAGE)
    return {**file_values, **{k: v for k, v in cli_values.items() if v is not None}}


def build_protocol_config(values: dict[str, Any], channel_mode: ChannelMode) -> ProtocolConfig:
    data: dict[str, Any] = {
        "proposers": values.get("proposers"),
        "acceptors": values.get("acceptors"),
        "maj": values.get("maj"),
        "variant": values.get("variant"),
        "receive_mode": values.get("receive"),
        "channel_mode": values.get("channel_mode") or channel_mode,
        "faithful_optimized_acceptor": values.get("faithful_optimized_acceptor"),
    }
    cap = values.get("cap")
    if cap is not None and str(cap).strip().lower() != "auto":
        data["channel_cap"] = cap
    if values.get("learners"):
        data["learner_mode"], data["learners"] = parse_learners(str(values["learners"]))
    return ProtocolConfig.model_validate({k: v for k, v in data.items() if v is not None})


def flag(values: dict[str, Any], key: str) -> bool:
    return _FLAG.validate_python(values.get(key) or False)


def current_limits() -> Limits:
    settings = config_service.config
    return Limits(
        max_states=settings.MAX_STATES,
        max_depth=settings.MAX_DEPTH,
        time_budget=settings.TIME_BUDGET,
    )

