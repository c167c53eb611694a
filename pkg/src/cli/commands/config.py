"""Config CLI"""

import typer
from pydantic import ValidationError
from rich.table import Table

from paxos_mc.config import Settings, config_service
from paxos_mc.constants import PROJECT_NAME, ExitCode
from paxos_mc.schema import describe_error
from paxos_mc.utils.ui import console, error, info, success

# ============================================================================
# Command: config (Configuration Management)
# ============================================================================


config_app = typer.Typer(help=f"Manage the {PROJECT_NAME} user profile")

VALID_KEYS = sorted(Settings.model_fields.keys() - {"dir_configs"})


def _check_key(key: str) -> str:
    key = key.upper().replace("-", "_")
    if key not in VALID_KEYS:
        error(f"Invalid configuration key: {key}")
        info(f"Valid keys: {', '.join(VALID_KEYS)}")
        raise typer.Exit(ExitCode.USAGE)
    return key


@config_app.command(name="set")
def config_set(
    key: str = typer.Argument(..., help="Configuration key, e.g. MAX_STATES"),
    value: str = typer.Argument(..., help="Configuration value"),
):
    """Set a profile value."""
    key = _check_key(key)
    config_service.load_config()
    try:
        setattr(config_service.config, key, value)
    except ValidationError as e:
        error(f"Invalid value for {key}: {describe_error(e)}")
        raise typer.Exit(ExitCode.USAGE)

    try:
        config_service.save_config()
    except OSError as e:
        error(f"Failed to save configuration: {e}")
        raise typer.Exit(1)
    success(f"Configuration saved: {key} = {getattr(config_service.config, key)}")


@config_app.command(name="get")
def config_get(key: str = typer.Argument(..., help="Configuration key")):
    """Print one effective value."""
    key = _check_key(key)
    config_service.load_config()
    console.print(str(getattr(config_service.config, key)))


@config_app.command(name="list")
def config_list():
    """List all effective values."""
    config_service.load_config()

    table = Table(title="Configuration Values", show_header=True, header_style="bold cyan")
    table.add_column("Key", style="green")
    table.add_column("Value", style="white")
    for key, value in config_service.config.model_dump(mode="json", exclude={"dir_configs"}).items():
        table.add_row(key, str(value))

    console.print(table)
    info("Use 'config get <key>' to retrieve specific values")


@config_app.command(name="profile")
def config_profile():
    """Show where the profile and logs live; create the profile if missing."""
    config_service.load_config()
    dir_config = config_service.config.dir_configs

    table = Table(title="Configuration Profile", show_header=True, header_style="bold cyan")
    table.add_column("Type", style="green")
    table.add_column("Path", style="white")

    config_file = dir_config.config_file
    table.add_row("Config File", str(config_file))
    table.add_row("Config Directory", str(dir_config.config_dir))
    table.add_row("Log Directory", str(dir_config.log_dir))
    console.print(table)

    if config_file.exists():
        info(f"Config file exists at: {config_file}")
    else:
        info(f"Create config file at: {config_file}")
        config_service.save_config()
