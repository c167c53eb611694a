"""
Sub commands
Implemented via sub typers in Typer.
"""

from .check import check_command
from .config import config_app

__all__ = ["check_command", "config_app"]
