"""CLI package for paxos-mc."""

from .main import app, main

__all__ = ["app", "main"]
