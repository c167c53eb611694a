"""Explicit-state model checking of single-decree Paxos."""

import paxos_mc.constants

__version__ = paxos_mc.constants.__version__

from paxos_mc.config import ConfigService

from .explorer import Explorer, explore
from .model import GlobalState, PaxosModel, TransitionId
from .schema import CheckResult, Limits, OutcomeSet, ProtocolConfig, Report, SweepSpec

__all__ = [
    "CheckResult",
    "ConfigService",
    "Explorer",
    "GlobalState",
    "Limits",
    "OutcomeSet",
    "PaxosModel",
    "ProtocolConfig",
    "Report",
    "SweepSpec",
    "TransitionId",
    "explore",
]
