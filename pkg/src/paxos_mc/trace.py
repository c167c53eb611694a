"""
Counterexample traces: step rendering, the trace file format and replay.

A trace file is line-oriented text:

    # paxos-mc trace
    # proposers=2
    # acceptors=2
    # ...
    1 | proposer[0] | send_prepare | - | sent: 0->1
    2 | acceptor[0] | recv_prepare | Prepare(acceptor_id=0, round=1) | rnd: -1->1
"""

import re
from pathlib import Path
from typing import Any, Iterable, NamedTuple, Sequence

from paxos_mc.constants import DEFAULT_ENCODING, PROJECT_NAME
from paxos_mc.model import GlobalState, PaxosModel, Role, Rule, TransitionError, TransitionId
from paxos_mc.model.messages import describe, parse_message
from paxos_mc.model.state import Phase
from paxos_mc.schema import ProtocolConfig, TraceStep
from paxos_mc.utils import ui

_ACTOR_RE = re.compile(r"^(?P<role>\w+)\[(?P<index>\d+)\]$")
_FIELD_SEPARATOR = " | "


class TraceError(Exception):
    """Raised when a trace cannot be reconstructed, parsed or replayed."""

    pass


def _actor_state(s: GlobalState, t: TransitionId) -> NamedTuple:
    if t.role == Role.PROPOSER:
        return s.proposers[t.index]
    if t.role == Role.ACCEPTOR:
        return s.acceptors[t.index]
    return s.learners[t.index]


def _show(value: Any) -> str:
    if isinstance(value, Phase):
        return value.name.lower()
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, tuple):
        return "[" + ",".join(map(str, value)) + "]"
    return str(value)


def describe_changes(before: NamedTuple, after: NamedTuple) -> str:
    """`count: 0->1, hr: -1->1`, or '-' when nothing changed."""
    changes = [
        f"{field}: {_show(old)}->{_show(new)}"
        for (field, old), new in zip(before._asdict().items(), after)
        if old != new
    ]
    return ", ".join(changes) or "-"


def build_steps(cfg: ProtocolConfig, transitions: Sequence[TransitionId]) -> list[TraceStep]:
    """Replay `transitions` from the initial state and render every step."""
    model = PaxosModel(cfg)
    s = model.initial_state()
    steps: list[TraceStep] = []
    for index, t in enumerate(transitions, start=1):
        try:
            succ = model.apply(s, t)
        except TransitionError as e:
            raise TraceError(f"step {index}: {e}") from e
        steps.append(
            TraceStep(
                index=index,
                role=t.role.value,
                actor_index=t.index,
                rule=t.rule.value,
                message=describe(t.message),
                changes=describe_changes(_actor_state(s, t), _actor_state(succ, t)),
            )
        )
        s = succ
    return steps


def to_transition(step: TraceStep) -> TransitionId:
    try:
        return TransitionId(
            Role(step.role), step.actor_index, Rule(step.rule), parse_message(step.message)
        )
    except ValueError as e:
        raise TraceError(f"step {step.index}: {e}") from e


def replay(cfg: ProtocolConfig, steps: Iterable[TraceStep]) -> GlobalState:
    """Re-apply a trace through the model and return the final state."""
    model = PaxosModel(cfg)
    s = model.initial_state()
    for step in steps:
        try:
            s = model.apply(s, to_transition(step))
        except TransitionError as e:
            raise TraceError(f"step {step.index} does not replay: {e}") from e
    return s


# ---------------------------------------------------------
# Trace files
# ---------------------------------------------------------


def format_trace(cfg: ProtocolConfig, steps: Iterable[TraceStep]) -> str:
    lines = [f"# {PROJECT_NAME} trace"]
    lines.extend(f"# {key}={value}" for key, value in cfg.to_pairs().items())
    for s in steps:
        lines.append(_FIELD_SEPARATOR.join((str(s.index), s.actor, s.rule, s.message, s.changes)))
    return "\n".join(lines) + "\n"


def write_trace(path: Path, cfg: ProtocolConfig, steps: Iterable[TraceStep]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_trace(cfg, steps), encoding=DEFAULT_ENCODING)
    ui.debug(f"Trace written to {path}")


def parse_trace(text: str) -> tuple[ProtocolConfig, list[TraceStep]]:
    pairs: dict[str, str] = {}
    steps: list[TraceStep] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line.lstrip("#").partition("=")
            if sep:
                pairs[key.strip()] = value.strip()
            continue

        fields = [field.strip() for field in line.split("|")]
        if len(fields) != 5:
            raise TraceError(f"line {lineno}: expected 5 fields, got {len(fields)}")
        index, actor, rule, message, changes = fields
        match = _ACTOR_RE.match(actor)
        if match is None or not index.isdigit():
            raise TraceError(f"line {lineno}: malformed step {line!r}")
        steps.append(
            TraceStep(
                index=int(index),
                role=match["role"],
                actor_index=int(match["index"]),
                rule=rule,
                message=message,
                changes=changes,
            )
        )

    if not pairs:
        raise TraceError("trace has no configuration header")
    try:
        cfg = ProtocolConfig.from_pairs(pairs)
    except ValueError as e:
        raise TraceError(f"invalid configuration header: {e}") from e
    return cfg, steps


def read_trace(path: Path) -> tuple[ProtocolConfig, list[TraceStep]]:
    if not path.exists():
        raise TraceError(f"Trace file not found: {path}")
    return parse_trace(path.read_text(encoding=DEFAULT_ENCODING))
