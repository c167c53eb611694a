import pytest

from paxos_mc.explorer import explore
from paxos_mc.model.messages import Prepare, describe, parse_message
from paxos_mc.model.state import Role, Rule, TransitionId
from paxos_mc.schema import ProtocolConfig, TraceStep
from paxos_mc.trace import (
    TraceError,
    build_steps,
    format_trace,
    parse_trace,
    read_trace,
    replay,
    write_trace,
)

CFG = ProtocolConfig(proposers=2, acceptors=2, maj=1)


def test_message_text_round_trip():
    """describe and parse_message are inverse."""
    assert parse_message(describe(Prepare(1, 2))) == Prepare(1, 2)
    assert parse_message("-") is None


def test_bad_message_text():
    """Unknown kinds and wrong fields are rejected."""
    with pytest.raises(ValueError):
        parse_message("Vote(round=1)")
    with pytest.raises(ValueError):
        parse_message("Prepare(round=1)")


def test_build_steps_records_changes():
    """Each step lists the fields of the actor that changed."""
    steps = build_steps(CFG, [TransitionId(Role.PROPOSER, 0, Rule.SEND_PREPARE)])
    assert steps[0].actor == "proposer[0]"
    assert steps[0].message == "-"
    assert steps[0].changes == "sent: 0->1"


def test_build_steps_rejects_disabled_step():
    """A transition that is not enabled stops the rendering."""
    with pytest.raises(TraceError):
        build_steps(CFG, [TransitionId(Role.LEARNER, 0, Rule.LEARN, None)])


def test_trace_file_round_trip(tmp_path):
    """A written trace reads back with the same config and steps."""
    report = explore(CFG)
    path = tmp_path / "trace.txt"
    write_trace(path, CFG, report.trace)

    cfg, steps = read_trace(path)
    assert cfg == CFG
    assert steps == report.trace
    assert replay(cfg, steps).violated


def test_format_has_header():
    """The header carries the full configuration."""
    text = format_trace(CFG, [])
    assert text.startswith("# paxos-mc trace\n")
    assert "# maj=1" in text
    assert "# variant=baseline" in text


def test_malformed_step_line():
    """Steps need five fields."""
    text = format_trace(CFG, []) + "1 | proposer[0] | send_prepare\n"
    with pytest.raises(TraceError):
        parse_trace(text)


def test_missing_header():
    """A trace without a configuration header is rejected."""
    with pytest.raises(TraceError):
        parse_trace("1 | proposer[0] | send_prepare | - | -\n")


def test_missing_file(tmp_path):
    """Reading a missing trace is a TraceError."""
    with pytest.raises(TraceError):
        read_trace(tmp_path / "nope.txt")


def test_replay_rejects_wrong_step():
    """A step that is not enabled does not replay."""
    step = TraceStep(
        index=1,
        role="acceptor",
        actor_index=0,
        rule="recv_prepare",
        message="Prepare(acceptor_id=0, round=1)",
    )
    with pytest.raises(TraceError):
        replay(CFG, [step])


def test_replay_rejects_unknown_rule():
    """Unknown rule names are a TraceError."""
    step = TraceStep(index=1, role="proposer", actor_index=0, rule="jump")
    with pytest.raises(TraceError):
        replay(CFG, [step])
