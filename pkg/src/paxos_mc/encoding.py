"""
Canonical byte encoding of GlobalState.

Only the fields that can change are stored, one signed byte each:

    channel*   length, then the fields of every message in order
               (prepare, promise, accept, learn, then the learner inboxes)
    proposer*  hr, hval, count, phase, sent
    acceptor*  rnd, vrnd, vval
    learner*   lastval, violation, learned, learned_round, mcount[0..P)

Rounds, proposed values, acceptor ids, capacities and modes follow from the
ProtocolConfig and are restored by `decode`.
"""

from array import array
from itertools import islice
from typing import Iterator

from paxos_mc.constants import LearnerMode
from paxos_mc.model.channel import Channel
from paxos_mc.model.messages import Accept, Learn, Message, Prepare, Promise
from paxos_mc.model.state import AcceptorState, GlobalState, LearnerState, Phase, ProposerState
from paxos_mc.schema import ProtocolConfig

_CHANNEL_KINDS: tuple[type[Message], ...] = (Prepare, Promise, Accept, Learn)


class EncodingError(Exception):
    """Raised for states that do not fit the byte layout and for malformed encodings."""

    pass


def encode(s: GlobalState) -> bytes:
    values: list[int] = []
    for channel in s.channels:
        values.append(len(channel.contents))
        for message in channel.contents:
            values.extend(message)
    for proposer in s.proposers:
        values.extend(proposer[2:])
    for acceptor in s.acceptors:
        values.extend(acceptor[1:])
    for learner in s.learners:
        values.append(learner.lastval)
        values.append(learner.violation)
        values.append(learner.learned)
        values.append(learner.learned_round)
        values.extend(learner.mcount)
    try:
        return array("b", values).tobytes()
    except OverflowError as e:
        raise EncodingError(f"state field out of signed byte range: {e}") from e


def decode(data: bytes, cfg: ProtocolConfig) -> GlobalState:
    """Inverse of `encode` for states of `cfg`."""
    values = array("b")
    values.frombytes(data)
    it = iter(values)

    def take(n: int) -> tuple[int, ...]:
        chunk = tuple(islice(it, n))
        if len(chunk) != n:
            raise EncodingError(f"truncated encoding ({len(data)} bytes)")
        return chunk

    def channel(kind: type[Message]) -> Channel:
        (length,) = take(1)
        if not 0 <= length <= cfg.channel_cap:
            raise EncodingError(f"channel length {length} outside [0, {cfg.channel_cap}]")
        width = len(kind._fields)
        contents = tuple(kind(*take(width)) for _ in range(length))
        return Channel(contents, cfg.channel_cap, cfg.channel_mode)

    try:
        inbox_count = cfg.learners if cfg.learner_mode == LearnerMode.CONCRETE else 0
        prepare, promise, accept, learn = (channel(kind) for kind in _CHANNEL_KINDS)
        inboxes = tuple(channel(Learn) for _ in range(inbox_count))
        proposers = tuple(_proposer(i, take(5)) for i in range(cfg.proposers))
        acceptors = tuple(AcceptorState(a, *take(3)) for a in range(cfg.acceptors))
        learners = tuple(_learner(take(4), take(cfg.proposers)) for _ in range(cfg.learners))
    except ValueError as e:
        # Phase out of range
        raise EncodingError(str(e)) from e

    if _remaining(it):
        raise EncodingError(f"trailing bytes after state ({len(data)} bytes)")
    return GlobalState(prepare, promise, accept, learn, proposers, acceptors, learners, inboxes)


def _proposer(index: int, fields: tuple[int, ...]) -> ProposerState:
    hr, hval, count, phase, sent = fields
    return ProposerState(index + 1, index + 1, hr, hval, count, Phase(phase), sent)


def _learner(head: tuple[int, ...], mcount: tuple[int, ...]) -> LearnerState:
    lastval, violation, learned, learned_round = head
    return LearnerState(mcount, lastval, learned, learned_round, bool(violation))


def _remaining(it: Iterator[int]) -> bool:
    return next(it, None) is not None
