"""Global state of the Paxos model and the names of its transitions.

Scratch receive variables never appear here: every atomic block of the
protocol is a pure function from one GlobalState to the next.
"""

from enum import IntEnum, StrEnum
from typing import NamedTuple, Optional, TypeVar

from paxos_mc.constants import UNDEFINED, LearnerMode
from paxos_mc.model.channel import Channel
from paxos_mc.model.messages import Message
from paxos_mc.schema import ProtocolConfig

T = TypeVar("T")


class Phase(IntEnum):
    START = 0
    COLLECTING = 1
    DONE = 2


class ProposerState(NamedTuple):
    round: int
    myval: int
    hr: int = UNDEFINED
    hval: int = UNDEFINED
    count: int = 0
    phase: Phase = Phase.START
    sent: int = 0  # prepares of the baseline broadcast already sent


class AcceptorState(NamedTuple):
    id: int
    rnd: int = UNDEFINED
    vrnd: int = UNDEFINED
    vval: int = UNDEFINED


class LearnerState(NamedTuple):
    """
    Abstract learners use `lastval`; concrete learners use `learned` / `learned_round`.
    `mcount[r - 1]` counts learn messages seen for round r, capped at MAJ.
    """

    mcount: tuple[int, ...]
    lastval: int = UNDEFINED
    learned: int = UNDEFINED
    learned_round: int = UNDEFINED
    violation: bool = False


class GlobalState(NamedTuple):
    prepare: Channel
    promise: Channel
    accept: Channel
    learn: Channel
    proposers: tuple[ProposerState, ...]
    acceptors: tuple[AcceptorState, ...]
    learners: tuple[LearnerState, ...]
    inboxes: tuple[Channel, ...] = ()  # one per concrete learner

    @property
    def violated(self) -> bool:
        return any(learner.violation for learner in self.learners)

    @property
    def channels(self) -> tuple[Channel, ...]:
        return (self.prepare, self.promise, self.accept, self.learn, *self.inboxes)

    def with_proposer(self, index: int, proposer: ProposerState) -> "GlobalState":
        return self._replace(proposers=put(self.proposers, index, proposer))

    def with_acceptor(self, index: int, acceptor: AcceptorState) -> "GlobalState":
        return self._replace(acceptors=put(self.acceptors, index, acceptor))

    def with_learner(self, index: int, learner: LearnerState) -> "GlobalState":
        return self._replace(learners=put(self.learners, index, learner))


def put(items: tuple[T, ...], index: int, value: T) -> tuple[T, ...]:
    return items[:index] + (value,) + items[index + 1 :]


class Role(StrEnum):
    PROPOSER = "proposer"
    ACCEPTOR = "acceptor"
    LEARNER = "learner"


class Rule(StrEnum):
    SEND_PREPARE = "send_prepare"
    BROADCAST_PREPARE = "broadcast_prepare"
    RECV_PROMISE = "recv_promise"
    TRY_ACCEPT = "try_accept"
    QUORUM_STEP = "quorum_step"
    RECV_PREPARE = "recv_prepare"
    RECV_ACCEPT = "recv_accept"
    LEARN = "learn"


class TransitionId(NamedTuple):
    """One atomic step; `message` is the message a receive takes, None for sends."""

    role: Role
    index: int
    rule: Rule
    message: Optional[Message] = None


def initial_state(cfg: ProtocolConfig) -> GlobalState:
    """Empty channels; proposer i (0-based) runs round i+1 with value i+1."""

    def empty() -> Channel:
        return Channel.empty(cfg.channel_cap, cfg.channel_mode)

    mcount = (0,) * cfg.proposers
    concrete = cfg.learner_mode == LearnerMode.CONCRETE
    return GlobalState(
        prepare=empty(),
        promise=empty(),
        accept=empty(),
        learn=empty(),
        proposers=tuple(ProposerState(round=i + 1, myval=i + 1) for i in range(cfg.proposers)),
        acceptors=tuple(AcceptorState(id=a) for a in range(cfg.acceptors)),
        learners=tuple(LearnerState(mcount=mcount) for _ in range(cfg.learners)),
        inboxes=tuple(empty() for _ in range(cfg.learners)) if concrete else (),
    )
