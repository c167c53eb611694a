"""Acceptor steps."""

from typing import Iterator, Optional

from paxos_mc.constants import LearnerMode, Variant
from paxos_mc.model.messages import Accept, Learn, MessagePattern, Prepare, Promise
from paxos_mc.model.state import GlobalState, Role, Rule, TransitionId
from paxos_mc.schema import ProtocolConfig


def recv_prepare(
    cfg: ProtocolConfig, s: GlobalState, a: int, message: Prepare
) -> Optional[GlobalState]:
    """
    Answer a prepare for a higher round with a promise carrying (vrnd, vval).

    Baseline consumes the prepare either way. Optimized reads it without consuming
    it, so a stale prepare gives back the same state. With a faithful optimized
    acceptor the promise is not sent at all, only `rnd` moves.
    """
    acceptor = s.acceptors[a]
    if message.acceptor_id != a or message not in s.prepare.contents:
        return None

    optimized = cfg.variant == Variant.OPTIMIZED
    prepare = s.prepare if optimized else s.prepare.remove(message)
    if message.round <= acceptor.rnd:
        return s._replace(prepare=prepare)

    promise = s.promise
    if not (optimized and cfg.faithful_optimized_acceptor):
        if promise.room() < 1:
            return None
        promise = promise.insert(Promise(message.round, acceptor.vrnd, acceptor.vval))
    return s._replace(prepare=prepare, promise=promise).with_acceptor(
        a, acceptor._replace(rnd=message.round)
    )


def recv_accept(
    cfg: ProtocolConfig, s: GlobalState, a: int, message: Accept
) -> Optional[GlobalState]:
    """Accept a round at least as high as `rnd` and tell the learners; drop stale ones."""
    acceptor = s.acceptors[a]
    if message.acceptor_id != a or message not in s.accept.contents:
        return None

    s = s._replace(accept=s.accept.remove(message))
    if message.round < acceptor.rnd:
        return s

    learn = Learn(a, message.round, message.value)
    if cfg.learner_mode == LearnerMode.CONCRETE:
        if any(inbox.room() < 1 for inbox in s.inboxes):
            return None
        s = s._replace(inboxes=tuple(inbox.insert(learn) for inbox in s.inboxes))
    else:
        if s.learn.room() < 1:
            return None
        s = s._replace(learn=s.learn.insert(learn))
    return s.with_acceptor(
        a, acceptor._replace(rnd=message.round, vrnd=message.round, vval=message.value)
    )


def steps(
    cfg: ProtocolConfig, s: GlobalState, a: int
) -> Iterator[tuple[TransitionId, GlobalState]]:
    """Enabled steps of acceptor a: prepares first, then accepts."""
    pattern = MessagePattern((a,))

    if cfg.variant == Variant.OPTIMIZED:
        # persistent reads may pick any stored prepare
        prepares = s.prepare.matching(pattern)
    else:
        prepares = s.prepare.choices(pattern, cfg.receive_mode)
    for message in prepares:
        succ = recv_prepare(cfg, s, a, message)
        if succ is not None:
            yield TransitionId(Role.ACCEPTOR, a, Rule.RECV_PREPARE, message), succ

    for message in s.accept.choices(pattern, cfg.receive_mode):
        succ = recv_accept(cfg, s, a, message)
        if succ is not None:
            yield TransitionId(Role.ACCEPTOR, a, Rule.RECV_ACCEPT, message), succ
