"""Proposer steps. Each returns the successor state, or None when disabled."""

from typing import Iterator, Optional

from paxos_mc.constants import UNDEFINED, Variant
from paxos_mc.model.messages import Accept, MessagePattern, Prepare, Promise
from paxos_mc.model.state import GlobalState, Phase, ProposerState, Role, Rule, TransitionId
from paxos_mc.schema import ProtocolConfig


def send_prepare(cfg: ProtocolConfig, s: GlobalState, p: int) -> Optional[GlobalState]:
    """
    Baseline: one message of the prepare broadcast; others may interleave between sends.

    Sends go out in acceptor order, so each proposer has a single enabled send at a
    time: the initial state of P proposers enables P sends, not P*A.
    """
    proposer = s.proposers[p]
    if proposer.phase != Phase.START or s.prepare.room() < 1:
        return None
    sent = proposer.sent + 1
    phase = Phase.COLLECTING if sent == cfg.acceptors else Phase.START
    return s._replace(
        prepare=s.prepare.insert(Prepare(proposer.sent, proposer.round)),
    ).with_proposer(p, proposer._replace(sent=sent, phase=phase))


def broadcast_prepare(cfg: ProtocolConfig, s: GlobalState, p: int) -> Optional[GlobalState]:
    """Optimized: the whole prepare broadcast as one atomic step."""
    proposer = s.proposers[p]
    if proposer.phase != Phase.START or s.prepare.room() < cfg.acceptors - proposer.sent:
        return None
    prepares = (Prepare(a, proposer.round) for a in range(proposer.sent, cfg.acceptors))
    return s._replace(prepare=s.prepare.insert_all(prepares)).with_proposer(
        p, proposer._replace(sent=cfg.acceptors, phase=Phase.COLLECTING)
    )


def promise_pattern(proposer: ProposerState) -> MessagePattern:
    return MessagePattern((proposer.round,))


def recv_promise(
    cfg: ProtocolConfig, s: GlobalState, p: int, message: Promise
) -> Optional[GlobalState]:
    proposer = s.proposers[p]
    if proposer.phase != Phase.COLLECTING or message.round != proposer.round:
        return None
    if message not in s.promise.contents:
        return None

    count = proposer.count + 1 if proposer.count < cfg.maj else proposer.count
    hr, hval = proposer.hr, proposer.hval
    if message.vrnd > hr:
        hr, hval = message.vrnd, message.vval
    return s._replace(promise=s.promise.remove(message)).with_proposer(
        p, proposer._replace(count=count, hr=hr, hval=hval)
    )


def _broadcast_accept(
    cfg: ProtocolConfig, s: GlobalState, p: int, value: int
) -> GlobalState:
    proposer = s.proposers[p]
    accepts = (Accept(a, proposer.round, value) for a in range(cfg.acceptors))
    return s._replace(accept=s.accept.insert_all(accepts)).with_proposer(
        p, proposer._replace(phase=Phase.DONE)
    )


def try_accept(cfg: ProtocolConfig, s: GlobalState, p: int) -> Optional[GlobalState]:
    """Baseline phase 2: guard, value choice and the accept broadcast in one atomic step."""
    proposer = s.proposers[p]
    if proposer.phase != Phase.COLLECTING or proposer.count < cfg.maj:
        return None
    if s.accept.room() < cfg.acceptors:
        return None
    value = proposer.myval if proposer.hval < 0 else proposer.hval
    return _broadcast_accept(cfg, s, p, value)


def quorum_step(cfg: ProtocolConfig, s: GlobalState, p: int) -> Optional[GlobalState]:
    """
    Optimized phase 2: count the promises for this round without consuming them and,
    when they reach MAJ, broadcast the value of the highest vrnd (or our own value).

    No intermediate counting state is ever produced.
    """
    proposer = s.proposers[p]
    if proposer.phase != Phase.COLLECTING:
        return None

    count, hr, hv = 0, UNDEFINED, UNDEFINED
    for promise in s.promise.contents:
        if promise.round == proposer.round:
            count += 1
            if promise.vrnd > hr:
                hr, hv = promise.vrnd, promise.vval
    if count < cfg.maj or s.accept.room() < cfg.acceptors:
        return None
    return _broadcast_accept(cfg, s, p, proposer.myval if hr < 0 else hv)


def steps(
    cfg: ProtocolConfig, s: GlobalState, p: int
) -> Iterator[tuple[TransitionId, GlobalState]]:
    """Enabled steps of proposer p, in a fixed order."""
    proposer = s.proposers[p]
    if proposer.phase == Phase.DONE:
        return

    if cfg.variant == Variant.OPTIMIZED:
        if proposer.phase == Phase.START:
            succ = broadcast_prepare(cfg, s, p)
            if succ is not None:
                yield TransitionId(Role.PROPOSER, p, Rule.BROADCAST_PREPARE), succ
        else:
            succ = quorum_step(cfg, s, p)
            if succ is not None:
                yield TransitionId(Role.PROPOSER, p, Rule.QUORUM_STEP), succ
        return

    if proposer.phase == Phase.START:
        succ = send_prepare(cfg, s, p)
        if succ is not None:
            yield TransitionId(Role.PROPOSER, p, Rule.SEND_PREPARE), succ
        return

    for message in s.promise.choices(promise_pattern(proposer), cfg.receive_mode):
        succ = recv_promise(cfg, s, p, message)
        if succ is not None:
            yield TransitionId(Role.PROPOSER, p, Rule.RECV_PROMISE, message), succ
    succ = try_accept(cfg, s, p)
    if succ is not None:
        yield TransitionId(Role.PROPOSER, p, Rule.TRY_ACCEPT), succ
