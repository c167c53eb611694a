"""Transition relation of the Paxos model.

`PaxosModel` interleaves the role steps in a fixed order: proposers, then
acceptors, then learners. Disabled steps are simply absent.
"""

from typing import Optional

from paxos_mc.model import acceptor, learner, proposer
from paxos_mc.model.messages import Accept, Learn, describe
from paxos_mc.model.state import GlobalState, Role, Rule, TransitionId, initial_state
from paxos_mc.schema import ProtocolConfig


class TransitionError(Exception):
    """Raised when applying a transition that is not enabled in the given state."""

    pass


class InvariantError(Exception):
    """Raised when a reachable state breaks a protocol invariant."""

    pass


def format_transition(t: TransitionId) -> str:
    """`acceptor[1].recv_accept Accept(acceptor_id=1, round=2, value=2)`"""
    text = f"{t.role}[{t.index}].{t.rule}"
    return text if t.message is None else f"{text} {describe(t.message)}"


class PaxosModel:
    """
    The Paxos model for one protocol configuration.

    Args:
        cfg: validated protocol configuration
    """

    def __init__(self, cfg: ProtocolConfig):
        self.cfg = cfg

    def initial_state(self) -> GlobalState:
        return initial_state(self.cfg)

    def successors(self, s: GlobalState) -> list[tuple[TransitionId, GlobalState]]:
        """Every enabled step with its successor, in enumeration order. Not validated."""
        cfg = self.cfg
        result: list[tuple[TransitionId, GlobalState]] = []
        for p in range(cfg.proposers):
            result.extend(proposer.steps(cfg, s, p))
        for a in range(cfg.acceptors):
            result.extend(acceptor.steps(cfg, s, a))
        result.extend(learner.steps(cfg, s))
        return result

    def enabled_transitions(self, s: GlobalState) -> list[TransitionId]:
        return [t for t, _ in self.successors(s)]

    def apply(self, s: GlobalState, t: TransitionId) -> GlobalState:
        """Fire `t` in `s`; raises TransitionError if it is not enabled there."""
        for candidate, succ in self.successors(s):
            if candidate == t:
                self.check_monotone(s, succ)
                return succ
        raise TransitionError(f"{format_transition(t)} is not enabled")

    def chosen_pair(self, t: TransitionId, succ: GlobalState) -> Optional[tuple[int, int]]:
        """(round, value) when the learner step `t` leaves its round at a majority."""
        if t.rule != Rule.LEARN or not isinstance(t.message, Learn):
            return None
        round_ = t.message.round
        if succ.learners[t.index].mcount[round_ - 1] >= self.cfg.maj:
            return round_, t.message.value
        return None

    @staticmethod
    def check_monotone(s: GlobalState, succ: GlobalState) -> None:
        for before, after in zip(s.acceptors, succ.acceptors):
            if after.rnd < before.rnd:
                raise InvariantError(
                    f"acceptor[{before.id}] rnd went back from {before.rnd} to {after.rnd}"
                )

    @staticmethod
    def check_round_values(s: GlobalState) -> None:
        """All Accept and Learn messages of one round carry the same value."""
        values: dict[int, int] = {}
        for channel in (s.accept, s.learn, *s.inboxes):
            for message in channel.contents:
                assert isinstance(message, (Accept, Learn))
                seen = values.setdefault(message.round, message.value)
                if seen != message.value:
                    raise InvariantError(
                        f"round {message.round} carries values {seen} and {message.value}"
                    )


__all__ = [
    "InvariantError",
    "PaxosModel",
    "Role",
    "Rule",
    "TransitionError",
    "TransitionId",
    "format_transition",
]
