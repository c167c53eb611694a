"""Learner steps.

The abstract learner reads the shared learn channel and flags a violation when a
majority for a second, different value shows up. Concrete learners each read
their own inbox and record the first pair they see reach a majority; a violation
is a learner observing a majority for a value other than one another learner
already learned.
"""

from typing import Iterator, Optional

from paxos_mc.constants import UNDEFINED, LearnerMode
from paxos_mc.model.messages import ANY, Learn
from paxos_mc.model.state import GlobalState, LearnerState, Role, Rule, TransitionId, put
from paxos_mc.schema import ProtocolConfig


def _count(cfg: ProtocolConfig, learner: LearnerState, message: Learn) -> LearnerState:
    i = message.round - 1
    if learner.mcount[i] < cfg.maj:
        return learner._replace(mcount=put(learner.mcount, i, learner.mcount[i] + 1))
    return learner


def abstract_learn(cfg: ProtocolConfig, s: GlobalState, message: Learn) -> Optional[GlobalState]:
    if message not in s.learn.contents:
        return None

    learner = _count(cfg, s.learners[0], message)
    if learner.mcount[message.round - 1] >= cfg.maj:
        if learner.lastval >= 0 and learner.lastval != message.value:
            learner = learner._replace(violation=True)
        elif learner.lastval == UNDEFINED:
            learner = learner._replace(lastval=message.value)
    return s._replace(learn=s.learn.remove(message)).with_learner(0, learner)


def concrete_learn(
    cfg: ProtocolConfig, s: GlobalState, index: int, message: Learn
) -> Optional[GlobalState]:
    inbox = s.inboxes[index]
    if message not in inbox.contents:
        return None

    learner = _count(cfg, s.learners[index], message)
    if learner.mcount[message.round - 1] >= cfg.maj:
        if any(
            j != index and other.learned >= 0 and other.learned != message.value
            for j, other in enumerate(s.learners)
        ):
            learner = learner._replace(violation=True)
        if learner.learned == UNDEFINED:
            learner = learner._replace(learned=message.value, learned_round=message.round)
    return s._replace(inboxes=put(s.inboxes, index, inbox.remove(message))).with_learner(
        index, learner
    )


def steps(cfg: ProtocolConfig, s: GlobalState) -> Iterator[tuple[TransitionId, GlobalState]]:
    if cfg.learner_mode == LearnerMode.ABSTRACT:
        for message in s.learn.choices(ANY, cfg.receive_mode):
            succ = abstract_learn(cfg, s, message)
            if succ is not None:
                yield TransitionId(Role.LEARNER, 0, Rule.LEARN, message), succ
        return

    for index, inbox in enumerate(s.inboxes):
        for message in inbox.choices(ANY, cfg.receive_mode):
            succ = concrete_learn(cfg, s, index, message)
            if succ is not None:
                yield TransitionId(Role.LEARNER, index, Rule.LEARN, message), succ
