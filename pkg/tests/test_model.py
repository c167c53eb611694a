import pytest
from pydantic import ValidationError

from paxos_mc.constants import LearnerMode, Variant
from paxos_mc.model import (
    InvariantError,
    PaxosModel,
    TransitionError,
    format_transition,
    initial_state,
)
from paxos_mc.model import acceptor, learner, proposer
from paxos_mc.model.messages import Accept, Learn, Prepare, Promise
from paxos_mc.model.state import Phase, Role, Rule, TransitionId
from paxos_mc.schema import ProtocolConfig


def config(**kwargs) -> ProtocolConfig:
    return ProtocolConfig(**{"proposers": 2, "acceptors": 2, "maj": 1, **kwargs})


def collecting(cfg: ProtocolConfig, p: int = 0, **fields):
    """Initial state with proposer p past its prepare broadcast."""
    s = initial_state(cfg)
    return s.with_proposer(
        p, s.proposers[p]._replace(phase=Phase.COLLECTING, sent=cfg.acceptors, **fields)
    )


class TestInitialState:
    def test_rounds_and_values(self):
        """Proposer i runs round i+1 with value i+1; acceptors are numbered from 0."""
        s = initial_state(ProtocolConfig(proposers=2, acceptors=3))
        assert [(p.round, p.myval) for p in s.proposers] == [(1, 1), (2, 2)]
        assert [a.id for a in s.acceptors] == [0, 1, 2]
        assert all(a.rnd == a.vrnd == a.vval == -1 for a in s.acceptors)
        assert all(not c.contents for c in s.channels)

    def test_minimal_system(self):
        """One proposer and one acceptor is a valid instance."""
        s = initial_state(ProtocolConfig(proposers=1, acceptors=1, maj=1))
        assert len(s.proposers) == 1 and len(s.acceptors) == 1

    def test_zero_majority_rejected(self):
        """maj=0 is not a quorum."""
        with pytest.raises(ValidationError):
            ProtocolConfig(maj=0)

    def test_concrete_learners_get_inboxes(self):
        """Concrete learners each own an inbox."""
        s = initial_state(config(learner_mode=LearnerMode.CONCRETE, learners=2))
        assert len(s.learners) == 2
        assert len(s.inboxes) == 2


class TestProposer:
    def test_optimized_broadcast_is_atomic(self):
        """Optimized prepare broadcast puts every Prepare in one step."""
        cfg = config(variant=Variant.OPTIMIZED)
        succ = proposer.broadcast_prepare(cfg, initial_state(cfg), 0)
        assert succ.prepare.contents == (Prepare(0, 1), Prepare(1, 1))
        assert succ.proposers[0].phase == Phase.COLLECTING

    def test_baseline_sends_one_prepare_at_a_time(self):
        """Baseline prepare broadcast takes one step per acceptor."""
        cfg = config()
        first = proposer.send_prepare(cfg, initial_state(cfg), 0)
        assert first.prepare.contents == (Prepare(0, 1),)
        assert first.proposers[0].phase == Phase.START
        second = proposer.send_prepare(cfg, first, 0)
        assert second.prepare.contents == (Prepare(0, 1), Prepare(1, 1))
        assert second.proposers[0].phase == Phase.COLLECTING

    def test_single_acceptor_broadcast_matches(self):
        """With one acceptor both variants send the same single Prepare."""
        baseline = config(acceptors=1)
        optimized = config(acceptors=1, variant=Variant.OPTIMIZED)
        a = proposer.send_prepare(baseline, initial_state(baseline), 0)
        b = proposer.broadcast_prepare(optimized, initial_state(optimized), 0)
        assert a.prepare == b.prepare
        assert a.proposers == b.proposers

    def test_recv_promise_counts_and_tracks_highest(self):
        """Promises raise count and adopt the highest (vrnd, vval)."""
        cfg = config(acceptors=3, maj=2)
        s = collecting(cfg)
        s = s._replace(promise=s.promise.insert_all([Promise(1, -1, -1), Promise(1, 1, 7)]))

        s = proposer.recv_promise(cfg, s, 0, Promise(1, -1, -1))
        assert s.proposers[0][2:5] == (-1, -1, 1)
        s = proposer.recv_promise(cfg, s, 0, Promise(1, 1, 7))
        assert s.proposers[0][2:5] == (1, 7, 2)

    def test_recv_promise_caps_count_at_majority(self):
        """count never exceeds MAJ."""
        cfg = config(acceptors=3, maj=2)
        s = collecting(cfg, count=2)
        s = s._replace(promise=s.promise.insert(Promise(1, -1, -1)))
        assert proposer.recv_promise(cfg, s, 0, Promise(1, -1, -1)).proposers[0].count == 2

    def test_try_accept_uses_own_value(self):
        """Without a previous value the proposer broadcasts its own."""
        cfg = config(acceptors=3, maj=2)
        succ = proposer.try_accept(cfg, collecting(cfg, count=2), 0)
        assert succ.accept.contents == (Accept(0, 1, 1), Accept(1, 1, 1), Accept(2, 1, 1))
        assert succ.proposers[0].phase == Phase.DONE

    def test_try_accept_propagates_old_value(self):
        """A value learned from promises replaces myval."""
        cfg = config(acceptors=3, maj=2)
        succ = proposer.try_accept(cfg, collecting(cfg, count=2, hr=1, hval=7), 0)
        assert {m.value for m in succ.accept.contents} == {7}

    def test_try_accept_disabled_below_quorum(self):
        """count < MAJ disables phase 2."""
        cfg = config(acceptors=3, maj=2)
        assert proposer.try_accept(cfg, collecting(cfg, count=1), 0) is None

    def test_quorum_step_fires_on_majority(self):
        """Optimized phase 2 counts promises without consuming them."""
        cfg = config(variant=Variant.OPTIMIZED, maj=2)
        s = collecting(cfg)
        s = s._replace(promise=s.promise.insert_all([Promise(1, -1, -1), Promise(1, -1, -1)]))
        succ = proposer.quorum_step(cfg, s, 0)
        assert {m.value for m in succ.accept.contents} == {1}
        assert succ.promise == s.promise

    def test_quorum_step_disabled_below_majority(self):
        """One promise is not a quorum of two."""
        cfg = config(variant=Variant.OPTIMIZED, maj=2)
        s = collecting(cfg)
        s = s._replace(promise=s.promise.insert(Promise(1, -1, -1)))
        assert proposer.quorum_step(cfg, s, 0) is None

    def test_quorum_step_picks_highest_round_value(self):
        """The promise with the highest vrnd decides the value."""
        cfg = config(variant=Variant.OPTIMIZED, maj=2)
        s = collecting(cfg)
        s = s._replace(promise=s.promise.insert_all([Promise(1, 1, 5), Promise(1, 2, 9)]))
        assert {m.value for m in proposer.quorum_step(cfg, s, 0).accept.contents} == {9}


class TestAcceptor:
    def test_fresh_prepare_sends_promise(self):
        """A higher round is promised with the last accepted pair."""
        cfg = config()
        s = initial_state(cfg)
        s = s._replace(prepare=s.prepare.insert(Prepare(0, 1)))
        succ = acceptor.recv_prepare(cfg, s, 0, Prepare(0, 1))
        assert succ.promise.contents == (Promise(1, -1, -1),)
        assert succ.acceptors[0].rnd == 1
        assert not succ.prepare.contents

    def test_stale_prepare_is_consumed_silently(self):
        """A prepare for a round not above rnd sends nothing."""
        cfg = config()
        s = initial_state(cfg)
        s = s.with_acceptor(0, s.acceptors[0]._replace(rnd=2))
        s = s._replace(prepare=s.prepare.insert(Prepare(0, 1)))
        succ = acceptor.recv_prepare(cfg, s, 0, Prepare(0, 1))
        assert not succ.promise.contents
        assert succ.acceptors[0].rnd == 2

    def test_optimized_stale_prepare_is_a_self_loop(self):
        """Persistent reads of an answered prepare change nothing."""
        cfg = config(variant=Variant.OPTIMIZED)
        s = initial_state(cfg)
        s = s.with_acceptor(0, s.acceptors[0]._replace(rnd=1))
        s = s._replace(prepare=s.prepare.insert(Prepare(0, 1)))
        assert acceptor.recv_prepare(cfg, s, 0, Prepare(0, 1)) == s

    def test_faithful_optimized_acceptor_sends_no_promise(self):
        """The faithful optimized acceptor only moves rnd."""
        cfg = config(variant=Variant.OPTIMIZED, faithful_optimized_acceptor=True)
        s = initial_state(cfg)
        s = s._replace(prepare=s.prepare.insert(Prepare(0, 1)))
        succ = acceptor.recv_prepare(cfg, s, 0, Prepare(0, 1))
        assert not succ.promise.contents
        assert succ.acceptors[0].rnd == 1

    def test_accept_emits_learn(self):
        """Accepting records the vote and tells the learner."""
        cfg = config()
        s = initial_state(cfg)
        s = s._replace(accept=s.accept.insert(Accept(0, 1, 1)))
        succ = acceptor.recv_accept(cfg, s, 0, Accept(0, 1, 1))
        assert succ.acceptors[0][1:] == (1, 1, 1)
        assert succ.learn.contents == (Learn(0, 1, 1),)

    def test_stale_accept_is_dropped(self):
        """An accept below rnd is consumed without a learn."""
        cfg = config()
        s = initial_state(cfg)
        s = s.with_acceptor(0, s.acceptors[0]._replace(rnd=2))
        s = s._replace(accept=s.accept.insert(Accept(0, 1, 1)))
        succ = acceptor.recv_accept(cfg, s, 0, Accept(0, 1, 1))
        assert not succ.accept.contents
        assert not succ.learn.contents
        assert succ.acceptors[0].rnd == 2

    def test_accept_of_current_round_fires(self):
        """rnd equal to the accept round still accepts."""
        cfg = config()
        s = initial_state(cfg)
        s = s.with_acceptor(0, s.acceptors[0]._replace(rnd=1))
        s = s._replace(accept=s.accept.insert(Accept(0, 1, 1)))
        assert acceptor.recv_accept(cfg, s, 0, Accept(0, 1, 1)).learn.contents == (
            Learn(0, 1, 1),
        )


class TestLearner:
    def test_first_majority_sets_lastval(self):
        """The first chosen value is remembered."""
        cfg = config()
        s = initial_state(cfg)
        s = s._replace(learn=s.learn.insert(Learn(0, 1, 1)))
        succ = learner.abstract_learn(cfg, s, Learn(0, 1, 1))
        assert succ.learners[0].lastval == 1
        assert not succ.violated

    def test_second_value_is_a_violation(self):
        """A majority for a different value flags the violation."""
        cfg = config()
        s = initial_state(cfg)
        s = s.with_learner(0, s.learners[0]._replace(lastval=1, mcount=(1, 0)))
        s = s._replace(learn=s.learn.insert(Learn(1, 2, 2)))
        assert learner.abstract_learn(cfg, s, Learn(1, 2, 2)).violated

    def test_below_majority_only_counts(self):
        """Under MAJ the learner only counts."""
        cfg = config(maj=2)
        s = initial_state(cfg)
        s = s._replace(learn=s.learn.insert(Learn(0, 1, 1)))
        succ = learner.abstract_learn(cfg, s, Learn(0, 1, 1))
        assert succ.learners[0].mcount == (1, 0)
        assert succ.learners[0].lastval == -1

    def test_concrete_learners_disagree(self):
        """Two learners choosing different values is a violation."""
        cfg = config(learner_mode=LearnerMode.CONCRETE, learners=2)
        s = initial_state(cfg)
        s = s.with_learner(0, s.learners[0]._replace(learned=1, learned_round=1, mcount=(1, 0)))
        s = s._replace(inboxes=(s.inboxes[0], s.inboxes[1].insert(Learn(1, 2, 2))))
        succ = learner.concrete_learn(cfg, s, 1, Learn(1, 2, 2))
        assert succ.learners[1].learned == 2
        assert succ.violated

    def test_concrete_learners_agree(self):
        """Learning the same value twice is fine."""
        cfg = config(learner_mode=LearnerMode.CONCRETE, learners=2)
        s = initial_state(cfg)
        s = s.with_learner(0, s.learners[0]._replace(learned=1, learned_round=1, mcount=(1, 0)))
        s = s._replace(inboxes=(s.inboxes[0], s.inboxes[1].insert(Learn(1, 1, 1))))
        assert not learner.concrete_learn(cfg, s, 1, Learn(1, 1, 1)).violated

    def test_single_majority_is_no_violation(self):
        """One observed majority cannot violate safety."""
        cfg = config(learner_mode=LearnerMode.CONCRETE, learners=2)
        s = initial_state(cfg)
        s = s._replace(inboxes=(s.inboxes[0].insert(Learn(0, 1, 1)), s.inboxes[1]))
        succ = learner.concrete_learn(cfg, s, 0, Learn(0, 1, 1))
        assert succ.learners[0].learned == 1
        assert not succ.violated

    def test_own_earlier_value_is_no_violation(self):
        """A learner never disagrees with itself."""
        cfg = config(learner_mode=LearnerMode.CONCRETE, learners=1)
        s = initial_state(cfg)
        s = s.with_learner(0, s.learners[0]._replace(learned=1, learned_round=1, mcount=(1, 0)))
        s = s._replace(inboxes=(s.inboxes[0].insert(Learn(1, 2, 2)),))
        succ = learner.concrete_learn(cfg, s, 0, Learn(1, 2, 2))
        assert succ.learners[0].learned == 1
        assert not succ.violated


class TestPaxosModel:
    def test_initial_baseline_transitions(self):
        """Initially only the first prepare send of each proposer is enabled."""
        model = PaxosModel(config())
        assert model.enabled_transitions(model.initial_state()) == [
            TransitionId(Role.PROPOSER, 0, Rule.SEND_PREPARE),
            TransitionId(Role.PROPOSER, 1, Rule.SEND_PREPARE),
        ]

    def test_initial_optimized_transitions(self):
        """Optimized models start with one atomic broadcast per proposer."""
        model = PaxosModel(config(variant=Variant.OPTIMIZED))
        rules = [t.rule for t in model.enabled_transitions(model.initial_state())]
        assert rules == [Rule.BROADCAST_PREPARE, Rule.BROADCAST_PREPARE]

    def test_deadlock_state_has_no_transitions(self):
        """All proposers done and empty channels leave nothing enabled."""
        model = PaxosModel(config())
        s = model.initial_state()
        s = s._replace(proposers=tuple(p._replace(phase=Phase.DONE) for p in s.proposers))
        assert model.enabled_transitions(s) == []

    def test_apply_rejects_disabled_transition(self):
        """Applying a disabled transition raises TransitionError."""
        model = PaxosModel(config())
        t = TransitionId(Role.ACCEPTOR, 0, Rule.RECV_PREPARE, Prepare(0, 1))
        with pytest.raises(TransitionError):
            model.apply(model.initial_state(), t)

    def test_apply_is_deterministic(self):
        """Same state and transition give the same successor."""
        model = PaxosModel(config())
        s = model.initial_state()
        t = model.enabled_transitions(s)[0]
        assert model.apply(s, t) == model.apply(s, t)

    def test_round_values_invariant(self):
        """Two values in one round break the invariant."""
        model = PaxosModel(config())
        s = model.initial_state()
        s = s._replace(accept=s.accept.insert_all([Accept(0, 1, 1), Accept(1, 1, 2)]))
        with pytest.raises(InvariantError):
            model.check_round_values(s)

    def test_monotone_rnd(self):
        """An acceptor's rnd never goes back."""
        s = initial_state(config())
        after = s.with_acceptor(0, s.acceptors[0]._replace(rnd=2))
        PaxosModel.check_monotone(s, after)
        with pytest.raises(InvariantError):
            PaxosModel.check_monotone(after, s)

    def test_format_transition(self):
        """Transitions render as actor.rule plus the message."""
        t = TransitionId(Role.ACCEPTOR, 1, Rule.RECV_ACCEPT, Accept(1, 2, 2))
        assert format_transition(t) == (
            "acceptor[1].recv_accept Accept(acceptor_id=1, round=2, value=2)"
        )
