import pytest

from paxos_mc.constants import ChannelMode, LearnerMode, Variant
from paxos_mc.encoding import EncodingError, decode, encode
from paxos_mc.model import PaxosModel, initial_state
from paxos_mc.model.messages import Prepare
from paxos_mc.schema import ProtocolConfig


def reachable(cfg: ProtocolConfig, limit: int = 3000):
    model = PaxosModel(cfg)
    seen = {encode(model.initial_state()): model.initial_state()}
    frontier = [model.initial_state()]
    while frontier and len(seen) < limit:
        state = frontier.pop()
        for _, succ in model.successors(state):
            key = encode(succ)
            if key not in seen:
                seen[key] = succ
                frontier.append(succ)
    return seen


def test_build_order_does_not_change_encoding():
    """Sorted channels built in different orders encode the same."""
    s = initial_state(ProtocolConfig(proposers=2, acceptors=2))
    a = s._replace(prepare=s.prepare.insert(Prepare(1, 1)).insert(Prepare(0, 2)))
    b = s._replace(prepare=s.prepare.insert(Prepare(0, 2)).insert(Prepare(1, 1)))
    assert encode(a) == encode(b)


def test_fifo_order_is_kept():
    """FIFO channels keep the arrival order in the encoding."""
    s = initial_state(ProtocolConfig(proposers=2, acceptors=2, channel_mode=ChannelMode.FIFO))
    a = s._replace(prepare=s.prepare.insert(Prepare(1, 1)).insert(Prepare(0, 2)))
    b = s._replace(prepare=s.prepare.insert(Prepare(0, 2)).insert(Prepare(1, 1)))
    assert encode(a) != encode(b)


def test_vval_changes_encoding():
    """States differing in one acceptor field encode differently."""
    s = initial_state(ProtocolConfig(proposers=2, acceptors=3))
    t = s.with_acceptor(1, s.acceptors[1]._replace(vval=2))
    assert encode(s) != encode(t)


@pytest.mark.parametrize(
    "cfg",
    [
        ProtocolConfig(proposers=2, acceptors=3, maj=2),
        ProtocolConfig(proposers=2, acceptors=2, maj=1, variant=Variant.OPTIMIZED),
        ProtocolConfig(
            proposers=2, acceptors=2, maj=1, learner_mode=LearnerMode.CONCRETE, learners=2
        ),
    ],
)
def test_decode_inverts_encode_on_reachable_states(cfg):
    """Every reachable state decodes back to itself."""
    states = reachable(cfg)
    assert len(states) > 10
    for key, state in states.items():
        assert decode(key, cfg) == state


def test_truncated_encoding_rejected():
    """Missing bytes are an EncodingError."""
    cfg = ProtocolConfig(proposers=2, acceptors=2)
    data = encode(initial_state(cfg))
    with pytest.raises(EncodingError):
        decode(data[:-1], cfg)


def test_trailing_bytes_rejected():
    """Extra bytes are an EncodingError."""
    cfg = ProtocolConfig(proposers=2, acceptors=2)
    with pytest.raises(EncodingError):
        decode(encode(initial_state(cfg)) + b"\x00", cfg)


def test_bad_channel_length_rejected():
    """A channel length above capacity is an EncodingError."""
    cfg = ProtocolConfig(proposers=2, acceptors=2)
    data = bytearray(encode(initial_state(cfg)))
    data[0] = 100
    with pytest.raises(EncodingError):
        decode(bytes(data), cfg)
