"""Pure transition semantics of single-decree Paxos: messages, channels, roles."""

from .channel import Channel, ChannelError
from .messages import ANY, Accept, Learn, Message, MessagePattern, Prepare, Promise
from .state import (
    AcceptorState,
    GlobalState,
    LearnerState,
    Phase,
    ProposerState,
    Role,
    Rule,
    TransitionId,
    initial_state,
)
from .transitions import InvariantError, PaxosModel, TransitionError, format_transition

__all__ = [
    "ANY",
    "Accept",
    "AcceptorState",
    "Channel",
    "ChannelError",
    "GlobalState",
    "InvariantError",
    "Learn",
    "LearnerState",
    "Message",
    "MessagePattern",
    "PaxosModel",
    "Phase",
    "Prepare",
    "Promise",
    "ProposerState",
    "Role",
    "Rule",
    "TransitionError",
    "TransitionId",
    "format_transition",
    "initial_state",
]
