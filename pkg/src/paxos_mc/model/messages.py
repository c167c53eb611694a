"""Wire values of the four channels.

Messages are plain tuples so that Sorted channels order them lexicographically
over their fields. Every channel carries a single message kind.
"""

import re
from typing import NamedTuple, TypeAlias


class Prepare(NamedTuple):
    acceptor_id: int
    round: int


class Promise(NamedTuple):
    round: int
    vrnd: int
    vval: int


class Accept(NamedTuple):
    acceptor_id: int
    round: int
    value: int


class Learn(NamedTuple):
    acceptor_id: int
    round: int
    value: int


Message: TypeAlias = Prepare | Promise | Accept | Learn

MESSAGE_TYPES: dict[str, type[Message]] = {
    cls.__name__: cls for cls in (Prepare, Promise, Accept, Learn)
}

_MESSAGE_RE = re.compile(r"^(?P<kind>\w+)\((?P<fields>.*)\)$")


class MessagePattern(NamedTuple):
    """Fixes the leading fields of a message (`eval(x)` in a receive); the rest are free."""

    prefix: tuple[int, ...] = ()

    def matches(self, message: Message) -> bool:
        return message[: len(self.prefix)] == self.prefix


ANY = MessagePattern()


def describe(message: Message | None) -> str:
    """`Accept(acceptor_id=0, round=1, value=1)`, or '-' for no message."""
    if message is None:
        return "-"
    fields = ", ".join(f"{name}={value}" for name, value in message._asdict().items())
    return f"{type(message).__name__}({fields})"


def parse_message(text: str) -> Message | None:
    """Inverse of `describe`."""
    text = text.strip()
    if text == "-":
        return None
    match = _MESSAGE_RE.match(text)
    if match is None or match["kind"] not in MESSAGE_TYPES:
        raise ValueError(f"Not a message: {text!r}")

    cls = MESSAGE_TYPES[match["kind"]]
    values: dict[str, int] = {}
    for item in filter(None, (part.strip() for part in match["fields"].split(","))):
        name, _, value = item.partition("=")
        values[name.strip()] = int(value)
    if set(values) != set(cls._fields):
        raise ValueError(f"Fields of {cls.__name__} must be {cls._fields}, got {tuple(values)}")
    return cls(**values)
