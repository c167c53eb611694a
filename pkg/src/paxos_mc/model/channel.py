"""Bounded channels with Promela `!` / `!!` insertion and `??` / `??<>` reads."""

from bisect import bisect_right
from typing import Iterable, NamedTuple

from paxos_mc.constants import ChannelMode, ReceiveMode
from paxos_mc.model.messages import Message, MessagePattern


class ChannelError(Exception):
    """Raised when a channel operation is used outside its precondition."""

    pass


class Channel(NamedTuple):
    """
    Immutable bounded multiset of messages.

    In Sorted mode the contents are kept nondecreasing, so two channels holding
    the same multiset are equal regardless of insertion order. In Fifo mode new
    messages go to the tail.
    """

    contents: tuple[Message, ...]
    capacity: int
    mode: ChannelMode = ChannelMode.SORTED

    @classmethod
    def empty(cls, capacity: int, mode: ChannelMode = ChannelMode.SORTED) -> "Channel":
        return cls((), capacity, mode)

    def room(self) -> int:
        return self.capacity - len(self.contents)

    def insert(self, message: Message) -> "Channel":
        contents = self.contents
        if len(contents) >= self.capacity:
            raise ChannelError(f"insert into full channel (capacity {self.capacity})")
        if self.mode is ChannelMode.SORTED:
            pos = bisect_right(contents, message)
            return self._replace(contents=contents[:pos] + (message,) + contents[pos:])
        return self._replace(contents=contents + (message,))

    def insert_all(self, messages: Iterable[Message]) -> "Channel":
        channel = self
        for message in messages:
            channel = channel.insert(message)
        return channel

    def remove(self, message: Message) -> "Channel":
        """Remove the first occurrence of `message`."""
        contents = self.contents
        try:
            pos = contents.index(message)
        except ValueError:
            raise ChannelError(f"{message!r} is not in the channel") from None
        return self._replace(contents=contents[:pos] + contents[pos + 1 :])

    def peek(self, pattern: MessagePattern) -> Message | None:
        """First matching message in queue order; the channel is left untouched."""
        for message in self.contents:
            if pattern.matches(message):
                return message
        return None

    def receive(self, pattern: MessagePattern) -> tuple[Message, "Channel"] | None:
        """Destructive first-match read; None when nothing matches."""
        message = self.peek(pattern)
        if message is None:
            return None
        return message, self.remove(message)

    def matching(self, pattern: MessagePattern) -> list[Message]:
        """Distinct matching messages, in queue order."""
        seen: list[Message] = []
        for message in self.contents:
            if pattern.matches(message) and message not in seen:
                seen.append(message)
        return seen

    def choices(self, pattern: MessagePattern, mode: ReceiveMode) -> list[Message]:
        """Messages a receive may take: the first match, or every distinct match."""
        if mode is ReceiveMode.FIRST:
            first = self.peek(pattern)
            return [] if first is None else [first]
        return self.matching(pattern)

    def branches(
        self, pattern: MessagePattern, mode: ReceiveMode
    ) -> list[tuple[Message, "Channel"]]:
        """One (message, remaining channel) branch per choice."""
        return [(message, self.remove(message)) for message in self.choices(pattern, mode)]
