"""Lazy, memoizing streams.

A stream is a suspended computation of its *front*: either :class:`Nil` or a
:class:`Cons` cell holding a head element and the tail stream.  Forcing a
stream with :func:`front` runs its producer at most once; every later call
returns the same front (or re-raises the same exception, when the producer
failed).

Generated lexers and parsers depend on this module and nothing else outside
the standard library.

Forcing the same cell concurrently from several threads is not supported.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Generic, Iterator, Sequence, TypeVar, Union

__all__ = ["Nil", "Cons", "Front", "Stream", "lazy", "front", "from_list", "to_list", "iterate"]

A = TypeVar("A")


@dataclass(frozen=True, slots=True)
class Nil:
    """The empty front."""


@dataclass(frozen=True, slots=True)
class Cons(Generic[A]):
    head: A
    tail: Stream[A]


Front = Union[Nil, Cons[A]]

_PENDING = 0
_RUNNING = 1
_DONE = 2
_FAILED = 3


class Stream(Generic[A]):
    __slots__ = ("_state", "_payload")

    def __init__(self, producer: Callable[[], Front[A]]) -> None:
        self._state = _PENDING
        self._payload: object = producer

    def __repr__(self) -> str:
        if self._state == _DONE:
            return f"Stream({self._payload!r})"
        return "Stream(<failed>)" if self._state == _FAILED else "Stream(<unforced>)"

    def __iter__(self) -> Iterator[A]:
        return iterate(self)


def lazy(producer: Callable[[], Front[A]]) -> Stream[A]:
    """Suspend ``producer``; it runs on the first :func:`front` call."""
    return Stream(producer)


def front(stream: Stream[A]) -> Front[A]:
    state = stream._state
    if state == _DONE:
        return stream._payload  # type: ignore[return-value]
    if state == _FAILED:
        raise stream._payload  # type: ignore[misc]
    if state == _RUNNING:
        raise RuntimeError("stream forced from inside its own producer")
    producer = stream._payload
    stream._state = _RUNNING
    try:
        result = producer()  # type: ignore[operator]
    except BaseException as exc:
        stream._state, stream._payload = _FAILED, exc
        raise
    stream._state, stream._payload = _DONE, result
    return result


def from_list(xs: Sequence[A]) -> Stream[A]:
    """Stream of exactly the elements of ``xs``, in order."""
    items = tuple(xs)

    def at(i: int) -> Stream[A]:
        if i == len(items):
            return lazy(Nil)
        return lazy(lambda: Cons(items[i], at(i + 1)))

    return at(0)


def iterate(stream: Stream[A]) -> Iterator[A]:
    while True:
        fr = front(stream)
        if isinstance(fr, Nil):
            return
        yield fr.head
        stream = fr.tail


def to_list(stream: Stream[A]) -> list[A]:
    """Force the whole stream; it must be finite."""
    return list(iterate(stream))
