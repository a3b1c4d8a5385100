"""Streaming words out of text via the self record."""

from __future__ import annotations

from hygen.stream import Cons, Front, Nil, Stream, from_list, front, lazy, to_list

import words_fun

Words = Stream[str]
Info = words_fun.Info[Words]


def rest(info: Info) -> Words:
    # f has no epsilon arm, so end of input must be checked before re-entering it
    def go() -> Front[str]:
        if isinstance(front(info.follow), Nil):
            return Nil()
        return front(info.self.f(info.follow))
    return lazy(go)


class Actions(words_fun.Arg[Words]):
    def whitespace(self, info: Info, /) -> Words:
        return rest(info)

    def word(self, info: Info, /) -> Words:
        return lazy(lambda: Cons(bytes(info.match).decode("ascii"), rest(info)))


WORDS = words_fun.WordsFun(Actions())


def words(text: str) -> list[str]:
    strm = from_list(list(text.encode("ascii")))
    if isinstance(front(strm), Nil):
        return []
    return to_list(WORDS.f(strm))
