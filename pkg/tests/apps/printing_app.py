"""The message-printing lexer: every action logs and returns the rest of the input."""

from __future__ import annotations

from hygen.stream import Cons, Stream, front

import lexer_fun

Info = lexer_fun.Info[Stream[int]]


class Printing(lexer_fun.Arg[Stream[int]]):
    def __init__(self, log: list[tuple[str, int]]) -> None:
        self.log = log

    def aa(self, info: Info, /) -> Stream[int]:
        self.log.append(("aa", len(info.match)))
        return info.follow

    def abc(self, info: Info, /) -> Stream[int]:
        self.log.append(("abc", len(info.match)))
        return info.follow


def loop(strm: Stream[int], log: list[tuple[str, int]]) -> None:
    lexer = lexer_fun.LexerFun(Printing(log))
    while isinstance(front(strm), Cons):
        strm = lexer.f(strm)
