"""Same as printing_app, except aa forgets to return the remaining stream."""

from __future__ import annotations

from hygen.stream import Stream

import lexer_fun

Info = lexer_fun.Info[Stream[int]]


class Printing(lexer_fun.Arg[Stream[int]]):
    def aa(self, info: Info, /) -> None:
        print("matched aa")

    def abc(self, info: Info, /) -> Stream[int]:
        print("matched ab*c")
        return info.follow
