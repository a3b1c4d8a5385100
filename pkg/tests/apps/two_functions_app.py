"""Two lexing functions with distinct result types."""

from __future__ import annotations

from hygen.stream import Stream

import lexer_fun

# what g reports: the action, the matched symbols and the rest of the input
Report = tuple[str, list[int], Stream[int]]
Info = lexer_fun.Info[Stream[int], Report]


class Actions(lexer_fun.Arg[Stream[int], Report]):
    def aa(self, info: Info, /) -> Stream[int]:
        return info.follow

    def abc(self, info: Info, /) -> Stream[int]:
        return info.follow

    def bcbd(self, info: Info, /) -> Report:
        return ("bcbd", info.match, info.follow)

    def error(self, info: Info, /) -> Report:
        return ("error", info.match, info.follow)


LEXER = lexer_fun.LexerFun(Actions())
