"""The calculator: one lexer feeding either of two parsers.

``suspend`` stands in for :func:`hygen.stream.lazy` so that tests can count
how often each cell's producer runs.
"""

from __future__ import annotations

from typing import Callable, Generic, Protocol, TypeVar

from hygen.stream import Cons, Front, Nil, Stream, lazy

import arith_parse_fun as A
import calc_lex_fun as L
import calc_parse_fun as P

T = TypeVar("T")


class Suspend(Protocol):
    def __call__(self, producer: Callable[[], Front[T]], /) -> Stream[T]: ...


class TokenActions(L.Arg[Front[T]], Generic[T]):
    """Lexer actions building a lazy token stream of type ``T``."""

    def __init__(self, suspend: Suspend, number: Callable[[int], T],
                 plus: T, times: T, lparen: T, rparen: T) -> None:
        self.suspend = suspend
        self.make_number = number
        self.tokens = {"plus": plus, "times": times, "lparen": lparen, "rparen": rparen}

    def emit(self, tok: T, info: L.Info[Front[T]]) -> Front[T]:
        return Cons(tok, self.suspend(lambda: info.self.lex(info.follow)))

    def number(self, info: L.Info[Front[T]], /) -> Front[T]:
        return self.emit(self.make_number(int(bytes(info.match))), info)

    def plus(self, info: L.Info[Front[T]], /) -> Front[T]:
        return self.emit(self.tokens["plus"], info)

    def times(self, info: L.Info[Front[T]], /) -> Front[T]:
        return self.emit(self.tokens["times"], info)

    def lparen(self, info: L.Info[Front[T]], /) -> Front[T]:
        return self.emit(self.tokens["lparen"], info)

    def rparen(self, info: L.Info[Front[T]], /) -> Front[T]:
        return self.emit(self.tokens["rparen"], info)

    def whitespace(self, info: L.Info[Front[T]], /) -> Front[T]:
        return info.self.lex(info.follow)

    def eof(self, info: L.Info[Front[T]], /) -> Front[T]:
        return Nil()


class CalcActions(P.Arg[int]):
    def number_atom(self, x: int, /) -> int:
        return x

    def paren_atom(self, x: int, /) -> int:
        return x

    def atom_factor(self, x: int, /) -> int:
        return x

    def times_factor(self, x: int, y: int, /) -> int:
        return x * y

    def factor_term(self, x: int, /) -> int:
        return x

    def plus_term(self, x: int, y: int, /) -> int:
        return x + y

    def error(self, rest: Stream[P.terminal[int]], /) -> BaseException:
        return SyntaxError("syntax error")


class ArithActions(A.Arg[int]):
    def number_term(self, x: int, /) -> int:
        return x

    def plus_term(self, x: int, y: int, /) -> int:
        return x + y

    def times_term(self, x: int, y: int, /) -> int:
        return x * y

    def paren_term(self, x: int, /) -> int:
        return x

    def error(self, rest: Stream[A.terminal[int]], /) -> BaseException:
        return SyntaxError("syntax error")


def symbols(text: str, suspend: Suspend = lazy) -> Stream[int]:
    """Stream of the bytes of ``text`` built with ``suspend``."""
    data = text.encode("ascii")

    def at(i: int) -> Stream[int]:
        if i == len(data):
            return suspend(Nil)
        return suspend(lambda: Cons(data[i], at(i + 1)))

    return at(0)


def make_calc(suspend: Suspend = lazy) -> Callable[[str], int]:
    lexer = L.CalcLexFun(TokenActions[P.terminal[int]](
        suspend, P.NUMBER, P.PLUS(), P.TIMES(), P.LPAREN(), P.RPAREN()))
    parser = P.CalcParseFun(CalcActions())

    def calc(text: str) -> int:
        strm = symbols(text, suspend)
        return parser.parse(suspend(lambda: lexer.lex(strm)))

    return calc


def make_arith(suspend: Suspend = lazy) -> Callable[[str], int]:
    lexer = L.CalcLexFun(TokenActions[A.terminal[int]](
        suspend, A.NUMBER, A.PLUS(), A.TIMES(), A.LPAREN(), A.RPAREN()))
    parser = A.ArithParseFun(ArithActions())

    def calc(text: str) -> int:
        strm = symbols(text, suspend)
        return parser.parse(suspend(lambda: lexer.lex(strm)))

    return calc


calc = make_calc()
