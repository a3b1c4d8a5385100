# %% [markdown]
# The calculator
#
# A generated lexer produces a lazy stream of terminals which a generated
# parser consumes.  The parser module declares the terminal classes itself;
# the lexer actions build them.

# %%
from pathlib import Path

from hygen.pipeline import generate_lexer, generate_parser
from hygen.stream import Cons, Nil, from_list, lazy

specs = Path(__file__).parent / "specs"
L = generate_lexer((specs / "calc.lex").read_text()).load()
P = generate_parser((specs / "calc.grm").read_text()).load()


class Tokens(L.Arg):
    def emit(self, tok, info):
        return Cons(tok, lazy(lambda: info.self.lex(info.follow)))

    def number(self, info, /):
        return self.emit(P.NUMBER(int(bytes(info.match))), info)

    def plus(self, info, /):
        return self.emit(P.PLUS(), info)

    def times(self, info, /):
        return self.emit(P.TIMES(), info)

    def lparen(self, info, /):
        return self.emit(P.LPAREN(), info)

    def rparen(self, info, /):
        return self.emit(P.RPAREN(), info)

    def whitespace(self, info, /):
        return info.self.lex(info.follow)

    def eof(self, info, /):
        return Nil()


class Evaluate(P.Arg):
    def number_atom(self, x, /):
        return x

    def paren_atom(self, x, /):
        return x

    def atom_factor(self, x, /):
        return x

    def times_factor(self, x, y, /):
        return x * y

    def factor_term(self, x, /):
        return x

    def plus_term(self, x, y, /):
        return x + y

    def error(self, rest, /):
        return SyntaxError("syntax error")


lexer = L.CalcLexFun(Tokens())
parser = P.CalcParseFun(Evaluate())


def calc(text):
    strm = from_list(list(text.encode()))
    return parser.parse(lazy(lambda: lexer.lex(strm)))


for e in ["1+2*3", "(1+2)*3", "2*3+4*5", "1+2#..."]:
    print(f"{e:10} = {calc(e)}")

# %% [markdown]
# The epsilon arm maps the first illegal character to end of input, so
# `1+2#...` evaluates to 3.  A genuinely malformed expression reaches the
# error action.

# %%
try:
    calc("1+*2")
except SyntaxError as exc:
    print("rejected:", exc)
