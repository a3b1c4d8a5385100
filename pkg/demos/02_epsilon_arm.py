# %% [markdown]
# Two lexing functions and an epsilon arm
#
# `g` has its own result type `u`, so it cannot share actions with `f`.
# Its second arm matches the empty string and only wins when nothing longer does.

# %%
from pathlib import Path

from hygen.automata import compile_lex_spec, dump_dfa
from hygen.pipeline import generate_lexer, load_lex_spec
from hygen.stream import from_list

text = (Path(__file__).parent / "specs" / "two_functions.lex").read_text()
spec, warnings = load_lex_spec(text)
for w in warnings:
    print(w)
print(dump_dfa(compile_lex_spec(spec)["g"]))

# %%
mod = generate_lexer(text).load()


class Report(mod.Arg):
    def aa(self, info, /):
        return info.follow

    def abc(self, info, /):
        return info.follow

    def bcbd(self, info, /):
        return "bcbd", bytes(info.match).decode()

    def error(self, info, /):
        return "error", bytes(info.match).decode()


lexer = mod.LexerFun(Report())
for s in ["bc", "bd", "bx", ""]:
    print(repr(s), "->", lexer.g(from_list(list(s.encode()))))
