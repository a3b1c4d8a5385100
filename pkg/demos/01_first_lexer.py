# %% [markdown]
# A first lexer
#
# The spec below names two actions, `aa` and `abc`, and says nothing about
# what they do.  The generator turns it into a module whose `LexerFun`
# class takes those actions as a constructor argument.

# %%
from pathlib import Path

from hygen.pipeline import generate_lexer
from hygen.stream import Cons, from_list, front

spec = (Path(__file__).parent / "specs" / "ab.lex").read_text()
print(spec)

module = generate_lexer(spec)
lexer_fun = module.load()
print(module.filename, "exports", module.exports)

# %% [markdown]
# The actions are ordinary Python, written here and checked here.  Each one
# prints a message and hands back the rest of the input.

# %%
class Printing(lexer_fun.Arg):
    def aa(self, info, /):
        print("matched aa")
        return info.follow

    def abc(self, info, /):
        print(f"matched ab*c ({len(info.match)} symbols)")
        return info.follow


lexer = lexer_fun.LexerFun(Printing())


def loop(text):
    strm = from_list(list(text.encode()))
    while isinstance(front(strm), Cons):
        strm = lexer.f(strm)


loop("aaabbbc")

# %% [markdown]
# `f` has no epsilon arm, so some inputs match nothing.  The generated module
# raises its own `LexError`, which carries the stream it gave up on.

# %%
try:
    loop("ab")
except lexer_fun.LexError as exc:
    print("lexical error; remaining input:", bytes(exc.stream).decode())
