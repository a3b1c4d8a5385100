# %% [markdown]
# Re-entering the lexer through `self`
#
# Every action receives `info.self`, a record of all lexing functions, so an
# action can keep lexing without the generated code knowing how.  Here the
# result type is a lazy stream of words.

# %%
from pathlib import Path

from hygen.pipeline import generate_lexer
from hygen.stream import Cons, Nil, from_list, front, lazy, to_list

mod = generate_lexer((Path(__file__).parent / "specs" / "words.lex").read_text()).load()


def rest(info):
    # f has no epsilon arm: check for the end before re-entering it
    def go():
        if isinstance(front(info.follow), Nil):
            return Nil()
        return front(info.self.f(info.follow))
    return lazy(go)


class Words(mod.Arg):
    def whitespace(self, info, /):
        return rest(info)

    def word(self, info, /):
        return lazy(lambda: Cons(bytes(info.match).decode(), rest(info)))


words = mod.WordsFun(Words())
print(to_list(words.f(from_list(list(b"the quick  brown\tfox")))))

# %% [markdown]
# Nothing past the first word is lexed until someone asks for it.

# %%
stream = words.f(from_list(list(b"lazy all the way down")))
first = front(stream)
print(first.head, first.tail)
