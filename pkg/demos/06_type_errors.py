# %% [markdown]
# Type errors land in your file
#
# Actions live in user code, so the type checker judges them where they are
# written.  This demo writes the generated lexer next to an instantiation
# whose `aa` forgets to return the rest of the stream, then runs mypy.

# %%
import os
import subprocess
import sys
import tempfile
from pathlib import Path

import hygen
from hygen.pipeline import generate_lexer

module = generate_lexer((Path(__file__).parent / "specs" / "ab.lex").read_text())

user = '''\
from hygen.stream import Stream

import lexer_fun

Info = lexer_fun.Info[Stream[int]]


class Printing(lexer_fun.Arg[Stream[int]]):
    def aa(self, info: Info, /) -> None:
        print("matched aa")

    def abc(self, info: Info, /) -> Stream[int]:
        print("matched ab*c")
        return info.follow
'''

with tempfile.TemporaryDirectory() as tmp:
    Path(tmp, module.filename).write_text(module.source)
    Path(tmp, "example.py").write_text(user)
    env = dict(os.environ, MYPYPATH=str(Path(hygen.__file__).parent.parent))
    proc = subprocess.run([sys.executable, "-m", "mypy", "--strict", "example.py", module.filename],
                          cwd=tmp, capture_output=True, text=True, env=env)
    print(proc.stdout)
