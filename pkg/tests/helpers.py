"""Shared test machinery: the spec corpus, oracles and host type checking."""

from __future__ import annotations

import importlib
import itertools
import os
import random
import subprocess
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

from hygen.codegen import GeneratedModule, render_stub
from hygen.pipeline import generate_lexer, generate_parser

ROOT = Path(__file__).resolve().parent.parent
SPECS = ROOT / "tests" / "specs"
APPS = ROOT / "tests" / "apps"

LEX_SPECS = ["ab.lex", "two_functions.lex", "words.lex", "calc.lex"]
PARSE_SPECS = ["calc.grm", "arith_prec.grm"]

# Generated modules are written in groups; ab.lex and two_functions.lex both name their
# lexer LexerFun, so they cannot share a directory.
GROUPS = {
    "ab": ["ab.lex"],
    "two_functions": ["two_functions.lex"],
    "main": ["words.lex", "calc.lex", "calc.grm", "arith_prec.grm"],
}
APP_OF_GROUP = {"ab": ["printing_app.py"], "two_functions": ["two_functions_app.py"], "main": ["words_app.py", "calc_app.py"]}


def spec_text(name: str) -> str:
    return (SPECS / name).read_text(encoding="utf-8")


def generate(name: str) -> GeneratedModule:
    text = spec_text(name)
    return generate_lexer(text) if name.endswith(".lex") else generate_parser(text)


@dataclass
class GeneratedGroup:
    directory: Path
    modules: list[GeneratedModule]

    @property
    def files(self) -> list[Path]:
        return [self.directory / m.filename for m in self.modules]

    @property
    def stubs(self) -> list[Path]:
        return [self.directory / f"stub_{m.filename}" for m in self.modules]


def write_group(directory: Path, specs: Sequence[str]) -> GeneratedGroup:
    directory.mkdir(parents=True, exist_ok=True)
    mods = [generate(s) for s in specs]
    for m in mods:
        (directory / m.filename).write_text(m.source, encoding="utf-8")
        (directory / f"stub_{m.filename}").write_text(render_stub(m), encoding="utf-8")
    return GeneratedGroup(directory, mods)


_GENERATED_NAMES = {"lexer_fun", "words_fun", "calc_lex_fun", "calc_parse_fun", "arith_parse_fun"}


def import_app(app: str, group: GeneratedGroup):
    """Import ``tests/apps/<app>.py`` against the modules generated in ``group``."""
    for name in list(sys.modules):
        if name in _GENERATED_NAMES or name == app or name.startswith("stub_"):
            del sys.modules[name]
    saved = list(sys.path)
    sys.path[:0] = [str(group.directory), str(APPS)]
    try:
        return importlib.import_module(app)
    finally:
        sys.path[:] = saved


def run_mypy(files: Sequence[Path], search: Sequence[Path], cache: Path) -> tuple[int, list[str]]:
    """Strict host type check; returns the exit status and the diagnostic lines."""
    env = dict(os.environ, MYPYPATH=os.pathsep.join(str(p) for p in [ROOT / "src", *search]))
    cmd = [sys.executable, "-m", "mypy", "--strict", "--no-error-summary", "--hide-error-context",
           "--no-color-output", "--cache-dir", str(cache), *map(str, files)]
    proc = subprocess.run(cmd, capture_output=True, text=True, env=env, cwd=ROOT)
    lines = [line for line in proc.stdout.splitlines() if line.strip()]
    return proc.returncode, lines


# ---------------------------------------------------------------------------
# Calculator oracles

def reference_eval(text: str) -> int:
    """Recursive-descent calculator; stops at the first illegal character."""
    legal = set("0123456789+*() \t\n")
    cut = next((i for i, ch in enumerate(text) if ch not in legal), len(text))
    src = [ch for ch in text[:cut] if ch not in " \t\n"]
    pos = 0

    def peek() -> str:
        return src[pos] if pos < len(src) else ""

    def term() -> int:
        nonlocal pos
        value = factor()
        while peek() == "+":
            pos += 1
            value += factor()
        return value

    def factor() -> int:
        nonlocal pos
        value = atom()
        while peek() == "*":
            pos += 1
            value *= atom()
        return value

    def atom() -> int:
        nonlocal pos
        if peek() == "(":
            pos += 1
            value = term()
            if peek() != ")":
                raise SyntaxError("expected )")
            pos += 1
            return value
        start = pos
        while peek().isdigit():
            pos += 1
        if start == pos:
            raise SyntaxError("expected a number")
        return int("".join(src[start:pos]))

    value = term()
    if pos != len(src):
        raise SyntaxError("trailing input")
    return value


def random_expression(rng: random.Random, depth: int = 4) -> str:
    """A well-formed expression, sometimes with spaces between tokens."""

    def sp() -> str:
        return rng.choice(["", "", "", " ", "  ", "\t", "\n"])

    def go(d: int) -> str:
        r = rng.random()
        if d == 0 or r < 0.3:
            return str(rng.randint(0, 99))
        if r < 0.45:
            return "(" + sp() + go(d - 1) + sp() + ")"
        op = rng.choice("+*")
        return go(d - 1) + sp() + op + sp() + go(d - 1)

    return sp() + go(depth) + sp()


# ---------------------------------------------------------------------------
# Small enumerations

def strings_upto(alphabet: Sequence[int], n: int) -> Iterator[tuple[int, ...]]:
    for k in range(n + 1):
        yield from itertools.product(alphabet, repeat=k)


# ---------------------------------------------------------------------------
# Acceptance reporting

ACCEPTANCE: dict[int, str] = {}


def verdict(number: int, title: str, ok: bool, detail: str = "") -> None:
    """Record and print one criterion line, then fail the test if needed."""
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE[number] = line
    print(line)
    assert ok, line


# ---------------------------------------------------------------------------
# Hypothesis strategies

def regex_strategy(symbols: Sequence[int] = (97, 98, 99), max_leaves: int = 6):
    """Random set-free regexes over ``symbols``."""
    from hypothesis import strategies as st

    from hygen.spec import Alt, Epsilon, Plus, Range, Seq, Star, Sym

    lo, hi = min(symbols), max(symbols)
    leaf = st.one_of(
        st.just(Epsilon()),
        st.sampled_from(list(symbols)).map(Sym),
        st.tuples(st.integers(lo, hi), st.integers(lo, hi)).map(lambda p: Range(min(p), max(p))),
    )

    def extend(inner):
        many = st.lists(inner, min_size=2, max_size=3).map(tuple)
        return st.one_of(many.map(Seq), many.map(Alt), inner.map(Star), inner.map(Plus))

    return st.recursive(leaf, extend, max_leaves=max_leaves)
