"""Command-line driver.

::

    hygen check SPEC            validate a lexer or parser spec
    hygen lex SPEC [-o OUT]     generate a lexer module
    hygen yacc SPEC [-o OUT]    generate a parser module
    hygen dump-dfa SPEC         print the minimized DFA of every lexing function
    hygen dump-lr SPEC          print LR item sets, tables and conflicts
    hygen run SPEC --input F    interpret the spec on F and print the action trace

Exit status is 0 on success, 1 when the spec (or, for ``run``, the input)
is rejected, and 2 on usage errors.  Diagnostics go to stderr as
``file:line:col: severity: message``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Optional, Sequence, TextIO, Union

from .automata import compile_lex_spec, dump_dfa, run_longest
from .codegen import BACKENDS, GenerationError, module_filename
from .lr import EOF, Grammar, LrTables, ParseError, Reduce, Token, build_tables, dump_lr, simulate_parse
from .spec import (
    ERROR,
    WARNING,
    Diagnostic,
    LexSpec,
    ParseSpec,
    SpecError,
    format_regex,
    has_errors,
    parse_lex_spec,
    parse_parse_spec,
    resolve_sets,
    spec_kind,
    validate_lex_spec,
    validate_parse_spec,
)
from .stream import Nil, Stream, from_list, front, to_list


class _Usage(Exception):
    pass


class _Reporter:
    def __init__(self, path: str, err: TextIO) -> None:
        self.path = path
        self.err = err

    def emit(self, diags: Sequence[Diagnostic]) -> None:
        for d in diags:
            print(f"{self.path}:{d.line}:{d.col}: {d.severity}: {d.message}", file=self.err)


def _load_lex(text: str, rep: _Reporter) -> Optional[LexSpec]:
    try:
        spec = resolve_sets(parse_lex_spec(text))
    except SpecError as exc:
        rep.emit(exc.diagnostics)
        return None
    diags = validate_lex_spec(spec)
    rep.emit(diags)
    return None if has_errors(diags) else spec


def _load_parse(text: str, rep: _Reporter) -> Optional[ParseSpec]:
    try:
        spec = parse_parse_spec(text)
    except SpecError as exc:
        rep.emit(exc.diagnostics)
        return None
    diags = validate_parse_spec(spec)
    rep.emit(diags)
    return None if has_errors(diags) else spec


def _tables(spec: ParseSpec, rep: _Reporter, yacc_default: bool,
            start: Optional[str] = None) -> tuple[Grammar, LrTables, bool]:
    """Build tables and report conflicts; the flag says whether any are unresolved."""
    g, t = build_tables(spec, yacc_default=yacc_default, start=start)
    positions = [p.pos for nt in spec.nonterminals for p in nt.productions]
    diags = []
    for c in t.conflicts:
        if c.resolution == "precedence":
            continue
        rule = next((a.rule for a in c.contenders if isinstance(a, Reduce)), 0)
        line, col = positions[rule - 1] if rule else (1, 1)
        sev = ERROR if c.resolution == "unresolved" else WARNING
        diags.append(Diagnostic(sev, c.describe(g), line, col))
    rep.emit(diags)
    return g, t, bool(t.unresolved)


def _write(text: str, out: Optional[str], stdout: TextIO) -> None:
    if out is None or out == "-":
        stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _Usage(f"cannot write {out}: {exc.strerror}") from exc


def _backend(args: argparse.Namespace, spec: Union[LexSpec, ParseSpec], rep: _Reporter) -> Any:
    if args.backend not in BACKENDS:
        raise _Usage(f"unknown backend {args.backend!r} (available: {', '.join(sorted(BACKENDS))})")
    if spec.backend != args.backend:
        line, col = spec.positions.get("backend", (1, 1))
        rep.emit([Diagnostic(WARNING, f"spec names backend {spec.backend!r}; generating {args.backend!r}", line, col)])
    return BACKENDS[args.backend]


def _cmd_lex(args: argparse.Namespace, text: str, rep: _Reporter, stdout: TextIO) -> int:
    spec = _load_lex(text, rep)
    if spec is None:
        return 1
    backend = _backend(args, spec, rep)
    module = backend.render_lexer(spec, compile_lex_spec(spec))
    _write(module.source, args.output or module_filename(spec.module_name), stdout)
    return 0


def _cmd_yacc(args: argparse.Namespace, text: str, rep: _Reporter, stdout: TextIO) -> int:
    spec = _load_parse(text, rep)
    if spec is None:
        return 1
    backend = _backend(args, spec, rep)
    g, t, bad = _tables(spec, rep, args.yacc_default)
    if bad:
        return 1
    try:
        module = backend.render_parser(spec, g, t)
    except GenerationError as exc:  # pragma: no cover - _tables already refused
        print(f"{rep.path}: error: {exc}", file=rep.err)
        return 1
    _write(module.source, args.output or module_filename(spec.module_name), stdout)
    return 0


def _cmd_check(args: argparse.Namespace, text: str, rep: _Reporter, stdout: TextIO) -> int:
    if spec_kind(text) == "lex":
        return 0 if _load_lex(text, rep) is not None else 1
    spec = _load_parse(text, rep)
    if spec is None:
        return 1
    return 1 if _tables(spec, rep, args.yacc_default)[2] else 0


def _cmd_dump_dfa(args: argparse.Namespace, text: str, rep: _Reporter, stdout: TextIO) -> int:
    spec = _load_lex(text, rep)
    if spec is None:
        return 1
    dfas = compile_lex_spec(spec)
    chunks = []
    for fn in spec.functions:
        head = [f"function {fn.name} : {fn.result_type}"]
        head += [f"arm {i}: {format_regex(arm.regex)} => {arm.action}" for i, arm in enumerate(fn.arms)]
        chunks.append("\n".join(head) + "\n" + dump_dfa(dfas[fn.name]))
    _write("\n".join(chunks), args.output, stdout)
    return 0


def _cmd_dump_lr(args: argparse.Namespace, text: str, rep: _Reporter, stdout: TextIO) -> int:
    spec = _load_parse(text, rep)
    if spec is None:
        return 1
    g, t, _ = _tables(spec, rep, args.yacc_default)
    _write(dump_lr(t, g), args.output, stdout)
    return 0


def _show(symbols: Sequence[int]) -> str:
    return repr(bytes(symbols).decode("latin-1"))


def _run_lexer(spec: LexSpec, data: bytes, name: Optional[str], out: list[str]) -> int:
    fns = {fn.name: fn for fn in spec.functions}
    fn = fns.get(name) if name else spec.functions[0]
    if fn is None:
        raise _Usage(f"no lexing function {name!r}")
    dfa = compile_lex_spec(spec)[fn.name]
    stream: Stream[int] = from_list(list(data))
    while True:
        m = run_longest(dfa, stream)
        if m is None:
            if isinstance(front(stream), Nil):
                return 0
            out.append(f"error {_show(to_list(stream))}")
            return 1
        out.append(f"{fn.arms[m.arm].action} {_show(m.consumed)}")
        if not m.consumed:
            return 0
        stream = m.follow


def _read_tokens(data: str, spec: ParseSpec) -> list[Token]:
    declared = {t.name for t in spec.terminals}
    tokens = []
    for word in data.split():
        name, _, payload = word.partition("=")
        if name not in declared:
            raise _Usage(f"input mentions undeclared terminal {name!r}")
        tokens.append(Token(name, payload if payload else None))
    return tokens


def _run_parser(spec: ParseSpec, g: Grammar, t: LrTables, data: str, out: list[str]) -> int:
    def reduce(action: str, args: tuple[Any, ...]) -> str:
        rule = next(r for r in g.rules[1:] if r.action == action)
        out.append(f"{action} {rule}")
        return f"{action}({', '.join(map(str, args))})"

    def on_error(rest: Stream[Token]) -> str:
        fr = front(rest)
        return EOF if isinstance(fr, Nil) else fr.head.name

    try:
        value = simulate_parse(t, g, from_list(_read_tokens(data, spec)), reduce, on_error)
    except ParseError as exc:
        out.append(f"error at {exc.value}")
        return 1
    out.append(f"accept {value}")
    return 0


def _cmd_run(args: argparse.Namespace, text: str, rep: _Reporter, stdout: TextIO) -> int:
    try:
        data = Path(args.input).read_bytes()
    except OSError as exc:
        raise _Usage(f"cannot read input {args.input}: {exc.strerror}") from exc
    lines: list[str] = []
    if spec_kind(text) == "lex":
        spec = _load_lex(text, rep)
        if spec is None:
            return 1
        status = _run_lexer(spec, data, args.function, lines)
    else:
        pspec = _load_parse(text, rep)
        if pspec is None:
            return 1
        if args.function and pspec.nonterminal(args.function) is None:
            raise _Usage(f"no nonterminal {args.function!r}")
        g, t, bad = _tables(pspec, rep, args.yacc_default, start=args.function)
        if bad:
            return 1
        status = _run_parser(pspec, g, t, data.decode("utf-8"), lines)
    stdout.write("".join(line + "\n" for line in lines))
    return status


_COMMANDS = {
    "lex": _cmd_lex,
    "yacc": _cmd_yacc,
    "check": _cmd_check,
    "dump-dfa": _cmd_dump_dfa,
    "dump-lr": _cmd_dump_lr,
    "run": _cmd_run,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hygen", description="Generate lexers and parsers as closed, parameterized modules.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "lex": "generate a lexer module",
        "yacc": "generate a parser module",
        "check": "validate a spec",
        "dump-dfa": "print the DFAs of a lexer spec",
        "dump-lr": "print the LR tables of a parser spec",
        "run": "interpret a spec on input data and print the action trace",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("spec", help="specification file")
        if name in ("lex", "yacc", "dump-dfa", "dump-lr"):
            p.add_argument("-o", "--output", help="output file ('-' for stdout)")
        if name in ("lex", "yacc"):
            p.add_argument("--backend", default="python", help="target language (default: python)")
        if name in ("yacc", "check", "dump-lr", "run"):
            p.add_argument("--yacc-default", action="store_true",
                           help="settle remaining conflicts by shift-wins / earliest-rule, with warnings")
        if name == "run":
            p.add_argument("--input", required=True, help="input data file")
            p.add_argument("--function", help="lexing function or start nonterminal to run")
    return ap


def main(argv: Optional[Sequence[str]] = None, stdout: TextIO = sys.stdout, stderr: TextIO = sys.stderr) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    rep = _Reporter(args.spec, stderr)
    try:
        try:
            text = Path(args.spec).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise _Usage(f"cannot read spec {args.spec}: {exc}") from exc
        return _COMMANDS[args.command](args, text, rep, stdout)
    except _Usage as exc:
        print(f"hygen: error: {exc}", file=stderr)
        return 2
