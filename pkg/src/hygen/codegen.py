"""Emit generated lexer and parser modules.

A generated module is self-contained: besides a few standard-library
modules it imports only the stream runtime.  It is parameterized over an
abstract ``Arg`` class whose methods are the spec's actions and whose type
parameters are the spec's result types, so instantiating it is ordinary
code that the type checker sees in full::

    class Actions(lexer_fun.Arg[Stream[int], int]):
        def aa(self, info: lexer_fun.Info[Stream[int], int], /) -> Stream[int]:
            return info.follow
        ...

    lexer = lexer_fun.LexerFun(Actions())

Every identifier the generator invents starts with ``hyg_``.
"""

from __future__ import annotations

import ast
import builtins
import hashlib
import importlib
import re
import sys
import types
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

from . import __version__
from .automata import DFA
from .lr import EOF, Accept, Grammar, LrTables, Reduce, Shift
from .spec import LexSpec, ParseSpec, format_lex_spec, format_parse_spec, nullable

RUNTIME = "hygen.stream"
PRELUDE = frozenset({"__future__", "abc", "dataclasses", "typing"})


class GenerationError(Exception):
    """The tables cannot be turned into a deterministic parser."""


@dataclass(frozen=True)
class ActionInterface:
    kind: str
    """``"lexer"`` or ``"parser"``."""
    abstract_types: tuple[str, ...]
    self_shape: dict[str, str] = field(default_factory=dict)
    """Lexing function name to its result type."""
    lex_actions: dict[str, str] = field(default_factory=dict)
    """Lexer action name to result type; each takes an ``Info``."""
    terminal_type: tuple[tuple[str, Optional[str]], ...] = ()
    parse_actions: dict[str, tuple[tuple[str, ...], str]] = field(default_factory=dict)
    """Parser action name to (argument types in slot order, result type)."""
    error_action: bool = False


@dataclass(frozen=True)
class GeneratedModule:
    module_name: str
    source: str
    interface: ActionInterface
    exports: tuple[tuple[str, str], ...]
    required_runtime: str = RUNTIME

    @property
    def filename(self) -> str:
        return module_filename(self.module_name)

    @property
    def python_name(self) -> str:
        return self.filename[:-3]

    def load(self) -> types.ModuleType:
        """Execute the source as a fresh module registered under :attr:`python_name`."""
        mod = types.ModuleType(self.python_name)
        mod.__file__ = self.filename
        sys.modules[self.python_name] = mod
        exec(compile(self.source, self.filename, "exec"), mod.__dict__)
        return mod


def module_filename(module_name: str) -> str:
    """``CalcLexFun`` -> ``calc_lex_fun.py``."""
    snake = re.sub(r"(?<=[a-z0-9])(?=[A-Z])|(?<=[A-Z])(?=[A-Z][a-z])", "_", module_name).lower()
    return snake + ".py"


def spec_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def lexer_interface(spec: LexSpec) -> ActionInterface:
    return ActionInterface(
        kind="lexer",
        abstract_types=tuple(spec.result_types()),
        self_shape={fn.name: fn.result_type for fn in spec.functions},
        lex_actions=spec.action_types(),
    )


def parser_interface(spec: ParseSpec) -> ActionInterface:
    return ActionInterface(
        kind="parser",
        abstract_types=tuple(spec.abstract_types()),
        terminal_type=tuple((t.name, t.payload_type) for t in spec.terminals),
        parse_actions=spec.actions(),
        error_action=True,
    )


# ---------------------------------------------------------------------------
# Source helpers

def _ints(values: Sequence[int], indent: str = "    ", width: int = 88) -> str:
    """A tuple literal wrapped to ``width`` columns."""
    if not values:
        return "()"
    lines: list[str] = []
    cur = indent
    for v in values:
        piece = f"{v}, "
        if len(cur) + len(piece) > width and cur.strip():
            lines.append(cur.rstrip())
            cur = indent
        cur += piece
    lines.append(cur.rstrip())
    return "(\n" + "\n".join(lines) + "\n)"


def _params(names: Sequence[str]) -> str:
    return ", ".join(names)


def _header(kind: str, name: str, canonical: str) -> list[str]:
    return [
        f"# Generated by hygen {__version__} from spec sha256:{spec_hash(canonical)}; do not edit.",
        f'"""{kind} module {name}.',
        "",
        f"Instantiate :class:`{name}` with a subclass of :class:`Arg`.",
        '"""',
        "",
        "from __future__ import annotations",
        "",
        "import abc as hyg_abc",
        "import dataclasses as hyg_dataclasses",
        "import typing as hyg_typing",
        "",
        f"import {RUNTIME} as hyg_stream",
        "",
    ]


# ---------------------------------------------------------------------------
# Lexers

_LONGEST = '''
def hyg_longest(
    hyg_trans: tuple[int, ...],
    hyg_accept: tuple[int, ...],
    hyg_live: tuple[int, ...],
    hyg_input: hyg_stream.Stream[int],
) -> tuple[int, list[int], hyg_stream.Stream[int]]:
    hyg_state = 0
    hyg_best = hyg_accept[0]
    hyg_best_len = 0
    hyg_best_follow = hyg_input
    hyg_consumed: list[int] = []
    hyg_cur = hyg_input
    while hyg_live[hyg_state]:
        hyg_front = hyg_stream.front(hyg_cur)
        if not isinstance(hyg_front, hyg_stream.Cons):
            break
        hyg_sym = hyg_front.head
        if not 0 <= hyg_sym < hyg_ALPHABET:
            break
        hyg_state = hyg_trans[hyg_state * hyg_ALPHABET + hyg_sym]
        if hyg_state < 0:
            break
        hyg_consumed.append(hyg_sym)
        hyg_cur = hyg_front.tail
        if hyg_accept[hyg_state] >= 0:
            hyg_best = hyg_accept[hyg_state]
            hyg_best_len = len(hyg_consumed)
            hyg_best_follow = hyg_cur
    return hyg_best, hyg_consumed[:hyg_best_len], hyg_best_follow
'''


def render_lexer(spec: LexSpec, dfas: dict[str, DFA]) -> GeneratedModule:
    """Python source for a set-resolved, validated lexer spec and its minimized DFAs."""
    iface = lexer_interface(spec)
    tv = _params(iface.abstract_types)
    name = spec.module_name
    out = _header("Lexer", name, format_lex_spec(spec))
    exported = ["Arg", "Info", "LexError", "Self", name]
    out.append(f"__all__ = {sorted(exported)!r}")
    out.append("")
    for t in iface.abstract_types:
        out.append(f'{t} = hyg_typing.TypeVar("{t}")')
    out += ["", ""]

    out.append("@hyg_dataclasses.dataclass(frozen=True, slots=True)")
    out.append(f"class Self(hyg_typing.Generic[{tv}]):")
    out.append('    """Every lexing function, so that actions can re-enter the lexer."""')
    out.append("")
    for fn_name, rtype in iface.self_shape.items():
        out.append(f"    {fn_name}: hyg_typing.Callable[[hyg_stream.Stream[int]], {rtype}]")
    out += ["", ""]

    out.append("@hyg_dataclasses.dataclass(frozen=True, slots=True)")
    out.append(f"class Info(hyg_typing.Generic[{tv}]):")
    out.append('    """What an action learns about its match."""')
    out.append("")
    out.append("    match: list[int]")
    out.append("    follow: hyg_stream.Stream[int]")
    out.append(f"    self: Self[{tv}]")
    out += ["", ""]

    out.append(f"class Arg(hyg_abc.ABC, hyg_typing.Generic[{tv}]):")
    out.append('    """The actions; subclass this and implement every method."""')
    out.append("")
    out.append("    __slots__ = ()")
    for action, rtype in iface.lex_actions.items():
        out.append("")
        out.append("    @hyg_abc.abstractmethod")
        out.append(f"    def {action}(hyg_arg, hyg_info: Info[{tv}], /) -> {rtype}: ...")
    out += ["", ""]

    out.append("class LexError(Exception):")
    out.append('    """No arm matches at ``stream``."""')
    out.append("")
    out.append("    def __init__(hyg_err, hyg_follow: hyg_stream.Stream[int], /) -> None:")
    out.append('        super().__init__("no arm matches the input")')
    out.append("        hyg_err.stream = hyg_follow")
    out += ["", ""]

    out.append(f"hyg_ALPHABET = {spec.alphabet}")
    for i, fn in enumerate(spec.functions):
        dfa = dfas[fn.name]
        accept = [-1 if a is None else a for a in dfa.accept]
        live = [int(x) for x in dfa.live_out]
        out.append(f"hyg_trans_{i} = {_ints(dfa.trans)}")
        out.append(f"hyg_accept_{i} = {_ints(accept)}")
        out.append(f"hyg_live_{i} = {_ints(live)}")
    out.append("")
    out.append(_LONGEST)
    out.append("")

    slots = ["hyg_self"] + [f"hyg_actions_{i}" for i in range(len(spec.functions))]
    out.append(f"class {name}(hyg_typing.Generic[{tv}]):")
    out.append('    """The lexer, given its actions."""')
    out.append("")
    out.append(f"    __slots__ = {tuple(slots)!r}")
    out.append("")
    out.append(f"    def __init__(hyg_this, hyg_arg: Arg[{tv}], /) -> None:")
    for i, fn in enumerate(spec.functions):
        acts = ", ".join(f"hyg_arg.{arm.action}" for arm in fn.arms)
        out.append(f"        hyg_this.hyg_actions_{i}: tuple["
                   f"hyg_typing.Callable[[Info[{tv}]], {fn.result_type}], ...] = ({acts},)")
    fns = ", ".join(f"hyg_this.{fn.name}" for fn in spec.functions)
    out.append(f"        hyg_this.hyg_self: Self[{tv}] = Self({fns})")
    for i, fn in enumerate(spec.functions):
        out.append("")
        out.append(f"    def {fn.name}(hyg_this, hyg_input: hyg_stream.Stream[int], /) -> {fn.result_type}:")
        out.append("        hyg_arm, hyg_match, hyg_follow = hyg_longest("
                   f"hyg_trans_{i}, hyg_accept_{i}, hyg_live_{i}, hyg_input)")
        if not any(nullable(arm.regex) for arm in fn.arms):
            out.append("        if hyg_arm < 0:")
            out.append("            raise LexError(hyg_input)")
        out.append(f"        return hyg_this.hyg_actions_{i}[hyg_arm](Info(hyg_match, hyg_follow, hyg_this.hyg_self))")
    source = "\n".join(out).rstrip() + "\n"
    exports = tuple((fn.name, f"Stream[int] -> {fn.result_type}") for fn in spec.functions)
    return GeneratedModule(name, source, iface, exports)


# ---------------------------------------------------------------------------
# Parsers

_ENGINE = '''
def hyg_parse(
    hyg_actions: tuple[hyg_typing.Callable[..., object], ...],
    hyg_error: hyg_typing.Callable[[hyg_typing.Any], BaseException],
    hyg_input: hyg_stream.Stream[hyg_typing.Any],
) -> object:
    hyg_states = [0]
    hyg_values: list[object] = []
    hyg_cur = hyg_input
    hyg_front = hyg_stream.front(hyg_cur)
    while True:
        if isinstance(hyg_front, hyg_stream.Cons):
            hyg_code = hyg_CODES[type(hyg_front.head)]
        else:
            hyg_code = 0
        hyg_act = hyg_ACTION[hyg_states[-1] * hyg_NCODES + hyg_code]
        if hyg_act == 0:
            raise hyg_error(hyg_cur)
        if hyg_act > 0:
            assert isinstance(hyg_front, hyg_stream.Cons)
            hyg_states.append(hyg_act - 1)
            hyg_values.append(getattr(hyg_front.head, "value", None))
            hyg_cur = hyg_front.tail
            hyg_front = hyg_stream.front(hyg_cur)
        elif hyg_act == -1:
            return hyg_values[-1]
        else:
            hyg_rule = -hyg_act - 1
            hyg_base = len(hyg_values) - hyg_RULE_LEN[hyg_rule]
            hyg_popped = hyg_values[hyg_base:]
            del hyg_values[hyg_base:]
            del hyg_states[len(hyg_states) - hyg_RULE_LEN[hyg_rule]:]
            hyg_args = [hyg_popped[hyg_i] for hyg_i in hyg_RULE_ARGS[hyg_rule]]
            hyg_values.append(hyg_actions[hyg_rule - 1](*hyg_args))
            hyg_states.append(hyg_GOTO[hyg_states[-1] * hyg_NNTS + hyg_RULE_LHS[hyg_rule]])
'''


def encode_action(act: Optional[object]) -> int:
    """Cell encoding: 0 error, ``s + 1`` shift to s, ``-(r + 1)`` reduce r (r = 0 accepts)."""
    if act is None:
        return 0
    if isinstance(act, Shift):
        return act.state + 1
    if isinstance(act, Reduce):
        return -(act.rule + 1)
    assert isinstance(act, Accept)
    return -1


def render_parser(spec: ParseSpec, grammar: Grammar, tables: LrTables) -> GeneratedModule:
    """Python source for a validated parser spec; refuses tables with unresolved conflicts."""
    if tables.unresolved:
        report = "\n".join(c.describe(grammar) for c in tables.unresolved)
        raise GenerationError(f"{len(tables.unresolved)} unresolved conflict(s):\n{report}")
    iface = parser_interface(spec)
    name = spec.module_name
    tv = _params(iface.abstract_types)
    payload_types = list(dict.fromkeys(p for _, p in iface.terminal_type if p))
    term_t = f"terminal[{_params(payload_types)}]" if payload_types else "terminal"

    out = _header("Parser", name, format_parse_spec(spec))
    exported = ["Arg", "terminal", name] + [t for t, _ in iface.terminal_type]
    out.append(f"__all__ = {sorted(exported)!r}")
    out.append("")
    for t in iface.abstract_types:
        out.append(f'{t} = hyg_typing.TypeVar("{t}")')
    for tname, payload in iface.terminal_type:
        out += ["", ""]
        out.append("@hyg_dataclasses.dataclass(frozen=True, slots=True)")
        if payload:
            out.append(f"class {tname}(hyg_typing.Generic[{payload}]):")
            out.append(f"    value: {payload}")
        else:
            out.append(f"class {tname}:")
            out.append("    pass")
    out += ["", ""]
    members = ", ".join(f"{t}[{p}]" if p else t for t, p in iface.terminal_type)
    out.append(f"terminal = hyg_typing.Union[{members}]" if members else "terminal = hyg_typing.NoReturn")
    out += ["", ""]

    out.append(f"class Arg(hyg_abc.ABC, hyg_typing.Generic[{tv}]):")
    out.append('    """The actions; subclass this and implement every method."""')
    out.append("")
    out.append("    __slots__ = ()")
    for action, (args, result) in iface.parse_actions.items():
        params = "".join(f", hyg_{k}: {a}" for k, a in enumerate(args, start=1))
        out.append("")
        out.append("    @hyg_abc.abstractmethod")
        out.append(f"    def {action}(hyg_arg{params}, /) -> {result}: ...")
    out.append("")
    out.append("    @hyg_abc.abstractmethod")
    out.append(f"    def error(hyg_arg, hyg_rest: hyg_stream.Stream[{term_t}], /) -> BaseException:")
    out.append('        """The exception to raise for a syntax error at ``hyg_rest``."""')
    out += ["", ""]

    terms = list(grammar.terminals)
    codes = [EOF] + [t for t in terms if t != EOF]
    nts = list(grammar.nonterminals)
    cells: list[int] = []
    gotos: list[int] = []
    for s in range(tables.state_count):
        cells += [encode_action(tables.action[s].get(c)) for c in codes]
        gotos += [tables.goto[s].get(nt, -1) for nt in nts]
    rule_args = ", ".join("(" + "".join(f"{i}, " for i, _ in r.value_positions).rstrip(" ") + ")"
                          for r in grammar.rules)
    out.append(f"hyg_CODES: dict[type, int] = {{{', '.join(f'{t}: {codes.index(t)}' for t in codes[1:])}}}")
    out.append(f"hyg_NCODES = {len(codes)}")
    out.append(f"hyg_NNTS = {len(nts)}")
    out.append(f"hyg_ACTION = {_ints(cells)}")
    out.append(f"hyg_GOTO = {_ints(gotos)}")
    out.append(f"hyg_RULE_LHS = {_ints([nts.index(r.lhs) for r in grammar.rules])}")
    out.append(f"hyg_RULE_LEN = {_ints([len(r.rhs) for r in grammar.rules])}")
    out.append(f"hyg_RULE_ARGS: tuple[tuple[int, ...], ...] = ({rule_args},)")
    out.append("")
    out.append(_ENGINE)
    out.append("")

    start_type = spec.nonterminal(grammar.start).result_type  # type: ignore[union-attr]
    acts = ", ".join(f"hyg_arg.{r.action}" for r in grammar.rules[1:])
    out.append(f"class {name}(hyg_typing.Generic[{tv}]):")
    out.append('    """The parser, given its actions."""')
    out.append("")
    out.append('    __slots__ = ("hyg_actions", "hyg_error")')
    out.append("")
    out.append(f"    def __init__(hyg_this, hyg_arg: Arg[{tv}], /) -> None:")
    out.append(f"        hyg_this.hyg_actions: tuple[hyg_typing.Callable[..., object], ...] = ({acts},)")
    out.append(f"        hyg_this.hyg_error: hyg_typing.Callable[[hyg_stream.Stream[{term_t}]], BaseException] = hyg_arg.error")
    out.append("")
    out.append(f"    def parse(hyg_this, hyg_input: hyg_stream.Stream[{term_t}], /) -> {start_type}:")
    out.append(f"        return hyg_typing.cast({start_type}, hyg_parse(hyg_this.hyg_actions, hyg_this.hyg_error, hyg_input))")
    source = "\n".join(out).rstrip() + "\n"
    return GeneratedModule(name, source, iface, (("parse", f"Stream[{term_t}] -> {start_type}"),))


# ---------------------------------------------------------------------------
# Stub instantiations

def render_stub(module: GeneratedModule, default_type: str = "int", default_value: str = "0") -> str:
    """A mechanical instantiation of ``module``: every abstract type is
    ``default_type`` and every action returns ``default_value``."""
    iface = module.interface
    mod = module.python_name
    targs = ", ".join(default_type for _ in iface.abstract_types)
    lines = [f'"""Stub instantiation of {module.module_name}."""', "", "from __future__ import annotations", "",
             "import hygen.stream", "", f"import {mod}", "", ""]
    lines.append(f"class StubArg({mod}.Arg[{targs}]):")
    if iface.kind == "lexer":
        for action in iface.lex_actions:
            lines.append(f"    def {action}(self, info: {mod}.Info[{targs}], /) -> {default_type}:")
            lines.append(f"        return {default_value}")
            lines.append("")
    else:
        for action, (args, _) in iface.parse_actions.items():
            params = "".join(f", x{k}: {default_type}" for k in range(1, len(args) + 1))
            lines.append(f"    def {action}(self{params}, /) -> {default_type}:")
            lines.append(f"        return {default_value}")
            lines.append("")
        payloads = [p for _, p in iface.terminal_type if p]
        term = f"{mod}.terminal[{', '.join(default_type for _ in dict.fromkeys(payloads))}]" if payloads else f"{mod}.terminal"
        lines.append(f"    def error(self, rest: hygen.stream.Stream[{term}], /) -> BaseException:")
        lines.append('        return Exception("syntax error")')
        lines.append("")
    lines.append("")
    lines.append(f"INSTANCE = {mod}.{module.module_name}(StubArg())")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Hygiene

_BUILTINS = frozenset(dir(builtins))


class _Scope:
    def __init__(self, node: ast.AST, parent: Optional[_Scope], is_class: bool = False) -> None:
        self.node = node
        self.parent = parent
        self.is_class = is_class
        self.bound: set[str] = set()


def _bind_target(target: ast.AST, scope: _Scope) -> None:
    for sub in ast.walk(target):
        if isinstance(sub, ast.Name) and isinstance(sub.ctx, (ast.Store, ast.Del)):
            scope.bound.add(sub.id)


def _collect_bindings(scope: _Scope, body: Sequence[ast.AST], modules: dict[str, str], free: list[str]) -> None:
    """Record names bound directly in ``scope`` (not in nested scopes)."""
    stack = list(body)
    while stack:
        node = stack.pop()
        if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef, ast.ClassDef)):
            scope.bound.add(node.name)
            stack.extend(node.decorator_list)
            if not isinstance(node, ast.ClassDef):
                stack.extend(d for d in node.args.defaults + node.args.kw_defaults if d is not None)
            else:
                stack.extend(node.bases)
            continue
        if isinstance(node, (ast.Lambda, ast.ListComp, ast.SetComp, ast.DictComp, ast.GeneratorExp)):
            continue
        if isinstance(node, ast.Import):
            for alias in node.names:
                if alias.name.split(".")[0] not in PRELUDE and alias.name != RUNTIME:
                    free.append(alias.name)
                bound = alias.asname or alias.name.split(".")[0]
                scope.bound.add(bound)
                if alias.asname:
                    modules[bound] = alias.name
            continue
        if isinstance(node, ast.ImportFrom):
            mod = node.module or ""
            allowed = mod in PRELUDE or mod == RUNTIME
            if not allowed:
                free.append(mod)
            for alias in node.names:
                scope.bound.add(alias.asname or alias.name)
                if allowed and mod != "__future__" and not hasattr(importlib.import_module(mod), alias.name):
                    free.append(f"{mod}.{alias.name}")
            continue
        if isinstance(node, ast.Name) and isinstance(node.ctx, (ast.Store, ast.Del)):
            scope.bound.add(node.id)
        if isinstance(node, ast.ExceptHandler) and node.name:
            scope.bound.add(node.name)
        if isinstance(node, (ast.Global, ast.Nonlocal)):
            scope.bound.update(node.names)
        stack.extend(ast.iter_child_nodes(node))


def hygiene_scan(module: GeneratedModule | str) -> list[str]:
    """Identifiers the source uses without defining or importing them.

    Allowed sources are the module itself, the stream runtime, builtins and
    the standard-library prelude (``abc``, ``dataclasses``, ``typing``).
    Attribute lookups on imported modules are checked against the real
    module.  An empty result means the module is hygienic.
    """
    source = module.source if isinstance(module, GeneratedModule) else module
    tree = ast.parse(source)
    free: list[str] = []
    modules: dict[str, str] = {}

    def resolves(name: str, scope: Optional[_Scope], first: bool = True) -> bool:
        while scope is not None:
            if name in scope.bound and (first or not scope.is_class):
                return True
            scope, first = scope.parent, False
        return name in _BUILTINS

    def visit(node: ast.AST, scope: _Scope) -> None:
        if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef, ast.Lambda)):
            args = node.args
            outer: list[Optional[ast.AST]] = [*args.defaults, *args.kw_defaults]
            if not isinstance(node, ast.Lambda):
                outer += [*node.decorator_list, node.returns]
            outer += [a.annotation for a in (*args.posonlyargs, *args.args, *args.kwonlyargs,
                                             args.vararg, args.kwarg) if a is not None]
            for sub in outer:
                if sub is not None:
                    visit(sub, scope)
            inner = _Scope(node, scope)
            for a in (*args.posonlyargs, *args.args, *args.kwonlyargs, args.vararg, args.kwarg):
                if a is not None:
                    inner.bound.add(a.arg)
            body = node.body if isinstance(node.body, list) else [node.body]
            _collect_bindings(inner, body, modules, free)
            for stmt in body:
                visit(stmt, inner)
        elif isinstance(node, ast.ClassDef):
            for sub in (*node.bases, *node.keywords, *node.decorator_list):
                visit(sub, scope)
            inner = _Scope(node, scope, is_class=True)
            _collect_bindings(inner, node.body, modules, free)
            for stmt in node.body:
                visit(stmt, inner)
        elif isinstance(node, (ast.ListComp, ast.SetComp, ast.DictComp, ast.GeneratorExp)):
            inner = _Scope(node, scope)
            for gen in node.generators:
                _bind_target(gen.target, inner)
            for child in ast.iter_child_nodes(node):
                visit(child, inner)
        else:
            check(node, scope)
            for child in ast.iter_child_nodes(node):
                visit(child, scope)

    def check(node: ast.AST, scope: _Scope) -> None:
        if isinstance(node, ast.Name) and isinstance(node.ctx, ast.Load):
            if not resolves(node.id, scope):
                free.append(node.id)
        elif isinstance(node, ast.Attribute) and isinstance(node.value, ast.Name):
            target = modules.get(node.value.id)
            if target is not None and resolves(node.value.id, scope):
                if not hasattr(importlib.import_module(target), node.attr):
                    free.append(f"{node.value.id}.{node.attr}")

    top = _Scope(tree, None)
    _collect_bindings(top, tree.body, modules, free)
    visit(tree, top)
    return list(dict.fromkeys(free))



# ---------------------------------------------------------------------------
# Backends

class Backend(NamedTuple):
    """Everything the driver needs from one target language."""

    name: str
    render_lexer: Callable[[LexSpec, dict[str, DFA]], GeneratedModule]
    render_parser: Callable[[ParseSpec, Grammar, LrTables], GeneratedModule]
    render_stub: Callable[[GeneratedModule], str]
    hygiene_scan: Callable[[GeneratedModule], list[str]]


BACKENDS: dict[str, Backend] = {
    "python": Backend("python", render_lexer, render_parser, render_stub, hygiene_scan),
}
