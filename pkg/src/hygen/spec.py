"""Reading and checking lexer and parser specification files.

Both file kinds share one lexical layer: identifiers, integers, ``'c``
character literals, parentheses, ``=>``, ``=``, ``:`` and non-nesting
``/* ... */`` comments.  A lexer spec looks like::

    sml
    name LexerFun
    alphabet 128

    set letter = (range 'a 'z)

    function f : t =
       (seq 'a 'a) => aa
       (seq 'a (* 'b) 'c) => abc

and a parser spec like::

    sml
    name ArithParseFun

    terminal NUMBER of t
    terminal PLUS
    left PLUS

    nonterminal Term : t =
      1:NUMBER => number_term
      1:Term PLUS 2:Term => plus_term

    start Term

Parsing failures raise :class:`SpecError`; the ``validate_*`` functions
return their findings as a list of :class:`Diagnostic` instead.
"""

from __future__ import annotations

import builtins
import enum
import keyword
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Optional, Union

Pos = tuple[int, int]

ERROR = "error"
WARNING = "warning"

RESERVED_PREFIX = "hyg_"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.severity}: {self.message}"


class SpecError(Exception):
    """A specification could not be read; ``diagnostics`` says why."""

    def __init__(self, diagnostics: list[Diagnostic]) -> None:
        super().__init__("; ".join(map(str, diagnostics)))
        self.diagnostics = diagnostics


def _error(message: str, pos: Pos) -> Diagnostic:
    return Diagnostic(ERROR, message, pos[0], pos[1])


def _warning(message: str, pos: Pos) -> Diagnostic:
    return Diagnostic(WARNING, message, pos[0], pos[1])


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.severity == ERROR for d in diagnostics)


# ---------------------------------------------------------------------------
# Regular expressions

@dataclass(frozen=True)
class Epsilon:
    pass


@dataclass(frozen=True)
class Sym:
    code: int
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Range:
    lo: int
    hi: int
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class SetRef:
    name: str
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class CharSet:
    """A resolved named set: any one symbol from ``members``."""

    members: frozenset[int]


@dataclass(frozen=True)
class Seq:
    children: tuple[Regex, ...]


@dataclass(frozen=True)
class Alt:
    children: tuple[Regex, ...]


@dataclass(frozen=True)
class Star:
    child: Regex


@dataclass(frozen=True)
class Plus:
    child: Regex


Regex = Union[Epsilon, Sym, Range, SetRef, CharSet, Seq, Alt, Star, Plus]


def nullable(re_: Regex) -> bool:
    """Does ``re_`` match the empty string?"""
    if isinstance(re_, (Epsilon, Star)):
        return True
    if isinstance(re_, Plus):
        return nullable(re_.child)
    if isinstance(re_, Seq):
        return all(nullable(c) for c in re_.children)
    if isinstance(re_, Alt):
        return any(nullable(c) for c in re_.children)
    return False


def iter_leaves(re_: Regex) -> Iterator[Regex]:
    if isinstance(re_, (Seq, Alt)):
        for child in re_.children:
            yield from iter_leaves(child)
    elif isinstance(re_, (Star, Plus)):
        yield from iter_leaves(re_.child)
    else:
        yield re_


# ---------------------------------------------------------------------------
# Specification data

@dataclass(frozen=True)
class Arm:
    regex: Regex
    action: str
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class LexFn:
    name: str
    result_type: str
    arms: tuple[Arm, ...]
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class LexSpec:
    backend: str
    module_name: str
    alphabet: int
    sets: dict[str, Regex]
    functions: tuple[LexFn, ...]
    positions: dict[str, Pos] = field(default_factory=dict, compare=False, repr=False)

    def action_types(self) -> dict[str, str]:
        """Each action name mapped to the result type of its first use."""
        out: dict[str, str] = {}
        for fn in self.functions:
            for arm in fn.arms:
                out.setdefault(arm.action, fn.result_type)
        return out

    def result_types(self) -> list[str]:
        return list(dict.fromkeys(fn.result_type for fn in self.functions))


class Assoc(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    NONASSOC = "nonassoc"


@dataclass(frozen=True)
class Terminal:
    name: str
    payload_type: Optional[str] = None
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class RhsItem:
    symbol: str
    position: Optional[int] = None
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Production:
    rhs: tuple[RhsItem, ...]
    action: str
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Nonterminal:
    name: str
    result_type: str
    productions: tuple[Production, ...]
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class PrecDecl:
    assoc: Assoc
    terminals: tuple[str, ...]
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class ParseSpec:
    backend: str
    module_name: str
    terminals: tuple[Terminal, ...]
    nonterminals: tuple[Nonterminal, ...]
    start: str
    precedences: tuple[PrecDecl, ...] = ()
    positions: dict[str, Pos] = field(default_factory=dict, compare=False, repr=False)

    def terminal(self, name: str) -> Optional[Terminal]:
        for t in self.terminals:
            if t.name == name:
                return t
        return None

    def nonterminal(self, name: str) -> Optional[Nonterminal]:
        for nt in self.nonterminals:
            if nt.name == name:
                return nt
        return None

    def value_type(self, symbol: str) -> Optional[str]:
        """Type of the value a grammar symbol carries, if any."""
        t = self.terminal(symbol)
        if t is not None:
            return t.payload_type
        nt = self.nonterminal(symbol)
        return nt.result_type if nt is not None else None

    def signature(self, nt: Nonterminal, prod: Production) -> tuple[tuple[str, ...], str]:
        """Argument types (in slot order) and result type of a production's action."""
        numbered = sorted((item.position, item.symbol) for item in prod.rhs if item.position is not None)
        return tuple(self.value_type(sym) or "?" for _, sym in numbered), nt.result_type

    def abstract_types(self) -> list[str]:
        """Payload types in terminal order, then nonterminal result types."""
        names = [t.payload_type for t in self.terminals if t.payload_type]
        names += [nt.result_type for nt in self.nonterminals]
        return list(dict.fromkeys(names))

    def actions(self) -> dict[str, tuple[tuple[str, ...], str]]:
        out: dict[str, tuple[tuple[str, ...], str]] = {}
        for nt in self.nonterminals:
            for prod in nt.productions:
                out.setdefault(prod.action, self.signature(nt, prod))
        return out


# ---------------------------------------------------------------------------
# Tokens

@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int

    @property
    def pos(self) -> Pos:
        return (self.line, self.col)


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n\f\v]+)
  | (?P<comment>/\*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<int>[0-9]+)
  | (?P<char>')
  | (?P<arrow>=>)
  | (?P<punct>[()=:*+])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    """Split spec source into tokens, ending with an ``eof`` token."""
    tokens: list[Token] = []
    i, line, line_start = 0, 1, 0

    def here(at: int) -> Pos:
        return (line, at - line_start + 1)

    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise SpecError([_error(f"unexpected character {text[i]!r}", here(i))])
        kind = m.lastgroup
        assert kind is not None
        if kind == "comment":
            end = text.find("*/", i + 2)
            if end < 0:
                raise SpecError([_error("unterminated comment", here(i))])
            stop = end + 2
        elif kind == "char":
            if i + 1 >= len(text) or not text[i + 1].isprintable() or text[i + 1].isspace():
                raise SpecError([_error("character literal needs a printable non-space character", here(i))])
            tokens.append(Token("char", text[i + 1], *here(i)))
            stop = i + 2
        else:
            stop = m.end()
            if kind != "ws":
                tokens.append(Token(kind, m.group(), *here(i)))
        for k in range(i, stop):
            if text[k] == "\n":
                line, line_start = line + 1, k + 1
        i = stop
    tokens.append(Token("eof", "", *here(i)))
    return tokens


class _Cursor:
    def __init__(self, tokens: list[Token]) -> None:
        self.tokens = tokens
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def at(self, offset: int) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def is_word(self, *words: str) -> bool:
        return self.peek.kind == "ident" and self.peek.text in words

    def expect(self, kind: str, what: str, text: Optional[str] = None) -> Token:
        tok = self.peek
        if tok.kind != kind or (text is not None and tok.text != text):
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise SpecError([_error(f"expected {what}, found {found}", tok.pos)])
        return self.next()


def _header(cur: _Cursor, keywords: frozenset[str]) -> tuple[str, Pos]:
    tok = cur.peek
    if tok.kind != "ident" or tok.text in keywords:
        raise SpecError([_error("missing backend line", tok.pos)])
    cur.next()
    return tok.text, tok.pos


# ---------------------------------------------------------------------------
# Lexer specs

LEX_KEYWORDS = frozenset({"name", "alphabet", "set", "function", "epsilon"})


def _symbol(tok: Token) -> int:
    return ord(tok.text) if tok.kind == "char" else int(tok.text)


def _parse_regex(cur: _Cursor) -> Regex:
    tok = cur.peek
    if tok.kind in ("int", "char"):
        cur.next()
        return Sym(_symbol(tok), tok.pos)
    if tok.kind == "ident":
        cur.next()
        if tok.text == "epsilon":
            return Epsilon()
        return SetRef(tok.text, tok.pos)
    if tok.kind != "(":
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise SpecError([_error(f"malformed S-expression: expected a regular expression, found {found}", tok.pos)])
    cur.next()
    op = cur.next()
    if op.kind == "ident" and op.text == "range":
        lo, hi = cur.peek, cur.at(1)
        if lo.kind not in ("int", "char") or hi.kind not in ("int", "char"):
            raise SpecError([_error("malformed S-expression: range takes two symbols", op.pos)])
        cur.next(), cur.next()
        if _symbol(lo) > _symbol(hi):
            raise SpecError([_error("malformed S-expression: range bounds out of order", lo.pos)])
        cur.expect(")", "')' closing range")
        return Range(_symbol(lo), _symbol(hi), lo.pos)
    if op.text not in ("seq", "or", "*", "+") or op.kind not in ("ident", "punct"):
        raise SpecError([_error(f"malformed S-expression: unknown operator {op.text!r}", op.pos)])
    children: list[Regex] = []
    while cur.peek.kind != ")":
        if cur.peek.kind == "eof":
            raise SpecError([_error("malformed S-expression: missing ')'", tok.pos)])
        children.append(_parse_regex(cur))
    cur.next()
    if op.text in ("*", "+"):
        if len(children) != 1:
            raise SpecError([_error(f"malformed S-expression: ({op.text} ...) takes one argument", op.pos)])
        return Star(children[0]) if op.text == "*" else Plus(children[0])
    if not children:
        raise SpecError([_error(f"malformed S-expression: ({op.text}) needs an argument", op.pos)])
    return Seq(tuple(children)) if op.text == "seq" else Alt(tuple(children))


def _retag(tokens: list[Token]) -> list[Token]:
    # the shared tokenizer reports "(", ")", "=" etc. as punct
    return [Token(t.text, t.text, t.line, t.col) if t.kind == "punct" and t.text in "()=:" else t for t in tokens]


def parse_lex_spec(text: str) -> LexSpec:
    """Read a lexer specification.  Named sets are left unresolved."""
    cur = _Cursor(_retag(tokenize(text)))
    backend, backend_pos = _header(cur, LEX_KEYWORDS)
    positions: dict[str, Pos] = {"backend": backend_pos}
    module_name: Optional[str] = None
    alphabet: Optional[int] = None
    sets: dict[str, Regex] = {}
    functions: list[LexFn] = []
    problems: list[Diagnostic] = []

    while cur.peek.kind != "eof":
        tok = cur.peek
        if tok.kind != "ident":
            raise SpecError([_error(f"expected a directive, found {tok.text!r}", tok.pos)])
        cur.next()
        if tok.text == "name":
            if module_name is not None:
                problems.append(_error("duplicate name directive", tok.pos))
            module_name = cur.expect("ident", "module name").text
            positions["name"] = tok.pos
        elif tok.text == "alphabet":
            num = cur.expect("int", "alphabet size")
            if alphabet is not None:
                problems.append(_error("duplicate alphabet directive", tok.pos))
            alphabet = int(num.text)
            positions["alphabet"] = tok.pos
            if not 1 <= alphabet <= 256:
                raise SpecError([_error(f"alphabet {alphabet} outside 1..256", num.pos)])
        elif tok.text == "set":
            name = cur.expect("ident", "set name")
            if name.text in LEX_KEYWORDS:
                raise SpecError([_error(f"{name.text!r} is reserved and cannot name a set", name.pos)])
            cur.expect("=", "'='")
            body = _parse_regex(cur)
            if name.text in sets:
                problems.append(_error(f"duplicate set {name.text!r}", name.pos))
            else:
                sets[name.text] = body
                positions["set " + name.text] = name.pos
        elif tok.text == "function":
            name = cur.expect("ident", "function name")
            cur.expect(":", "':'")
            rtype = cur.expect("ident", "result type")
            cur.expect("=", "'='")
            arms: list[Arm] = []
            while cur.peek.kind != "eof" and not cur.is_word("set", "function", "name", "alphabet"):
                start = cur.peek.pos
                regex = _parse_regex(cur)
                cur.expect("arrow", "'=>'")
                action = cur.expect("ident", "action name")
                arms.append(Arm(regex, action.text, start))
            functions.append(LexFn(name.text, rtype.text, tuple(arms), name.pos))
        else:
            raise SpecError([_error(f"unknown directive {tok.text!r}", tok.pos)])

    end = cur.peek.pos
    if module_name is None:
        problems.append(_error("missing name directive", end))
    if alphabet is None:
        problems.append(_error("missing alphabet directive", end))
    if problems:
        raise SpecError(problems)
    assert module_name is not None and alphabet is not None
    return LexSpec(backend, module_name, alphabet, sets, tuple(functions), positions)


def _class_members(re_: Regex, resolved: dict[str, CharSet]) -> Optional[frozenset[int]]:
    if isinstance(re_, Sym):
        return frozenset((re_.code,))
    if isinstance(re_, Range):
        return frozenset(range(re_.lo, re_.hi + 1))
    if isinstance(re_, CharSet):
        return re_.members
    if isinstance(re_, SetRef) and re_.name in resolved:
        return resolved[re_.name].members
    if isinstance(re_, Alt):
        out: frozenset[int] = frozenset()
        for child in re_.children:
            members = _class_members(child, resolved)
            if members is None:
                return None
            out |= members
        return out
    return None


def resolve_sets(spec: LexSpec) -> LexSpec:
    """Replace every named-set reference by the :class:`CharSet` it denotes.

    A set body may only mention sets declared before it.
    """
    resolved: dict[str, CharSet] = {}
    problems: list[Diagnostic] = []
    order = list(spec.sets)

    def missing(ref: SetRef, where: Pos, visible: set[str]) -> None:
        if ref.name in spec.sets and ref.name not in visible:
            problems.append(_error(f"forward or cyclic reference to set {ref.name!r}", ref.pos or where))
        else:
            problems.append(_error(f"undefined set {ref.name!r}", ref.pos or where))

    for idx, name in enumerate(order):
        body = spec.sets[name]
        where = spec.positions.get("set " + name, (1, 1))
        visible = set(order[:idx])
        refs = [leaf for leaf in iter_leaves(body) if isinstance(leaf, SetRef)]
        bad = [r for r in refs if r.name not in visible]
        for ref in bad:
            missing(ref, where, visible)
        if bad:
            continue
        members = _class_members(body, resolved)
        if members is None:
            problems.append(_error(f"set {name!r} must denote a class of single symbols", where))
            continue
        resolved[name] = CharSet(members)

    def subst(re_: Regex, where: Pos) -> Regex:
        if isinstance(re_, SetRef):
            if re_.name in resolved:
                return resolved[re_.name]
            if re_.name not in spec.sets:
                missing(re_, where, set(order))
            return re_
        if isinstance(re_, Seq):
            return Seq(tuple(subst(c, where) for c in re_.children))
        if isinstance(re_, Alt):
            return Alt(tuple(subst(c, where) for c in re_.children))
        if isinstance(re_, Star):
            return Star(subst(re_.child, where))
        if isinstance(re_, Plus):
            return Plus(subst(re_.child, where))
        return re_

    functions = tuple(
        replace(fn, arms=tuple(replace(arm, regex=subst(arm.regex, arm.pos)) for arm in fn.arms))
        for fn in spec.functions
    )
    if problems:
        raise SpecError(sorted(problems, key=lambda d: (d.line, d.col)))
    return replace(spec, sets=dict(resolved), functions=functions)


GENERATED_LEX_NAMES = frozenset({"Info", "Self", "Arg", "LexError"})
GENERATED_PARSE_NAMES = frozenset({"Arg", "terminal"})
# generated annotations and bodies refer to builtins, so user names may not shadow them
_BUILTIN_NAMES = frozenset(n for n in dir(builtins) if not n.startswith("_"))


def _check_identifier(name: str, what: str, pos: Pos, out: list[Diagnostic]) -> None:
    if not name.isidentifier() or keyword.iskeyword(name):
        out.append(_error(f"{what} {name!r} is not a legal host identifier", pos))
    elif name.startswith(RESERVED_PREFIX):
        out.append(_error(f"{what} {name!r} uses the reserved prefix {RESERVED_PREFIX!r}", pos))
    elif name.startswith("__"):
        out.append(_error(f"{what} {name!r} may not start with a double underscore", pos))
    elif name in _BUILTIN_NAMES:
        out.append(_error(f"{what} {name!r} would shadow a host builtin", pos))


def _sorted(diags: list[Diagnostic]) -> list[Diagnostic]:
    return sorted(diags, key=lambda d: (d.line, d.col))


def validate_lex_spec(spec: LexSpec) -> list[Diagnostic]:
    """Check a set-resolved lexer spec; findings are returned in source order."""
    out: list[Diagnostic] = []
    _check_identifier(spec.module_name, "module name", spec.positions.get("name", (1, 1)), out)
    if spec.module_name in GENERATED_LEX_NAMES:
        out.append(_error(f"module name {spec.module_name!r} collides with a generated name", spec.positions.get("name", (1, 1))))
    taken = GENERATED_LEX_NAMES | {spec.module_name}

    seen_fns: set[str] = set()
    action_owner: dict[str, tuple[str, str]] = {}
    type_names = set(spec.result_types())
    for fn in spec.functions:
        _check_identifier(fn.name, "function name", fn.pos, out)
        if fn.name in type_names:
            out.append(_error(f"function name {fn.name!r} collides with type name {fn.name!r}", fn.pos))
        _check_identifier(fn.result_type, "type name", fn.pos, out)
        if fn.result_type in taken or fn.result_type in ("match", "follow", "self"):
            out.append(_error(f"type name {fn.result_type!r} collides with a generated name", fn.pos))
        if fn.name in seen_fns:
            out.append(_error(f"duplicate function {fn.name!r}", fn.pos))
        seen_fns.add(fn.name)
        if not fn.arms:
            out.append(_error(f"function {fn.name!r} has no arms", fn.pos))
        elif not any(nullable(arm.regex) for arm in fn.arms):
            out.append(_warning(f"inexhaustive function {fn.name}", fn.pos))
        for arm in fn.arms:
            _check_identifier(arm.action, "action name", arm.pos, out)
            if arm.action in type_names or arm.action in GENERATED_LEX_NAMES:
                out.append(_error(f"action name {arm.action!r} collides with a type or generated name", arm.pos))
            owner = action_owner.setdefault(arm.action, (fn.name, fn.result_type))
            if owner[1] != fn.result_type:
                out.append(_error(
                    f"action shared across result types: {arm.action!r} returns {owner[1]} in "
                    f"{owner[0]} and {fn.result_type} in {fn.name}", arm.pos))
            for leaf in iter_leaves(arm.regex):
                _check_leaf(leaf, spec.alphabet, leaf_pos(leaf) or arm.pos, out)

    for name, body in spec.sets.items():
        where = spec.positions.get("set " + name, (1, 1))
        for leaf in iter_leaves(body):
            _check_leaf(leaf, spec.alphabet, leaf_pos(leaf) or where, out)
    return _sorted(out)


def leaf_pos(leaf: Regex) -> Optional[Pos]:
    return getattr(leaf, "pos", None)


def _check_leaf(leaf: Regex, alphabet: int, pos: Pos, out: list[Diagnostic]) -> None:
    if isinstance(leaf, SetRef):
        out.append(_error(f"unresolved set reference {leaf.name!r}", pos))
        return
    if isinstance(leaf, Sym):
        codes = [leaf.code]
    elif isinstance(leaf, Range):
        codes = [leaf.lo, leaf.hi]
    elif isinstance(leaf, CharSet):
        codes = list(leaf.members)
    else:
        return
    bad = [c for c in codes if not 0 <= c < alphabet]
    if bad:
        out.append(_error(f"symbol {max(bad)} outside alphabet 0..{alphabet - 1}", pos))


# ---------------------------------------------------------------------------
# Parser specs

PARSE_KEYWORDS = frozenset({"name", "terminal", "nonterminal", "start", "left", "right", "nonassoc", "of"})
_PARSE_DIRECTIVES = PARSE_KEYWORDS - {"of"}


def parse_parse_spec(text: str) -> ParseSpec:
    """Read a parser specification, checking declarations and the start symbol."""
    cur = _Cursor(_retag(tokenize(text)))
    backend, backend_pos = _header(cur, PARSE_KEYWORDS)
    positions: dict[str, Pos] = {"backend": backend_pos}
    module_name: Optional[str] = None
    start: Optional[Token] = None
    terminals: list[Terminal] = []
    nonterminals: list[Nonterminal] = []
    precs: list[PrecDecl] = []
    declared: set[str] = set()
    problems: list[Diagnostic] = []

    def symbol_name(what: str) -> Token:
        tok = cur.expect("ident", what)
        if tok.text in PARSE_KEYWORDS:
            raise SpecError([_error(f"{tok.text!r} is reserved and cannot name a {what}", tok.pos)])
        return tok

    def declare(tok: Token) -> None:
        if tok.text in declared:
            problems.append(_error(f"duplicate symbol {tok.text!r}", tok.pos))
        declared.add(tok.text)

    while cur.peek.kind != "eof":
        tok = cur.peek
        if tok.kind != "ident":
            raise SpecError([_error(f"expected a directive, found {tok.text!r}", tok.pos)])
        cur.next()
        if tok.text == "name":
            if module_name is not None:
                problems.append(_error("duplicate name directive", tok.pos))
            module_name = cur.expect("ident", "module name").text
            positions["name"] = tok.pos
        elif tok.text == "terminal":
            name = symbol_name("terminal")
            payload = None
            if cur.is_word("of"):
                cur.next()
                payload = cur.expect("ident", "payload type").text
            declare(name)
            terminals.append(Terminal(name.text, payload, name.pos))
        elif tok.text == "nonterminal":
            name = symbol_name("nonterminal")
            cur.expect(":", "':'")
            rtype = cur.expect("ident", "result type")
            cur.expect("=", "'='")
            declare(name)
            prods: list[Production] = []
            while cur.peek.kind != "eof" and not cur.is_word(*_PARSE_DIRECTIVES):
                prods.append(_parse_production(cur))
            nonterminals.append(Nonterminal(name.text, rtype.text, tuple(prods), name.pos))
        elif tok.text == "start":
            name = cur.expect("ident", "start symbol")
            if start is not None:
                problems.append(_error("duplicate start directive", tok.pos))
            start = name
            positions["start"] = name.pos
        elif tok.text in ("left", "right", "nonassoc"):
            names: list[str] = []
            while cur.peek.kind == "ident" and cur.peek.text not in PARSE_KEYWORDS:
                names.append(cur.next().text)
            if not names:
                raise SpecError([_error(f"{tok.text} declaration lists no terminals", tok.pos)])
            precs.append(PrecDecl(Assoc(tok.text), tuple(names), tok.pos))
        else:
            raise SpecError([_error(f"unknown directive {tok.text!r}", tok.pos)])

    end = cur.peek.pos
    if module_name is None:
        problems.append(_error("missing name directive", end))
    if start is None:
        problems.append(_error("missing start directive", end))
    elif start.text not in {nt.name for nt in nonterminals}:
        problems.append(_error("start symbol not a declared nonterminal", start.pos))
    if problems:
        raise SpecError(_sorted(problems))
    assert module_name is not None and start is not None
    return ParseSpec(backend, module_name, tuple(terminals), tuple(nonterminals), start.text,
                     tuple(precs), positions)


def _parse_production(cur: _Cursor) -> Production:
    start = cur.peek.pos
    items: list[RhsItem] = []
    while cur.peek.kind != "arrow":
        tok = cur.peek
        if tok.kind == "int":
            colon, sym = cur.at(1), cur.at(2)
            if colon.kind != ":" or sym.kind != "ident" or int(tok.text) < 1 \
                    or (colon.line, colon.col) != (tok.line, tok.col + len(tok.text)):
                raise SpecError([_error("malformed position prefix", tok.pos)])
            cur.next(), cur.next(), cur.next()
            items.append(RhsItem(sym.text, int(tok.text), tok.pos))
        elif tok.kind == "ident" and tok.text not in PARSE_KEYWORDS:
            cur.next()
            items.append(RhsItem(tok.text, None, tok.pos))
        else:
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise SpecError([_error(f"expected a grammar symbol or '=>', found {found}", tok.pos)])
    cur.next()
    action = cur.expect("ident", "action name")
    return Production(tuple(items), action.text, start)


def validate_parse_spec(spec: ParseSpec) -> list[Diagnostic]:
    """Check a parser spec; findings are returned in source order."""
    out: list[Diagnostic] = []
    name_pos = spec.positions.get("name", (1, 1))
    _check_identifier(spec.module_name, "module name", name_pos, out)
    if spec.module_name in GENERATED_PARSE_NAMES:
        out.append(_error(f"module name {spec.module_name!r} collides with a generated name", name_pos))

    term_names = {t.name for t in spec.terminals}
    nt_names = {nt.name for nt in spec.nonterminals}
    toplevel: dict[str, str] = {spec.module_name: "module name"}
    for n in GENERATED_PARSE_NAMES | {"parse"}:
        toplevel[n] = "generated name"

    def claim(name: str, what: str, pos: Pos) -> None:
        other = toplevel.setdefault(name, what)
        if other != what:
            out.append(_error(f"{what} {name!r} collides with {other} {name!r}", pos))

    seen: set[str] = set()
    for t in spec.terminals:
        _check_identifier(t.name, "terminal", t.pos, out)
        if t.name in seen:
            out.append(_error(f"duplicate symbol {t.name!r}", t.pos))
        seen.add(t.name)
        claim(t.name, "terminal", t.pos)
        if t.payload_type:
            _check_identifier(t.payload_type, "type name", t.pos, out)
            claim(t.payload_type, "type name", t.pos)
            if t.payload_type == "value":
                out.append(_error("type name 'value' collides with a generated name", t.pos))
    for nt in spec.nonterminals:
        if nt.name in seen:
            out.append(_error(f"duplicate symbol {nt.name!r}", nt.pos))
        seen.add(nt.name)
        _check_identifier(nt.result_type, "type name", nt.pos, out)
        claim(nt.result_type, "type name", nt.pos)
    if spec.start not in nt_names:
        out.append(_error("start symbol not a declared nonterminal", spec.positions.get("start", (1, 1))))

    signatures: dict[str, tuple[tuple[tuple[str, ...], str], Pos]] = {}
    for nt in spec.nonterminals:
        if not nt.productions:
            out.append(_error(f"nonterminal {nt.name!r} has no productions", nt.pos))
        for prod in nt.productions:
            _check_identifier(prod.action, "action name", prod.pos, out)
            if prod.action == "error":
                out.append(_error("action name 'error' is reserved for the syntax-error action", prod.pos))
            elif toplevel.get(prod.action) in ("type name", "generated name"):
                out.append(_error(f"action name {prod.action!r} collides with {toplevel[prod.action]} {prod.action!r}",
                                  prod.pos))
            numbers: set[int] = set()
            for item in prod.rhs:
                if item.symbol not in term_names and item.symbol not in nt_names:
                    out.append(_error(f"undeclared symbol {item.symbol!r}", item.pos))
                    continue
                if item.position is None:
                    continue
                if item.position in numbers:
                    out.append(_error(f"duplicate position {item.position}", item.pos))
                numbers.add(item.position)
                if spec.value_type(item.symbol) is None:
                    out.append(_error(f"numbered symbol carries no value: {item.symbol}", item.pos))
            if numbers and numbers != set(range(1, len(numbers) + 1)):
                out.append(_error(f"positions must be exactly 1..k, got {sorted(numbers)}", prod.pos))
            sig = spec.signature(nt, prod)
            first = signatures.setdefault(prod.action, (sig, prod.pos))
            if first[0] != sig:
                out.append(_error(
                    f"action {prod.action!r} used with signature {_sig_text(sig)} here but "
                    f"{_sig_text(first[0])} at {first[1][0]}:{first[1][1]}", prod.pos))

    for decl in spec.precedences:
        for name in decl.terminals:
            if name not in term_names:
                out.append(_error(f"precedence given for non-terminal symbol {name!r}", decl.pos))
    prec_seen: set[str] = set()
    for decl in spec.precedences:
        for name in decl.terminals:
            if name in prec_seen:
                out.append(_error(f"terminal {name!r} given precedence twice", decl.pos))
            prec_seen.add(name)

    if not has_errors(out):
        out.extend(_grammar_warnings(spec))
    return _sorted(out)


def _sig_text(sig: tuple[tuple[str, ...], str]) -> str:
    args, result = sig
    return f"{' * '.join(args) or 'unit'} -> {result}"


def _grammar_warnings(spec: ParseSpec) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    nts = {nt.name: nt for nt in spec.nonterminals}
    reachable = {spec.start}
    work = [spec.start]
    while work:
        for prod in nts[work.pop()].productions:
            for item in prod.rhs:
                if item.symbol in nts and item.symbol not in reachable:
                    reachable.add(item.symbol)
                    work.append(item.symbol)
    productive: set[str] = set()
    changed = True
    while changed:
        changed = False
        for nt in spec.nonterminals:
            if nt.name in productive:
                continue
            if any(all(i.symbol not in nts or i.symbol in productive for i in p.rhs) for p in nt.productions):
                productive.add(nt.name)
                changed = True
    for nt in spec.nonterminals:
        if nt.name not in reachable:
            out.append(_warning(f"nonterminal {nt.name} unreachable from start", nt.pos))
        if nt.name not in productive:
            out.append(_warning(f"nonterminal {nt.name} derives no terminal string", nt.pos))
    return out


# ---------------------------------------------------------------------------
# Canonical printing

def format_regex(re_: Regex) -> str:
    if isinstance(re_, Epsilon):
        return "epsilon"
    if isinstance(re_, Sym):
        return _format_symbol(re_.code)
    if isinstance(re_, Range):
        return f"(range {_format_symbol(re_.lo)} {_format_symbol(re_.hi)})"
    if isinstance(re_, SetRef):
        return re_.name
    if isinstance(re_, CharSet):
        return "(or " + " ".join(_format_runs(sorted(re_.members))) + ")" if re_.members else "(or)"
    if isinstance(re_, Seq):
        return "(seq " + " ".join(map(format_regex, re_.children)) + ")"
    if isinstance(re_, Alt):
        return "(or " + " ".join(map(format_regex, re_.children)) + ")"
    if isinstance(re_, Star):
        return f"(* {format_regex(re_.child)})"
    return f"(+ {format_regex(re_.child)})"


def _format_symbol(code: int) -> str:
    if 0x21 <= code < 0x7F:
        return "'" + chr(code)
    return str(code)


def _format_runs(codes: list[int]) -> Iterator[str]:
    i = 0
    while i < len(codes):
        j = i
        while j + 1 < len(codes) and codes[j + 1] == codes[j] + 1:
            j += 1
        if j == i:
            yield _format_symbol(codes[i])
        else:
            yield f"(range {_format_symbol(codes[i])} {_format_symbol(codes[j])})"
        i = j + 1


def format_lex_spec(spec: LexSpec) -> str:
    lines = [spec.backend, f"name {spec.module_name}", f"alphabet {spec.alphabet}", ""]
    for name, body in spec.sets.items():
        lines.append(f"set {name} = {format_regex(body)}")
    if spec.sets:
        lines.append("")
    for fn in spec.functions:
        lines.append(f"function {fn.name} : {fn.result_type} =")
        lines.extend(f"   {format_regex(arm.regex)} => {arm.action}" for arm in fn.arms)
        lines.append("")
    return "\n".join(lines)


def format_parse_spec(spec: ParseSpec) -> str:
    lines = [spec.backend, f"name {spec.module_name}", ""]
    for t in spec.terminals:
        lines.append(f"terminal {t.name}" + (f" of {t.payload_type}" if t.payload_type else ""))
    for decl in spec.precedences:
        lines.append(f"{decl.assoc.value} {' '.join(decl.terminals)}")
    lines.append("")
    for nt in spec.nonterminals:
        lines.append(f"nonterminal {nt.name} : {nt.result_type} =")
        for prod in nt.productions:
            rhs = " ".join(f"{i.position}:{i.symbol}" if i.position else i.symbol for i in prod.rhs)
            lines.append(f"  {rhs} => {prod.action}" if rhs else f"  => {prod.action}")
        lines.append("")
    lines.append(f"start {spec.start}")
    return "\n".join(lines) + "\n"


def spec_kind(text: str) -> str:
    """Guess whether ``text`` is a lexer (``"lex"``) or parser (``"parse"``) spec."""
    try:
        tokens = tokenize(text)
    except SpecError:
        return "lex"
    words = {t.text for t in tokens if t.kind == "ident"}
    if words & {"terminal", "nonterminal", "start"} and "alphabet" not in words:
        return "parse"
    return "lex"
