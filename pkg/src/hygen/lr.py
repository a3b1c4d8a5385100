"""LALR(1) tables for parser specs, a table-driven reference parser, and an
Earley recognizer used as an independent oracle.

The table construction follows the classic recipe: canonical LR(0) item
sets, then LALR(1) lookaheads found by spontaneous generation and
propagation between kernel items.  Cells with more than one candidate
action are recorded as :class:`Conflict` objects rather than raised.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Any, Callable, NamedTuple, Optional, Sequence, Union

from .spec import Assoc, ParseSpec, PrecDecl
from .stream import Cons, Stream, front

EOF = "$eof"
AUGMENTED = "$start"
_HASH = "#"  # placeholder lookahead used while discovering propagation


@dataclass(frozen=True)
class Rule:
    lhs: str
    rhs: tuple[str, ...]
    value_positions: tuple[tuple[int, int], ...]
    action: str

    def __str__(self) -> str:
        return f"{self.lhs} -> {' '.join(self.rhs) or '<empty>'}"


@dataclass(frozen=True)
class Grammar:
    terminals: tuple[str, ...]
    """Declared terminals followed by the synthetic :data:`EOF`."""
    nonterminals: tuple[str, ...]
    """The augmented start symbol followed by declared nonterminals."""
    rules: tuple[Rule, ...]
    start: str
    payloads: dict[str, Optional[str]] = field(default_factory=dict)
    result_types: dict[str, str] = field(default_factory=dict)

    def rules_for(self, lhs: str) -> list[int]:
        return [i for i, r in enumerate(self.rules) if r.lhs == lhs]

    def is_terminal(self, sym: str) -> bool:
        return sym in self.terminals


def to_grammar(spec: ParseSpec, start: Optional[str] = None) -> Grammar:
    """Flatten a validated spec into numbered rules.

    Rule 0 is ``$start -> start``.  ``value_positions`` lists
    ``(rhs index, argument slot)`` pairs in slot order.
    """
    start = start or spec.start
    rules = [Rule(AUGMENTED, (start,), ((0, 1),), "")]
    for nt in spec.nonterminals:
        for prod in nt.productions:
            vp = sorted(((i, item.position) for i, item in enumerate(prod.rhs) if item.position),
                        key=lambda p: p[1])
            rules.append(Rule(nt.name, tuple(i.symbol for i in prod.rhs), tuple(vp), prod.action))
    return Grammar(
        terminals=tuple(t.name for t in spec.terminals) + (EOF,),
        nonterminals=(AUGMENTED,) + tuple(nt.name for nt in spec.nonterminals),
        rules=tuple(rules),
        start=start,
        payloads={t.name: t.payload_type for t in spec.terminals},
        result_types={nt.name: nt.result_type for nt in spec.nonterminals},
    )


# ---------------------------------------------------------------------------
# Table types

@dataclass(frozen=True)
class Shift:
    state: int

    def __str__(self) -> str:
        return f"shift {self.state}"


@dataclass(frozen=True)
class Reduce:
    rule: int

    def __str__(self) -> str:
        return f"reduce {self.rule}"


@dataclass(frozen=True)
class Accept:
    def __str__(self) -> str:
        return "accept"


Action = Union[Shift, Reduce, Accept]

SHIFT_REDUCE = "shift-reduce"
REDUCE_REDUCE = "reduce-reduce"

UNRESOLVED = "unresolved"
BY_PRECEDENCE = "precedence"
DEFAULT_RULE = "default"


@dataclass(frozen=True)
class Conflict:
    state: int
    lookahead: str
    kind: str
    contenders: tuple[Action, ...]
    resolution: str = UNRESOLVED
    choice: Optional[Action] = None
    """The action left in the cell; ``None`` means the cell became an error."""

    def describe(self, grammar: Grammar) -> str:
        parts = []
        for act in self.contenders:
            parts.append(f"reduce {grammar.rules[act.rule]}" if isinstance(act, Reduce) else str(act))
        text = f"state {self.state}, lookahead {self.lookahead}: {self.kind} conflict between " + "; ".join(parts)
        if self.resolution != UNRESOLVED:
            chosen = "error" if self.choice is None else str(self.choice)
            text += f" (resolved by {self.resolution}: {chosen})"
        return text


Item = tuple[int, int]  # (rule index, dot position)


@dataclass(frozen=True)
class LrTables:
    state_count: int
    action: tuple[dict[str, Action], ...]
    goto: tuple[dict[str, int], ...]
    conflicts: tuple[Conflict, ...]
    kernels: tuple[tuple[Item, ...], ...] = ()
    lookaheads: tuple[dict[Item, frozenset[str]], ...] = ()

    @property
    def unresolved(self) -> list[Conflict]:
        return [c for c in self.conflicts if c.resolution == UNRESOLVED]


# ---------------------------------------------------------------------------
# FIRST sets

def _nullable_and_first(g: Grammar) -> tuple[set[str], dict[str, set[str]]]:
    nullable: set[str] = set()
    first: dict[str, set[str]] = {nt: set() for nt in g.nonterminals}
    for t in g.terminals:
        first[t] = {t}
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            if r.lhs not in nullable and all(s in nullable for s in r.rhs):
                nullable.add(r.lhs)
                changed = True
            for s in r.rhs:
                before = len(first[r.lhs])
                first[r.lhs] |= first.get(s, set())
                changed |= len(first[r.lhs]) != before
                if s not in nullable:
                    break
    return nullable, first


def _first_of(seq: Sequence[str], follow: frozenset[str] | set[str],
              nullable: set[str], first: dict[str, set[str]]) -> set[str]:
    out: set[str] = set()
    for s in seq:
        out |= first.get(s, {s})
        if s not in nullable:
            return out
    return out | set(follow)


# ---------------------------------------------------------------------------
# LR(0) automaton

def _lr0_closure(g: Grammar, kernel: Sequence[Item]) -> list[Item]:
    items = list(kernel)
    seen = set(items)
    i = 0
    while i < len(items):
        rule, dot = items[i]
        rhs = g.rules[rule].rhs
        if dot < len(rhs) and rhs[dot] in g.nonterminals:
            for r in g.rules_for(rhs[dot]):
                if (r, 0) not in seen:
                    seen.add((r, 0))
                    items.append((r, 0))
        i += 1
    return items


def _lr0(g: Grammar) -> tuple[list[tuple[Item, ...]], list[dict[str, int]]]:
    symbols = [t for t in g.terminals if t != EOF] + list(g.nonterminals)
    kernels: list[tuple[Item, ...]] = [((0, 0),)]
    index = {kernels[0]: 0}
    edges: list[dict[str, int]] = []
    queue = deque([0])
    while queue:
        state = queue.popleft()
        items = _lr0_closure(g, kernels[state])
        out: dict[str, int] = {}
        for sym in symbols:
            moved = tuple(sorted((r, d + 1) for r, d in items
                                 if d < len(g.rules[r].rhs) and g.rules[r].rhs[d] == sym))
            if not moved:
                continue
            if moved not in index:
                index[moved] = len(kernels)
                kernels.append(moved)
                queue.append(index[moved])
            out[sym] = index[moved]
        while len(edges) <= state:
            edges.append({})
        edges[state] = out
    return kernels, edges


def _lr1_closure(g: Grammar, seed: dict[Item, set[str]], nullable: set[str],
                 first: dict[str, set[str]]) -> dict[Item, set[str]]:
    items = {k: set(v) for k, v in seed.items()}
    work = deque(items)
    while work:
        rule, dot = work.popleft()
        rhs = g.rules[rule].rhs
        if dot >= len(rhs) or rhs[dot] not in g.nonterminals:
            continue
        la = _first_of(rhs[dot + 1:], items[(rule, dot)], nullable, first)
        for r in g.rules_for(rhs[dot]):
            cur = items.setdefault((r, 0), set())
            if not la <= cur:
                cur |= la
                work.append((r, 0))
    return items


def build_lalr(g: Grammar) -> LrTables:
    """LALR(1) ACTION/GOTO tables; every multi-candidate cell becomes a Conflict."""
    nullable, first = _nullable_and_first(g)
    kernels, edges = _lr0(g)

    # discover spontaneous lookaheads and propagation links between kernel items
    la: list[dict[Item, set[str]]] = [{item: set() for item in k} for k in kernels]
    la[0][(0, 0)].add(EOF)
    links: dict[tuple[int, Item], list[tuple[int, Item]]] = {}
    for state, kernel in enumerate(kernels):
        for k_item in kernel:
            closure = _lr1_closure(g, {k_item: {_HASH}}, nullable, first)
            for (rule, dot), lookaheads in closure.items():
                rhs = g.rules[rule].rhs
                if dot >= len(rhs):
                    continue
                target = edges[state][rhs[dot]]
                moved = (rule, dot + 1)
                for a in lookaheads:
                    if a == _HASH:
                        links.setdefault((state, k_item), []).append((target, moved))
                    else:
                        la[target][moved].add(a)

    changed = True
    while changed:
        changed = False
        for (src, item), dsts in links.items():
            for dst, d_item in dsts:
                before = len(la[dst][d_item])
                la[dst][d_item] |= la[src][item]
                changed |= len(la[dst][d_item]) != before

    actions: list[dict[str, Action]] = []
    gotos: list[dict[str, int]] = []
    conflicts: list[Conflict] = []
    full_la: list[dict[Item, frozenset[str]]] = []
    for state, kernel in enumerate(kernels):
        closure = _lr1_closure(g, {k: la[state][k] for k in kernel}, nullable, first)
        full_la.append({k: frozenset(la[state][k]) for k in kernel})
        cands: dict[str, list[Action]] = {}
        for sym, target in edges[state].items():
            if g.is_terminal(sym):
                cands.setdefault(sym, []).append(Shift(target))
        for (rule, dot), lookaheads in sorted(closure.items()):
            if dot != len(g.rules[rule].rhs):
                continue
            for a in sorted(lookaheads, key=g.terminals.index):
                cands.setdefault(a, []).append(Accept() if rule == 0 else Reduce(rule))
        row: dict[str, Action] = {}
        for term in g.terminals:
            options = cands.get(term)
            if not options:
                continue
            row[term] = options[0]
            if len(options) > 1:
                shift_n = sum(isinstance(o, Shift) for o in options)
                kind = SHIFT_REDUCE if shift_n and len(options) == 2 else REDUCE_REDUCE
                conflicts.append(Conflict(state, term, kind, tuple(options), UNRESOLVED, options[0]))
        actions.append(row)
        gotos.append({s: t for s, t in edges[state].items() if s in g.nonterminals})

    return LrTables(len(kernels), tuple(actions), tuple(gotos), tuple(conflicts),
                    tuple(kernels), tuple(full_la))


# ---------------------------------------------------------------------------
# Precedence

def _levels(decls: Sequence[PrecDecl]) -> dict[str, tuple[int, Assoc]]:
    out: dict[str, tuple[int, Assoc]] = {}
    for level, decl in enumerate(decls, start=1):
        for name in decl.terminals:
            out[name] = (level, decl.assoc)
    return out


def rule_precedence(g: Grammar, rule: int, decls: Sequence[PrecDecl]) -> Optional[tuple[int, Assoc]]:
    """Precedence of the rightmost terminal in the rule body, if it has one."""
    levels = _levels(decls)
    for sym in reversed(g.rules[rule].rhs):
        if g.is_terminal(sym):
            return levels.get(sym)
    return None


def apply_precedence(t: LrTables, g: Grammar, decls: Sequence[PrecDecl]) -> LrTables:
    """Settle shift-reduce conflicts Yacc-style using operator precedence.

    Higher level wins; at equal level left associativity reduces, right
    shifts and nonassoc makes the cell a syntax error.  Conflicts lacking
    precedence on either side, and all reduce-reduce conflicts, are left alone.
    """
    if not decls:
        return t
    levels = _levels(decls)
    actions = [dict(row) for row in t.action]
    conflicts: list[Conflict] = []
    for c in t.conflicts:
        if c.kind != SHIFT_REDUCE or c.resolution != UNRESOLVED:
            conflicts.append(c)
            continue
        shift = next(a for a in c.contenders if isinstance(a, Shift))
        reduce = next(a for a in c.contenders if not isinstance(a, Shift))
        assert isinstance(reduce, Reduce), "only reduce actions compete with a shift"
        tok = levels.get(c.lookahead)
        prod = rule_precedence(g, reduce.rule, decls)
        if tok is None or prod is None:
            conflicts.append(c)
            continue
        choice: Optional[Action]
        if tok[0] > prod[0]:
            choice = shift
        elif tok[0] < prod[0]:
            choice = reduce
        else:
            choice = {Assoc.LEFT: reduce, Assoc.RIGHT: shift, Assoc.NONASSOC: None}[tok[1]]
        if choice is None:
            del actions[c.state][c.lookahead]
        else:
            actions[c.state][c.lookahead] = choice
        conflicts.append(replace(c, resolution=BY_PRECEDENCE, choice=choice))
    return replace(t, action=tuple(actions), conflicts=tuple(conflicts))


def apply_defaults(t: LrTables) -> LrTables:
    """Accept the classic defaults for what is left: shift wins, else the earliest rule."""
    conflicts = tuple(replace(c, resolution=DEFAULT_RULE) if c.resolution == UNRESOLVED else c
                      for c in t.conflicts)
    return replace(t, conflicts=conflicts)


def build_tables(spec: ParseSpec, yacc_default: bool = False, start: Optional[str] = None) -> tuple[Grammar, LrTables]:
    """Grammar plus tables with the spec's precedences (and optionally defaults) applied."""
    g = to_grammar(spec, start)
    t = apply_precedence(build_lalr(g), g, spec.precedences)
    if yacc_default:
        t = apply_defaults(t)
    return g, t


# ---------------------------------------------------------------------------
# Reference parser

class Token(NamedTuple):
    name: str
    value: Any = None


class ParseError(Exception):
    """Raised on a syntax error; ``value`` is what the error handler returned."""

    def __init__(self, value: Any) -> None:
        super().__init__(value)
        self.value = value


def simulate_parse(t: LrTables, g: Grammar, tokens: Stream[Token],
                   eval: Callable[[str, tuple[Any, ...]], Any],
                   on_error: Callable[[Stream[Token]], Any]) -> Any:
    """Shift-reduce execution over a value stack.

    ``eval(action, args)`` is called on each reduction with the numbered
    values in slot order.  On a syntax error ``on_error`` receives the
    remaining stream (offending token first) and its result is raised
    inside a :class:`ParseError`.
    """
    if t.unresolved:
        raise ValueError(f"tables carry {len(t.unresolved)} unresolved conflict(s)")
    states = [0]
    values: list[Any] = []
    cur = tokens
    fr = front(cur)
    while True:
        la = fr.head.name if isinstance(fr, Cons) else EOF
        act = t.action[states[-1]].get(la)
        if act is None:
            raise ParseError(on_error(cur))
        if isinstance(act, Shift):
            assert isinstance(fr, Cons)
            states.append(act.state)
            values.append(fr.head.value)
            cur = fr.tail
            fr = front(cur)
        elif isinstance(act, Reduce):
            rule = g.rules[act.rule]
            n = len(rule.rhs)
            assert len(states) > n, "stack underflow"
            popped = values[len(values) - n:]
            del values[len(values) - n:]
            del states[len(states) - n:]
            values.append(eval(rule.action, tuple(popped[i] for i, _ in rule.value_positions)))
            states.append(t.goto[states[-1]][rule.lhs])
        else:
            assert len(values) == 1
            return values[0]


# ---------------------------------------------------------------------------
# Earley oracle

class EarleyResult(NamedTuple):
    accepted: bool
    derivations: int
    """Number of distinct derivations, capped."""


def earley_accepts(g: Grammar, sentence: Sequence[str], cap: int = 16) -> EarleyResult:
    """Earley recognition of ``sentence`` from ``g.start``, plus a capped derivation count.

    Works from the declared rules only (rule 0 is ignored), so it shares
    nothing with the LR construction beyond the grammar itself.
    """
    rules = [r for r in g.rules[1:]]
    by_lhs: dict[str, list[int]] = {}
    for i, r in enumerate(rules):
        by_lhs.setdefault(r.lhs, []).append(i)
    nullable: set[str] = set()
    changed = True
    while changed:
        changed = False
        for r in rules:
            if r.lhs not in nullable and all(s in nullable for s in r.rhs):
                nullable.add(r.lhs)
                changed = True

    n = len(sentence)
    chart: list[set[tuple[int, int, int]]] = [set() for _ in range(n + 1)]
    for r in by_lhs.get(g.start, []):
        chart[0].add((r, 0, 0))
    for j in range(n + 1):
        work = list(chart[j])
        while work:
            r, dot, origin = work.pop()
            rhs = rules[r].rhs
            new: list[tuple[int, int, int]] = []
            if dot < len(rhs):
                sym = rhs[dot]
                if sym in by_lhs:
                    new += [(p, 0, j) for p in by_lhs[sym]]
                    if sym in nullable:
                        new.append((r, dot + 1, origin))
                elif j < n and sentence[j] == sym:
                    chart[j + 1].add((r, dot + 1, origin))
            else:
                lhs = rules[r].lhs
                for (r2, d2, o2) in list(chart[origin]):
                    rhs2 = rules[r2].rhs
                    if d2 < len(rhs2) and rhs2[d2] == lhs:
                        new.append((r2, d2 + 1, o2))
            for item in new:
                if item not in chart[j]:
                    chart[j].add(item)
                    work.append(item)

    accepted = any(rules[r].lhs == g.start and d == len(rules[r].rhs) and o == 0 for r, d, o in chart[n])
    if not accepted:
        return EarleyResult(False, 0)

    completed = {(rules[r].lhs, o, j) for j in range(n + 1) for r, d, o in chart[j] if d == len(rules[r].rhs)}
    memo: dict[tuple[str, int, int], int] = {}
    active: set[tuple[str, int, int]] = set()

    def count(sym: str, i: int, j: int) -> int:
        if (sym, i, j) not in completed:
            return 0
        key = (sym, i, j)
        if key in memo:
            return memo[key]
        if key in active:
            return cap  # a derivation cycle: unboundedly many
        active.add(key)
        total = 0
        for r in by_lhs[sym]:
            total = min(cap, total + seq(rules[r].rhs, 0, i, j))
        active.discard(key)
        memo[key] = total
        return total

    def seq(rhs: tuple[str, ...], k: int, i: int, j: int) -> int:
        if k == len(rhs):
            return 1 if i == j else 0
        sym = rhs[k]
        if sym not in by_lhs:
            return seq(rhs, k + 1, i + 1, j) if i < j and sentence[i] == sym else 0
        total = 0
        for m in range(i, j + 1):
            left = count(sym, i, m)
            if left:
                total = min(cap, total + left * seq(rhs, k + 1, m, j))
        return total

    return EarleyResult(True, count(g.start, 0, n))


# ---------------------------------------------------------------------------
# Text dump

def format_item(g: Grammar, item: Item) -> str:
    rule, dot = item
    r = g.rules[rule]
    rhs = list(r.rhs)
    rhs.insert(dot, ".")
    return f"{r.lhs} -> {' '.join(rhs)}"


def dump_lr(t: LrTables, g: Grammar) -> str:
    """Stable text form: rules, then per state its kernel items, actions and gotos,
    then the conflict report."""
    lines = ["rules"]
    for i, r in enumerate(g.rules):
        lines.append(f"  {i}: {r}" + (f" => {r.action}" if r.action else ""))
    for s in range(t.state_count):
        lines.append("")
        lines.append(f"state {s}")
        for item in t.kernels[s] if t.kernels else ():
            la = t.lookaheads[s].get(item, frozenset()) if t.lookaheads else frozenset()
            las = " ".join(sorted(la, key=g.terminals.index))
            lines.append(f"  {format_item(g, item)}   [{las}]")
        for term in g.terminals:
            if term in t.action[s]:
                lines.append(f"  on {term}: {t.action[s][term]}")
        for nt in g.nonterminals:
            if nt in t.goto[s]:
                lines.append(f"  goto {nt}: {t.goto[s][nt]}")
    lines.append("")
    lines.append(f"conflicts {len(t.conflicts)}")
    for c in t.conflicts:
        lines.append("  " + c.describe(g))
    return "\n".join(lines) + "\n"
