"""Regular expressions to prioritized DFAs, and longest-match execution.

Each lexing function compiles to one DFA whose accepting states are tagged
with the index of the arm they recognize.  When several arms accept the
same string the earliest arm wins.  :func:`run_longest` then consumes the
longest accepted prefix of a symbol stream.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .spec import Alt, CharSet, Epsilon, LexFn, LexSpec, Plus, Range, Regex, Seq, SetRef, Star, Sym
from .stream import Cons, Stream, front

DEAD = -1


@dataclass(frozen=True)
class NFA:
    state_count: int
    start: int
    alphabet: int
    eps: tuple[frozenset[int], ...]
    trans: tuple[dict[int, frozenset[int]], ...]
    accept: tuple[Optional[int], ...]


@dataclass(frozen=True)
class DFA:
    """Dense deterministic automaton; ``trans[s * alphabet + sym]`` is the
    successor of ``s`` on ``sym``, or :data:`DEAD`."""

    state_count: int
    start: int
    alphabet: int
    trans: tuple[int, ...]
    accept: tuple[Optional[int], ...]

    def step(self, state: int, sym: int) -> int:
        if not 0 <= sym < self.alphabet:
            return DEAD
        return self.trans[state * self.alphabet + sym]

    def row(self, state: int) -> tuple[int, ...]:
        return self.trans[state * self.alphabet:(state + 1) * self.alphabet]

    @property
    def live_out(self) -> tuple[bool, ...]:
        """Whether each state has any non-DEAD transition."""
        return tuple(any(t != DEAD for t in self.row(s)) for s in range(self.state_count))

    def accepts(self, symbols: Sequence[int]) -> Optional[int]:
        """Accept tag reached after reading all of ``symbols``, if any."""
        state = self.start
        for sym in symbols:
            state = self.step(state, sym)
            if state == DEAD:
                return None
        return self.accept[state]


@dataclass(frozen=True)
class Match:
    arm: int
    consumed: list[int]
    follow: Stream[int]


class _Builder:
    def __init__(self, alphabet: int) -> None:
        self.alphabet = alphabet
        self.eps: list[set[int]] = []
        self.trans: list[dict[int, set[int]]] = []

    def new(self) -> int:
        self.eps.append(set())
        self.trans.append({})
        return len(self.eps) - 1

    def edge(self, src: int, syms: Sequence[int] | frozenset[int] | range, dst: int) -> None:
        for sym in syms:
            if 0 <= sym < self.alphabet:
                self.trans[src].setdefault(sym, set()).add(dst)

    def fragment(self, re_: Regex) -> tuple[int, int]:
        """Build ``re_`` between a fresh entry and exit state."""
        if isinstance(re_, Seq):
            first, last = self.fragment(re_.children[0])
            for child in re_.children[1:]:
                s, e = self.fragment(child)
                self.eps[last].add(s)
                last = e
            return first, last
        entry, exit_ = self.new(), self.new()
        if isinstance(re_, Epsilon):
            self.eps[entry].add(exit_)
        elif isinstance(re_, Sym):
            self.edge(entry, (re_.code,), exit_)
        elif isinstance(re_, Range):
            self.edge(entry, range(re_.lo, re_.hi + 1), exit_)
        elif isinstance(re_, CharSet):
            self.edge(entry, sorted(re_.members), exit_)
        elif isinstance(re_, Alt):
            for child in re_.children:
                s, e = self.fragment(child)
                self.eps[entry].add(s)
                self.eps[e].add(exit_)
        elif isinstance(re_, (Star, Plus)):
            s, e = self.fragment(re_.child)
            self.eps[entry].add(s)
            self.eps[e].update((s, exit_))
            if isinstance(re_, Star):
                self.eps[entry].add(exit_)
        elif isinstance(re_, SetRef):
            raise ValueError(f"unresolved set reference {re_.name!r}")
        else:
            raise TypeError(f"not a regular expression: {re_!r}")
        return entry, exit_


def thompson(arms: Sequence[tuple[Regex, int]], alphabet: int) -> NFA:
    """Thompson construction of the union of ``arms``, each exit tagged with its arm index."""
    b = _Builder(alphabet)
    start = b.new()
    tags: dict[int, int] = {}
    for re_, arm in arms:
        s, e = b.fragment(re_)
        b.eps[start].add(s)
        tags[e] = arm
    n = len(b.eps)
    return NFA(
        state_count=n,
        start=start,
        alphabet=alphabet,
        eps=tuple(frozenset(x) for x in b.eps),
        trans=tuple({sym: frozenset(d) for sym, d in sorted(t.items())} for t in b.trans),
        accept=tuple(tags.get(s) for s in range(n)),
    )


def _closure(nfa: NFA, states: frozenset[int] | set[int]) -> frozenset[int]:
    seen = set(states)
    work = list(states)
    while work:
        for nxt in nfa.eps[work.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                work.append(nxt)
    return frozenset(seen)


def determinize(nfa: NFA) -> DFA:
    """Subset construction; states are numbered in breadth-first discovery order."""
    alphabet = nfa.alphabet
    start = _closure(nfa, {nfa.start})
    index = {start: 0}
    order = [start]
    queue = deque([start])
    rows: list[list[int]] = []
    while queue:
        subset = queue.popleft()
        moves: dict[int, set[int]] = {}
        for s in sorted(subset):
            for sym, dsts in nfa.trans[s].items():
                moves.setdefault(sym, set()).update(dsts)
        row = [DEAD] * alphabet
        for sym in sorted(moves):
            target = _closure(nfa, moves[sym])
            if target not in index:
                index[target] = len(order)
                order.append(target)
                queue.append(target)
            row[sym] = index[target]
        rows.append(row)
    accept = []
    for subset in order:
        tags = [nfa.accept[s] for s in subset if nfa.accept[s] is not None]
        accept.append(min(tags) if tags else None)  # type: ignore[type-var]
    return DFA(len(order), 0, alphabet, tuple(t for row in rows for t in row), tuple(accept))


def _canonical(dfa: DFA, block_of: Sequence[int], n_blocks: int) -> DFA:
    """Quotient ``dfa`` by ``block_of`` and renumber breadth-first from the start."""
    reps: dict[int, int] = {}
    for s in range(dfa.state_count):
        if block_of[s] != DEAD:
            reps.setdefault(block_of[s], s)
    index = {block_of[dfa.start]: 0}
    order = [block_of[dfa.start]]
    queue = deque(order)
    while queue:
        blk = queue.popleft()
        for t in dfa.row(reps[blk]):
            if t != DEAD and block_of[t] != DEAD and block_of[t] not in index:
                index[block_of[t]] = len(order)
                order.append(block_of[t])
                queue.append(block_of[t])
    trans: list[int] = []
    for blk in order:
        for t in dfa.row(reps[blk]):
            trans.append(DEAD if t == DEAD or block_of[t] == DEAD else index[block_of[t]])
    accept = tuple(dfa.accept[reps[blk]] for blk in order)
    return DFA(len(order), 0, dfa.alphabet, tuple(trans), accept)


def minimize(dfa: DFA) -> DFA:
    """Merge states with equal accept tags and equal futures.

    States that cannot reach an accepting state are folded into DEAD (the
    start state is always kept).  The result is numbered breadth-first.
    """
    n = dfa.state_count
    # backwards reachability from accepting states
    preds: list[set[int]] = [set() for _ in range(n)]
    for s in range(n):
        for t in dfa.row(s):
            if t != DEAD:
                preds[t].add(s)
    useful = {s for s in range(n) if dfa.accept[s] is not None}
    work = list(useful)
    while work:
        for p in preds[work.pop()]:
            if p not in useful:
                useful.add(p)
                work.append(p)
    useful.add(dfa.start)

    # Moore refinement, starting from the partition by accept tag
    tags = sorted({dfa.accept[s] for s in useful}, key=lambda a: -1 if a is None else a)
    block_of = [tags.index(dfa.accept[s]) if s in useful else DEAD for s in range(n)]
    n_blocks = len(tags)
    while True:
        sigs: dict[tuple[int, ...], int] = {}
        new_block = [DEAD] * n
        for s in sorted(useful):
            sig = (block_of[s],) + tuple(DEAD if t == DEAD else block_of[t] for t in dfa.row(s))
            new_block[s] = sigs.setdefault(sig, len(sigs))
        if len(sigs) == n_blocks:
            break
        block_of, n_blocks = new_block, len(sigs)
    return _canonical(dfa, block_of, n_blocks)


def compile_arms(arms: Sequence[Regex], alphabet: int) -> DFA:
    """Minimized DFA for an arm list, tagged by arm index."""
    nfa = thompson([(re_, i) for i, re_ in enumerate(arms)], alphabet)
    return minimize(determinize(nfa))


def compile_function(fn: LexFn, alphabet: int) -> DFA:
    return compile_arms([arm.regex for arm in fn.arms], alphabet)


def compile_lex_spec(spec: LexSpec) -> dict[str, DFA]:
    """One minimized DFA per lexing function of a set-resolved spec."""
    return {fn.name: compile_function(fn, spec.alphabet) for fn in spec.functions}


def run_longest(dfa: DFA, stream: Stream[int]) -> Optional[Match]:
    """Longest-match execution; ``None`` when no prefix is accepted.

    Symbols outside the alphabet act as DEAD transitions.  A cell past the
    current position is forced only while the DFA can still move.
    """
    state = dfa.start
    live = dfa.live_out
    consumed: list[int] = []
    best: Optional[Match] = None
    if dfa.accept[state] is not None:
        best = Match(dfa.accept[state], [], stream)  # type: ignore[arg-type]
    cur = stream
    while live[state]:
        fr = front(cur)
        if not isinstance(fr, Cons):
            break
        state = dfa.step(state, fr.head)
        if state == DEAD:
            break
        consumed.append(fr.head)
        cur = fr.tail
        tag = dfa.accept[state]
        if tag is not None:
            best = Match(tag, list(consumed), cur)
    return best


def regex_oracle(re_: Regex, s: Sequence[int]) -> bool:
    """Membership of ``s`` in the language of ``re_`` by structural recursion.

    Deliberately naive; meant only as an independent check of the automata.
    """
    s = tuple(s)
    memo: dict[tuple[int, int, int], bool] = {}
    nodes: dict[int, Regex] = {}

    def m(node: Regex, i: int, j: int) -> bool:
        key = (id(node), i, j)
        nodes[id(node)] = node
        if key in memo:
            return memo[key]
        memo[key] = False
        if isinstance(node, Epsilon):
            r = i == j
        elif isinstance(node, Sym):
            r = j == i + 1 and s[i] == node.code
        elif isinstance(node, Range):
            r = j == i + 1 and node.lo <= s[i] <= node.hi
        elif isinstance(node, CharSet):
            r = j == i + 1 and s[i] in node.members
        elif isinstance(node, Alt):
            r = any(m(c, i, j) for c in node.children)
        elif isinstance(node, Seq):
            r = seq(node.children, i, j)
        elif isinstance(node, Star):
            r = i == j or plus(node.child, i, j)
        elif isinstance(node, Plus):
            r = plus(node.child, i, j)
        else:
            raise ValueError(f"cannot decide membership for {node!r}")
        memo[key] = r
        return r

    def seq(children: tuple[Regex, ...], i: int, j: int) -> bool:
        if len(children) == 1:
            return m(children[0], i, j)
        return any(m(children[0], i, k) and seq(children[1:], k, j) for k in range(i, j + 1))

    def plus(child: Regex, i: int, j: int) -> bool:
        # one copy of child, then zero or more further non-empty copies
        if m(child, i, j):
            return True
        return any(m(child, i, k) and plus(child, k, j) for k in range(i + 1, j))

    return m(re_, 0, len(s))


def dump_dfa(dfa: DFA) -> str:
    """Stable text form: one line per state, ``id tag sym->state ...``.

    Runs of consecutive symbols with the same target print as ``lo-hi->t``.
    """
    lines = [f"states {dfa.state_count} start {dfa.start} alphabet {dfa.alphabet}"]
    for s in range(dfa.state_count):
        row = dfa.row(s)
        parts = []
        sym = 0
        while sym < dfa.alphabet:
            t = row[sym]
            end = sym
            while end + 1 < dfa.alphabet and row[end + 1] == t:
                end += 1
            if t != DEAD:
                parts.append(f"{sym}->{t}" if end == sym else f"{sym}-{end}->{t}")
            sym = end + 1
        tag = "-" if dfa.accept[s] is None else str(dfa.accept[s])
        lines.append(" ".join([str(s), tag, *parts]))
    return "\n".join(lines) + "\n"
