from __future__ import annotations

import random
import re

import pytest
from hypothesis import assume, given, settings, strategies as st

from hygen.lr import (
    BY_PRECEDENCE,
    DEFAULT_RULE,
    EOF,
    REDUCE_REDUCE,
    SHIFT_REDUCE,
    Accept,
    ParseError,
    Reduce,
    Shift,
    Token,
    apply_defaults,
    build_lalr,
    build_tables,
    dump_lr,
    earley_accepts,
    simulate_parse,
    to_grammar,
)
from hygen.pipeline import load_parse_spec
from hygen.spec import parse_parse_spec
from hygen.stream import from_list

from helpers import random_expression, reference_eval, spec_text, strings_upto

ARITH_HEAD = """python
name P

terminal NUMBER of t
terminal PLUS
terminal TIMES
terminal LPAREN
terminal RPAREN
"""


def tables(text: str, yacc_default: bool = False):
    spec, _ = load_parse_spec(text)
    return build_tables(spec, yacc_default=yacc_default)


def tokenize(expr: str) -> list[Token]:
    names = {"+": "PLUS", "*": "TIMES", "(": "LPAREN", ")": "RPAREN"}
    out = []
    for num, op in re.findall(r"(\d+)|([+*()])", expr):
        out.append(Token("NUMBER", int(num)) if num else Token(names[op]))
    return out


ARITH_EVAL = {
    "number_atom": lambda x: x, "paren_atom": lambda x: x, "atom_factor": lambda x: x,
    "factor_term": lambda x: x, "number_term": lambda x: x, "paren_term": lambda x: x,
    "times_factor": lambda x, y: x * y, "plus_term": lambda x, y: x + y, "times_term": lambda x, y: x * y,
    "minus_term": lambda x, y: x - y, "pow_term": lambda x, y: x ** y, "less_term": lambda x, y: int(x < y),
}


def evaluate(t, g, tokens):
    return simulate_parse(t, g, from_list(tokens), lambda a, args: ARITH_EVAL[a](*args), lambda rest: "error")


# ---------------------------------------------------------------------------
# Tables

def test_calc_tables_are_deterministic():
    g, t = tables(spec_text("calc.grm"))
    assert t.conflicts == ()
    assert t.state_count == 12


def test_ambiguous_grammar_conflicts():
    g, t = tables(spec_text("arith.grm"))
    assert len(t.unresolved) == 4
    assert {c.kind for c in t.conflicts} == {SHIFT_REDUCE}
    assert {c.lookahead for c in t.conflicts} == {"PLUS", "TIMES"}
    for c in t.conflicts:
        assert sum(isinstance(a, Shift) for a in c.contenders) == 1
        assert sum(isinstance(a, Reduce) for a in c.contenders) == 1


def test_precedence_resolves_every_conflict():
    g, t = tables(spec_text("arith_prec.grm"))
    assert t.unresolved == []
    assert {c.resolution for c in t.conflicts} == {BY_PRECEDENCE}


def test_reduce_reduce_reported():
    text = ("python\nname P\nterminal X\n"
            "nonterminal E : t =\n  1:A => a\n  1:B => b\n"
            "nonterminal A : t =\n  X => xa\n"
            "nonterminal B : t =\n  X => xb\n"
            "start E\n")
    g, t = tables(text)
    (c,) = t.unresolved
    assert c.kind == REDUCE_REDUCE and c.lookahead == EOF
    assert sum(isinstance(a, Reduce) for a in c.contenders) >= 2
    _, settled = tables(text, yacc_default=True)
    assert settled.unresolved == [] and settled.conflicts[0].resolution == DEFAULT_RULE


@pytest.mark.parametrize("name", ["calc.grm", "arith.grm", "arith_prec.grm"])
def test_table_invariants(name):
    g, t = tables(spec_text(name))
    for s, row in enumerate(t.action):
        for la, act in row.items():
            if isinstance(act, Accept):
                assert la == EOF
            if isinstance(act, Shift):
                assert act.state < t.state_count
        assert all(v < t.state_count for v in t.goto[s].values())
    assert any(isinstance(act, Accept) for row in t.action for act in row.values())


def test_simulate_refuses_unresolved_tables():
    g, t = tables(spec_text("arith.grm"))
    with pytest.raises(ValueError, match="unresolved"):
        evaluate(t, g, tokenize("1+2"))


# ---------------------------------------------------------------------------
# Values

@pytest.mark.parametrize("name", ["calc.grm", "arith_prec.grm"])
def test_values_match_reference(name):
    g, t = tables(spec_text(name))
    rng = random.Random(name)
    for _ in range(1000):
        expr = random_expression(rng)
        assert evaluate(t, g, tokenize(expr)) == reference_eval(expr), expr


@pytest.mark.parametrize("decls,expr,value", [
    ("left PLUS\nleft TIMES", "2*3+4", 10),
    ("left TIMES\nleft PLUS", "2*3+4", 14),
    ("right PLUS\nright TIMES", "2*3+4*5", 26),
])
def test_precedence_levels(decls, expr, value):
    text = spec_text("arith.grm").replace("nonterminal Term", decls + "\n\nnonterminal Term", 1)
    g, t = tables(text)
    assert t.unresolved == []
    assert evaluate(t, g, tokenize(expr)) == value


GRAMMAR_OPS = ARITH_HEAD + """terminal MINUS
terminal POW
terminal LT

{decls}

nonterminal E : t =
  1:NUMBER => number_term
  1:E MINUS 2:E => minus_term
  1:E POW 2:E => pow_term
  1:E LT 2:E => less_term

start E
"""


def ops_tokens(expr: str) -> list[Token]:
    names = {"-": "MINUS", "^": "POW", "<": "LT"}
    return [Token("NUMBER", int(x)) if x.isdigit() else Token(names[x]) for x in re.findall(r"\d+|[-^<]", expr)]


def test_associativity():
    g, t = tables(GRAMMAR_OPS.format(decls="nonassoc LT\nleft MINUS\nright POW"))
    assert t.unresolved == []
    assert evaluate(t, g, ops_tokens("10-3-2")) == 5
    assert evaluate(t, g, ops_tokens("2^3^2")) == 512
    assert evaluate(t, g, ops_tokens("1<5-1")) == 1
    with pytest.raises(ParseError):
        evaluate(t, g, ops_tokens("1<2<3"))


def test_yacc_default_shifts():
    g, t = tables(spec_text("arith.grm"), yacc_default=True)
    assert t.unresolved == [] and {c.resolution for c in t.conflicts} == {DEFAULT_RULE}
    # shift wins everywhere: right grouping
    assert evaluate(t, g, tokenize("2*3+4")) == 14


def test_syntax_error_handler_sees_offending_token():
    g, t = tables(spec_text("calc.grm"))
    seen = []

    def on_error(rest):
        seen.append(list(rest))
        return "bad"

    with pytest.raises(ParseError) as info:
        simulate_parse(t, g, from_list(tokenize("1+*2")), lambda a, args: 0, on_error)
    assert info.value.value == "bad"
    assert seen == [[Token("TIMES"), Token("NUMBER", 2)]]


# ---------------------------------------------------------------------------
# Earley oracle

@pytest.mark.parametrize("name,expr,count", [
    ("arith.grm", "1+2+3", 2),
    ("arith.grm", "1+2*3+4", 5),
    ("calc.grm", "1+2+3", 1),
    ("calc.grm", "(1)", 1),
    ("calc.grm", "1+", 0),
])
def test_earley_derivation_counts(name, expr, count):
    g = to_grammar(parse_parse_spec(spec_text(name)))
    res = earley_accepts(g, [tok.name for tok in tokenize(expr)])
    assert res.accepted == (count > 0)
    assert res.derivations == count


def test_earley_cycle_hits_cap():
    text = "python\nname P\nterminal X\nnonterminal E : t =\n  1:E => same\n  X => x\nstart E\n"
    g = to_grammar(parse_parse_spec(text))
    assert earley_accepts(g, ["X"], cap=7) == (True, 7)


def test_calc_agrees_with_earley_on_valid_sentences():
    g, t = tables(spec_text("calc.grm"))
    rng = random.Random(11)
    for _ in range(300):
        toks = tokenize(random_expression(rng, depth=3))
        if toks and rng.random() < 0.5:  # mutate one position
            i = rng.randrange(len(toks))
            toks[i] = Token(rng.choice(["NUMBER", "PLUS", "TIMES", "LPAREN", "RPAREN"]), 1)
        try:
            evaluate(t, g, toks)
            lr = True
        except ParseError:
            lr = False
        assert lr == earley_accepts(g, [tok.name for tok in toks]).accepted


SYMBOLS = ["a", "b", "S", "A"]


@st.composite
def small_grammars(draw):
    lines = ["python", "name G", "terminal a", "terminal b"]
    k = 0
    for nt in ["S", "A"]:
        prods = draw(st.lists(st.lists(st.sampled_from(SYMBOLS), max_size=3), min_size=1, max_size=3))
        lines.append(f"nonterminal {nt} : t =")
        for rhs in prods:
            lines.append("  " + " ".join(rhs) + f" => p{k}")
            k += 1
    lines.append("start S")
    return "\n".join(lines) + "\n"


@given(small_grammars())
@settings(max_examples=150, deadline=None)
def test_lalr_agrees_with_earley_on_random_grammars(text):
    spec = parse_parse_spec(text)
    g = to_grammar(spec)
    t = build_lalr(g)
    assume(not t.conflicts)
    for sentence in strings_upto(["a", "b"], 5):
        try:
            simulate_parse(t, g, from_list([Token(s) for s in sentence]), lambda a, args: None, lambda r: None)
            lr = True
        except ParseError:
            lr = False
        assert lr == earley_accepts(g, sentence).accepted, sentence


@given(small_grammars())
@settings(max_examples=100, deadline=None)
def test_defaulted_tables_accept_only_sentences(text):
    """With conflicts settled by default the parser may reject more, never accept more."""
    g = to_grammar(parse_parse_spec(text))
    t = apply_defaults(build_lalr(g))

    for sentence in strings_upto(["a", "b"], 4):
        budget = [500]

        def bounded(action, args):
            # a unit cycle settled by default can reduce forever
            budget[0] -= 1
            if budget[0] < 0:
                raise ParseError("runaway")

        try:
            simulate_parse(t, g, from_list([Token(s) for s in sentence]), bounded, lambda r: None)
        except ParseError:
            continue
        assert earley_accepts(g, sentence).accepted, sentence


# ---------------------------------------------------------------------------
# Dump

def test_dump_lr_reports_conflicts():
    g, t = tables(spec_text("arith.grm"))
    text = dump_lr(t, g)
    assert text.startswith("rules\n  0: $start -> Term\n")
    assert "conflicts 4" in text
    assert "state 8, lookahead PLUS: shift-reduce conflict between" in text
    g2, t2 = tables(spec_text("arith.grm"))
    assert dump_lr(t2, g2) == text


def test_dump_lr_lists_kernels_with_lookaheads():
    g, t = tables(spec_text("calc.grm"))
    text = dump_lr(t, g)
    assert "state 0\n  $start -> . Term   [$eof]\n" in text
