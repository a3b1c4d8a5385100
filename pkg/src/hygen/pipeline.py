"""Spec text in, generated module out.

These wrappers chain reading, validation, automaton or table construction
and rendering.  Any error diagnostic raises :class:`~hygen.spec.SpecError`;
warnings are returned alongside the result.
"""

from __future__ import annotations

from .automata import compile_lex_spec
from .codegen import GeneratedModule, render_lexer, render_parser
from .lr import build_tables
from .spec import (
    ERROR,
    Diagnostic,
    LexSpec,
    ParseSpec,
    SpecError,
    has_errors,
    parse_lex_spec,
    parse_parse_spec,
    resolve_sets,
    validate_lex_spec,
    validate_parse_spec,
)


def load_lex_spec(text: str) -> tuple[LexSpec, list[Diagnostic]]:
    spec = resolve_sets(parse_lex_spec(text))
    diags = validate_lex_spec(spec)
    if has_errors(diags):
        raise SpecError(diags)
    return spec, diags


def load_parse_spec(text: str) -> tuple[ParseSpec, list[Diagnostic]]:
    spec = parse_parse_spec(text)
    diags = validate_parse_spec(spec)
    if has_errors(diags):
        raise SpecError(diags)
    return spec, diags


def generate_lexer(text: str) -> GeneratedModule:
    spec, _ = load_lex_spec(text)
    return render_lexer(spec, compile_lex_spec(spec))


def generate_parser(text: str, yacc_default: bool = False) -> GeneratedModule:
    """Raises :class:`SpecError` listing the conflicts if any remain unresolved."""
    spec, _ = load_parse_spec(text)
    g, t = build_tables(spec, yacc_default=yacc_default)
    if t.unresolved:
        raise SpecError([Diagnostic(ERROR, c.describe(g), 1, 1) for c in t.unresolved])
    return render_parser(spec, g, t)
