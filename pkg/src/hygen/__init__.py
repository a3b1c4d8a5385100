"""Lexer and parser generators that emit closed, parameterized modules.

Specs name their actions instead of embedding code.  The generated module
declares an abstract ``Arg`` interface with one method per action; user
code subclasses it, so the type checker sees every action in the place it
was written.
"""

__version__ = "0.1.0"
