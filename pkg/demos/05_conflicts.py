# %% [markdown]
# Ambiguity and precedence
#
# `Term -> Term PLUS Term | Term TIMES Term` is ambiguous.  The table builder
# reports each conflict and generation is refused.

# %%
from pathlib import Path

from hygen.lr import build_tables, earley_accepts
from hygen.pipeline import generate_parser, load_parse_spec
from hygen.spec import SpecError

specs = Path(__file__).parent / "specs"
spec, _ = load_parse_spec((specs / "arith.grm").read_text())
g, t = build_tables(spec)
for c in t.conflicts:
    print(c.describe(g))

try:
    generate_parser((specs / "arith.grm").read_text())
except SpecError as exc:
    print(f"refused: {len(exc.diagnostics)} conflicts")

# %% [markdown]
# The Earley recognizer counts the parse trees the tables could not choose between.

# %%
print(earley_accepts(g, ["NUMBER", "PLUS", "NUMBER", "TIMES", "NUMBER"]))

# %% [markdown]
# Two precedence lines settle every conflict: `left PLUS` then `left TIMES`,
# later lines binding tighter.

# %%
prec, _ = load_parse_spec((specs / "arith_prec.grm").read_text())
g2, t2 = build_tables(prec)
for c in t2.conflicts:
    print(c.describe(g2))
module = generate_parser((specs / "arith_prec.grm").read_text())
print(module.filename, module.interface.parse_actions)
