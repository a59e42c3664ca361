# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Deciding satisfiability with the tableau
#
# `decide` runs the tableau depth first.  When asked, it also returns a
# model read off the satisfiable part of the tree.

# %%
from lkvr import decide, evaluate, parse
from lkvr.semantics import token_text

for text in ["~Kv1(F, d)", "~Kv1(T, d)", "[1]p & ~[1](p | q)",
             "Kv1(p, d) & <1>p & <1>~p"]:
    v = decide(parse(text))
    print(f"{text:28} {'SAT' if v else 'UNSAT'}")

# %% [markdown]
# ## The model behind `~Kv1(T, d)`
#
# Two successors are forced, and they must disagree on `d`.  The tableau
# marks them with two fresh tokens.

# %%
f = parse("~Kv1(T, d)")
v = decide(f, want_model=True)
m = v.model
for w in m.successors(1, m.root):
    print(w, token_text(m.value("d", w)))
print(evaluate(m, m.root, f))

# %% [markdown]
# ## Axiom instances are valid
#
# The negation of every instance of the axiom schemas is unsatisfiable.

# %%
import random

from lkvr import Not
from lkvr.generate import SCHEMAS, axiom_instance

rng = random.Random(0)
for schema in SCHEMAS:
    verdicts = [decide(Not(axiom_instance(rng, schema))).satisfiable for _ in range(20)]
    print(schema, "all UNSAT" if not any(verdicts) else "counterexample!")

# %% [markdown]
# ## How big does the tree get?
#
# The statistics record depth and the longest run of unlabelled edges.
# Both stay well inside 2|f|^2 and 2|f|+1.

# %%
from lkvr import size
from lkvr.generate import random_formula

worst = 0.0
for _ in range(200):
    g = random_formula(rng, 9)
    st = decide(g).stats
    worst = max(worst, st.max_depth / (2 * size(g) ** 2))
print(f"largest depth / bound: {worst:.2f}")

# %% [markdown]
# The trace hook gets one line per node: rule, label size, depth and
# unlabelled chain length.

# %%
lines = []
decide(parse("<1>p & [1]q"), trace=lines.append)
print("\n".join(lines[:8]))
