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
# # Formulas and models
#
# Formulas are built from T, propositions, `~`, `&`, boxes `[i]` and the
# knowing-what operator `Kv i(phi, d)`: agent i knows the value of `d` in
# every successor where `phi` holds.  Everything else is shorthand.

# %%
from lkvr import Model, evaluate, parse, to_sugar, to_text
from lkvr.formula import depth, size, sub_plus
from lkvr.semantics import BULLET, CIRC

f = parse("<1>p -> Kv1(p | q, d)")
print(to_text(f))   # primitive form, as stored
print(to_sugar(f))  # readable form, parses back to the same tree
print("size", size(f), "depth", depth(f), "closure", len(sub_plus(f)))

# %% [markdown]
# ## A model with two successors
#
# The root `w` sees `t1` and `t2` through agent 1.  Both satisfy `p`, but
# they carry different values for `d`, so agent 1 does not know `d` among
# the `p`-worlds.

# %%
m = Model(
    worlds=("w", "t1", "t2"),
    root="w",
    relations={1: frozenset({("w", "t1"), ("w", "t2")})},
    valuation={"t1": frozenset({"p"}), "t2": frozenset({"p", "q"})},
    values={("d", "t1"): BULLET, ("d", "t2"): CIRC},
)
for text in ["Kv1(p, d)", "Kv1(q, d)", "Kv1(p & ~q, d)", "[1]p", "Kv2(p, d)"]:
    print(f"{text:16} {evaluate(m, 'w', parse(text))}")

# %% [markdown]
# Narrowing the condition to a single world restores knowledge, and an
# agent with no successors knows everything vacuously.

# %% [markdown]
# ## Looking for small models by brute force
#
# `oracle_sat` tries every model up to a size bound, in a fixed order.

# %%
from lkvr import oracle_sat

g = parse("Kv1(p, d) & <1>p & <1>~p")
small = oracle_sat(g, max_worlds=3, max_values=2)
print(small.worlds, dict(small.relations), dict(small.valuation))
print(evaluate(small, small.root, g))
