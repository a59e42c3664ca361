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
# # Checking Hilbert proofs
#
# A proof is a numbered list of formulas.  Each step is an axiom (TAUT, K,
# DISTNSV, NSVBOT, NSVOR) or follows from earlier steps by MP, NEC or RE.

# %%
from pathlib import Path

from lkvr import Not, decide, load_proof, verify
from lkvr.proofs import format_proof

here = Path(__file__).parent if "__file__" in globals() else Path("demos")
proof = load_proof(here / "transitivity.proof")
print(verify(proof))
print(format_proof(proof[-3:]))

# %% [markdown]
# The last line says that if agent 1 considers `q` possible and knows `d`
# on both `p | q` and `q | r`, then it knows `d` on `p | r`.  The tableau
# agrees that its negation is unsatisfiable.

# %%
print(decide(Not(proof[-1].formula)).satisfiable)

# %% [markdown]
# ## Broken proofs are caught at the broken line

# %%
from lkvr.proofs import Justification, ProofLine

bad = list(proof)
bad[3] = ProofLine(4, bad[3].formula, Justification("NEC", (3,), 2))
print(verify(bad))
