"""Decision procedure, model checker and proof checker for multi-agent K
with the knowing-what operator Kv_i(phi, d)."""
from .formula import (
    BOT, TOP, And, Box, Formula, FormulaSyntaxError, Nabla, Not, Prop, SymbolError, Top,
    conj, diamond, disj, iff, implies, parse, size, subformulas, to_sugar, to_text,
)
from .proofs import ProofLine, load_proof, parse_proof, verify
from .semantics import Model, dump_model, evaluate, load_model, oracle_sat
from .tableau import Verdict, decide

__all__ = [
    "Formula", "Top", "Prop", "Not", "And", "Box", "Nabla", "TOP", "BOT",
    "conj", "diamond", "disj", "iff", "implies", "parse", "size", "subformulas",
    "to_sugar", "to_text", "FormulaSyntaxError", "SymbolError",
    "Model", "evaluate", "dump_model", "load_model", "oracle_sat",
    "Verdict", "decide", "ProofLine", "verify", "parse_proof", "load_proof",
]
