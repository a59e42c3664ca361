"""Checker for Hilbert-style derivations.

Axioms: every propositional tautology (TAUT), K, DISTNSV, NSVBOT and
NSVOR.  Rules: modus ponens (MP), necessitation (NEC) and replacement of
equivalents (RE).  Schema matching and rule checks run on primitive trees,
so sugar in a proof file is irrelevant.

Proof files hold one step per line::

    # comments and blank lines are skipped
    1. p -> p ; TAUT
    2. [1](p -> p) ; NEC 1 agent=1
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from pysat.solvers import Solver

from .formula import (
    And, Box, Formula, Nabla, Not, Prop, Top, conj, diamond, disj, iff, implies, parse,
    to_sugar,
)
from .generate import distnsv_axiom, k_axiom, nsvbot_axiom, nsvor_axiom

__all__ = [
    "Justification", "ProofLine", "VerifyResult", "ProofFormatError", "RULES",
    "verify", "is_tautology", "match_schema", "parse_proof", "load_proof",
    "format_proof", "nsv_transitivity_proof",
]

AXIOMS = ("TAUT", "K", "DISTNSV", "NSVBOT", "NSVOR")
RULES = AXIOMS + ("MP", "NEC", "RE")
_ALIASES = {"AXK": "K"}


@dataclass(frozen=True)
class Justification:
    rule: str
    refs: tuple[int, ...] = ()
    agent: int | None = None

    def __str__(self):
        parts = [self.rule, *map(str, self.refs)]
        if self.agent is not None:
            parts.append(f"agent={self.agent}")
        return " ".join(parts)


@dataclass(frozen=True)
class ProofLine:
    index: int
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    line: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "verified" if self.ok else f"line {self.line}: {self.reason}"


# ---------------------------------------------------------------------------
# tautologies

def _skeleton(f: Formula, solver: Solver, atoms: dict, top: int) -> int:
    """Tseitin literal for f with modal subformulas as opaque atoms."""
    match f:
        case Top():
            return top
        case Not(c):
            return -_skeleton(c, solver, atoms, top)
        case And(a, b):
            la = _skeleton(a, solver, atoms, top)
            lb = _skeleton(b, solver, atoms, top)
            v = atoms["#next"] = atoms["#next"] + 1
            solver.add_clause([-v, la])
            solver.add_clause([-v, lb])
            solver.add_clause([v, -la, -lb])
            return v
    # Prop, Box, Nabla: identical formulas share one atom
    if f not in atoms:
        atoms[f] = atoms["#next"] = atoms["#next"] + 1
    return atoms[f]


def is_tautology(f: Formula) -> bool:
    """True iff f is valid when every proposition and every maximal
    [i]/Kv subformula is read as a free boolean atom."""
    with Solver(name="minisat22") as solver:
        atoms: dict = {"#next": 1}
        solver.add_clause([1])  # variable 1 is T
        root = _skeleton(f, solver, atoms, 1)
        solver.add_clause([-root])
        return not solver.solve()


# ---------------------------------------------------------------------------
# schemas
#
# Patterns are ordinary formulas with placeholders: propositions and value
# names starting with "?" and negative agent ids.

_P, _Q = Prop("?phi"), Prop("?psi")
SCHEMA_PATTERNS = {
    "K": k_axiom(-1, _P, _Q),
    "DISTNSV": distnsv_axiom(-1, _P, _Q, "?d"),
    "NSVBOT": nsvbot_axiom(-1, "?d"),
    "NSVOR": nsvor_axiom(-1, _P, _Q, "?d"),
}


def _bind(env: dict, key, value) -> bool:
    return env.setdefault(key, value) == value


def _match(pat: Formula, f: Formula, env: dict) -> bool:
    if isinstance(pat, Prop) and pat.name.startswith("?"):
        return _bind(env, pat.name, f)
    if type(pat) is not type(f):
        return False
    match pat:
        case Top():
            return True
        case Prop(name):
            return name == f.name
        case Not(c):
            return _match(c, f.child, env)
        case And(a, b):
            return _match(a, f.left, env) and _match(b, f.right, env)
        case Box(i, c):
            ok = _bind(env, ("agent", i), f.agent) if i < 0 else i == f.agent
            return ok and _match(c, f.child, env)
        case Nabla(i, c, v):
            ok = _bind(env, ("agent", i), f.agent) if i < 0 else i == f.agent
            ok = ok and (_bind(env, v, f.value) if v.startswith("?") else v == f.value)
            return ok and _match(c, f.child, env)
    return False


def match_schema(schema: str, f: Formula) -> dict | None:
    """Placeholder bindings if f is an instance of the schema, else None."""
    env: dict = {}
    return env if _match(SCHEMA_PATTERNS[schema], f, env) else None


# ---------------------------------------------------------------------------
# rules

_IFF = iff(_P, _Q)


def _split_iff(f: Formula) -> tuple[Formula, Formula] | None:
    env: dict = {}
    return (env["?phi"], env["?psi"]) if _match(_IFF, f, env) else None


def _rewrites(a: Formula, b: Formula, old: Formula, new: Formula) -> set[bool]:
    """Ways b arises from a by replacing occurrences of old with new:
    False for no replacement, True for at least one."""
    out = set()
    if a == b:
        out.add(False)
    if a == old and b == new:
        out.add(True)
    if type(a) is not type(b) or True in out:
        return out
    match a:
        case Not(c):
            out |= _rewrites(c, b.child, old, new)
        case Box(i, c) if i == b.agent:
            out |= _rewrites(c, b.child, old, new)
        case Nabla(i, c, v) if i == b.agent and v == b.value:
            out |= _rewrites(c, b.child, old, new)
        case And(l, r):
            left = _rewrites(l, b.left, old, new)
            if left:
                right = _rewrites(r, b.right, old, new)
                out |= {x or y for x in left for y in right}
    return out


def _check(line: ProofLine, seen: dict[int, Formula]) -> str | None:
    """None if the line is justified, else the reason it is not."""
    j = line.justification
    f = line.formula
    arity = {"MP": 2, "NEC": 1, "RE": 1}.get(j.rule, 0)
    if j.rule not in RULES:
        return f"unknown rule {j.rule!r}"
    if len(j.refs) != arity:
        return f"{j.rule} takes {arity} line reference(s), got {len(j.refs)}"
    if (j.agent is not None) != (j.rule == "NEC"):
        return "agent= belongs to NEC only" if j.agent is not None else "NEC needs agent="
    for r in j.refs:
        if r not in seen:
            return f"reference {r} is not an earlier line"
    prem = [seen[r] for r in j.refs]
    if j.rule == "TAUT":
        return None if is_tautology(f) else "not a tautology"
    if j.rule in SCHEMA_PATTERNS:
        return None if match_schema(j.rule, f) is not None else f"not an instance of {j.rule}"
    if j.rule == "MP":
        if prem[1] == implies(prem[0], f):
            return None
        return f"line {j.refs[1]} is not line {j.refs[0]} -> this formula"
    if j.rule == "NEC":
        if j.agent < 1:
            return f"bad agent id {j.agent}"
        return None if f == Box(j.agent, prem[0]) else f"not [{j.agent}] of line {j.refs[0]}"
    # RE
    eq = _split_iff(prem[0])
    if eq is None:
        return f"line {j.refs[0]} is not a biconditional"
    goal = _split_iff(f)
    if goal is None:
        return "not a biconditional"
    if True not in _rewrites(goal[0], goal[1], *eq):
        return f"right side is not the left side with line {j.refs[0]} substituted"
    return None


def verify(proof: Iterable[ProofLine]) -> VerifyResult:
    """Check each line in order; report the first one that fails."""
    seen: dict[int, Formula] = {}
    last = 0
    for line in proof:
        if line.index <= last:
            return VerifyResult(False, line.index, f"line numbers must increase (after {last})")
        reason = _check(line, seen)
        if reason:
            return VerifyResult(False, line.index, reason)
        seen[line.index] = line.formula
        last = line.index
    return VerifyResult(True)


# ---------------------------------------------------------------------------
# proof files

class ProofFormatError(ValueError):
    def __init__(self, message: str, lineno: int):
        super().__init__(f"proof file line {lineno}: {message}")
        self.lineno = lineno


_LINE_RE = re.compile(r"\s*(\d+)\s*\.\s*(.*?)\s*;\s*([A-Za-z]+)\s*(.*?)\s*\Z")


def _justification(rule: str, rest: str, lineno: int) -> Justification:
    rule = rule.upper()
    rule = _ALIASES.get(rule, rule)
    if rule not in RULES:
        raise ProofFormatError(f"unknown rule {rule!r}", lineno)
    refs, agent = [], None
    for tok in rest.replace(",", " ").split():
        if tok.isdigit():
            refs.append(int(tok))
        elif tok.startswith("agent=") and tok[6:].isdigit():
            agent = int(tok[6:])
        else:
            raise ProofFormatError(f"bad reference {tok!r}", lineno)
    return Justification(rule, tuple(refs), agent)


def parse_proof(text: str) -> list[ProofLine]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        m = _LINE_RE.match(body)
        if not m:
            raise ProofFormatError("expected '<n>. <formula> ; <RULE> [refs]'", lineno)
        index, ftext, rule, rest = m.groups()
        try:
            formula = parse(ftext)
        except ValueError as e:
            raise ProofFormatError(str(e), lineno) from e
        out.append(ProofLine(int(index), formula, _justification(rule, rest, lineno)))
    return out


def load_proof(path) -> list[ProofLine]:
    with open(path, encoding="utf-8") as fh:
        return parse_proof(fh.read())


def format_proof(proof: Iterable[ProofLine]) -> str:
    return "".join(f"{l.index}. {to_sugar(l.formula)} ; {l.justification}\n" for l in proof)


# ---------------------------------------------------------------------------
# a worked derivation

def nsv_transitivity_proof(phi: Formula = Prop("p"), psi: Formula = Prop("q"),
                           chi: Formula = Prop("r"), agent: int = 1,
                           d: str = "d") -> list[ProofLine]:
    """Derive  <i>psi & Kv_i(phi|psi, d) & Kv_i(psi|chi, d) -> Kv_i(phi|chi, d).

    The step from  psi -> C  to  <i>psi -> <i>C  is spelled out with
    contraposition, NEC, K and MP, as the system has no derived K rule.
    """
    i = agent
    a, b = disj(phi, psi), disj(psi, chi)
    c = And(a, b)
    ab = disj(a, b)
    step_k = implies(diamond(i, psi), diamond(i, c))
    nsvor = nsvor_axiom(i, a, b, d)
    dist = implies(Nabla(i, ab, d), Nabla(i, disj(phi, chi), d))
    goal = implies(conj(diamond(i, psi), Nabla(i, a, d), Nabla(i, b, d)),
                   Nabla(i, disj(phi, chi), d))
    contra = implies(Not(c), Not(psi))
    box_contra = Box(i, contra)
    k_step = implies(Box(i, Not(c)), Box(i, Not(psi)))
    steps = [
        (implies(psi, c), "TAUT"),
        (implies(implies(psi, c), contra), "TAUT"),
        (contra, "MP 1 2"),
        (box_contra, f"NEC 3 agent={i}"),
        (k_axiom(i, Not(c), Not(psi)), "K"),
        (k_step, "MP 4 5"),
        (implies(k_step, step_k), "TAUT"),
        (step_k, "MP 6 7"),
        (nsvor, "NSVOR"),
        (implies(disj(phi, chi), ab), "TAUT"),
        (Box(i, implies(disj(phi, chi), ab)), f"NEC 10 agent={i}"),
        (distnsv_axiom(i, disj(phi, chi), ab, d), "DISTNSV"),
        (dist, "MP 11 12"),
        (implies(step_k, implies(nsvor, implies(dist, goal))), "TAUT"),
        (implies(nsvor, implies(dist, goal)), "MP 8 14"),
        (implies(dist, goal), "MP 9 15"),
        (goal, "MP 13 16"),
    ]
    out = []
    for n, (f, just) in enumerate(steps, 1):
        rule, _, rest = just.partition(" ")
        out.append(ProofLine(n, f, _justification(rule, rest, n)))
    return out
