"""Kripke models with value assignments, truth evaluation, and a bounded
satisfiability oracle.

A model fixes, per world, which propositions hold and which value token
each value name carries.  The value space is a token space: tokens coming
from tableau cells, the two distinguished tokens used to split a
knowing-what obligation, and plain integer defaults.
"""
from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .formula import (
    And, Box, Formula, Nabla, Not, Prop, Top, agents, canonical, parse,
    propositions, validate, value_names,
)

__all__ = [
    "CellToken", "Bullet", "Circ", "DefaultToken", "ValueToken", "BULLET", "CIRC",
    "DEFAULT", "Model", "ModelFormatError", "evaluate", "token_text", "parse_token",
    "model_to_json", "model_from_json", "dump_model", "load_model", "oracle_sat",
]


@dataclass(frozen=True, order=True)
class CellToken:
    """A set of formulas, stored as their sorted canonical texts."""
    members: tuple[str, ...] = ()

    @classmethod
    def of(cls, formulas: Iterable[Formula]) -> CellToken:
        return cls(tuple(sorted(f.key for f in formulas)))


@dataclass(frozen=True)
class Bullet:
    pass


@dataclass(frozen=True)
class Circ:
    pass


@dataclass(frozen=True, order=True)
class DefaultToken:
    n: int = 0


ValueToken = CellToken | Bullet | Circ | DefaultToken
BULLET = Bullet()
CIRC = Circ()
DEFAULT = DefaultToken(0)


def token_text(tok: ValueToken) -> str:
    match tok:
        case DefaultToken(n):
            return f"default:{n}"
        case Bullet():
            return "bullet"
        case Circ():
            return "circ"
        case CellToken(members):
            return "cell:{" + ";".join(members) + "}"
    raise TypeError(f"not a value token: {tok!r}")


def parse_token(text: str) -> ValueToken:
    if text == "bullet":
        return BULLET
    if text == "circ":
        return CIRC
    if text.startswith("default:"):
        try:
            return DefaultToken(int(text[len("default:"):]))
        except ValueError:
            pass
    elif text.startswith("cell:{") and text.endswith("}"):
        body = text[len("cell:{"):-1]
        if not body:
            return CellToken()
        members = [parse(m).key for m in body.split(";")]
        return CellToken(tuple(sorted(members)))
    raise ModelFormatError(f"bad value token {text!r}")


class ModelFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Model:
    """A finite pointed model.

    ``values`` may be partial; any missing (name, world) entry reads as
    ``DefaultToken(0)``, which keeps the assignment total.
    """
    worlds: tuple[str, ...]
    root: str
    relations: Mapping[int, frozenset[tuple[str, str]]] = field(default_factory=dict)
    valuation: Mapping[str, frozenset[str]] = field(default_factory=dict)
    values: Mapping[tuple[str, str], ValueToken] = field(default_factory=dict)

    def __post_init__(self):
        ws = set(self.worlds)
        if len(ws) != len(self.worlds):
            raise ModelFormatError("duplicate world ids")
        if self.root not in ws:
            raise ModelFormatError(f"root {self.root!r} is not a world")
        for agent, pairs in self.relations.items():
            for u, v in pairs:
                if u not in ws or v not in ws:
                    raise ModelFormatError(f"edge {u}->{v} of agent {agent} leaves the model")
        for w in self.valuation:
            if w not in ws:
                raise ModelFormatError(f"valuation for unknown world {w!r}")
        for (_, w) in self.values:
            if w not in ws:
                raise ModelFormatError(f"value for unknown world {w!r}")
        succ: dict[tuple[int, str], list[str]] = {}
        for agent, pairs in self.relations.items():
            for u, v in sorted(pairs):
                succ.setdefault((agent, u), []).append(v)
        object.__setattr__(self, "_succ", succ)

    def successors(self, agent: int, w: str) -> list[str]:
        return self._succ.get((agent, w), [])

    def value(self, name: str, w: str) -> ValueToken:
        return self.values.get((name, w), DEFAULT)

    def holds(self, prop: str, w: str) -> bool:
        return prop in self.valuation.get(w, ())


def evaluate(m: Model, w: str, f: Formula) -> bool:
    """Truth of ``f`` at world ``w`` of ``m``."""
    if w not in m.worlds:
        raise KeyError(f"unknown world {w!r}")
    memo: dict[tuple[str, Formula], bool] = {}

    def ev(w: str, f: Formula) -> bool:
        k = (w, f)
        if k in memo:
            return memo[k]
        match f:
            case Top():
                r = True
            case Prop(p):
                r = m.holds(p, w)
            case Not(c):
                r = not ev(w, c)
            case And(a, b):
                r = ev(w, a) and ev(w, b)
            case Box(i, c):
                r = all(ev(t, c) for t in m.successors(i, w))
            case Nabla(i, c, d):
                # all successors satisfying c agree on the value of d
                seen = {m.value(d, t) for t in m.successors(i, w) if ev(t, c)}
                r = len(seen) <= 1
            case _:
                raise TypeError(f"not a formula: {f!r}")
        memo[k] = r
        return r

    return ev(w, f)


# ---------------------------------------------------------------------------
# model files

def model_to_json(m: Model) -> dict:
    return {
        "worlds": list(m.worlds),
        "root": m.root,
        "relations": {
            str(a): [list(p) for p in sorted(m.relations[a])]
            for a in sorted(m.relations)
        },
        "valuation": {w: sorted(m.valuation.get(w, ())) for w in m.worlds},
        "values": {
            w: {d: token_text(t) for (d, u), t in sorted(m.values.items()) if u == w}
            for w in m.worlds
        },
    }


def model_from_json(data: Mapping) -> Model:
    try:
        worlds = tuple(str(w) for w in data["worlds"])
        root = str(data["root"])
        relations = {}
        for a, pairs in data.get("relations", {}).items():
            agent = int(a)
            if agent < 1:
                raise ModelFormatError(f"agent ids start at 1, got {a!r}")
            relations[agent] = frozenset((str(u), str(v)) for u, v in pairs)
        valuation = {str(w): frozenset(ps) for w, ps in data.get("valuation", {}).items()}
        values = {}
        for w, row in data.get("values", {}).items():
            for d, tok in row.items():
                values[(str(d), str(w))] = parse_token(tok)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ModelFormatError):
            raise
        raise ModelFormatError(f"malformed model: {exc}") from exc
    return Model(worlds, root, relations, valuation, values)


def dump_model(m: Model, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(model_to_json(m), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path: str | os.PathLike) -> Model:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"not JSON: {exc}") from exc
    return model_from_json(data)


# ---------------------------------------------------------------------------
# bounded oracle
#
# Candidate models over n worlds w0..w{n-1} (root w0) are strings over
# three blocks of slots: relation bits (agent, u, v), valuation bits
# (prop, w), and value slots (name, w) ranging over 0..max_values-1.
# Candidates are ordered lexicographically on that slot vector, n ascending,
# and the oracle returns the first one satisfying f at the root.

def _layout(f: Formula, n: int):
    ws = [f"w{k}" for k in range(n)]
    rel = [(a, u, v) for a in sorted(agents(f)) for u in ws for v in ws]
    val = [(p, w) for p in sorted(propositions(f)) for w in ws]
    vals = [(d, w) for d in sorted(value_names(f)) for w in ws]
    return ws, rel, val, vals


def _build(ws, rel, val, vals, rbits, vbits, choice) -> Model:
    relations: dict[int, set] = {}
    for (a, u, v), b in zip(rel, rbits):
        relations.setdefault(a, set())
        if b:
            relations[a].add((u, v))
    valuation: dict[str, set] = {w: set() for w in ws}
    for (p, w), b in zip(val, vbits):
        if b:
            valuation[w].add(p)
    values = {(d, w): DefaultToken(k) for (d, w), k in zip(vals, choice)}
    return Model(
        tuple(ws), ws[0],
        {a: frozenset(s) for a, s in relations.items()},
        {w: frozenset(s) for w, s in valuation.items()},
        values,
    )


def _enumerate(f: Formula, n: int, max_values: int) -> Model | None:
    ws, rel, val, vals = _layout(f, n)
    for rbits in itertools.product((0, 1), repeat=len(rel)):
        for vbits in itertools.product((0, 1), repeat=len(val)):
            for choice in itertools.product(range(max_values), repeat=len(vals)):
                m = _build(ws, rel, val, vals, rbits, vbits, choice)
                if evaluate(m, ws[0], f):
                    return m
    return None


class _Encoding:
    """CNF for "f holds at w0 of some n-world candidate"."""

    def __init__(self, f: Formula, n: int, max_values: int):
        self.ws, self.rel, self.val, self.vals = _layout(f, n)
        self.k = max_values
        self.nvars = 0
        self.clauses: list[list[int]] = []
        self.rvar = {key: self.new() for key in self.rel}
        self.pvar = {key: self.new() for key in self.val}
        self.xvar = {key: [self.new() for _ in range(max_values)] for key in self.vals}
        for slots in self.xvar.values():
            self.clauses.append(list(slots))
            for a, b in itertools.combinations(slots, 2):
                self.clauses.append([-a, -b])
        self.tvar: dict[tuple[Formula, str], int] = {}
        self.diffvar: dict[tuple[str, str, str], int] = {}
        self.clauses.append([self.truth(f, self.ws[0])])

    def new(self) -> int:
        self.nvars += 1
        return self.nvars

    def define_and(self, lits: list[int]) -> int:
        x = self.new()
        for l in lits:
            self.clauses.append([-x, l])
        self.clauses.append([x] + [-l for l in lits])
        return x

    def define_or(self, lits: list[int]) -> int:
        return -self.define_and([-l for l in lits])

    def differ(self, d: str, u: str, v: str) -> int:
        key = (d, u, v) if u < v else (d, v, u)
        if key not in self.diffvar:
            xu, xv = self.xvar[(d, key[1])], self.xvar[(d, key[2])]
            self.diffvar[key] = -self.define_or(
                [self.define_and([a, b]) for a, b in zip(xu, xv)])
        return self.diffvar[key]

    def truth(self, f: Formula, w: str) -> int:
        key = (f, w)
        if key in self.tvar:
            return self.tvar[key]
        match f:
            case Top():
                lit = self.define_and([])
            case Prop(p):
                lit = self.pvar[(p, w)]
            case Not(c):
                lit = -self.truth(c, w)
            case And(a, b):
                lit = self.define_and([self.truth(a, w), self.truth(b, w)])
            case Box(i, c):
                lit = self.define_and([
                    self.define_or([-self.rvar[(i, w, t)], self.truth(c, t)])
                    for t in self.ws])
            case Nabla(i, c, d):
                bad = []
                for t1, t2 in itertools.combinations(self.ws, 2):
                    bad.append(self.define_and([
                        self.rvar[(i, w, t1)], self.rvar[(i, w, t2)],
                        self.truth(c, t1), self.truth(c, t2), self.differ(d, t1, t2)]))
                lit = -self.define_or(bad)
        self.tvar[key] = lit
        return lit


def _solve_sat(f: Formula, n: int, max_values: int) -> Model | None:
    from pysat.solvers import Solver

    enc = _Encoding(f, n, max_values)
    with Solver(name="minisat22", bootstrap_with=enc.clauses) as solver:
        if not solver.solve():
            return None
        # Fix slots greedily in canonical order, smallest choice first; this
        # yields the lexicographically least satisfying slot vector.
        fixed: list[int] = []
        rbits = []
        for key in enc.rel:
            v = enc.rvar[key]
            b = 0 if solver.solve(assumptions=fixed + [-v]) else 1
            fixed.append(v if b else -v)
            rbits.append(b)
        vbits = []
        for key in enc.val:
            v = enc.pvar[key]
            b = 0 if solver.solve(assumptions=fixed + [-v]) else 1
            fixed.append(v if b else -v)
            vbits.append(b)
        choice = []
        for key in enc.vals:
            slots = enc.xvar[key]
            for k, v in enumerate(slots):
                if k == len(slots) - 1 or solver.solve(assumptions=fixed + [v]):
                    fixed.append(v)
                    choice.append(k)
                    break
    return _build(enc.ws, enc.rel, enc.val, enc.vals, rbits, vbits, choice)


def oracle_sat(f: Formula, max_worlds: int, max_values: int,
               method: str = "sat") -> Model | None:
    """First model (in canonical candidate order) of at most ``max_worlds``
    worlds and ``max_values`` values that satisfies ``f`` at its root.

    ``method="enumerate"`` walks the candidates one by one; ``"sat"`` finds
    the same first candidate through a SAT encoding.  ``None`` means no
    small model exists, not that ``f`` is unsatisfiable.
    """
    if max_worlds < 1 or max_values < 1:
        raise ValueError("max_worlds and max_values must be at least 1")
    validate(f)
    search = {"sat": _solve_sat, "enumerate": _enumerate}[method]
    for n in range(1, max_worlds + 1):
        m = search(f, n, max_values)
        if m is not None:
            return m
    return None
