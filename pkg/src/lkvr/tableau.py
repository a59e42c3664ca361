"""Tableau decision procedure for K with the knowing-what operator.

The tableau tree has two kinds of nodes.  Ordinary nodes carry a label set
and grow it by propositional decomposition (rule a) and by deciding every
subformula (rule b).  Once a label is a fully expanded propositional
tableau, it gets one child per admissible *state* (rule c): extra
information fixing how the knowing-what guards of each agent split the
values of their successors.  A state node then gets agent-labelled
successors (rule d), one per diamond-like obligation, two per negated
knowing-what.

Marking (rule e): ordinary nodes are satisfiable when some child is, state
nodes when all children are, leaves when not blatantly inconsistent.

The search is depth first over an explicit stack of generator frames;
children are regenerated from the parent label on demand and never stored
together, so memory stays polynomial in the input.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Iterator, Mapping

from .formula import (
    BOT, And, Box, Formula, Nabla, Not, Prop, canonical, size, subformulas,
    value_names,
)
from .semantics import BULLET, CIRC, DEFAULT, CellToken, Model, ValueToken

__all__ = [
    "ContractViolation", "StateInfo", "Stats", "Verdict",
    "is_blatantly_inconsistent", "is_propositional_tableau", "is_fully_expanded",
    "expand_propositional", "expand_full", "set_partitions", "g_options",
    "nabla_guards", "enumerate_states", "is_state", "state_count_bound",
    "labeled_successors", "decide",
]

Label = frozenset
EMPTY: frozenset = frozenset()


class ContractViolation(ValueError):
    pass


# ---------------------------------------------------------------------------
# propositional stage

def is_blatantly_inconsistent(x: Iterable[Formula]) -> bool:
    """Some formula occurs with its negation, or ~T occurs."""
    x = x if isinstance(x, (set, frozenset)) else frozenset(x)
    if BOT in x:
        return True
    return any(isinstance(f, Not) and f.child in x for f in x)


def _violation(x: frozenset) -> Formula | None:
    for f in canonical(x):
        match f:
            case Not(Not(c)) if c not in x:
                return f
            case Not(And(a, b)) if Not(a) not in x and Not(b) not in x:
                return f
            case And(a, b) if a not in x or b not in x:
                return f
    return None


def _undetermined(x: frozenset, closure: Iterable[Formula] | None = None) -> Formula | None:
    pool = subformulas(x) if closure is None else closure
    for f in canonical(pool):
        if f not in x and Not(f) not in x:
            return f
    return None


def is_propositional_tableau(x: Iterable[Formula]) -> bool:
    x = frozenset(x)
    return not is_blatantly_inconsistent(x) and _violation(x) is None


def is_fully_expanded(x: Iterable[Formula]) -> bool:
    x = frozenset(x)
    return is_propositional_tableau(x) and _undetermined(x) is None


def _rule_a(x: frozenset) -> tuple[str, list[frozenset]]:
    return _decompose(x, _violation(x))


def _decompose(x: frozenset, psi: Formula | None) -> tuple[str, list[frozenset]]:
    match psi:
        case Not(Not(c)):
            return "a.i", [x | {c}]
        case Not(And(a, b)):
            return "a.ii", [x | {Not(a)}, x | {Not(b)}]
        case And(a, b):
            return "a.iii", [x | {a, b}]
    raise ContractViolation("label is already a propositional tableau")


def expand_propositional(x: Iterable[Formula]) -> list[frozenset]:
    """Successor labels for the canonically least propositional violation."""
    x = frozenset(x)
    if is_blatantly_inconsistent(x):
        raise ContractViolation("label is blatantly inconsistent")
    return _rule_a(x)[1]


def expand_full(x: Iterable[Formula], closure: Iterable[Formula] | None = None) -> list[frozenset]:
    """Branch on the canonically least undetermined subformula.

    ``closure`` overrides the candidate pool (default: the subformulas of
    ``x``).
    """
    x = frozenset(x)
    if not is_propositional_tableau(x):
        raise ContractViolation("label is not a propositional tableau")
    phi = _undetermined(x, closure)
    if phi is None:
        raise ContractViolation("label is already fully expanded")
    return [x | {phi}, x | {Not(phi)}]


# ---------------------------------------------------------------------------
# states

def set_partitions(items: list) -> Iterator[list[list]]:
    """All partitions of ``items`` into nonempty blocks, in a fixed order."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]
        yield [[first]] + part


def g_options(guards: Iterable[Formula]) -> list[tuple[frozenset, tuple[frozenset, ...]]]:
    """Every (A, B) for a guard set G: A is the part of G never realised,
    B partitions the rest into value-sharing cells, with the empty cell
    always present."""
    items = canonical(guards)
    out = []
    for mask in range(1 << len(items)):
        a = frozenset(f for k, f in enumerate(items) if mask >> k & 1)
        rest = [f for k, f in enumerate(items) if not mask >> k & 1]
        for part in set_partitions(rest):
            out.append((a, (EMPTY,) + tuple(frozenset(b) for b in part)))
    return out


def nabla_guards(x: Iterable[Formula]) -> dict[tuple[int, str], frozenset]:
    """G_X(i, d) for every (i, d) in E_X."""
    out: dict[tuple[int, str], set] = {}
    for f in x:
        if isinstance(f, Nabla):
            out.setdefault((f.agent, f.value), set()).add(f.child)
    return {k: frozenset(v) for k, v in sorted(out.items())}


def _box_obligations(x) -> list[tuple[int, Formula]]:
    return [(f.child.agent, f.child.child) for f in canonical(x)
            if isinstance(f, Not) and isinstance(f.child, Box)]


def _nabla_obligations(x) -> list[tuple[int, Formula, str]]:
    return [(f.child.agent, f.child.child, f.child.value) for f in canonical(x)
            if isinstance(f, Not) and isinstance(f.child, Nabla)]


@dataclass(frozen=True)
class StateInfo:
    """Extra information (g, h, ha, hb) turning a label into a state.

    g maps (agent, value name) to (A, B); h maps (agent, phi) for each
    ~[agent]phi to a cell choice per value name; ha/hb map
    (agent, phi, d0) for each ~Kv(phi, d0) to the cell choices of the
    two witnesses.
    """
    g: Mapping[tuple[int, str], tuple[frozenset, tuple[frozenset, ...]]] = field(default_factory=dict)
    h: Mapping[tuple[int, Formula], Mapping[str, frozenset]] = field(default_factory=dict)
    ha: Mapping[tuple[int, Formula, str], Mapping[str, frozenset]] = field(default_factory=dict)
    hb: Mapping[tuple[int, Formula, str], Mapping[str, frozenset]] = field(default_factory=dict)


def _agent_names(guards, i) -> list[str]:
    return sorted(d for (j, d) in guards if j == i)


def _cell_maps(g, i: int, dom: list[str]) -> list[dict[str, frozenset]]:
    choices = [g[(i, d)][1] if (i, d) in g else (EMPTY,) for d in dom]
    return [dict(zip(dom, combo)) for combo in itertools.product(*choices)]


def _pair_ok(a, b, d0) -> bool:
    return a[d0] != b[d0] or (not a[d0] and not b[d0])


def enumerate_states(x: Iterable[Formula]) -> Iterator[StateInfo]:
    """Stream every StateInfo making ``x`` a state, each once, in a fixed
    order (lexicographic over g, then h, then the (ha, hb) pairs)."""
    x = frozenset(x)
    guards = nabla_guards(x)
    gkeys = list(guards)
    boxes = _box_obligations(x)
    nablas = _nabla_obligations(x)
    for gchoice in itertools.product(*(g_options(guards[k]) for k in gkeys)):
        g = dict(zip(gkeys, gchoice))
        hopts = [_cell_maps(g, i, _agent_names(guards, i)) for i, _ in boxes]
        popts = []
        for i, _, d0 in nablas:
            maps = _cell_maps(g, i, sorted(set(_agent_names(guards, i)) | {d0}))
            popts.append([(a, b) for a in maps for b in maps if _pair_ok(a, b, d0)])
        for hchoice in itertools.product(*hopts):
            h = {(i, phi): m for (i, phi), m in zip(boxes, hchoice)}
            for pchoice in itertools.product(*popts):
                ha = {k: p[0] for k, p in zip(nablas, pchoice)}
                hb = {k: p[1] for k, p in zip(nablas, pchoice)}
                yield StateInfo(g, h, ha, hb)


def state_count_bound(x: Iterable[Formula]) -> int:
    n = len(frozenset(x))
    return n ** (n * n + 3 * n)


def is_state(x: Iterable[Formula], s: StateInfo) -> bool:
    """Check every clause of the state definition directly."""
    x = frozenset(x)
    if not is_fully_expanded(x):
        return False
    guards = nabla_guards(x)
    if set(s.g) != set(guards):
        return False
    for k, gset in guards.items():
        a, b = s.g[k]
        union = frozenset().union(*b) if b else EMPTY
        if not a <= gset or a | union != gset or a & union:
            return False
        if EMPTY not in b or len(set(b)) != len(b):
            return False
        if sum(len(c) for c in b) != len(union):
            return False
    if set(s.h) != set(_box_obligations(x)):
        return False
    for (i, _), m in s.h.items():
        names = _agent_names(guards, i)
        if sorted(m) != names or any(m[d] not in s.g[(i, d)][1] for d in names):
            return False
    nablas = set(_nabla_obligations(x))
    if set(s.ha) != nablas or set(s.hb) != nablas:
        return False
    for key in nablas:
        i, _, d0 = key
        names = _agent_names(guards, i)
        for m in (s.ha[key], s.hb[key]):
            if set(m) != set(names) | {d0}:
                return False
            for d, cell in m.items():
                if d in names:
                    if cell not in s.g[(i, d)][1]:
                        return False
                elif cell:
                    return False
        if not _pair_ok(s.ha[key], s.hb[key], d0):
            return False
    return True


# ---------------------------------------------------------------------------
# labelled successors

def _unboxed(x, i) -> set:
    return {f.child for f in x if isinstance(f, Box) and f.agent == i}


def _successor_label(x, g, guards, i, head, cells) -> frozenset:
    out = {head} | _unboxed(x, i)
    for d in _agent_names(guards, i):
        a, b = g[(i, d)]
        realised = frozenset().union(*b)
        out.update(Not(f) for f in a)
        out.update(Not(f) for f in realised - cells[d])
    return frozenset(out)


def _tokens(cells: Mapping[str, frozenset]) -> dict[str, ValueToken]:
    return {d: CellToken.of(c) for d, c in sorted(cells.items())}


def _successor_specs(x, s: StateInfo):
    """(obligation key, agent, label, constraints) for rule d, in order:
    box obligations, then both witnesses of each knowing-what obligation."""
    guards = nabla_guards(x)
    for i, phi in _box_obligations(x):
        cells = s.h[(i, phi)]
        yield (("box", i, phi), i,
               _successor_label(x, s.g, guards, i, Not(phi), cells), _tokens(cells))
    for i, phi, d0 in _nabla_obligations(x):
        a, b = s.ha[(i, phi, d0)], s.hb[(i, phi, d0)]
        ca, cb = _tokens(a), _tokens(b)
        if a[d0] == b[d0]:
            ca[d0], cb[d0] = BULLET, CIRC
        yield (("nabla-a", i, phi, d0), i, _successor_label(x, s.g, guards, i, phi, a), ca)
        yield (("nabla-b", i, phi, d0), i, _successor_label(x, s.g, guards, i, phi, b), cb)


def labeled_successors(x: Iterable[Formula], s: StateInfo) -> list[tuple[int, frozenset, dict]]:
    x = frozenset(x)
    if not is_state(x, s):
        raise ContractViolation("label and extra information do not form a state")
    return [(i, lab, c) for _, i, lab, c in _successor_specs(x, s)]


# ---------------------------------------------------------------------------
# search

@dataclass
class Stats:
    max_depth: int = 0
    max_unlabeled_chain: int = 0
    nodes_visited: int = 0
    states_enumerated: int = 0


@dataclass(frozen=True)
class _World:
    label: frozenset
    constraints: Mapping[str, ValueToken]
    children: tuple = ()


@dataclass
class Verdict:
    satisfiable: bool
    model: Model | None = None
    stats: Stats = field(default_factory=Stats)

    def __bool__(self):
        return self.satisfiable


def _bits(m: int) -> Iterator[int]:
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


class _Closure:
    """Bit tables over Sub+(phi0), where every label of the tree lives.

    Inside the search a label is an int whose bit k stands for the k-th
    formula in canonical order, so the lowest qualifying bit is the
    canonically least qualifying formula, matching ``_violation`` and
    ``_undetermined`` on the equivalent set.
    """

    def __init__(self, phi0: Formula):
        sub = subformulas(phi0)
        self.order = canonical(sub | {Not(f) for f in sub})
        n = len(self.order)
        self.bit = {f: 1 << k for k, f in enumerate(self.order)}
        bit = self.bit
        self.bot = bit.get(BOT, 0)
        self.neg = [bit.get(Not(f), 0) for f in self.order]
        self.denies = [0] * n
        self.kind = [0] * n
        self.part_a = [0] * n
        self.part_b = [0] * n
        self.nots = self.expandable = self.notboxes = self.nablas = self.notnablas = 0
        self.boxes: dict[int, list[tuple[int, int]]] = {}
        # per agent: the [i], Kv_i literals of either polarity
        self.modal: dict[int, int] = {}
        for k, f in enumerate(self.order):
            m = f.child if isinstance(f, Not) else f
            if isinstance(m, (Box, Nabla)):
                self.modal[m.agent] = self.modal.get(m.agent, 0) | 1 << k
            if isinstance(f, Not):
                self.nots |= 1 << k
                self.denies[k] = bit[f.child]
            match f:
                case Not(Not(c)):
                    self.kind[k], self.part_a[k] = 1, bit[c]
                case Not(And(a, b)):
                    self.kind[k], self.part_a[k], self.part_b[k] = 2, bit[Not(a)], bit[Not(b)]
                case And(a, b):
                    self.kind[k], self.part_a[k], self.part_b[k] = 3, bit[a], bit[b]
                case Not(Box()):
                    self.notboxes |= 1 << k
                case Not(Nabla()):
                    self.notnablas |= 1 << k
                case Box(i, c):
                    self.boxes.setdefault(i, []).append((1 << k, bit[c]))
                case Nabla():
                    self.nablas |= 1 << k
            if self.kind[k]:
                self.expandable |= 1 << k
        self.submask = [0] * n
        for f in sorted(self.order, key=size):
            m = bit[f]
            for c in f.children():
                m |= bit[c]
                m |= self.submask[bit[c].bit_length() - 1]
            self.submask[bit[f].bit_length() - 1] = m

    def mask(self, xs: Iterable[Formula]) -> int:
        m = 0
        for f in xs:
            m |= self.bit[f]
        return m

    def formulas(self, m: int) -> frozenset:
        return frozenset(self.order[k] for k in _bits(m))

    def clashes(self, x: int, added: int | None = None) -> bool:
        """Blatant inconsistency of x; with ``added``, x minus those bits
        is known to be free of clashes."""
        if x & self.bot:
            return True
        if added is None:
            return any(self.denies[k] & x for k in _bits(x & self.nots))
        return any((self.denies[k] | self.neg[k]) & x for k in _bits(added))

    def clash_core(self, x: int) -> int:
        """Bits of one clash in x (which must have one)."""
        if x & self.bot:
            return self.bot
        for k in _bits(x & self.nots):
            if self.denies[k] & x:
                return 1 << k | self.denies[k]
        raise AssertionError("no clash")

    def violation(self, x: int) -> int | None:
        kind, pa, pb = self.kind, self.part_a, self.part_b
        for k in _bits(x & self.expandable):
            t = kind[k]
            if t == 1:
                if not pa[k] & x:
                    return k
            elif t == 2:
                if not (pa[k] | pb[k]) & x:
                    return k
            elif (pa[k] | pb[k]) & x != pa[k] | pb[k]:
                return k
        return None

    def undetermined(self, x: int) -> int | None:
        sub = decided = x
        for k in _bits(x):
            sub |= self.submask[k]
            decided |= self.denies[k]
        free = sub & ~decided
        return (free & -free).bit_length() - 1 if free else None

    def unboxed(self, x: int, agent: int) -> int:
        m = 0
        for b, c in self.boxes.get(agent, ()):
            if x & b:
                m |= c
        return m


class _GOption:
    """One (A, B) choice with the negation masks its successors need."""

    __slots__ = ("a", "cells", "neg_a", "neg_rest")

    def __init__(self, a, cells, bit):
        self.a = a
        self.cells = cells
        union = frozenset().union(*cells)
        self.neg_a = 0
        for f in a:
            self.neg_a |= bit[Not(f)]
        # for each cell: negations of every realised guard outside it
        self.neg_rest = []
        for cell in cells:
            m = 0
            for f in union - cell:
                m |= bit[Not(f)]
            self.neg_rest.append(m)


class _Search:
    def __init__(self, phi0: Formula, want_model: bool, strategy: str,
                 trace: Callable[[str], None] | None, memo: bool = False,
                 prune: bool = True):
        if strategy not in ("factored", "faithful"):
            raise ValueError(f"unknown strategy {strategy!r}")
        self.phi0 = phi0
        self.want_model = want_model
        self.strategy = strategy
        self.trace = trace
        self.memo = memo and not trace
        self.prune = prune
        self.stats = Stats()
        self.cl = _Closure(phi0)
        self._gopts: dict[frozenset, list[_GOption]] = {}

    def g_options(self, guards: frozenset) -> list[_GOption]:
        if guards not in self._gopts:
            self._gopts[guards] = [_GOption(a, b, self.cl.bit) for a, b in g_options(guards)]
        return self._gopts[guards]

    def visit(self, rule, x, depth, chain):
        st = self.stats
        st.nodes_visited += 1
        if depth > st.max_depth:
            st.max_depth = depth
        if chain > st.max_unlabeled_chain:
            st.max_unlabeled_chain = chain
        if self.trace:
            self.trace(f"{rule}\tsize={x.bit_count()}\tdepth={depth}\tchain={chain}")

    def run(self) -> tuple[bool, _World | None]:
        # Satisfiability of a labelled successor depends only on its label,
        # so with memo on, repeated successor roots reuse the earlier answer.
        memo: dict[int, tuple] | None = {} if self.memo else None
        stack = [self.node(self.cl.bit[self.phi0], {}, 0, 0)]
        keys: list[int | None] = [None]
        result = None
        while True:
            try:
                req = stack[-1].send(result)
            except StopIteration as stop:
                stack.pop()
                result = stop.value
                key = keys.pop()
                if key is not None:
                    memo[key] = result
                if not stack:
                    return result
                continue
            if len(req) == 5:
                key = req[0] if memo is not None and req[3] == 0 else None
                if key is not None and key in memo:
                    sat, w = memo[key]
                    if sat and w is not None:
                        w = replace(w, constraints=dict(req[1] or {}))
                    result = (sat, w)
                    continue
                stack.append(self.node(*req))
                keys.append(key)
            else:
                stack.append(self.state_node(*req))
                keys.append(None)
            result = None

    def world(self, x, constraints, kids):
        if not self.want_model:
            return None
        return _World(self.cl.formulas(x), dict(constraints or {}), tuple(kids))

    def node(self, x, constraints, depth, chain, added=None):
        """Rules a to c at an unlabelled node.

        A failed node answers (False, core) where core is a set of bits of
        x that is unsatisfiable on its own.  With pruning on, a child whose
        core avoids the formulas that child added shows the parent fails
        for the same reason, and its remaining siblings are skipped: they
        would all be marked unsatisfiable.
        """
        cl = self.cl
        if cl.clashes(x, added):
            self.visit("closed", x, depth, chain)
            return False, cl.clash_core(x)
        k = cl.violation(x)
        premise = 0
        if k is not None:
            t, a, b = cl.kind[k], cl.part_a[k], cl.part_b[k]
            premise = 1 << k
            if t == 1:
                rule, kids = "a.i", [x | a]
            elif t == 2:
                rule, kids = "a.ii", [x | a, x | b]
            else:
                rule, kids = "a.iii", [x | a | b]
        elif (k := cl.undetermined(x)) is not None:
            rule, kids = "b", [x | 1 << k, x | cl.neg[k]]
        else:
            self.visit("c", x, depth, chain)
            if self.strategy == "faithful":
                label = cl.formulas(x)
                for s in enumerate_states(label):
                    self.stats.states_enumerated += 1
                    res = yield (x, label, s, constraints, depth + 1, chain + 1)
                    if res[0]:
                        return res
                # the modal literals alone decide which states succeed
                core = 0
                for m in cl.modal.values():
                    core |= x & m
                return False, core
            return (yield from self.factored(x, constraints, depth + 1, chain + 1))
        self.visit(rule, x, depth, chain)
        core = 0
        for kid in kids:
            new = kid & ~x
            res = yield (kid, constraints, depth + 1, chain + 1, new)
            if res[0]:
                return res
            if self.prune and not res[1] & new:
                return False, res[1]
            core |= res[1] & ~new
        # the premise entails the disjunction of what the children added
        return False, core | premise

    def state_node(self, x, label, s, constraints, depth, chain):
        specs = list(_successor_specs(label, s))
        self.visit("d" if specs else "leaf", x, depth, chain)
        kids = []
        for _, i, lab, cons in specs:
            res = yield (self.cl.mask(lab), cons, depth + 1, 0, None)
            if not res[0]:
                return False, 0
            kids.append((i, res[1]))
        return True, self.world(x, constraints, kids)

    def factored(self, x, constraints, depth, chain):
        """Rule c followed by rule d, searched agent by agent.

        Successors of agent i depend only on g restricted to i and on the
        choice made for their own obligation, so a state whose children
        are all satisfiable exists iff, for every agent, some g_i admits a
        satisfiable choice per obligation independently.  The labels
        visited are those of the plain state-by-state walk, without
        forming the product of all choices.
        """
        cl = self.cl
        order = cl.order
        guard_sets: dict[tuple[int, str], set] = {}
        for k in _bits(x & cl.nablas):
            f = order[k]
            guard_sets.setdefault((f.agent, f.value), set()).add(f.child)
        guards = {key: frozenset(v) for key, v in sorted(guard_sets.items())}
        boxes = [(order[k].child.agent, order[k].child.child) for k in _bits(x & cl.notboxes)]
        nablas = [(order[k].child.agent, order[k].child.child, order[k].child.value)
                  for k in _bits(x & cl.notnablas)]
        busy = sorted({i for i, _ in boxes} | {i for i, _, _ in nablas})
        self.visit("d" if busy else "leaf", x, depth, chain)
        g: dict = {}
        h: dict = {}
        ha: dict = {}
        hb: dict = {}
        found: dict = {}
        for i in busy:
            names = _agent_names(guards, i)
            base = cl.unboxed(x, i)
            for gchoice in itertools.product(*(self.g_options(guards[(i, d)]) for d in names)):
                self.stats.states_enumerated += 1
                ok = True
                for j, phi in boxes:
                    if j != i:
                        continue
                    head = base | cl.bit[Not(phi)]
                    for combo in itertools.product(*(range(len(o.cells)) for o in gchoice)):
                        lab = head
                        for o, c in zip(gchoice, combo):
                            lab |= o.neg_a | o.neg_rest[c]
                        cells = _cells(names, gchoice, combo)
                        res = yield (lab, self.tokens(cells), depth + 1, 0, None)
                        if res[0]:
                            h[(i, phi)] = cells
                            found[("box", i, phi)] = res[1]
                            break
                    else:
                        ok = False
                        break
                for j, phi, d0 in nablas if ok else ():
                    if j != i:
                        continue
                    pair = yield from self.witness_pair(
                        base | cl.bit[phi], names, gchoice, d0, depth)
                    if pair is None:
                        ok = False
                        break
                    (a, wa), (b, wb) = pair
                    ha[(i, phi, d0)], hb[(i, phi, d0)] = a, b
                    found[("nabla-a", i, phi, d0)] = wa
                    found[("nabla-b", i, phi, d0)] = wb
                if ok:
                    g.update({(i, d): (o.a, o.cells) for d, o in zip(names, gchoice)})
                    break
            else:
                # agent i's literals alone rule out every choice
                return False, x & cl.modal.get(i, 0)
        if not busy:
            self.stats.states_enumerated += 1
        if not self.want_model:
            return True, None
        for key, gset in guards.items():
            if key not in g:
                o = self.g_options(gset)[0]
                g[key] = (o.a, o.cells)
        state = StateInfo(g, h, ha, hb)
        kids = [(i, replace(found[key], constraints=cons))
                for key, i, _, cons in _successor_specs(cl.formulas(x), state)]
        return True, self.world(x, constraints, kids)

    def tokens(self, cells):
        return _tokens(cells) if self.want_model else None

    def witness_pair(self, head, names, gchoice, d0, depth):
        """Two satisfiable witness choices for ~Kv(phi, d0) whose d0 cells
        differ or are both empty; None if no such pair exists."""
        pos = names.index(d0) if d0 in names else None
        ranges = [range(len(o.cells)) for o in gchoice]

        def label(combo):
            lab = head
            for o, c in zip(gchoice, combo):
                lab |= o.neg_a | o.neg_rest[c]
            return lab

        def cellmap(combo):
            m = _cells(names, gchoice, combo)
            m.setdefault(d0, EMPTY)
            return m

        for combo in itertools.product(*ranges):
            a = cellmap(combo)
            res = yield (label(combo), self.tokens(a), depth + 1, 0, None)
            if not res[0]:
                continue
            if pos is None or combo[pos] == 0:
                return (a, res[1]), (a, res[1])
            for other in itertools.product(*ranges):
                if other[pos] == combo[pos]:
                    continue
                b = cellmap(other)
                res_b = yield (label(other), self.tokens(b), depth + 1, 0, None)
                if res_b[0]:
                    return (a, res[1]), (b, res_b[1])
            # every satisfiable choice shares a's nonempty d0 cell
            return None
        return None


def _cells(names, gchoice, combo) -> dict[str, frozenset]:
    return {d: o.cells[c] for d, o, c in zip(names, gchoice, combo)}


def _extract(phi0: Formula, root: _World) -> Model:
    names = sorted(value_names(phi0))
    worlds: list[str] = []
    relations: dict[int, set] = {}
    valuation: dict[str, frozenset] = {}
    values: dict[tuple[str, str], ValueToken] = {}
    stack = [(root, None, None)]
    while stack:
        node, parent, agent = stack.pop()
        w = f"w{len(worlds)}"
        worlds.append(w)
        if parent is not None:
            relations.setdefault(agent, set()).add((parent, w))
        valuation[w] = frozenset(f.name for f in node.label if isinstance(f, Prop))
        for d in names:
            values[(d, w)] = node.constraints.get(d, DEFAULT)
        for i, kid in reversed(node.children):
            stack.append((kid, w, i))
    return Model(tuple(worlds), worlds[0],
                 {a: frozenset(p) for a, p in sorted(relations.items())},
                 valuation, values)


def decide(f: Formula, want_model: bool = False, *, strategy: str = "factored",
           trace: Callable[[str], None] | None = None, memo: bool = False,
           prune: bool = True) -> Verdict:
    """Decide satisfiability of ``f``; with ``want_model``, also build a
    model from the satisfiable part of the tableau.

    ``strategy="faithful"`` expands one state child per StateInfo exactly
    as the rules read; the default searches states agent by agent and
    reaches the same verdict much faster.

    ``memo=True`` caches the verdict of each labelled successor label for
    the rest of the search.  That trades the polynomial-space guarantee
    for speed; stats then undercount revisited subtrees.  It is ignored
    when tracing.

    ``prune`` skips siblings of a failed child whose failure did not
    depend on what that child added; they would fail too, so verdicts and
    models are unchanged and only the amount of work differs.
    """
    search = _Search(f, want_model, strategy, trace, memo, prune)
    sat, witness = search.run()
    model = _extract(f, witness) if sat and want_model else None
    return Verdict(sat, model, search.stats)
