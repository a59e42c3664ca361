"""Independent reference code for the tests: random models and a
set-at-a-time evaluator that shares nothing with the library's."""
import random

from lkvr.formula import And, Box, Nabla, Not, Prop, Top
from lkvr.semantics import DefaultToken, Model


def random_model(rng: random.Random, n_worlds=3, agents=(1, 2), props=("p", "q", "r"),
                 names=("d1", "d2"), n_values=2, density=0.4) -> Model:
    ws = tuple(f"u{k}" for k in range(n_worlds))
    rel = {a: frozenset((u, v) for u in ws for v in ws if rng.random() < density)
           for a in agents}
    val = {w: frozenset(p for p in props if rng.random() < 0.5) for w in ws}
    vals = {(d, w): DefaultToken(rng.randrange(n_values)) for d in names for w in ws}
    return Model(ws, ws[0], rel, val, vals)


def extension(m: Model, f) -> frozenset:
    """The set of worlds where f holds, computed bottom-up."""
    ws = frozenset(m.worlds)
    match f:
        case Top():
            return ws
        case Prop(name):
            return frozenset(w for w in ws if name in m.valuation.get(w, ()))
        case Not(c):
            return ws - extension(m, c)
        case And(a, b):
            return extension(m, a) & extension(m, b)
        case Box(i, c):
            inner = extension(m, c)
            edges = m.relations.get(i, frozenset())
            return frozenset(w for w in ws if all(v in inner for (u, v) in edges if u == w))
        case Nabla(i, c, d):
            inner = extension(m, c)
            edges = m.relations.get(i, frozenset())
            out = set()
            for w in ws:
                seen = {m.values.get((d, v), DefaultToken(0)) for (u, v) in edges
                        if u == w and v in inner}
                if len(seen) <= 1:
                    out.add(w)
            return frozenset(out)
    raise TypeError(f)


# ---------------------------------------------------------------------------
# fully expanded labels and a brute-force state counter

import itertools

from lkvr.formula import conj, size
from lkvr.generate import Pools, random_formula
from lkvr.tableau import (
    expand_full, expand_propositional, is_blatantly_inconsistent, is_fully_expanded,
    is_propositional_tableau,
)


def random_branch(rng, f):
    """Follow random children of rules a and b from {f}; the fully
    expanded label reached, or None if the branch closes."""
    x = frozenset([f])
    while True:
        if is_blatantly_inconsistent(x):
            return None
        if not is_propositional_tableau(x):
            x = rng.choice(expand_propositional(x))
        elif not is_fully_expanded(x):
            x = rng.choice(expand_full(x))
        else:
            return x


def state_case_formula(rng):
    """A conjunction rich in knowing-what guards and obligations."""
    pools = Pools(agents=2, props=3, names=2)
    parts = []
    for _ in range(rng.randint(1, 4)):
        parts.append(Nabla(rng.choice((1, 2)), random_formula(rng, 3, pools),
                           rng.choice(("d1", "d2"))))
    for _ in range(rng.randint(0, 2)):
        parts.append(Not(Box(rng.choice((1, 2)), random_formula(rng, 3, pools))))
    for _ in range(rng.randint(0, 2)):
        parts.append(Not(Nabla(rng.choice((1, 2)), random_formula(rng, 3, pools),
                               rng.choice(("d1", "d2")))))
    rng.shuffle(parts)
    return conj(*parts)


def _subsets(xs):
    xs = sorted(xs, key=str)
    return [frozenset(c) for k in range(len(xs) + 1) for c in itertools.combinations(xs, k)]


def brute_g_options(gset):
    """Every (A, B) meeting the state constraints, by filtering all pairs
    of a subset A and a family B of subsets."""
    subs = _subsets(gset)
    out = []
    for a in subs:
        for fam in _subsets(subs):
            union = frozenset().union(*fam) if fam else frozenset()
            if frozenset() not in fam or a | union != gset or a & union:
                continue
            blocks = [c for c in fam if c]
            if any(b1 & b2 for b1, b2 in itertools.combinations(blocks, 2)):
                continue
            out.append((a, fam))
    return out


def brute_state_count(x) -> int:
    guards = {}
    for f in x:
        if isinstance(f, Nabla):
            guards.setdefault((f.agent, f.value), set()).add(f.child)
    guards = {k: frozenset(v) for k, v in guards.items()}
    boxes = [f.child for f in x if isinstance(f, Not) and isinstance(f.child, Box)]
    nablas = [f.child for f in x if isinstance(f, Not) and isinstance(f.child, Nabla)]
    keys = sorted(guards)
    total = 0
    for combo in itertools.product(*(brute_g_options(guards[k]) for k in keys)):
        g = dict(zip(keys, combo))

        def maps(agent, dom):
            per = []
            for d in dom:
                cells = g[(agent, d)][1] if (agent, d) in g else [frozenset()]
                per.append([c for c in _subsets(guards.get((agent, d), ())) if c in cells])
            return [dict(zip(dom, cs)) for cs in itertools.product(*per)]

        count = 1
        for b in boxes:
            count *= len(maps(b.agent, sorted(d for (j, d) in g if j == b.agent)))
        for n in nablas:
            dom = sorted({d for (j, d) in g if j == n.agent} | {n.value})
            ms = maps(n.agent, dom)
            count *= sum(1 for a in ms for b in ms
                         if a[n.value] != b[n.value] or not (a[n.value] or b[n.value]))
        total += count
    return total
