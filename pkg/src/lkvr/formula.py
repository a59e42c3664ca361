"""Formulas of multi-agent K with the knowing-what operator.

The abstract syntax has six primitive node types.  Sugared connectives
(falsum, disjunction, implication, biconditional, diamond) are only
constructor helpers: they build primitive trees, so a parsed or
constructed formula never contains sugar.

Every node carries its canonical printed form, which doubles as the
equality key and the canonical total order on formulas.
"""
from __future__ import annotations

import re
from typing import Iterable, Iterator

__all__ = [
    "Formula", "Top", "Prop", "Not", "And", "Box", "Nabla",
    "TOP", "BOT", "neg", "disj", "implies", "iff", "diamond", "conj",
    "FormulaSyntaxError", "SymbolError",
    "parse", "to_text", "to_sugar", "subformulas", "sub_plus", "depth", "value_names",
    "size", "agents", "propositions", "canonical", "validate",
]


class Formula:
    """Base class; instances are immutable and compare by canonical text."""

    __slots__ = ("key", "_hash")

    def _seal(self, key: str) -> None:
        object.__setattr__(self, "key", key)
        object.__setattr__(self, "_hash", hash(key))

    def __setattr__(self, name, value):
        raise AttributeError("formulas are immutable")

    def __eq__(self, other):
        return isinstance(other, Formula) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __str__(self):
        return self.key

    def __repr__(self):
        return f"<{type(self).__name__} {self.key}>"

    def __reduce__(self):
        return (parse, (self.key,))

    def children(self) -> tuple[Formula, ...]:
        return ()


class Top(Formula):
    __slots__ = ()
    __match_args__ = ()

    def __init__(self):
        self._seal("T")


class Prop(Formula):
    __slots__ = ("name",)
    __match_args__ = ("name",)

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)
        self._seal(name)


class Not(Formula):
    __slots__ = ("child",)
    __match_args__ = ("child",)

    def __init__(self, child: Formula):
        object.__setattr__(self, "child", child)
        self._seal("~" + child.key)

    def children(self):
        return (self.child,)


class And(Formula):
    __slots__ = ("left", "right")
    __match_args__ = ("left", "right")

    def __init__(self, left: Formula, right: Formula):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        self._seal(f"({left.key} & {right.key})")

    def children(self):
        return (self.left, self.right)


class Box(Formula):
    __slots__ = ("agent", "child")
    __match_args__ = ("agent", "child")

    def __init__(self, agent: int, child: Formula):
        object.__setattr__(self, "agent", agent)
        object.__setattr__(self, "child", child)
        self._seal(f"[{agent}]{child.key}")

    def children(self):
        return (self.child,)


class Nabla(Formula):
    """Knowing-what: among the agent's successors where `child` holds,
    the value name `value` is constant."""

    __slots__ = ("agent", "child", "value")
    __match_args__ = ("agent", "child", "value")

    def __init__(self, agent: int, child: Formula, value: str):
        object.__setattr__(self, "agent", agent)
        object.__setattr__(self, "child", child)
        object.__setattr__(self, "value", value)
        self._seal(f"Kv{agent}({child.key}, {value})")

    def children(self):
        return (self.child,)


TOP = Top()
BOT = Not(TOP)


def neg(f: Formula) -> Formula:
    return Not(f)


def disj(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def iff(a: Formula, b: Formula) -> Formula:
    return And(implies(a, b), implies(b, a))


def diamond(agent: int, f: Formula) -> Formula:
    return Not(Box(agent, Not(f)))


def conj(*fs: Formula) -> Formula:
    """Left-associated conjunction; the empty conjunction is T."""
    if not fs:
        return TOP
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


# ---------------------------------------------------------------------------
# closure operators and measures

def _walk(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(g.children())


def subformulas(f: Formula | Iterable[Formula]) -> frozenset[Formula]:
    """Sub(f), or the union over a collection of formulas."""
    if isinstance(f, Formula):
        return frozenset(_walk(f))
    out: set[Formula] = set()
    for g in f:
        out.update(_walk(g))
    return frozenset(out)


def sub_plus(f: Formula | Iterable[Formula]) -> frozenset[Formula]:
    sub = subformulas(f)
    return sub | frozenset(Not(g) for g in sub)


def depth(f: Formula) -> int:
    match f:
        case Box(_, c) | Nabla(_, c, _):
            return depth(c) + 1
        case Not(c):
            return depth(c)
        case And(a, b):
            return max(depth(a), depth(b))
    return 0


def size(f: Formula) -> int:
    """Node count of the primitive tree; this is |f| in every bound."""
    return sum(1 for _ in _walk(f))


def value_names(f: Formula | Iterable[Formula]) -> frozenset[str]:
    nodes = _walk(f) if isinstance(f, Formula) else (g for h in f for g in _walk(h))
    return frozenset(g.value for g in nodes if isinstance(g, Nabla))


def agents(f: Formula) -> frozenset[int]:
    return frozenset(g.agent for g in _walk(f) if isinstance(g, (Box, Nabla)))


def propositions(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in _walk(f) if isinstance(g, Prop))


def canonical(xs: Iterable[Formula]) -> list[Formula]:
    """Formulas in canonical order (lexicographic on printed text)."""
    return sorted(xs, key=lambda g: g.key)


# ---------------------------------------------------------------------------
# concrete syntax

_PROP_RE = re.compile(r"[a-ce-z][A-Za-z0-9_]*\Z")
_VNAME_RE = re.compile(r"d[A-Za-z0-9_]*\Z")


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos
        self.text = text


class SymbolError(FormulaSyntaxError):
    """Well-formed shape, but an agent id of 0 or a missing identifier."""


def validate(f: Formula) -> Formula:
    """Check the lexical invariants of a programmatically built formula."""
    for g in _walk(f):
        match g:
            case Prop(name) if not _PROP_RE.match(name):
                raise SymbolError(f"bad proposition name {name!r}", 0)
            case Box(a, _) | Nabla(a, _, _) if not (isinstance(a, int) and a >= 1):
                raise SymbolError(f"bad agent id {a!r}", 0)
            case Nabla(_, _, v) if not _VNAME_RE.match(v):
                raise SymbolError(f"bad value name {v!r}", 0)
    return f


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<kv>Kv)|(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op><->|->|[~&|()\[\]<>,]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        val = m.group(kind)
        out.append((kind, val, start))
        pos = m.end()
    out.append(("eof", "", n))
    return out


class _Parser:
    # binary operators from loosest to tightest
    _LEVELS = ("<->", "->", "|", "&")

    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None, cls=FormulaSyntaxError):
        tok = tok or self.peek()
        where = "end of input" if tok[0] == "eof" else repr(tok[1])
        raise cls(f"{msg}, found {where}", tok[2], self.text)

    def expect(self, val):
        tok = self.peek()
        if tok[0] == "eof" or tok[1] != val:
            self.error(f"expected {val!r}")
        return self.take()

    def parse(self) -> Formula:
        f = self.binary(0)
        if self.peek()[0] != "eof":
            self.error("unexpected token")
        return f

    def binary(self, level: int) -> Formula:
        if level == len(self._LEVELS):
            return self.unary()
        op = self._LEVELS[level]
        left = self.binary(level + 1)
        if op in ("->", "<->"):
            # right-associative
            if self.peek()[1] == op and self.peek()[0] == "op":
                self.take()
                right = self.binary(level)
                return implies(left, right) if op == "->" else iff(left, right)
            return left
        while self.peek()[0] == "op" and self.peek()[1] == op:
            self.take()
            right = self.binary(level + 1)
            left = And(left, right) if op == "&" else disj(left, right)
        return left

    def agent(self) -> int:
        tok = self.peek()
        if tok[0] != "num":
            self.error("expected agent number")
        self.take()
        a = int(tok[1])
        if a == 0:
            self.error("agent ids start at 1", tok, SymbolError)
        return a

    def unary(self) -> Formula:
        kind, val, pos = tok = self.peek()
        if kind == "op":
            if val == "~":
                self.take()
                return Not(self.unary())
            if val in ("[", "<"):
                self.take()
                a = self.agent()
                self.expect("]" if val == "[" else ">")
                body = self.unary()
                return Box(a, body) if val == "[" else diamond(a, body)
            if val == "(":
                self.take()
                f = self.binary(0)
                self.expect(")")
                return f
            self.error("expected a formula")
        if kind == "kv":
            self.take()
            a = self.agent()
            self.expect("(")
            body = self.binary(0)
            self.expect(",")
            vtok = self.peek()
            if vtok[0] != "ident":
                self.error("expected a value name", vtok, SymbolError)
            if not _VNAME_RE.match(vtok[1]):
                self.error("value names start with 'd'", vtok)
            self.take()
            self.expect(")")
            return Nabla(a, body, vtok[1])
        if kind == "ident":
            self.take()
            if val == "T":
                return TOP
            if val == "F":
                return BOT
            if not _PROP_RE.match(val):
                self.error("expected a proposition (lowercase, not starting with 'd')", tok)
            return Prop(val)
        self.error("expected a formula")


def parse(text: str) -> Formula:
    """Parse ASCII concrete syntax into a primitive formula tree.

    >>> parse("<1>p")
    <Not ~[1]~p>
    """
    return _Parser(text).parse()


def to_text(f: Formula) -> str:
    return f.key


def to_sugar(f: Formula) -> str:
    """Readable text using F, ->, |, <-> and <i> where the tree allows.

    Every binary form is parenthesised, so ``parse(to_sugar(f)) == f``.
    """
    match f:
        case Not(Top()):
            return "F"
        case Not(Box(i, Not(c))):
            return f"<{i}>{to_sugar(c)}"
        case Not(And(Not(a), Not(b))):
            return f"({to_sugar(a)} | {to_sugar(b)})"
        case Not(And(a, Not(b))):
            return f"({to_sugar(a)} -> {to_sugar(b)})"
        case And(Not(And(a, Not(b))), Not(And(b2, Not(a2)))) if a == a2 and b == b2:
            return f"({to_sugar(a)} <-> {to_sugar(b)})"
        case Not(c):
            return "~" + to_sugar(c)
        case And(a, b):
            return f"({to_sugar(a)} & {to_sugar(b)})"
        case Box(i, c):
            return f"[{i}]{to_sugar(c)}"
        case Nabla(i, c, v):
            return f"Kv{i}({to_sugar(c)}, {v})"
    return f.key
