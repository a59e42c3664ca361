"""Seeded random formulas and axiom instances.

Sampling is exactly uniform over primitive trees of a given node count
(with the symbol pools as leaf/operator labels); sizes are drawn
uniformly from 1..max_size.
"""
from __future__ import annotations

import random
from functools import lru_cache

from .formula import (
    BOT, TOP, And, Box, Formula, Nabla, Not, Prop, conj, diamond, disj, implies,
)

__all__ = [
    "Pools", "random_formula", "random_formula_of_size",
    "k_axiom", "distnsv_axiom", "nsvbot_axiom", "nsvor_axiom", "axiom_instance",
    "SCHEMAS",
]


class Pools:
    def __init__(self, agents=2, props=3, names=2):
        self.agents = tuple(range(1, agents + 1))
        self.props = ("p", "q", "r", "s", "t", "u")[:props]
        self.names = tuple(f"d{k}" for k in range(1, names + 1))

    @property
    def shape(self):
        return len(self.agents), len(self.props), len(self.names)


@lru_cache(maxsize=None)
def _count(n: int, shape: tuple[int, int, int]) -> int:
    """Number of labelled primitive trees with n nodes."""
    na, npr, nn = shape
    if n <= 0:
        return 0
    if n == 1:
        return 1 + npr
    unary = (1 + na + na * nn) * _count(n - 1, shape)
    binary = sum(_count(k, shape) * _count(n - 1 - k, shape) for k in range(1, n - 1))
    return unary + binary


def random_formula_of_size(rng: random.Random, n: int, pools: Pools | None = None) -> Formula:
    pools = pools or Pools()
    shape = pools.shape
    if n == 1:
        k = rng.randrange(1 + len(pools.props))
        return TOP if k == 0 else Prop(pools.props[k - 1])
    sub = _count(n - 1, shape)
    r = rng.randrange(_count(n, shape))
    if r < sub:
        return Not(random_formula_of_size(rng, n - 1, pools))
    r -= sub
    if r < len(pools.agents) * sub:
        return Box(pools.agents[r // sub], random_formula_of_size(rng, n - 1, pools))
    r -= len(pools.agents) * sub
    if r < len(pools.agents) * len(pools.names) * sub:
        k = r // sub
        agent = pools.agents[k // len(pools.names)]
        name = pools.names[k % len(pools.names)]
        return Nabla(agent, random_formula_of_size(rng, n - 1, pools), name)
    r -= len(pools.agents) * len(pools.names) * sub
    for k in range(1, n - 1):
        block = _count(k, shape) * _count(n - 1 - k, shape)
        if r < block:
            return And(random_formula_of_size(rng, k, pools),
                       random_formula_of_size(rng, n - 1 - k, pools))
        r -= block
    raise AssertionError("unreachable")


def random_formula(rng: random.Random, max_size: int, pools: Pools | None = None) -> Formula:
    return random_formula_of_size(rng, rng.randint(1, max_size), pools)


def k_axiom(i: int, phi: Formula, psi: Formula) -> Formula:
    return implies(Box(i, implies(phi, psi)), implies(Box(i, phi), Box(i, psi)))


def distnsv_axiom(i: int, phi: Formula, psi: Formula, d: str) -> Formula:
    return implies(Box(i, implies(phi, psi)), implies(Nabla(i, psi, d), Nabla(i, phi, d)))


def nsvbot_axiom(i: int, d: str) -> Formula:
    return Nabla(i, BOT, d)


def nsvor_axiom(i: int, phi: Formula, psi: Formula, d: str) -> Formula:
    return implies(conj(diamond(i, And(phi, psi)), Nabla(i, phi, d), Nabla(i, psi, d)),
                   Nabla(i, disj(phi, psi), d))


SCHEMAS = ("K", "DISTNSV", "NSVBOT", "NSVOR")


def axiom_instance(rng: random.Random, schema: str, max_sub: int = 5,
                   pools: Pools | None = None) -> Formula:
    pools = pools or Pools(agents=2, props=3, names=2)
    i = rng.choice(pools.agents)
    d = rng.choice(pools.names)
    phi = random_formula(rng, max_sub, pools)
    psi = random_formula(rng, max_sub, pools)
    match schema:
        case "K":
            return k_axiom(i, phi, psi)
        case "DISTNSV":
            return distnsv_axiom(i, phi, psi, d)
        case "NSVBOT":
            return nsvbot_axiom(i, d)
        case "NSVOR":
            return nsvor_axiom(i, phi, psi, d)
    raise ValueError(f"unknown schema {schema!r}")
