"""Seeded random generators for formulas and lasso words (test and report fixtures)."""
from __future__ import annotations

import random
from typing import Sequence

from .formula import (
    A, AlmostAlways, Always, And, At, AtRoot, Bind, E, Eventually, Formula, Iff,
    Implies, InfOften, Next, Not, Or, Prev, Prop, Root, Since, Until, Var,
    WeakPrev, WeakSince, size,
)
from .lasso import LassoWord


class _Gen:
    def __init__(self, rng: random.Random, props: Sequence[str], hybrid: bool, plus: bool):
        self.rng, self.props, self.hybrid, self.plus = rng, tuple(props), hybrid, plus

    def atom(self) -> Formula:
        pool: list[Formula] = [Prop(p) for p in self.props]
        if self.hybrid:
            pool += [Var(1), Root()]
        return self.rng.choice(pool)

    def state(self, budget: int) -> Formula:
        r = self.rng
        if budget <= 1:
            return self.atom()
        kinds = ["not", "and", "or", "E", "A"]
        if self.hybrid:
            kinds += ["bind", "at", "atroot"]
        k = r.choice(kinds)
        if k == "not":
            return Not(self.state(budget - 1))
        if k in ("and", "or"):
            left = r.randint(1, max(1, budget - 2))
            cls = And if k == "and" else Or
            return cls(self.state(left), self.state(max(1, budget - 1 - left)))
        if k == "bind":
            return Bind(1, self.state(budget - 1))
        if k == "at":
            return At(1, self.state(budget - 1))
        if k == "atroot":
            return AtRoot(self.state(budget - 1))
        body = self.path(budget - 1) if self.plus else self.basic(budget - 1)
        return (E if k == "E" else A)(body)

    def basic(self, budget: int) -> Formula:
        r = self.rng
        k = r.choice(["X", "F", "G", "U"])
        if k == "U" and budget >= 3:
            left = r.randint(1, budget - 2)
            return Until(self.state(left), self.state(max(1, budget - 1 - left)))
        cls = {"X": Next, "F": Eventually, "G": Always, "U": Eventually}[k]
        return cls(self.state(max(1, budget - 1)))

    def path(self, budget: int) -> Formula:
        """Boolean combination of basic path formulas and state formulas."""
        r = self.rng
        if budget <= 2:
            return self.basic(max(1, budget))
        k = r.choice(["basic", "basic", "not", "and", "or"])
        if k == "basic":
            return self.basic(budget)
        if k == "not":
            return Not(self.path(budget - 1))
        left = r.randint(1, budget - 2)
        cls = And if k == "and" else Or
        return cls(self.path(left), self.path(max(1, budget - 1 - left)))


def _sized(make, max_size: int, rng: random.Random) -> Formula:
    for _ in range(1000):
        f = make(rng.randint(1, max_size))
        if size(f) <= max_size:
            return f
    raise RuntimeError("could not generate a formula within the size bound")  # pragma: no cover


def random_h1plus(rng: random.Random, max_size: int = 12, props: Sequence[str] = ("p", "q"),
                  hybrid: bool = True) -> Formula:
    """Random state formula of CTL+ extended with ↓x1, x1, @x1, root, @root."""
    g = _Gen(rng, props, hybrid, plus=True)
    return _sized(g.state, max_size, rng)


def random_h1(rng: random.Random, max_size: int = 12, props: Sequence[str] = ("p", "q"),
              hybrid: bool = True) -> Formula:
    """Random state formula of CTL extended with ↓x1, x1, @x1, root, @root."""
    g = _Gen(rng, props, hybrid, plus=False)
    return _sized(g.state, max_size, rng)


_UNARY_PATH = (Not, Next, Eventually, Always, Prev, WeakPrev, InfOften, AlmostAlways)
_BINARY_PATH = (And, Or, Implies, Iff, Until, Since, WeakSince)


def random_path_formula(rng: random.Random, depth: int = 3, props: Sequence[str] = ("p", "q"),
                        unary=_UNARY_PATH, binary=_BINARY_PATH) -> Formula:
    """Random propositional path formula (no quantifiers or hybrid operators)."""
    if depth <= 0 or rng.random() < 0.25:
        return Prop(rng.choice(tuple(props)))
    if rng.random() < 0.45:
        return rng.choice(tuple(unary))(random_path_formula(rng, depth - 1, props, unary, binary))
    cls = rng.choice(tuple(binary))
    return cls(random_path_formula(rng, depth - 1, props, unary, binary),
               random_path_formula(rng, depth - 1, props, unary, binary))


def random_lasso(rng: random.Random, props: Sequence[str] = ("p", "q"), max_prefix: int = 8,
                 max_period: int = 8) -> LassoWord:
    def letter():
        return [p for p in props if rng.random() < 0.5]

    u = [letter() for _ in range(rng.randint(0, max_prefix))]
    v = [letter() for _ in range(rng.randint(1, max_period))]
    return LassoWord.of(u, v)
