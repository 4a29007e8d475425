"""Evaluation of propositional path formulas on ultimately periodic words u·v^ω."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .formula import (
    AlmostAlways, Always, And, Const, Eventually, Formula, Iff, Implies,
    InfOften, Next, Not, Or, Prev, Prop, Since, Until, WeakPrev, WeakSince,
    PAST,
)


class UnsupportedAtomError(ValueError):
    pass


@dataclass(frozen=True)
class LassoWord:
    prefix: tuple[frozenset[str], ...]
    period: tuple[frozenset[str], ...]

    def __post_init__(self):
        if not self.period:
            raise ValueError("the period of a lasso word must be nonempty")

    @classmethod
    def of(cls, prefix: Iterable[Iterable[str]], period: Iterable[Iterable[str]]) -> "LassoWord":
        return cls(tuple(frozenset(x) for x in prefix), tuple(frozenset(x) for x in period))

    def letter(self, i: int) -> frozenset[str]:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]


def _closure(f: Formula) -> list[Formula]:
    """Distinct subformulas, children before parents."""
    seen: dict[Formula, None] = {}

    def go(g: Formula):
        if g in seen:
            return
        if not isinstance(g, (Prop, Const, Not, And, Or, Implies, Iff, Next, Until,
                              Eventually, Always, Prev, WeakPrev, Since, WeakSince,
                              InfOften, AlmostAlways)):
            raise UnsupportedAtomError(
                f"{type(g).__name__} is not allowed on lasso words (propositional path formulas only)")
        for c in g.children:
            go(c)
        seen[g] = None

    go(f)
    return list(seen)


def _unrolled(w: LassoWord, closure: Sequence[Formula], copies: int) -> dict[Formula, list[bool]]:
    u, v = len(w.prefix), len(w.period)
    n = u + copies * v
    loop = u + (copies - 1) * v  # successor of the last position
    succ = list(range(1, n)) + [loop]
    val: dict[Formula, list[bool]] = {}
    for g in closure:
        args = [val[c] for c in g.children]
        if isinstance(g, Prop):
            r = [g.name in w.letter(i) for i in range(n)]
        elif isinstance(g, Const):
            r = [g.value] * n
        elif isinstance(g, Not):
            r = [not x for x in args[0]]
        elif isinstance(g, And):
            r = [x and y for x, y in zip(*args)]
        elif isinstance(g, Or):
            r = [x or y for x, y in zip(*args)]
        elif isinstance(g, Implies):
            r = [(not x) or y for x, y in zip(*args)]
        elif isinstance(g, Iff):
            r = [x == y for x, y in zip(*args)]
        elif isinstance(g, Next):
            r = [args[0][succ[i]] for i in range(n)]
        elif isinstance(g, (Until, Eventually)):
            a, b = (args if isinstance(g, Until) else ([True] * n, args[0]))
            r = [False] * n
            for _ in range(2):  # second sweep carries the loop value around
                for i in range(n - 1, -1, -1):
                    r[i] = b[i] or (a[i] and r[succ[i]])
        elif isinstance(g, Always):
            a = args[0]
            r = [True] * n
            for _ in range(2):
                for i in range(n - 1, -1, -1):
                    r[i] = a[i] and r[succ[i]]
        elif isinstance(g, InfOften):
            r = [any(args[0][loop:])] * n
        elif isinstance(g, AlmostAlways):
            r = [all(args[0][loop:])] * n
        elif isinstance(g, (Prev, WeakPrev)):
            r = [isinstance(g, WeakPrev)] + args[0][:-1]
        elif isinstance(g, (Since, WeakSince)):
            a, b = args
            r = [b[0] or (isinstance(g, WeakSince) and a[0])]
            for i in range(1, n):
                r.append(b[i] or (a[i] and r[-1]))
        else:  # pragma: no cover - guarded by _closure
            raise UnsupportedAtomError(type(g).__name__)
        val[g] = r
    return val


def _evaluate(w: LassoWord, f: Formula, min_copies: int) -> dict[Formula, list[bool]]:
    closure = _closure(f)
    u, v = len(w.prefix), len(w.period)
    has_past = any(isinstance(g, PAST) for g in closure)
    cap = 2 ** len(closure) + 2
    copies = max(2, min_copies)
    while True:
        val = _unrolled(w, closure, copies)
        if not has_past:
            return val
        a, b, c = u + (copies - 2) * v, u + (copies - 1) * v, u + copies * v
        if all(val[g][a:b] == val[g][b:c] for g in closure):
            return val
        if copies >= cap:  # pragma: no cover - the vector sequence repeats before the cap
            raise RuntimeError("lasso evaluation did not stabilise")
        copies += 1


def lasso_eval_at(w: LassoWord, f: Formula, i: int) -> bool:
    """Truth of f at position i of u·v^ω."""
    if i < 0:
        raise ValueError("position must be non-negative")
    u, v = len(w.prefix), len(w.period)
    need = max(0, -(-(i - u + 1) // v)) + 1
    val = _evaluate(w, f, need)
    n = len(next(iter(val.values())))
    if i >= n:  # pragma: no cover - need guarantees i < n
        raise AssertionError
    return val[f][i]


def lasso_eval(w: LassoWord, f: Formula) -> bool:
    """Truth of f at position 0 of u·v^ω."""
    return lasso_eval_at(w, f, 0)
