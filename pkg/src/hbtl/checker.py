"""Model checking of hybrid branching-time formulas on finite trees.

Paths are finite root-to-leaf node sequences.  In leaf-loop mode (default)
the leaf repeats forever, so every path is infinite and eventually
constant; in strict mode the path simply ends (X is false at the last
position, F∞ is false and G∞ is true).

Past operators look back along the path towards the root.  ``E ψ`` at a
node v ranges over the root-to-leaf paths through v and evaluates ψ at the
position of v, so the past part of ψ sees the history of v.  For formulas
without past operators this is the same as quantifying over paths starting
at v.

The engine is vectorised: it evaluates a formula simultaneously for a
batch of labelings of one tree shape (arrays of shape ``(batch, nodes)``).
A single tree is a batch of size one.
"""
from __future__ import annotations

from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from .formula import (
    A, AlmostAlways, Always, And, At, AtRoot, Bind, Const, E, Eventually,
    Formula, FormulaError, Iff, Implies, InfOften, Next, Not, Or, Prev, Prop,
    Root, Since, TEMPORAL, Until, Var, WeakPrev, WeakSince, is_state, max_var,
)
from .models import Tree


class Mode(str, Enum):
    LEAF_LOOP = "leaf-loop"
    STRICT = "strict"


class CheckError(ValueError):
    pass


def _mode(mode) -> Mode:
    try:
        return Mode(mode)
    except ValueError:
        raise CheckError(f"unknown mode {mode!r}") from None


class Evaluator:
    """Evaluates formulas on one tree shape under a batch of labelings.

    ``children[v]`` lists the children of node v (nodes are 0..n-1 with 0 the
    root); ``valuation`` maps each proposition to a boolean array of shape
    ``(batch, n)``.  Assignments are tuples of node indices, x_i ↦ assign[i-1].
    """

    def __init__(self, children: Sequence[Sequence[int]], valuation: Mapping[str, np.ndarray],
                 batch: int, mode: Mode | str = Mode.LEAF_LOOP):
        self.n = len(children)
        self.children = [tuple(c) for c in children]
        self.valuation = valuation
        self.batch = batch
        self.mode = _mode(mode)
        self.paths = self._root_paths()
        self._state_memo: dict = {}
        self._path_memo: dict = {}
        self._free: dict[int, tuple[int, ...]] = {}
        self._is_state: dict[int, bool] = {}
        self._keep: list = []  # keeps memoised formulas alive so ids stay unique

    def _root_paths(self) -> list[tuple[int, ...]]:
        out = []
        stack = [(0,)]
        while stack:
            p = stack.pop()
            kids = self.children[p[-1]]
            if not kids:
                out.append(p)
            for c in reversed(kids):
                stack.append(p + (c,))
        return out

    # ---------------------------------------------------------- helpers
    def free_vars(self, f: Formula) -> tuple[int, ...]:
        key = id(f)
        if key not in self._free:
            if isinstance(f, Var):
                fv = {f.index}
            else:
                fv = set()
                for c in f.children:
                    fv.update(self.free_vars(c))
                if isinstance(f, Bind):
                    fv.discard(f.var)
                elif isinstance(f, At):
                    fv.add(f.var)
            self._free[key] = tuple(sorted(fv))
            self._keep.append(f)
        return self._free[key]

    def state_like(self, f: Formula) -> bool:
        """State formula without past operators outside quantifiers: its value
        at a path position depends only on the node there."""
        key = id(f)
        if key not in self._is_state:
            self._is_state[key] = is_state(f) and _no_outer_past(f)
        return self._is_state[key]

    def _key(self, f: Formula, assign: tuple[int, ...]):
        try:
            return id(f), tuple(assign[i - 1] for i in self.free_vars(f))
        except IndexError:
            raise CheckError(
                f"assignment of length {len(assign)} is too short for variable "
                f"x{max(self.free_vars(f))}") from None

    def _full(self, value: bool) -> np.ndarray:
        return np.full((self.batch, self.n), value, dtype=bool)

    # ------------------------------------------------------ state level
    def state(self, f: Formula, assign: tuple[int, ...] = ()) -> np.ndarray:
        """Truth of state formula f at every node, shape (batch, n)."""
        key = self._key(f, assign)
        hit = self._state_memo.get(key)
        if hit is not None:
            return hit
        out = self._state(f, assign)
        self._state_memo[key] = out
        return out

    def _state(self, f: Formula, assign) -> np.ndarray:
        if isinstance(f, Prop):
            v = self.valuation.get(f.name)
            return v if v is not None else self._full(False)
        if isinstance(f, Const):
            return self._full(f.value)
        if isinstance(f, Var):
            out = self._full(False)
            out[:, assign[f.index - 1]] = True
            return out
        if isinstance(f, Root):
            out = self._full(False)
            out[:, 0] = True
            return out
        if isinstance(f, Not):
            return ~self.state(f.arg, assign)
        if isinstance(f, And):
            return self.state(f.left, assign) & self.state(f.right, assign)
        if isinstance(f, Or):
            return self.state(f.left, assign) | self.state(f.right, assign)
        if isinstance(f, Implies):
            return ~self.state(f.left, assign) | self.state(f.right, assign)
        if isinstance(f, Iff):
            return self.state(f.left, assign) == self.state(f.right, assign)
        if isinstance(f, E):
            out = self._full(False)
            for p in self.paths:
                out[:, p] |= self.on_path(f.arg, assign, p)
            return out
        if isinstance(f, A):
            out = self._full(True)
            for p in self.paths:
                out[:, p] &= self.on_path(f.arg, assign, p)
            return out
        if isinstance(f, Bind):
            if f.var not in self.free_vars(f.arg):
                return self.state(f.arg, assign)
            out = np.empty((self.batch, self.n), dtype=bool)
            a = list(assign) + [0] * max(0, f.var - len(assign))
            for v in range(self.n):
                a[f.var - 1] = v
                out[:, v] = self.state(f.arg, tuple(a))[:, v]
            return out
        if isinstance(f, At):
            col = self.state(f.arg, assign)[:, assign[f.var - 1]]
            return np.repeat(col[:, None], self.n, axis=1)
        if isinstance(f, AtRoot):
            col = self.state(f.arg, assign)[:, 0]
            return np.repeat(col[:, None], self.n, axis=1)
        if isinstance(f, (Prev, WeakPrev, Since, WeakSince)):
            out = np.empty((self.batch, self.n), dtype=bool)
            for p in self.paths:
                out[:, p] = self.path(f, assign, p)
            return out
        raise FormulaError(f"{type(f).__name__} is not a state formula")

    # ------------------------------------------------------- path level
    def on_path(self, f: Formula, assign: tuple[int, ...], p: tuple[int, ...]) -> np.ndarray:
        """Truth of f at the positions of the root-to-leaf path p.

        In leaf-loop mode a formula of temporal depth d has constant truth
        values from position len(p) - 1 + d on.  Without past operators that
        holds already from the leaf on; with them, the path is padded with d
        copies of the leaf so that the last position is in the constant part.
        """
        if self.mode is Mode.LEAF_LOOP and not _no_outer_past(f):
            pad = _temporal_depth(f)
            return self.path(f, assign, p + (p[-1],) * pad)[:, :len(p)]
        return self.path(f, assign, p)

    def path(self, f: Formula, assign: tuple[int, ...], p: tuple[int, ...]) -> np.ndarray:
        """Truth of path formula f at every position of path p, shape (batch, len(p))."""
        if self.state_like(f):
            return self.state(f, assign)[:, p]
        key = self._key(f, assign) + (p,)
        hit = self._path_memo.get(key)
        if hit is not None:
            return hit
        out = self._path(f, assign, p)
        self._path_memo[key] = out
        return out

    def _path(self, f: Formula, assign, p) -> np.ndarray:
        L = len(p)
        strict = self.mode is Mode.STRICT
        go = lambda g: self.path(g, assign, p)  # noqa: E731
        if isinstance(f, Not):
            return ~go(f.arg)
        if isinstance(f, And):
            return go(f.left) & go(f.right)
        if isinstance(f, Or):
            return go(f.left) | go(f.right)
        if isinstance(f, Implies):
            return ~go(f.left) | go(f.right)
        if isinstance(f, Iff):
            return go(f.left) == go(f.right)
        out = np.empty((self.batch, L), dtype=bool)
        if isinstance(f, Next):
            a = go(f.arg)
            out[:, :-1] = a[:, 1:]
            out[:, -1] = False if strict else a[:, -1]
        elif isinstance(f, Until):
            a, b = go(f.left), go(f.right)
            out[:, -1] = b[:, -1]
            for i in range(L - 2, -1, -1):
                out[:, i] = b[:, i] | (a[:, i] & out[:, i + 1])
        elif isinstance(f, Eventually):
            a = go(f.arg)
            out[:, -1] = a[:, -1]
            for i in range(L - 2, -1, -1):
                out[:, i] = a[:, i] | out[:, i + 1]
        elif isinstance(f, Always):
            a = go(f.arg)
            out[:, -1] = a[:, -1]
            for i in range(L - 2, -1, -1):
                out[:, i] = a[:, i] & out[:, i + 1]
        elif isinstance(f, (Prev, WeakPrev)):
            a = go(f.arg)
            out[:, 0] = isinstance(f, WeakPrev)
            out[:, 1:] = a[:, :-1]
        elif isinstance(f, (Since, WeakSince)):
            a, b = go(f.left), go(f.right)
            out[:, 0] = b[:, 0] | (a[:, 0] if isinstance(f, WeakSince) else False)
            for i in range(1, L):
                out[:, i] = b[:, i] | (a[:, i] & out[:, i - 1])
        elif isinstance(f, InfOften):
            if strict:
                out[:] = False
            else:
                out[:] = go(f.arg)[:, -1:]
        elif isinstance(f, AlmostAlways):
            if strict:
                out[:] = True
            else:
                out[:] = go(f.arg)[:, -1:]
        else:
            raise FormulaError(f"cannot evaluate {type(f).__name__} on a path")
        return out


def _no_outer_past(f: Formula) -> bool:
    if isinstance(f, (Prev, WeakPrev, Since, WeakSince)):
        return False
    if isinstance(f, (E, A)):
        return True
    return all(_no_outer_past(c) for c in f.children)


def _temporal_depth(f: Formula) -> int:
    """Nesting depth of temporal operators, not looking inside quantifiers."""
    if isinstance(f, (E, A)):
        return 0
    inner = max((_temporal_depth(c) for c in f.children), default=0)
    return inner + (1 if isinstance(f, TEMPORAL) else 0)


# ------------------------------------------------------------- public API


def _frame(t: Tree, f: Formula, mode) -> tuple[Evaluator, dict[int, int]]:
    index = {v: i for i, v in enumerate(t.order)}
    children = [[index[c] for c in t.children[v]] for v in t.order]
    names = set().union(*t.props.values()) if t.props else set()
    valuation = {}
    for name in names:
        row = np.array([[name in t.props[v] for v in t.order]], dtype=bool)
        valuation[name] = row
    return Evaluator(children, valuation, 1, mode), index


def _assignment(t: Tree, index, assign: Sequence[int], f: Formula, ev: Evaluator) -> tuple[int, ...]:
    """Map node ids to evaluator indices; only free variables need a value,
    bound positions beyond the given assignment start at the root."""
    k = max(ev.free_vars(f), default=0)
    if len(assign) < k:
        raise CheckError(f"assignment of length {len(assign)} is too short; x{k} occurs free")
    for u in assign:
        if u not in index:
            raise CheckError(f"assignment refers to unknown node {u}")
    a = [index[u] for u in assign]
    return tuple(a + [index[t.root]] * max(0, max_var(f) - len(a)))


def check_state(t: Tree, v: int, assign: Sequence[int], f: Formula,
                mode: Mode | str = Mode.LEAF_LOOP) -> bool:
    """T, v, ū ⊨ f."""
    if not is_state(f):
        raise CheckError("check_state expects a state formula")
    ev, index = _frame(t, f, mode)
    if v not in index:
        raise CheckError(f"unknown node {v}")
    a = _assignment(t, index, assign, f, ev)
    return bool(ev.state(f, a)[0, index[v]])


def check_path(t: Tree, path: Sequence[int], i: int, assign: Sequence[int], f: Formula,
               mode: Mode | str = Mode.LEAF_LOOP) -> bool:
    """T, π, i ⊨ f for a node sequence π that follows child edges and ends at a leaf.

    Past operators see only the positions of π itself.  In leaf-loop mode
    positions at or beyond len(π) denote the repeated leaf.
    """
    mode = _mode(mode)
    ev, index = _frame(t, f, mode)
    path = list(path)
    if not path:
        raise CheckError("empty path")
    for u in path:
        if u not in index:
            raise CheckError(f"unknown node {u}")
    for a, b in zip(path, path[1:]):
        if b not in t.children[a]:
            raise CheckError(f"{b} is not a child of {a}")
    if t.children[path[-1]]:
        raise CheckError(f"path must end at a leaf, {path[-1]} is not one")
    if i < 0 or (mode is Mode.STRICT and i >= len(path)):
        raise CheckError(f"position {i} outside the path")
    if mode is Mode.LEAF_LOOP:
        path += [path[-1]] * (max(0, i - len(path) + 1) + _temporal_depth(f))
    a = _assignment(t, index, assign, f, ev)
    return bool(ev.path(f, a, tuple(index[u] for u in path))[0, i])


def models(t: Tree, f: Formula, mode: Mode | str = Mode.LEAF_LOOP) -> bool:
    """T, r, (r, ..., r) ⊨ f."""
    return check_state(t, t.root, [t.root] * max_var(f), f, mode)


def truth_table(t: Tree, f: Formula, mode: Mode | str = Mode.LEAF_LOOP,
                k: int | None = None) -> dict[tuple[int, tuple[int, ...]], bool]:
    """Truth of f at every (node, assignment) pair with assignments of length k."""
    from itertools import product

    k = max_var(f) if k is None else k
    ev, index = _frame(t, f, mode)
    ids = list(t.order)
    out = {}
    for assign in product(range(len(ids)), repeat=k):
        row = ev.state(f, assign)[0]
        for i, v in enumerate(ids):
            out[(v, tuple(ids[j] for j in assign))] = bool(row[i])
    return out
