"""Bounded-model search over finite labeled trees.

Trees are enumerated up to label-respecting isomorphism: first by node
count, then by the canonical code of the unlabeled shape, then by the
labeling read as a number in pre-order.  Child order never affects the
truth of a formula (E and A range over all paths, and binders only name
nodes), so it is enough to visit one labeled tree per isomorphism class.

A shape is a tuple of child shapes in ascending order (a leaf is ``()``).
A labeling of a shape is canonical when, for every pair of adjacent
siblings with equal shape, the pre-order label sequence of the left one is
lexicographically at most that of the right one.  Every labeled tree is
isomorphic to exactly one canonical labeling of its shape.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .checker import Evaluator, Mode, models
from .formula import Formula, max_var, propositions
from .models import Tree

CHUNK = 1 << 15


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchBounds:
    max_depth: int | None = None
    max_branching: int | None = None
    props: tuple[str, ...] = ("p",)
    max_nodes: int = 6

    def __post_init__(self):
        object.__setattr__(self, "props", tuple(self.props))
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be positive")
        if len(set(self.props)) != len(self.props):
            raise ValueError("duplicate proposition in the universe")


# ----------------------------------------------------------------- shapes

Shape = tuple


def shape_size(s: Shape) -> int:
    return 1 + sum(shape_size(c) for c in s)


@lru_cache(maxsize=None)
def shapes(n: int, height: int | None = None, branching: int | None = None) -> tuple[Shape, ...]:
    """All unlabeled rooted trees with n nodes, height ≤ height and at most
    ``branching`` children per node, in ascending canonical order."""
    if n < 1:
        return ()
    if n == 1:
        return ((),)
    if height is not None and height <= 0:
        return ()
    sub_h = None if height is None else height - 1
    pool = [s for m in range(1, n) for s in shapes(m, sub_h, branching)]
    pool.sort()
    out = []

    def pick(start: int, remaining: int, acc: list):
        if remaining == 0:
            out.append(tuple(acc))
            return
        if branching is not None and len(acc) >= branching:
            return
        for i in range(start, len(pool)):
            sz = shape_size(pool[i])
            if sz <= remaining:
                acc.append(pool[i])
                pick(i, remaining - sz, acc)
                acc.pop()

    pick(0, n - 1, [])
    return tuple(sorted(set(out)))


@dataclass(frozen=True)
class Layout:
    """Pre-order layout of a shape."""

    shape: Shape
    children: tuple[tuple[int, ...], ...]
    sizes: tuple[int, ...]
    twins: tuple[tuple[int, int], ...]  # adjacent equal-shape siblings

    @property
    def n(self) -> int:
        return len(self.children)


@lru_cache(maxsize=None)
def layout(s: Shape) -> Layout:
    children: list[list[int]] = []
    sizes: list[int] = []
    twins: list[tuple[int, int]] = []

    def go(sh: Shape) -> int:
        v = len(children)
        children.append([])
        sizes.append(0)
        prev = None
        for c in sh:
            u = go(c)
            children[v].append(u)
            if prev is not None and prev[1] == c:
                twins.append((prev[0], u))
            prev = (u, c)
        sizes[v] = len(children) - v
        return v

    go(s)
    return Layout(s, tuple(tuple(c) for c in children), tuple(sizes), tuple(twins))


def labeling_batches(lay: Layout, n_props: int, canonical: bool = True,
                     chunk: int = CHUNK) -> Iterator[np.ndarray]:
    """Batches of labelings, each a (batch, n) array of label codes in
    0..2^n_props-1; bit j of a code is proposition j.  Batches follow the
    lexicographic order of the pre-order label sequence."""
    base = 1 << n_props
    n = lay.n
    total = base ** n
    powers = np.array([base ** (n - 1 - v) for v in range(n)], dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        if canonical and lay.twins:
            keep = np.ones(len(idx), dtype=bool)
            for u, w in lay.twins:
                sz = lay.sizes[u]
                mod = base ** sz
                cu = (idx // (base ** (n - u - sz))) % mod
                cw = (idx // (base ** (n - w - sz))) % mod
                keep &= cu <= cw
            idx = idx[keep]
            if not len(idx):
                continue
        yield (idx[:, None] // powers[None, :]) % base


def valuation(labels: np.ndarray, props: Sequence[str]) -> dict[str, np.ndarray]:
    return {p: ((labels >> j) & 1).astype(bool) for j, p in enumerate(props)}


def to_tree(lay: Layout, labels_row: np.ndarray, props: Sequence[str]) -> Tree:
    return Tree.build(
        0,
        {v: lay.children[v] for v in range(lay.n)},
        {v: [p for j, p in enumerate(props) if (int(labels_row[v]) >> j) & 1] for v in range(lay.n)},
    )


def iter_shapes(bounds: SearchBounds) -> Iterator[Layout]:
    for n in range(1, bounds.max_nodes + 1):
        for s in shapes(n, bounds.max_depth, bounds.max_branching):
            yield layout(s)


def iter_trees(bounds: SearchBounds, canonical: bool = True) -> Iterator[Tree]:
    """All labeled trees within bounds, one per isomorphism class when canonical."""
    for lay in iter_shapes(bounds):
        for batch in labeling_batches(lay, len(bounds.props), canonical):
            for row in batch:
                yield to_tree(lay, row, bounds.props)


def count_trees(bounds: SearchBounds, canonical: bool = True) -> int:
    return sum(len(b) for lay in iter_shapes(bounds)
               for b in labeling_batches(lay, len(bounds.props), canonical))


# ------------------------------------------------------------ satisfiability


def _check_universe(f: Formula, bounds: SearchBounds) -> None:
    missing = propositions(f) - set(bounds.props)
    if missing:
        raise ValueError(f"propositions {sorted(missing)} are not in the search universe")


@dataclass(frozen=True)
class SatResult:
    model: Tree | None
    candidates: int

    @property
    def satisfiable(self) -> bool:
        return self.model is not None

    @property
    def verdict(self) -> str:
        return "sat" if self.model is not None else "unsat-within-bounds"


def bounded_sat(f: Formula, bounds: SearchBounds, budget: int = 10**6,
                mode: Mode | str = Mode.LEAF_LOOP) -> SatResult:
    """First model of f in enumeration order, or unsat-within-bounds."""
    _check_universe(f, bounds)
    root_assign = (0,) * max_var(f)
    seen = 0
    for lay in iter_shapes(bounds):
        for labels in labeling_batches(lay, len(bounds.props)):
            seen += len(labels)
            if seen > budget:
                raise BudgetExceeded(f"more than {budget} candidate trees")
            ev = Evaluator(lay.children, valuation(labels, bounds.props), len(labels), mode)
            hits = np.flatnonzero(ev.state(f, root_assign)[:, 0])
            if len(hits):
                tree = to_tree(lay, labels[hits[0]], bounds.props)
                if not models(tree, f, mode):  # pragma: no cover - defensive re-check
                    raise AssertionError("search reported a tree that is not a model")
                return SatResult(tree, seen)
    return SatResult(None, seen)


@dataclass(frozen=True)
class EquisatResult:
    verdict: str  # agree | disagree | inconclusive
    left: SatResult | None
    right: SatResult | None
    witness: Tree | None = None
    note: str = ""

    def as_dict(self) -> dict:
        from .serialization import tree_to_dict

        return {
            "verdict": self.verdict,
            "left": self.left.verdict if self.left else None,
            "right": self.right.verdict if self.right else None,
            "witness": tree_to_dict(self.witness) if self.witness else None,
            "note": self.note,
        }


def equisat_check(f: Formula, g: Formula, bounds: SearchBounds, budget: int = 10**6,
                  mode: Mode | str = Mode.LEAF_LOOP) -> EquisatResult:
    """Compare bounded satisfiability of f and g."""
    try:
        left = bounded_sat(f, bounds, budget, mode)
        right = bounded_sat(g, bounds, budget, mode)
    except BudgetExceeded as exc:
        return EquisatResult("inconclusive", None, None, note=str(exc))
    if left.satisfiable == right.satisfiable:
        note = "both satisfiable" if left.satisfiable else "both unsatisfiable within bounds only"
        return EquisatResult("agree", left, right, note=note)
    witness = left.model or right.model
    side = "left" if left.satisfiable else "right"
    return EquisatResult("disagree", left, right, witness,
                         note=f"only the {side} formula has a model within bounds")


# --------------------------------------------------------------- equivalence


@dataclass
class Disagreement:
    tree: Tree
    node: int
    assignment: tuple[int, ...]


@dataclass
class EquivalenceReport:
    disagreement: Disagreement | None
    trees: int = 0
    complete: bool = True
    max_nodes_done: int = 0
    per_size: dict = field(default_factory=dict)

    @property
    def equivalent(self) -> bool:
        return self.disagreement is None


def compare_on_trees(pairs: Sequence[tuple[Formula, Formula]], bounds: SearchBounds, k: int | None = None,
                     mode: Mode | str = Mode.LEAF_LOOP, deadline: float | None = None) -> list[EquivalenceReport]:
    """Compare each pair (f, g) at every node and every assignment of length k
    on all trees within bounds.  Stops at the first disagreement per pair and
    at ``deadline`` (a time.monotonic() value) overall."""
    for f, g in pairs:
        _check_universe(f, bounds)
        _check_universe(g, bounds)
    ks = [max(max_var(f), max_var(g)) if k is None else k for f, g in pairs]
    reports = [EquivalenceReport(None) for _ in pairs]
    for lay in iter_shapes(bounds):
        n = lay.n
        for rep in reports:
            rep.max_nodes_done = n - 1
        for labels in labeling_batches(lay, len(bounds.props)):
            if deadline is not None and time.monotonic() > deadline:
                for r in reports:
                    r.complete = False
                return reports
            ev = Evaluator(lay.children, valuation(labels, bounds.props), len(labels), mode)
            for (f, g), kk, rep in zip(pairs, ks, reports):
                if rep.disagreement is not None:
                    continue
                for assign in product(range(n), repeat=kk):
                    diff = ev.state(f, assign) != ev.state(g, assign)
                    if diff.any():
                        b, v = map(int, np.argwhere(diff)[0])
                        rep.disagreement = Disagreement(to_tree(lay, labels[b], bounds.props), v, assign)
                        break
                rep.trees += len(labels)
                rep.per_size[n] = rep.per_size.get(n, 0) + len(labels)
    for rep in reports:
        rep.max_nodes_done = bounds.max_nodes
    return reports


def equivalent_on_trees(f: Formula, g: Formula, bounds: SearchBounds, k: int | None = None,
                        mode: Mode | str = Mode.LEAF_LOOP) -> EquivalenceReport:
    return compare_on_trees([(f, g)], bounds, k, mode)[0]
