"""Finite trees, transition systems, bounded unraveling, the model families
A_i / B_k, and the string Ehrenfeucht-game utilities (≡_k, S_k, N_k)."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping


class TreeError(ValueError):
    def __init__(self, kind: str, message: str):
        self.kind = kind
        super().__init__(f"{kind}: {message}")


@dataclass(frozen=True, eq=False)
class Tree:
    """Finite rooted ordered tree with proposition labels.

    ``children`` maps every node id to its ordered child tuple and ``props``
    maps it to a frozenset of proposition names.  Use :meth:`build` to
    construct a validated tree.
    """

    root: int
    children: Mapping[int, tuple[int, ...]]
    props: Mapping[int, frozenset[str]]
    parent: Mapping[int, int | None] = field(repr=False)
    order: tuple[int, ...] = field(repr=False)  # pre-order

    @classmethod
    def build(cls, root: int, children: Mapping[int, Iterable[int]],
              props: Mapping[int, Iterable[str]] | None = None) -> "Tree":
        props = props or {}
        ids = set(children) | set(props) | {root}
        ch = {v: tuple(children.get(v, ())) for v in ids}
        pr = {v: frozenset(props.get(v, ())) for v in ids}
        parent: dict[int, int | None] = {root: None}
        for v in sorted(ids):
            for c in ch[v]:
                if c not in ids:
                    raise TreeError("dangling-child", f"node {v} lists missing child {c}")
                if c == root or c in parent and parent[c] is not None:
                    raise TreeError("multiple-parents" if c != root else "cycle",
                                    f"node {c} has more than one parent")
                parent[c] = v
        orphans = sorted(v for v in ids if v not in parent)
        if orphans:
            raise TreeError("multiple-roots", f"nodes {orphans} are not reachable from the root")
        order: list[int] = []
        stack = [root]
        seen = set()
        while stack:
            v = stack.pop()
            if v in seen:
                raise TreeError("cycle", f"node {v} reached twice")
            seen.add(v)
            order.append(v)
            stack.extend(reversed(ch[v]))
        if len(order) != len(ids):
            raise TreeError("cycle", "nodes lie on a cycle detached from the root")
        return cls(root, ch, pr, parent, tuple(order))

    # -- derived structure
    @property
    def nodes(self) -> tuple[int, ...]:
        return self.order

    def __len__(self) -> int:
        return len(self.order)

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]

    @property
    def leaves(self) -> tuple[int, ...]:
        return tuple(v for v in self.order if not self.children[v])

    def depth_of(self, v: int) -> int:
        d = 0
        while self.parent[v] is not None:
            v = self.parent[v]
            d += 1
        return d

    def history(self, v: int) -> tuple[int, ...]:
        """Nodes from the root down to v."""
        out = [v]
        while self.parent[v] is not None:
            v = self.parent[v]
            out.append(v)
        return tuple(reversed(out))

    @property
    def height(self) -> int:
        return max(self.depth_of(v) for v in self.leaves)

    def paths_from(self, v: int) -> list[tuple[int, ...]]:
        """All node sequences from v down to a leaf, depth-first."""
        if not self.children[v]:
            return [(v,)]
        return [(v,) + p for c in self.children[v] for p in self.paths_from(c)]

    def is_descendant(self, u: int, v: int) -> bool:
        """True if u lies strictly below v."""
        while self.parent[u] is not None:
            u = self.parent[u]
            if u == v:
                return True
        return False

    def __eq__(self, other) -> bool:
        return (isinstance(other, Tree) and self.root == other.root
                and dict(self.children) == dict(other.children)
                and dict(self.props) == dict(other.props))

    __hash__ = None

    def canonical_code(self, v: int | None = None) -> tuple:
        """Order-insensitive code of the labeled subtree at v."""
        v = self.root if v is None else v
        return (tuple(sorted(self.props[v])),
                tuple(sorted(self.canonical_code(c) for c in self.children[v])))


def tree_from_nested(spec) -> Tree:
    """Build a tree from ``(props, [child specs])``; props may be a string of
    comma-separated names or an iterable.  Node ids follow pre-order."""
    children: dict[int, list[int]] = {}
    props: dict[int, frozenset[str]] = {}
    counter = [0]

    def go(s) -> int:
        if isinstance(s, (str, set, frozenset, list)) and not (isinstance(s, tuple)):
            s = (s, [])
        label, kids = s[0], (s[1] if len(s) > 1 else [])
        v = counter[0]
        counter[0] += 1
        if isinstance(label, str):
            label = [x.strip() for x in label.split(",") if x.strip()]
        props[v] = frozenset(label)
        children[v] = [go(k) for k in kids]
        return v

    go(spec)
    return Tree.build(0, children, props)


def chain(*labels) -> Tree:
    """A path r → ... with the given labels."""
    spec = (labels[-1], [])
    for lab in reversed(labels[:-1]):
        spec = (lab, [spec])
    return tree_from_nested(spec)


# ---------------------------------------------------------- transition systems


@dataclass(frozen=True)
class TransitionSystem:
    initial: int
    states: Mapping[int, frozenset[str]]
    edges: tuple[tuple[int, int], ...]

    def successors(self, s: int) -> list[int]:
        return [t for (f, t) in self.edges if f == s]

    def __post_init__(self):
        if self.initial not in self.states:
            raise TreeError("missing-root", f"initial state {self.initial} is not a state")
        for f, t in self.edges:
            if f not in self.states or t not in self.states:
                raise TreeError("dangling-child", f"edge ({f}, {t}) uses an unknown state")


def unravel(ts: TransitionSystem, depth: int) -> Tree:
    """Tree of all paths from the initial state with at most ``depth`` edges.

    Node ids are assigned in pre-order; node labels are those of the last state.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    children: dict[int, list[int]] = {}
    props: dict[int, frozenset[str]] = {}
    counter = 0

    def go(state: int, d: int) -> int:
        nonlocal counter
        v = counter
        counter += 1
        props[v] = ts.states[state]
        children[v] = [go(s, d - 1) for s in ts.successors(state)] if d > 0 else []
        return v

    go(ts.initial, depth)
    return Tree.build(0, children, props)


def unravel_states(ts: TransitionSystem, depth: int) -> list[tuple[int, ...]]:
    """The state sequences behind the nodes of unravel(ts, depth), in pre-order."""
    out = []

    def go(path):
        out.append(path)
        if len(path) <= depth:
            for s in ts.successors(path[-1]):
                go(path + (s,))

    go((ts.initial,))
    return out


BLACK = frozenset({"p"})
WHITE = frozenset()


def _add_A(i: int, states: dict, edges: list) -> tuple[int, int, list[int]]:
    """Add a copy of A_i; return (black root, white node, black states of the copy)."""
    black, white = len(states), len(states) + 1
    states[black], states[white] = BLACK, WHITE
    edges.append((black, white))
    edges.append((white, white))
    blacks = [black]
    if i > 0:
        _, _, inner = _add_A(i - 1, states, edges)
        edges.extend((white, b) for b in inner)
        blacks += inner
    return black, white, blacks


def build_A(i: int) -> TransitionSystem:
    """A_0: black root → white node with a self-loop.  A_i adds a copy of
    A_{i-1} with an edge from the white node below the root to each black
    node of the copy.  Black states carry ``p``."""
    if i < 0:
        raise ValueError("index must be non-negative")
    states: dict[int, frozenset[str]] = {}
    edges: list[tuple[int, int]] = []
    _add_A(i, states, edges)
    return TransitionSystem(0, states, tuple(edges))


def build_B(k: int, S: int, N: int) -> TransitionSystem:
    """B_k: black root, a path of S white nodes whose last node loops and
    points back to the root, plus a copy of A_N reachable from every white
    node of the path (edges to each black node of the copy)."""
    if S < 1:
        raise ValueError("S must be at least 1")
    states: dict[int, frozenset[str]] = {0: BLACK}
    edges: list[tuple[int, int]] = []
    whites = list(range(1, S + 1))
    for w in whites:
        states[w] = WHITE
    edges.append((0, whites[0]))
    edges.extend(zip(whites, whites[1:]))
    edges.append((whites[-1], whites[-1]))
    edges.append((whites[-1], 0))
    _, _, blacks = _add_A(N, states, edges)
    edges.extend((w, b) for w in whites for b in blacks)
    return TransitionSystem(0, states, tuple(edges))


def black_count(tree: Tree, path: Iterable[int], prop: str = "p") -> int:
    return sum(1 for v in path if prop in tree.props[v])


# ---------------------------------------------------------- string EF game
# A string over {0,1} is a linear order with one unary predicate (1 = black).


@lru_cache(maxsize=None)
def ef_type(s: str, k: int) -> frozenset:
    """The k-round EF type of s: two strings have the same type iff the
    duplicator wins the k-round game on them.

    A move in round 1 splits s at a chosen position i into the left part,
    the colour of i and the right part; the remaining k-1 rounds decompose
    into independent games on the two sides (composition for linear orders).
    """
    if k == 0:
        return frozenset()
    return frozenset((s[i], ef_type(s[:i], k - 1), ef_type(s[i + 1:], k - 1))
                     for i in range(len(s)))


def string_ef_equiv(s: str, t: str, k: int) -> bool:
    for w in (s, t):
        if set(w) - {"0", "1"}:
            raise ValueError(f"not a 0/1 string: {w!r}")
    return ef_type(s, k) == ef_type(t, k)


@dataclass(frozen=True)
class SBound:
    k: int
    value: int
    stabilized: bool
    search_bound: int
    representatives: Mapping[frozenset, str] = field(repr=False, compare=False)


def compute_S(k: int, search_bound: int = 10) -> SBound:
    """Least S such that every string of length ≤ search_bound has a
    ≡_k-equivalent string of length ≤ S.

    The certificate is ``stabilized``: when S < search_bound, every type
    realised by strings up to length S+1 already has a representative of
    length ≤ S.  A string longer than that is built from shorter pieces, and
    ≡_k is a congruence for concatenation, so its type is the type of some
    string of length ≤ S+1 and the bound holds for all strings.
    """
    reps: dict[frozenset, str] = {}
    for n in range(search_bound + 1):
        for bits in product("01", repeat=n):
            s = "".join(bits)
            reps.setdefault(ef_type(s, k), s)
    S = max(len(r) for r in reps.values())
    return SBound(k, S, S < search_bound, search_bound, reps)


def compute_N(k: int, S: Mapping[int, int]) -> int:
    """N_0 = 0, N_k = N_{k-1} + max(S_3, S_k) + 1."""
    n = 0
    for j in range(1, k + 1):
        n += max(S[3], S[j]) + 1
    return n
