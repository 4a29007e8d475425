"""The HCTL Ehrenfeucht game on pairs of finite trees.

Each round selects one node a_i of the left tree T and one node a'_i of the
right tree T'.  The spoiler either plays a *node move* (she picks a node on
one side, the duplicator answers on the other) or a *path move*: she picks a
side, an already selected anchor a_j on that side with no other selected
node strictly below it, and a path π from a_j; the duplicator answers with a
path π' from the partner anchor; the spoiler then picks a node on π' and the
duplicator a node on π.  On finite trees a path from a node is identified
with the leaf it ends in (the leaf repeats forever), so a path is the node
sequence from the anchor down to a leaf.

The duplicator wins if, for all selected pairs i, j: a_i is the root iff a'_i
is; a_i = a_j iff a'_i = a'_j; a_i and a'_i carry the same propositions;
a_j lies on a downward path from a_i iff a'_j does from a'_i; a_j is a child
of a_i iff a'_j is a child of a'_i.  Every clause concerns at most two pairs,
so once violated it stays violated; the solver stops such lines early.

Script lines (``#`` starts a comment)::

    S node <L|R> <id>            spoiler picks a node on one side
    D node <L|R> <id>            duplicator answers on the other side
    S path <L|R> <anchor> <leaf> spoiler starts a path move (anchor = index of a selected pair)
    D path <leaf>                duplicator's path from the partner anchor
    S pick <position>            spoiler picks a node on the duplicator's path
    D pick <position>            duplicator picks a node on the spoiler's path

Positions count from 0 at the anchor; positions past the leaf denote the leaf.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from .models import Tree

SPOILER, DUPLICATOR = "spoiler", "duplicator"
SIDES = ("L", "R")


class IllegalMove(ValueError):
    def __init__(self, reason: str, line: int | None = None):
        self.reason = reason
        self.line = line
        super().__init__(reason if line is None else f"line {line}: {reason}")


class ScriptError(ValueError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


class GameBudgetExceeded(RuntimeError):
    pass


# ------------------------------------------------------------------- moves


@dataclass(frozen=True)
class Move:
    player: str  # "S" or "D"
    kind: str  # node | path | pick
    side: str | None = None
    node: int | None = None  # node id (node moves) or leaf id (path moves)
    anchor: int | None = None
    position: int | None = None

    def to_line(self) -> str:
        if self.kind == "node":
            return f"{self.player} node {self.side} {self.node}"
        if self.kind == "path":
            if self.player == "S":
                return f"S path {self.side} {self.anchor} {self.node}"
            return f"D path {self.node}"
        return f"{self.player} pick {self.position}"


def parse_script(text: str) -> list[tuple[int, Move]]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        try:
            who, kind, *rest = line
            if who not in ("S", "D") or kind not in ("node", "path", "pick"):
                raise ValueError
            if kind == "node":
                side, node = rest
                if side not in SIDES:
                    raise ValueError
                mv = Move(who, "node", side=side, node=int(node))
            elif kind == "path" and who == "S":
                side, anchor, leaf = rest
                if side not in SIDES:
                    raise ValueError
                mv = Move("S", "path", side=side, anchor=int(anchor), node=int(leaf))
            elif kind == "path":
                (leaf,) = rest
                mv = Move("D", "path", node=int(leaf))
            else:
                (pos,) = rest
                mv = Move(who, "pick", position=int(pos))
        except ValueError:
            raise ScriptError(f"cannot read move {raw.strip()!r}", no) from None
        out.append((no, mv))
    return out


# ------------------------------------------------------------ win condition


def _is_child(t: Tree, u: int, v: int) -> bool:
    return t.parent[v] == u


def _reaches(t: Tree, u: int, v: int) -> bool:
    """A downward path leads from u to v (v = u included)."""
    return u == v or t.is_descendant(v, u)


@dataclass(frozen=True)
class WinCheck:
    root: bool
    equality: bool
    propositions: bool
    paths: bool
    children: bool

    @property
    def duplicator_wins(self) -> bool:
        return self.root and self.equality and self.propositions and self.paths and self.children

    def as_dict(self) -> dict:
        return {"root": self.root, "equality": self.equality, "propositions": self.propositions,
                "paths": self.paths, "children": self.children}


def win_check(T: Tree, T2: Tree, a: Sequence[int], a2: Sequence[int]) -> WinCheck:
    if len(a) != len(a2):
        raise ValueError("selection lists must have equal length")
    pairs = list(zip(a, a2))
    root = all((u == T.root) == (w == T2.root) for u, w in pairs)
    props = all(T.props[u] == T2.props[w] for u, w in pairs)
    eq = paths = child = True
    for u, w in pairs:
        for x, y in pairs:
            eq &= (u == x) == (w == y)
            paths &= _reaches(T, u, x) == _reaches(T2, w, y)
            child &= _is_child(T, u, x) == _is_child(T2, w, y)
    return WinCheck(root, eq, props, paths, child)


def winner(T: Tree, T2: Tree, a: Sequence[int], a2: Sequence[int]) -> str:
    return DUPLICATOR if win_check(T, T2, a, a2).duplicator_wins else SPOILER


# -------------------------------------------------------------------- state


@dataclass(frozen=True)
class GameState:
    """Selections so far, rounds left and the pending part of the current round.

    ``pending`` is None between rounds, otherwise one of
    ``("node", side, u)``, ``("path", side, j, leaf)``,
    ``("path2", side, j, leaf, leaf2)``, ``("pick", side, j, leaf, leaf2, x2)``
    where side is the spoiler's tree and leaf2/x2 live in the other tree.
    """

    left: Tree
    right: Tree
    a: tuple[int, ...] = ()
    a2: tuple[int, ...] = ()
    rounds: int = 0
    pending: tuple | None = None
    initial: int = field(default=0)  # number of preselected pairs

    @classmethod
    def start(cls, left: Tree, right: Tree, rounds: int,
              preselected: Sequence[tuple[int, int]] = ()) -> "GameState":
        """Fresh game; ``preselected`` holds the pairs (a_0, a'_0), (u_1, u'_1), …
        of the extended game."""
        for u, w in preselected:
            if u not in left.children or w not in right.children:
                raise IllegalMove(f"preselected pair ({u}, {w}) names an unknown node")
        if rounds < 0:
            raise ValueError("rounds must be non-negative")
        a = tuple(u for u, _ in preselected)
        a2 = tuple(w for _, w in preselected)
        return cls(left, right, a, a2, rounds, None, len(a))

    def tree(self, side: str) -> Tree:
        return self.left if side == "L" else self.right

    def selected(self, side: str) -> tuple[int, ...]:
        return self.a if side == "L" else self.a2

    @property
    def finished(self) -> bool:
        return self.rounds == 0 and self.pending is None

    def legal_anchor(self, side: str, j: int) -> bool:
        sel = self.selected(side)
        t = self.tree(side)
        return 0 <= j < len(sel) and not any(t.is_descendant(u, sel[j]) for u in sel)

    def _add(self, u: int, w: int) -> "GameState":
        return replace(self, a=self.a + (u,), a2=self.a2 + (w,), rounds=self.rounds - 1, pending=None)


def _other(side: str) -> str:
    return "R" if side == "L" else "L"


def _path(t: Tree, top: int, leaf: int) -> tuple[int, ...]:
    h = t.history(leaf)
    return h[h.index(top):]


def _leaves_below(t: Tree, v: int) -> list[int]:
    return [p[-1] for p in t.paths_from(v)]


def legal_moves(s: GameState) -> list[Move]:
    """Moves available to the player whose turn it is."""
    p = s.pending
    if p is None:
        if s.rounds <= 0:
            return []
        out = [Move("S", "node", side=side, node=u) for side in SIDES for u in s.tree(side).nodes]
        for side in SIDES:
            t, sel = s.tree(side), s.selected(side)
            for j in range(len(sel)):
                if s.legal_anchor(side, j):
                    out += [Move("S", "path", side=side, anchor=j, node=leaf)
                            for leaf in _leaves_below(t, sel[j])]
        return out
    kind, side = p[0], p[1]
    other = s.tree(_other(side))
    if kind == "node":
        return [Move("D", "node", side=_other(side), node=u) for u in other.nodes]
    j = p[2]
    if kind == "path":
        return [Move("D", "path", node=leaf)
                for leaf in _leaves_below(other, s.selected(_other(side))[j])]
    if kind == "path2":
        n2 = len(_path(other, s.selected(_other(side))[j], p[4]))
        return [Move("S", "pick", position=i) for i in range(n2)]
    n1 = len(_path(s.tree(side), s.selected(side)[j], p[3]))
    return [Move("D", "pick", position=i) for i in range(n1)]


def apply_move(s: GameState, m: Move) -> GameState:
    p = s.pending
    expected = "S" if p is None or p[0] == "path2" else "D"
    if m.player != expected:
        raise IllegalMove(f"it is the {'spoiler' if expected == 'S' else 'duplicator'}'s turn")
    if p is None:
        if s.rounds <= 0:
            raise IllegalMove("no rounds left")
        t = s.tree(m.side)
        if m.kind == "node":
            if m.node not in t.children:
                raise IllegalMove(f"unknown id {m.node} in tree {m.side}")
            return replace(s, pending=("node", m.side, m.node))
        if m.kind == "path":
            sel = s.selected(m.side)
            if not 0 <= m.anchor < len(sel):
                raise IllegalMove(f"bad anchor: no selected pair {m.anchor}")
            if not s.legal_anchor(m.side, m.anchor):
                raise IllegalMove(f"bad anchor: a selected node lies below anchor {m.anchor}")
            if m.node not in t.children:
                raise IllegalMove(f"unknown id {m.node} in tree {m.side}")
            if m.node not in _leaves_below(t, sel[m.anchor]):
                raise IllegalMove(f"node {m.node} is not a leaf below the anchor")
            return replace(s, pending=("path", m.side, m.anchor, m.node))
        raise IllegalMove("a round starts with a node move or a path move")
    kind, side = p[0], p[1]
    oside = _other(side)
    other = s.tree(oside)
    if kind == "node":
        if m.kind != "node":
            raise IllegalMove("the duplicator must answer a node move with a node")
        if m.side != oside:
            raise IllegalMove(f"the duplicator must answer in tree {oside}")
        if m.node not in other.children:
            raise IllegalMove(f"unknown id {m.node} in tree {oside}")
        u, w = (p[2], m.node) if side == "L" else (m.node, p[2])
        return s._add(u, w)
    j = p[2]
    if kind == "path":
        if m.kind != "path":
            raise IllegalMove("the duplicator must answer a path move with a path")
        if m.node not in other.children:
            raise IllegalMove(f"unknown id {m.node} in tree {oside}")
        if m.node not in _leaves_below(other, s.selected(oside)[j]):
            raise IllegalMove(f"node {m.node} is not a leaf below the partner anchor")
        return replace(s, pending=("path2", side, j, p[3], m.node))
    if m.kind != "pick" or m.position < 0:
        raise IllegalMove("expected a pick with a non-negative position")
    if kind == "path2":
        pi2 = _path(other, s.selected(oside)[j], p[4])
        x2 = pi2[min(m.position, len(pi2) - 1)]
        return replace(s, pending=("pick", side, j, p[3], p[4], x2))
    pi = _path(s.tree(side), s.selected(side)[j], p[3])
    x = pi[min(m.position, len(pi) - 1)]
    u, w = (x, p[5]) if side == "L" else (p[5], x)
    return s._add(u, w)


def state_winner(s: GameState) -> str:
    return winner(s.left, s.right, s.a, s.a2)


# ------------------------------------------------------------------- replay


@dataclass
class Transcript:
    moves: list[str]
    a: tuple[int, ...]
    a2: tuple[int, ...]
    complete: bool
    winner: str | None
    checks: WinCheck | None

    def as_dict(self) -> dict:
        return {"moves": self.moves, "left": list(self.a), "right": list(self.a2),
                "complete": self.complete, "winner": self.winner,
                "clauses": self.checks.as_dict() if self.checks else None}


def replay(script: str, T: Tree, T2: Tree, rounds: int | None = None,
           preselected: Sequence[tuple[int, int]] = ()) -> Transcript:
    """Apply a script.  With ``rounds=None`` the game lasts as many rounds as
    the script plays.  A script that stops mid-round or before the last round
    yields an incomplete transcript without a winner."""
    moves = parse_script(script)
    if rounds is None:
        rounds = sum(1 for _, m in moves if m.player == "S" and m.kind in ("node", "path"))
    s = GameState.start(T, T2, rounds, preselected)
    done = []
    for no, m in moves:
        try:
            s = apply_move(s, m)
        except IllegalMove as exc:
            raise IllegalMove(exc.reason, no) from None
        done.append(m.to_line())
    if not s.finished:
        return Transcript(done, s.a, s.a2, False, None, None)
    wc = win_check(T, T2, s.a, s.a2)
    return Transcript(done, s.a, s.a2, True, DUPLICATOR if wc.duplicator_wins else SPOILER, wc)


# ------------------------------------------------------------------- solver


class _Side:
    def __init__(self, t: Tree):
        self.t = t
        self.nodes = t.nodes
        self.root = t.root
        self.reach = {u: frozenset(v for v in t.nodes if _reaches(t, u, v)) for u in t.nodes}
        self.paths = {u: t.paths_from(u) for u in t.nodes}


class _Solver:
    def __init__(self, T: Tree, T2: Tree, budget: int):
        self.sides = (_Side(T), _Side(T2))
        self.budget = budget
        self.memo: dict = {}

    def consistent(self, pairs: frozenset, u: int, w: int) -> bool:
        L, R = self.sides
        if (u == L.root) != (w == R.root) or L.t.props[u] != R.t.props[w]:
            return False
        for x, y in pairs:
            if (u == x) != (w == y):
                return False
            if (x in L.reach[u]) != (y in R.reach[w]) or (u in L.reach[x]) != (w in R.reach[y]):
                return False
            if (L.t.parent[x] == u) != (R.t.parent[y] == w) or (L.t.parent[u] == x) != (R.t.parent[w] == y):
                return False
        return True

    def after(self, pairs, u, w, k) -> bool:
        """Spoiler wins after pair (u, w) is added with k rounds left."""
        if (u, w) in pairs:
            return self.wins(pairs, k)
        if not self.consistent(pairs, u, w):
            return True
        return self.wins(pairs | {(u, w)}, k)

    def wins(self, pairs: frozenset, k: int) -> bool:
        if k == 0:
            return False
        key = (pairs, k)
        if key in self.memo:
            return self.memo[key]
        if len(self.memo) >= self.budget:
            raise GameBudgetExceeded(f"more than {self.budget} game states")
        result = self._node_moves(pairs, k) or self._path_moves(pairs, k)
        self.memo[key] = result
        return result

    def _node_moves(self, pairs, k) -> bool:
        L, R = self.sides
        for u in L.nodes:
            if all(self.after(pairs, u, w, k - 1) for w in R.nodes):
                return True
        for w in R.nodes:
            if all(self.after(pairs, u, w, k - 1) for u in L.nodes):
                return True
        return False

    def _path_moves(self, pairs, k) -> bool:
        for side in (0, 1):
            mine, theirs = self.sides[side], self.sides[1 - side]
            own = [p[side] for p in pairs]
            for x, y in pairs:
                anchor, partner = x if side == 0 else y, y if side == 0 else x
                if any(v != anchor and v in mine.reach[anchor] for v in own):
                    continue
                for pi in mine.paths[anchor]:
                    if all(any(all(self.after(pairs, *self._pair(side, n1, n2), k - 1) for n1 in pi)
                               for n2 in pi2)
                           for pi2 in theirs.paths[partner]):
                        return True
        return False

    @staticmethod
    def _pair(side, mine, theirs):
        return (mine, theirs) if side == 0 else (theirs, mine)


def solve_game(T: Tree, T2: Tree, k: int, preselected: Sequence[tuple[int, int]] = (),
               budget: int = 2_000_000) -> str:
    """Winner of the k-round core game (optionally extended with preselected pairs)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    for u, w in preselected:
        if u not in T.children or w not in T2.children:
            raise IllegalMove(f"preselected pair ({u}, {w}) names an unknown node")
    if winner(T, T2, [u for u, _ in preselected], [w for _, w in preselected]) == SPOILER:
        return SPOILER
    solver = _Solver(T, T2, budget)
    return SPOILER if solver.wins(frozenset(preselected), k) else DUPLICATOR


def least_spoiler_rounds(T: Tree, T2: Tree, k_max: int, preselected=(), budget: int = 2_000_000) -> int | None:
    for k in range(k_max + 1):
        if solve_game(T, T2, k, preselected, budget) == SPOILER:
            return k
    return None
