"""The 2EXP-corridor tiling game: instances, the formula encoder φ_I, the
instance family I_n with a unique long play, and a small-board solver.

Encoding vocabulary: ``row_e``/``row_o`` (row nodes), ``pos_e``/``pos_o``
(position nodes), ``o`` (original position bits), ``c`` (copy nodes),
``qsharp`` (outside the strategy), ``b_0..b_{n-1}`` (position-bit number),
``d_i``/``e_i`` (carry helpers), ``b`` (the position bit itself) and one
proposition ``p_<tile>`` per tile.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache

from .formula import (
    AtRoot, At, Bind, Formula, Iff, Implies, Not, Prop, Var, conj, disj,
    AG, AX, EF, EX, E, A, Always, Eventually, And, Or,
)


class TilingError(ValueError):
    pass


_TILE_NAME = re.compile(r"[A-Za-z0-9_]+$")


@dataclass(frozen=True)
class TilingInstance:
    tiles: tuple[str, ...]
    H: frozenset[tuple[str, str]]
    V: frozenset[tuple[str, str]]
    F: frozenset[str]
    L: frozenset[str]
    n: int

    def __post_init__(self):
        ts = set(self.tiles)
        if len(ts) != len(self.tiles):
            raise TilingError("duplicate tile name")
        for t in self.tiles:
            if not _TILE_NAME.match(t):
                raise TilingError(f"tile name {t!r} must be alphanumeric")
        for name, rel in (("H", self.H), ("V", self.V)):
            for a, b in rel:
                if a not in ts or b not in ts:
                    raise TilingError(f"{name} mentions unknown tile in ({a}, {b})")
        for name, s in (("F", self.F), ("L", self.L)):
            if not s <= ts:
                raise TilingError(f"{name} mentions unknown tiles {sorted(s - ts)}")
        if self.n < 0:
            raise TilingError("n must be non-negative")

    @classmethod
    def make(cls, tiles, H, V, F, L, n) -> "TilingInstance":
        return cls(tuple(tiles), frozenset(map(tuple, H)), frozenset(map(tuple, V)),
                   frozenset(F), frozenset(L), int(n))

    def with_(self, **changes) -> "TilingInstance":
        d = dict(tiles=self.tiles, H=self.H, V=self.V, F=self.F, L=self.L, n=self.n)
        d.update(changes)
        return TilingInstance.make(**d)

    def to_dict(self) -> dict:
        return {
            "tiles": list(self.tiles),
            "H": sorted([list(p) for p in self.H]),
            "V": sorted([list(p) for p in self.V]),
            "F": sorted(self.F),
            "L": sorted(self.L),
            "n": self.n,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TilingInstance":
        try:
            return cls.make(d["tiles"], d["H"], d["V"], d["F"], d["L"], d["n"])
        except KeyError as exc:
            raise TilingError(f"missing key {exc.args[0]!r}") from None


def load_instance(data) -> TilingInstance:
    return TilingInstance.from_dict(json.loads(data) if isinstance(data, (str, bytes)) else data)


def save_instance(inst: TilingInstance) -> str:
    return json.dumps(inst.to_dict(), indent=2)


def corollary_instance(n: int) -> TilingInstance:
    """I_n: tiles {0,1}×{l,f,s}; from the first row 0^l 0^s…0^s every row
    encodes the successor of the previous one, and E wins on the all-ones row."""
    if n < 0:
        raise TilingError("n must be non-negative")
    tiles = ("0l", "0f", "0s", "1l", "1f", "1s")
    H = set()
    for b in "01":
        H |= {("0l", b + "s"), ("1l", b + "f"), ("0f", b + "s"), ("1f", b + "f"),
              ("0s", b + "s"), ("1s", b + "s")}
    V = {("0l", "1l"), ("1l", "0l")}
    for x in "fs":
        V |= {("0f", "1" + x), ("1f", "0" + x), ("0s", "0" + x), ("1s", "1" + x)}
    return TilingInstance.make(tiles, H, V, {"0l", "0s"}, {"1l", "1f"}, n)


# ------------------------------------------------------------------ encoder

MARKERS = ("pos_e", "pos_o", "row_e", "row_o", "qsharp", "o", "c")


def tile_prop(t: str) -> str:
    return f"p_{t}"


def reserved_props(n: int) -> set[str]:
    return set(MARKERS) | {"b"} | {f"{x}_{i}" for x in "bde" for i in range(n)}


class _Vocab:
    """Abbreviations shared by the encoder formulas."""

    def __init__(self, inst: TilingInstance):
        self.inst = inst
        n = inst.n
        P = Prop
        self.pos_e, self.pos_o, self.row_e, self.row_o = P("pos_e"), P("pos_o"), P("row_e"), P("row_o")
        self.q, self.o, self.c, self.b = P("qsharp"), P("o"), P("c"), P("b")
        self.bits = [P(f"b_{i}") for i in range(n)]
        self.d = [P(f"d_{i}") for i in range(n)]
        self.e = [P(f"e_{i}") for i in range(n)]
        self.x = Var(1)
        self.pos = Or(self.pos_e, self.pos_o)
        self.row = Or(self.row_e, self.row_o)
        self.first = conj(self.o, *[Not(bi) for bi in self.bits])
        self.last = conj(*self.bits)
        self.psi_cur = And(Always(Not(self.pos)), Eventually(And(self.c, self.last)))
        self.psi_pos = self._exactly_two(self.pos_e, self.pos_o)
        self.psi_row = self._exactly_two(self.row_e, self.row_o)

    @staticmethod
    def _exactly_two(a, b):
        return Or(And(Eventually(a), Not(Eventually(b))), And(Eventually(b), Not(Eventually(a))))

    def p(self, t):
        return Prop(tile_prop(t))

    def down(self, body):
        return Bind(1, body)

    def at_x(self, f):
        return At(1, f)

    def same_bits(self, with_b: bool):
        """⋀ (b_i ↔ @x b_i) [∧ (b ↔ @x b)]."""
        parts = [Iff(bi, self.at_x(bi)) for bi in self.bits]
        if with_b:
            parts.append(Iff(self.b, self.at_x(self.b)))
        return conj(*parts)

    def bits_match_copy(self):
        """⋀ (b_i ↔ F(c ∧ b_i)) ∧ (b ↔ F(c ∧ b))."""
        parts = [Iff(bi, Eventually(And(self.c, bi))) for bi in self.bits]
        parts.append(Iff(self.b, Eventually(And(self.c, self.b))))
        return conj(*parts)

    def only_child(self, guard=None):
        """↓x.@root EF(EX x ∧ AX(guard → x)): x is the only (guard-)child of its parent."""
        body = self.x if guard is None else Implies(guard, self.x)
        return self.down(AtRoot(EF(And(EX(self.x), AX(body)))))


def _chi(v: _Vocab) -> dict[str, Formula]:
    inst = v.inst
    n = inst.n
    out: dict[str, Formula] = {}
    markers = [v.pos_e, v.pos_o, v.row_e, v.row_o, v.q, v.o, v.c]
    exclusive = [Implies(m, conj(*[Not(m2) for m2 in markers if m2 != m])) for m in markers]
    out["chi1"] = AG(conj(disj(v.row, v.pos, v.q, v.o, v.c), *exclusive))
    out["chi2"] = And(v.row_e, AG(Implies(v.row, EX(And(v.pos_e, v.only_child())))))
    out["chi3"] = AG(Implies(v.pos, AX(v.first)))

    chi4a = AG(conj(
        v.d[0], *[Iff(v.d[i], And(v.d[i - 1], v.bits[i - 1])) for i in range(1, n)],
        v.e[0], *[Iff(v.e[i], And(v.e[i - 1], Not(v.bits[i - 1]))) for i in range(1, n)],
    )) if n else AG(conj())
    if n:
        top = n - 1
        high = Or(conj(v.e[top], v.bits[top], v.at_x(Not(v.bits[top]))),
                  And(Not(v.e[top]), Iff(v.bits[top], v.at_x(v.bits[top]))))
        lower = [disj(And(v.e[i + 1], v.at_x(v.d[i + 1])),
                      conj(v.e[i], v.bits[i], v.at_x(Not(v.bits[i]))),
                      And(Not(v.e[i]), Iff(v.bits[i], v.at_x(v.bits[i]))))
                 for i in range(n - 1)]
        chi4b = AG(Implies(And(v.o, Not(v.last)), v.down(EX(conj(v.o, high, *lower)))))
    else:
        chi4b = AG(Implies(And(v.o, Not(v.last)), v.down(EX(v.o))))
    out["chi4a"], out["chi4b"] = chi4a, chi4b
    out["chi4"] = And(chi4a, chi4b)

    out["chi5"] = AG(And(
        Implies(v.o, v.down(EX(conj(v.c, v.same_bits(True))))),
        Implies(v.c, v.down(AG(conj(v.c, v.same_bits(True))))),
    ))

    chi6a = AG(Implies(And(v.o, Not(v.last)), conj(
        EX(And(v.o, v.only_child(v.o))),
        EX(And(v.c, v.only_child(v.c))),
        AX(Or(v.o, v.c)),
    )))
    chi6b = AG(Implies(And(v.o, v.last), conj(
        EX(And(v.c, v.only_child(v.c))),
        EX(And(Not(v.c), v.only_child(Not(v.c)))),
        AX(disj(v.c, v.pos, v.row, v.q)),
    )))
    out["chi6a"], out["chi6b"] = chi6a, chi6b
    out["chi6"] = And(chi6a, chi6b)

    out["chi7"] = AG(Implies(v.row, EX(AX(E(And(v.psi_cur, Always(Not(v.b))))))))

    chi8a = AG(Implies(
        And(v.first, E(And(v.psi_cur, Always(v.b)))),
        E(And(Always(Not(v.pos)), Eventually(conj(v.o, v.last, EX(Or(v.row, v.q)))))),
    ))
    theta_pp = AtRoot(EF(And(v.first, E(conj(
        Always(Not(v.pos)),
        Eventually(v.x),
        Eventually(conj(v.c, v.same_bits(False))),
        Always(Implies(And(v.o, Not(v.x)),
                       A(Implies(conj(v.psi_pos, *[Iff(bi, Eventually(And(v.c, bi))) for bi in v.bits]),
                                 Iff(v.b, Eventually(And(v.c, v.b))))))),
    )))))
    theta_p = v.down(And(theta_pp, E(And(v.psi_cur, Eventually(conj(
        v.o, v.last,
        EX(And(v.pos, AX(E(And(v.psi_cur, Eventually(conj(
            v.o, v.same_bits(True),
            EX(And(Not(v.c), Implies(v.o, E(And(v.psi_cur, Always(Not(v.b))))))),
        ))))))),
    ))))))
    theta = E(And(v.psi_cur, Eventually(conj(
        v.o, Not(v.b),
        EX(And(Not(v.c), Implies(v.o, E(And(v.psi_cur, Always(v.b)))))),
        theta_p,
    ))))
    chi8b = AG(Implies(
        conj(v.first, E(And(Always(Not(v.pos)), Eventually(conj(v.c, v.last, v.b)))),
             E(And(v.psi_cur, Eventually(Not(v.b))))),
        theta,
    ))
    chi8c = AG(Implies(
        And(v.first, E(And(Always(Not(v.pos)), Eventually(conj(v.c, v.last, Not(v.b)))))),
        Or(E(And(v.psi_cur, Eventually(conj(v.o, v.last, EX(v.q))))), theta),
    ))
    out["theta"], out["theta1"], out["theta2"] = theta, theta_p, theta_pp
    out["chi8a"], out["chi8b"], out["chi8c"] = chi8a, chi8b, chi8c
    out["chi8"] = conj(chi8a, chi8b, chi8c)

    chi9a = AG(Implies(v.pos, v.down(AtRoot(AG(Implies(
        And(v.pos, EX(E(And(v.psi_cur, Eventually(conj(v.o, v.last, EX(v.x))))))),
        Iff(v.pos_e, v.at_x(v.pos_o)),
    ))))))
    chi9b = AG(Implies(v.row, v.down(AtRoot(AG(Implies(
        And(v.row, EX(E(conj(Always(Not(v.row)), Eventually(And(v.c, v.last)),
                            Eventually(conj(v.o, v.last, EX(v.x))))))),
        Iff(v.row_e, v.at_x(v.row_o)),
    ))))))
    out["chi9a"], out["chi9b"] = chi9a, chi9b
    out["chi9"] = And(chi9a, chi9b)

    out["chi10"] = AG(Implies(v.pos_e, EX(v.only_child())))
    return out


def _xi(v: _Vocab) -> Formula:
    efx = EF(v.x)
    return conj(
        v.first,
        E(conj(Eventually(v.x), Always(Implies(Not(v.c), efx)), v.psi_row)),
        E(And(v.psi_cur, Always(Implies(v.o, E(conj(
            Always(Implies(Not(v.c), efx)),
            Eventually(E(And(Always(Not(v.pos)), Eventually(v.x)))),
            v.bits_match_copy(),
        )))))),
    )


def _psi(v: _Vocab) -> dict[str, Formula]:
    inst = v.inst
    T = inst.tiles
    out: dict[str, Formula] = {}
    out["psi1"] = And(A(Implies(Always(Not(v.c)), Eventually(v.q))), AG(Implies(v.q, AG(v.q))))
    out["psi2"] = AG(And(
        Implies(v.o, disj(*[conj(v.p(t), *[Not(v.p(u)) for u in T if u != t]) for t in T])),
        Implies(And(v.o, Not(v.last)), conj(*[Iff(v.p(t), EX(And(v.o, v.p(t)))) for t in T])),
    ))
    out["psi3"] = AG(Implies(v.first, conj(*[
        Implies(v.p(t2), v.down(AtRoot(AG(Implies(
            conj(v.first, Not(v.x), E(conj(Eventually(v.x), v.psi_pos, Always(Not(v.row))))),
            disj(*[v.p(t) for t in T if (t, t2) in inst.H]),
        )))))
        for t2 in T
    ])))
    xi = _xi(v)
    out["xi"] = xi
    out["psi4"] = AG(Implies(v.first, conj(*[
        Implies(v.p(t2), E(And(v.psi_cur, Eventually(conj(
            v.o, v.last,
            v.down(AtRoot(AG(Implies(xi, disj(*[v.p(t) for t in T if (t, t2) in inst.V]))))),
        )))))
        for t2 in T
    ])))

    def a_move(t2):
        direct = E(And(v.psi_cur, Eventually(conj(v.o, v.last, EX(And(v.pos, EX(v.p(t2))))))))
        blocked = disj(*[
            E(And(v.psi_cur, Eventually(conj(v.o, v.last, EX(And(v.p(t3), EF(v.x)))))))
            for t3 in T if (t3, t2) not in inst.V
        ])
        escape = E(And(v.psi_cur, Eventually(conj(
            v.o, v.last, v.down(AtRoot(EF(And(xi, blocked))))))))
        return Or(direct, escape)

    out["psi5"] = AG(Implies(
        And(v.first, E(And(v.psi_cur, Eventually(conj(v.o, v.last, Not(v.b)))))),
        conj(*[Implies(v.p(t), conj(*[a_move(t2) for t2 in T if (t, t2) in inst.H])) for t in T]),
    ))
    out["psi6"] = AG(Implies(
        And(v.first, v.down(AtRoot(EX(E(And(Always(Not(v.row)), Eventually(v.x))))))),
        disj(*[v.p(t) for t in T if t in inst.F]),
    ))
    out["psi7"] = AG(Implies(
        conj(v.o, v.last, v.b, EX(v.q)),
        v.down(AtRoot(EF(And(v.row, EX(E(conj(
            Always(Not(v.row)), Eventually(v.x),
            Always(Implies(v.first, disj(*[v.p(t) for t in T if t in inst.L]))),
        ))))))),
    ))
    return out


PART_NAMES = tuple([f"chi{i}" for i in range(1, 11)] + [f"psi{i}" for i in range(1, 8)])
SUBPART_NAMES = ("chi4a", "chi4b", "chi6a", "chi6b", "chi8a", "chi8b", "chi8c",
                 "chi9a", "chi9b", "theta", "theta1", "theta2", "xi")
_ALIASES = {"χ": "chi", "ψ": "psi", "θ": "theta", "ξ": "xi"}


def _check_names(inst: TilingInstance) -> None:
    if inst.n < 1:
        raise TilingError("the encoder needs n ≥ 1")
    if not inst.tiles:
        raise TilingError("the encoder needs at least one tile")
    clash = sorted({tile_prop(t) for t in inst.tiles} & reserved_props(inst.n))
    if clash:
        raise TilingError(f"tile propositions clash with reserved names: {clash}")


def encode_parts(inst: TilingInstance) -> dict[str, Formula]:
    """All named parts: chi1..chi10, psi1..psi7 and the sub-formulas
    chi4a/b, chi6a/b, chi8a/b/c, chi9a/b, theta (θ), theta1 (θ'), theta2 (θ''), xi (ξ)."""
    _check_names(inst)
    v = _Vocab(inst)
    parts = {**_chi(v), **_psi(v)}
    return {k: parts[k] for k in PART_NAMES + SUBPART_NAMES}


def part(inst: TilingInstance, name: str) -> Formula:
    key = name
    for sym, ascii_ in _ALIASES.items():
        key = key.replace(sym, ascii_)
    key = key.replace("''", "2").replace("'", "1")
    parts = encode_parts(inst)
    if key not in parts:
        raise TilingError(f"unknown part {name!r}; choose from {', '.join(parts)}")
    return parts[key]


def encode_tiling(inst: TilingInstance) -> Formula:
    """φ_I = χ ∧ ψ.  The conjunction starts with χ2 (whose head is row_e),
    followed by χ1, χ3..χ10 and ψ1..ψ7."""
    parts = encode_parts(inst)
    order = ["chi2", "chi1"] + [f"chi{i}" for i in range(3, 11)] + [f"psi{i}" for i in range(1, 8)]
    return conj(*[parts[k] for k in order])


def strategy_tree_check(tree, inst: TilingInstance) -> bool:
    from .checker import models

    return models(tree, encode_tiling(inst))


# ------------------------------------------------------------------- solver

E_WINS, A_WINS, INCONCLUSIVE = "E-wins", "A-wins", "inconclusive"


class StateBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class TilingResult:
    verdict: str
    rows_needed: int | None  # least number of rows within which E forces a win
    states: int

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "rows_needed": self.rows_needed, "states": self.states}


class _Game:
    """Rows are filled left to right; E places tiles at even columns, A at odd
    ones.  A tile must satisfy H with its left neighbour, V with the tile
    below it and F in the first row.  E wins when a row consisting only of
    L-tiles is completed or when A has no legal tile; A wins when E has no
    legal tile or play goes on forever."""

    def __init__(self, inst: TilingInstance, width: int):
        if width < 1:
            raise TilingError("width must be positive")
        self.inst, self.width = inst, width

    def moves(self, prev, partial):
        inst, col = self.inst, len(partial)
        out = []
        for t in inst.tiles:
            if prev is None and t not in inst.F:
                continue
            if col and (partial[-1], t) not in inst.H:
                continue
            if prev is not None and (prev[col], t) not in inst.V:
                continue
            out.append(t)
        return out

    def e_to_move(self, partial) -> bool:
        return len(partial) % 2 == 0


def solve_tiling(inst: TilingInstance, width: int, max_rows: int, budget: int = 10**6) -> TilingResult:
    """E-wins if E can force a win within max_rows rows; A-wins if E cannot
    force a win at all (exact analysis of the finite row-state graph);
    inconclusive otherwise."""
    if max_rows < 1:
        raise TilingError("max_rows must be at least 1")
    game = _Game(inst, width)
    states = _reachable(game, budget)
    winning = _attractor(game, states)
    rows_needed = None
    if (None, ()) in winning:
        rows_needed = _rows_needed(game, max_rows)
    if rows_needed is not None:
        return TilingResult(E_WINS, rows_needed, len(states))
    if (None, ()) not in winning:
        return TilingResult(A_WINS, None, len(states))
    return TilingResult(INCONCLUSIVE, None, len(states))


def _reachable(game: _Game, budget: int) -> list:
    start = (None, ())
    seen = {start}
    stack = [start]
    while stack:
        prev, partial = stack.pop()
        for t in game.moves(prev, partial):
            row = partial + (t,)
            nxt = (row, ()) if len(row) == game.width else (prev, row)
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > budget:
                    raise StateBudgetExceeded(f"more than {budget} game states")
                stack.append(nxt)
    return sorted(seen, key=repr)


def _attractor(game: _Game, states) -> set:
    """States from which E can force a win."""
    L = game.inst.L
    win: set = set()
    changed = True
    while changed:
        changed = False
        for s in states:
            if s in win:
                continue
            prev, partial = s
            moves = game.moves(prev, partial)
            e_turn = game.e_to_move(partial)
            if not moves:
                good = not e_turn
            else:
                results = []
                for t in moves:
                    row = partial + (t,)
                    if len(row) == game.width:
                        results.append(all(x in L for x in row) or (row, ()) in win)
                    else:
                        results.append((prev, row) in win)
                good = any(results) if e_turn else all(results)
            if good:
                win.add(s)
                changed = True
    return win


def _rows_needed(game: _Game, max_rows: int) -> int | None:
    L = game.inst.L

    @lru_cache(maxsize=None)
    def wins(rows_left, prev, partial) -> bool:
        moves = game.moves(prev, partial)
        e_turn = game.e_to_move(partial)
        if not moves:
            return not e_turn
        results = []
        for t in moves:
            row = partial + (t,)
            if len(row) == game.width:
                r = all(x in L for x in row) or (rows_left > 1 and wins(rows_left - 1, row, ()))
            else:
                r = wins(rows_left, prev, row)
            results.append(r)
            if r == e_turn:
                break
        return any(results) if e_turn else all(results)

    for r in range(1, max_rows + 1):
        if wins(r, None, ()):
            return r
    return None
