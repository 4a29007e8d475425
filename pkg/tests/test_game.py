import random

import pytest

from hbtl.game import (
    DUPLICATOR, SPOILER, GameBudgetExceeded, GameState, IllegalMove, Move, ScriptError,
    apply_move, legal_moves, least_spoiler_rounds, parse_script, replay, solve_game,
    state_winner, win_check,
)
from hbtl.models import chain, tree_from_nested
from hbtl.sat import SearchBounds, iter_trees
from suite import DISTINGUISHING_CATALOG, isomorphic_pairs, single


def minimax(s: GameState) -> str:
    """Game value by exhaustive play through legal_moves/apply_move."""
    if s.finished:
        return state_winner(s)
    spoiler_turn = s.pending is None or s.pending[0] == "path2"
    outcomes = (minimax(apply_move(s, m)) for m in legal_moves(s))
    if spoiler_turn:
        return SPOILER if any(o == SPOILER for o in outcomes) else DUPLICATOR
    return DUPLICATOR if any(o == DUPLICATOR for o in outcomes) else SPOILER


def test_legal_moves_fresh_game():
    s = GameState.start(single("p"), single(), 1)
    moves = legal_moves(s)
    assert [m.to_line() for m in moves] == ["S node L 0", "S node R 0"]  # no anchors yet
    s = GameState.start(chain("", ""), chain(""), 1, preselected=[(0, 0)])
    lines = {m.to_line() for m in legal_moves(s)}
    assert "S path L 0 1" in lines and "S path R 0 0" in lines


def test_path_anchor_must_be_lowest():
    t = chain("", "", "")
    s = GameState.start(t, t, 2, preselected=[(0, 0), (1, 1)])
    assert not s.legal_anchor("L", 0) and s.legal_anchor("L", 1)
    with pytest.raises(IllegalMove, match="bad anchor"):
        apply_move(s, Move("S", "path", side="L", anchor=0, node=2))


def test_win_clauses():
    T = chain("", "", "")
    # child vs grandchild: reachability agrees, the child clause does not
    wc = win_check(T, T, [0, 1], [0, 2])
    assert wc.root and wc.equality and wc.propositions and wc.paths and not wc.children
    wc = win_check(single("p"), single(), [0], [0])
    assert not wc.propositions and not wc.duplicator_wins
    wc = win_check(T, T, [0, 0], [0, 1])
    assert not wc.equality and not wc.root
    forked = tree_from_nested(("", [("", []), ("", [])]))
    wc = win_check(forked, T, [1, 2], [1, 2])
    assert not wc.paths


def test_replay_examples():
    tr = replay("S node L 0\nD node R 0\n", single("p"), single())
    assert tr.complete and tr.winner == SPOILER and tr.as_dict()["clauses"]["propositions"] is False
    t = chain("", "p")
    script = """# a path move from the root pair
    S node L 0
    D node R 0
    S path L 0 1
    D path 1
    S pick 1
    D pick 5   # past the leaf: the leaf
    """
    tr = replay(script, t, t)
    assert tr.complete and tr.winner == DUPLICATOR and tr.a == (0, 1) and tr.a2 == (0, 1)
    partial = replay("S node L 0\n", t, t)
    assert not partial.complete and partial.winner is None


def test_replay_errors():
    t = chain("", "")
    with pytest.raises(ScriptError):
        parse_script("S jump L 0")
    with pytest.raises(ScriptError):
        parse_script("S node Q 0")
    with pytest.raises(IllegalMove) as exc:
        replay("S node L 0\nD node R 0\nS node L 1\nD node R 1\nS path L 0 1", t, t, rounds=3)
    assert exc.value.line == 5 and "bad anchor" in str(exc.value)
    with pytest.raises(IllegalMove, match="unknown id"):
        replay("S node L 7", t, t)
    with pytest.raises(IllegalMove, match="turn"):
        replay("D node R 0", t, t)


def test_solver_examples():
    assert solve_game(single("p"), single(), 1) == SPOILER
    assert solve_game(single("p"), single(), 0) == DUPLICATOR
    assert solve_game(single("p"), single(), 0, preselected=[(0, 0)]) == SPOILER
    assert least_spoiler_rounds(chain("", ""), single(), 3) == 1  # the child is not a root
    assert least_spoiler_rounds(chain("", ""), chain("", ""), 3) is None
    with pytest.raises(GameBudgetExceeded):
        solve_game(chain("", "", "", "", "", ""), chain("", "", "", "", "", ""), 3, budget=5)


@pytest.mark.parametrize("T,T2", isomorphic_pairs())
def test_isomorphic_pairs_duplicator(T, T2):
    for k in range(3):
        assert solve_game(T, T2, k) == DUPLICATOR


def test_solver_matches_minimax():
    trees = list(iter_trees(SearchBounds(props=("p",), max_nodes=3)))
    rng = random.Random(4)
    for _ in range(25):
        T, T2 = rng.choice(trees), rng.choice(trees)
        for k in (1, 2):
            assert solve_game(T, T2, k) == minimax(GameState.start(T, T2, k)), (T, T2, k)


def test_catalog_distinguished_and_symmetric():
    for phi, T, T2 in DISTINGUISHING_CATALOG:
        k = least_spoiler_rounds(T, T2, 4)
        assert k is not None and k <= 4
        assert solve_game(T2, T, k) == SPOILER
        assert solve_game(T, T2, k + 1) == SPOILER  # monotone in the number of rounds
