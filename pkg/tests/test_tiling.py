import random

import pytest

from hbtl.checker import models
from hbtl.formula import classify, propositions, size
from hbtl.parser import parse_formula, print_formula
from hbtl.tiling import (
    A_WINS, E_WINS, INCONCLUSIVE, PART_NAMES, SUBPART_NAMES, StateBudgetExceeded, TilingError,
    TilingInstance, corollary_instance, encode_parts, encode_tiling, load_instance, part,
    reserved_props, save_instance, solve_tiling, strategy_tree_check,
)
from gadgets import FAIL, PASS, tree
from oracles import naive_tiling


def test_corollary_instance():
    inst = corollary_instance(2)
    assert inst.F == {"0l", "0s"} and inst.L == {"1l", "1f"} and len(inst.tiles) == 6
    assert ("0l", "1l") in inst.V and ("0l", "0l") not in inst.V
    assert load_instance(save_instance(inst)) == inst
    with pytest.raises(TilingError):
        corollary_instance(-1)


@pytest.mark.parametrize("bad", [
    dict(tiles=("a", "a"), H=set(), V=set(), F=set(), L=set(), n=1),
    dict(tiles=("a",), H={("a", "z")}, V=set(), F=set(), L=set(), n=1),
    dict(tiles=("a",), H=set(), V=set(), F={"z"}, L=set(), n=1),
    dict(tiles=("a b",), H=set(), V=set(), F=set(), L=set(), n=1),
    dict(tiles=("a",), H=set(), V=set(), F=set(), L=set(), n=-1),
])
def test_instance_validation(bad):
    with pytest.raises(TilingError):
        TilingInstance.make(**bad)


def test_instance_json_errors():
    with pytest.raises(TilingError):
        load_instance('{"tiles": ["a"]}')


def test_encoder_parts_and_aliases():
    inst = corollary_instance(1)
    parts = encode_parts(inst)
    assert set(PART_NAMES) | set(SUBPART_NAMES) <= set(parts)
    assert part(inst, "χ4") == parts["chi4"] and part(inst, "ψ7") == parts["psi7"]
    assert part(inst, "θ'") == parts["theta1"] and part(inst, "θ''") == parts["theta2"]
    assert part(inst, "ξ") == parts["xi"]
    with pytest.raises(TilingError):
        part(inst, "chi11")


def test_encoder_levels_and_vocabulary():
    inst = corollary_instance(2)
    f = encode_tiling(inst)
    c = classify(f)
    assert c.k <= 1 and c.level in ("CTL", "CTL+")
    allowed = reserved_props(2) | {f"p_{t}" for t in inst.tiles}
    assert propositions(f) <= allowed
    assert str(f).startswith("row_e")
    assert parse_formula(print_formula(f)) == f


def test_encoder_rejects_bad_instances():
    with pytest.raises(TilingError):
        encode_tiling(corollary_instance(0))
    clash = TilingInstance.make(("x",), set(), set(), set(), set(), 1)
    encode_tiling(clash)  # p_x does not clash
    with pytest.raises(TilingError):
        encode_tiling(TilingInstance.make((), set(), set(), set(), set(), 1))


def test_encoder_size_grows_linearly():
    sizes = [size(encode_tiling(corollary_instance(n))) for n in range(1, 6)]
    diffs = [b - a for a, b in zip(sizes, sizes[1:])]
    assert max(diffs) <= 1.2 * min(diffs)


@pytest.mark.parametrize("name", PART_NAMES)
def test_part_gadgets(name):
    f = part(corollary_instance(1), name)
    assert models(tree(PASS[name]), f)
    assert not models(tree(FAIL[name]), f)


def test_strategy_tree_check_rejects_gadgets():
    inst = corollary_instance(1)
    assert not strategy_tree_check(tree(FAIL["chi2"]), inst)


def test_solver_corollary():
    inst = corollary_instance(1)
    r = solve_tiling(inst, 2, 4)
    assert r.verdict == E_WINS and r.rows_needed == 4
    assert solve_tiling(inst, 2, 3).verdict == INCONCLUSIVE
    assert [solve_tiling(inst, w, 20).rows_needed for w in (1, 3, 4)] == [2, 8, 16]
    assert solve_tiling(inst.with_(L=frozenset()), 2, 4).verdict == A_WINS


def test_solver_budget_and_errors():
    with pytest.raises(StateBudgetExceeded):
        solve_tiling(corollary_instance(1), 4, 20, budget=10)
    with pytest.raises(TilingError):
        solve_tiling(corollary_instance(1), 0, 3)
    with pytest.raises(TilingError):
        solve_tiling(corollary_instance(1), 2, 0)


def random_instance(rng):
    tiles = tuple(f"t{i}" for i in range(rng.randint(1, 3)))
    pairs = [(a, b) for a in tiles for b in tiles]
    pick = lambda xs, p: {x for x in xs if rng.random() < p}  # noqa: E731
    return TilingInstance.make(tiles, pick(pairs, 0.6), pick(pairs, 0.6), pick(tiles, 0.7),
                               pick(tiles, 0.4), 1)


def test_solver_matches_minimax_on_random_instances():
    rng = random.Random(2)
    for _ in range(40):
        inst = random_instance(rng)
        w, rows = rng.randint(1, 3), rng.randint(1, 4)
        assert solve_tiling(inst, w, rows).verdict == naive_tiling(inst, w, rows)
