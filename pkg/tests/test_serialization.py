import json

import pytest

from hbtl.models import TreeError, build_A, chain
from hbtl.serialization import (
    load_transition_system, load_tree, save_transition_system, save_tree, tree_to_dict,
)


def test_single_node():
    t = load_tree('{"root":0,"nodes":[{"id":0,"props":["p"],"children":[]}]}')
    assert len(t) == 1 and t.props[0] == {"p"}


def test_chain_fixture(fixtures_dir):
    t = load_tree((fixtures_dir / "chain3.json").read_text())
    assert t.height == 2
    assert t == chain("", "p", "")


@pytest.mark.parametrize("doc, kind", [
    ({"root": 0, "nodes": [{"id": 0, "children": [7]}]}, "dangling-child"),
    ({"root": 0, "nodes": [{"id": 0}, {"id": 0}]}, "duplicate-id"),
    ({"root": 3, "nodes": [{"id": 0}]}, "missing-root"),
    ({"root": 0, "nodes": [{"id": 0, "children": [1]}, {"id": 1, "children": [0]}]}, "cycle"),
    ({"root": 0, "nodes": [{"id": 0}, {"id": 1}]}, "multiple-roots"),
    ({"root": 0, "nodes": [{"id": 0, "children": [1, 2]}, {"id": 1, "children": [2]},
                           {"id": 2}]}, "multiple-parents"),
    ({"nodes": []}, "schema"),
])
def test_tree_validation(doc, kind):
    with pytest.raises(TreeError) as exc:
        load_tree(doc)
    assert exc.value.kind == kind


def test_tree_roundtrip_is_deterministic():
    t = load_tree({"root": 5, "nodes": [{"id": 5, "props": ["q", "p"], "children": [2, 9]},
                                        {"id": 9}, {"id": 2, "props": ["p"]}]})
    text = save_tree(t)
    assert load_tree(text) == t
    assert save_tree(load_tree(text)) == text
    assert tree_to_dict(t)["nodes"][0] == {"id": 5, "props": ["p", "q"], "children": [2, 9]}
    assert t.children[5] == (2, 9)  # child order kept


def test_transition_system_roundtrip():
    ts = build_A(2)
    text = save_transition_system(ts)
    back = load_transition_system(json.loads(text))
    assert back.states == ts.states and back.edges == ts.edges and back.initial == ts.initial
