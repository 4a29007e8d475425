"""JSON (de)serialization for trees, transition systems and tiling instances.

Saved documents use a fixed key order and sorted proposition lists so that
fixtures diff cleanly.
"""
from __future__ import annotations

import json
from typing import Any

from .models import Tree, TreeError, TransitionSystem


def _load(data: bytes | str | dict) -> Any:
    if isinstance(data, (bytes, str)):
        return json.loads(data)
    return data


def _node_entries(doc, key: str) -> list[dict]:
    entries = doc.get(key)
    if not isinstance(entries, list):
        raise TreeError("schema", f"'{key}' must be a list")
    seen = set()
    for e in entries:
        if not isinstance(e, dict) or not isinstance(e.get("id"), int):
            raise TreeError("schema", f"every entry of '{key}' needs an integer 'id'")
        if e["id"] in seen:
            raise TreeError("duplicate-id", f"node id {e['id']} appears twice")
        seen.add(e["id"])
    return entries


def tree_from_dict(doc: dict) -> Tree:
    if "root" not in doc:
        raise TreeError("schema", "missing 'root'")
    nodes = _node_entries(doc, "nodes")
    ids = {n["id"] for n in nodes}
    if doc["root"] not in ids:
        raise TreeError("missing-root", f"root {doc['root']} is not a node")
    children = {n["id"]: list(n.get("children", [])) for n in nodes}
    props = {n["id"]: list(n.get("props", [])) for n in nodes}
    return Tree.build(doc["root"], children, props)


def load_tree(data: bytes | str | dict) -> Tree:
    return tree_from_dict(_load(data))


def tree_to_dict(t: Tree) -> dict:
    return {
        "root": t.root,
        "nodes": [
            {"id": v, "props": sorted(t.props[v]), "children": list(t.children[v])}
            for v in t.order
        ],
    }


def save_tree(t: Tree) -> str:
    return json.dumps(tree_to_dict(t), indent=2)


def load_transition_system(data: bytes | str | dict) -> TransitionSystem:
    doc = _load(data)
    states = _node_entries(doc, "states")
    edges = doc.get("edges", [])
    return TransitionSystem(
        doc["initial"],
        {s["id"]: frozenset(s.get("props", [])) for s in states},
        tuple((int(a), int(b)) for a, b in edges),
    )


def transition_system_to_dict(ts: TransitionSystem) -> dict:
    return {
        "initial": ts.initial,
        "states": [{"id": s, "props": sorted(ts.states[s])} for s in sorted(ts.states)],
        "edges": [list(e) for e in ts.edges],
    }


def save_transition_system(ts: TransitionSystem) -> str:
    return json.dumps(transition_system_to_dict(ts), indent=2)
