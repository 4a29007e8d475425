"""Shared formula suites and tree fixtures for the tests."""
from __future__ import annotations

from hbtl.models import Tree, chain, tree_from_nested
from hbtl.parser import parse_formula

# Fifty formulas over {p, q} covering every operator, both quantifiers,
# the hybrid operators, past and fairness.
CHECKER_SUITE_TEXT = [
    "p", "!q", "root", "p & !q | q", "p -> q", "p <-> q",
    "E X p", "A X q", "E F p", "A F q", "E G p", "A G !q",
    "E (p U q)", "A (p U q)", "E (F p & F q)", "A (G p | F q)", "E (X p & !X q)",
    "E F G p", "A G F q", "E (p U (q U p))", "E X X p", "A (X p -> F q)",
    "E Finf p", "A Ginf q", "E (Finf p & Ginf !q)", "A (Finf q -> G p)",
    "E F Y p", "E G (q -> Y p)", "E (q S p)", "A (p wS q)", "Y p", "wY !p",
    "p S q", "E F (q & (p S root))", "E X wY p", "A F (Y Y p)",
    "down x1 . E X E F x1", "down x1 . E F (p & @x1 q)", "down x1 . @root E F x1",
    "down x1 . @root E F (p & E F x1)", "down x1 . A G (x1 -> root)",
    "down x1 . E (F x1 & F p)", "E F down x1 . A X E F x1", "@root A G p",
    "x1", "@x1 p", "E F (x1 & q)", "A G (p -> E F x1)",
    "E F (p & E X (q & down x1 . @root E F (E X x1 & A X x1)))",
    "down x1 . E X (p & @x1 !p)",
]
CHECKER_SUITE = [parse_formula(s) for s in CHECKER_SUITE_TEXT]

SECTION1 = parse_formula("down x1 . @root E F (p & E F x1)")


def single(*props) -> Tree:
    return Tree.build(0, {0: []}, {0: list(props)})


def isomorphic_pairs() -> list[tuple[Tree, Tree]]:
    """Ten pairs of isomorphic trees; the second tree renumbers nodes and
    reverses child order."""
    specs = [
        ("p", []),
        ("", [("p", [])]),
        ("p", [("q", []), ("", [])]),
        ("", [("p", [("q", [])]), ("q", [])]),
        ("p", [("", [("p", [])]), ("", [("p", [])])]),
        ("q", [("p", []), ("p", []), ("", [])]),
        ("", [("", [("", [("p", [])])])]),
        ("p,q", [("q", [("", [])]), ("p", [])]),
        ("", [("p", [("", []), ("q", [])]), ("", [("q", [])])]),
        ("p", [("q", [("p", [("q", [])])]), ("", [])]),
    ]
    return [(tree_from_nested(s), _mirror(tree_from_nested(s))) for s in specs]


def _mirror(t: Tree) -> Tree:
    n = len(t)
    rename = {v: 100 + (n - i) for i, v in enumerate(t.order)}
    return Tree.build(rename[t.root],
                      {rename[v]: [rename[c] for c in reversed(t.children[v])] for v in t.order},
                      {rename[v]: sorted(t.props[v]) for v in t.order})


# (φ, T, T') with T ⊨ φ, T' ⊭ φ and depth(φ) ≤ 2, formulas from HCTL.
DISTINGUISHING_CATALOG = [
    ("p", single("p"), single()),
    ("E X p", tree_from_nested(("", [("p", [])])), tree_from_nested(("", [("", [])]))),
    ("E X E X p", chain("", "", "p"), chain("", "q")),
    ("E (p U q)", chain("p", "p", "q"), chain("p", "", "q")),
    ("A X p", tree_from_nested(("", [("p", []), ("p", [])])), tree_from_nested(("", [("p", []), ("", [])]))),
    ("E F (p & E X q)", chain("", "p", "q"), chain("", "q", "p")),
    ("E X (p & down x1 . @root E X x1)", chain("", "p"), chain("", "", "p")),
    ("E G p", chain("p", "p"), tree_from_nested(("p", [("", [])]))),
    ("A F q", tree_from_nested(("", [("q", []), ("", [("q", [])])])),
     tree_from_nested(("", [("q", []), ("", [("", [])])]))),
]
