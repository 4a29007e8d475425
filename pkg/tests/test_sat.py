import pytest

from hbtl.checker import models
from hbtl.parser import parse_formula as P
from hbtl.rewriter import eliminate_past_fairness
from hbtl.sat import (
    BudgetExceeded, SearchBounds, bounded_sat, count_trees, equisat_check, equivalent_on_trees,
    iter_trees, shapes,
)
from oracles import naive_trees


def test_shape_counts():
    # rooted unordered trees: 1, 1, 2, 4, 9, 20 (OEIS A000081)
    assert [len(shapes(n)) for n in range(1, 7)] == [1, 1, 2, 4, 9, 20]
    assert len(shapes(4, height=1)) == 1
    assert len(shapes(4, branching=1)) == 1


@pytest.mark.parametrize("n_max,props", [(3, ("p",)), (4, ("p",)), (3, ("p", "q")), (4, ("p", "q"))])
def test_enumeration_matches_parent_array_oracle(n_max, props):
    b = SearchBounds(props=props, max_nodes=n_max)
    codes = [t.canonical_code() for t in iter_trees(b)]
    assert len(codes) == len(set(codes)) == count_trees(b)
    assert set(codes) == naive_trees(n_max, props)


def test_bounds_respected():
    b = SearchBounds(max_depth=1, max_branching=2, props=("p",), max_nodes=6)
    for t in iter_trees(b):
        assert t.height <= 1 and max(len(c) for c in t.children.values()) <= 2


def test_bounded_sat_examples():
    b = SearchBounds(props=("p", "q"), max_nodes=4)
    r = bounded_sat(P("E X p & A X q & !p"), b)
    assert r.satisfiable and models(r.model, P("E X p & A X q & !p"))
    assert bounded_sat(P("p & !p"), b).verdict == "unsat-within-bounds"
    # the leaf repeats itself, so a lone root satisfies E X E X root ...
    assert len(bounded_sat(P("E X E X root"), b).model) == 1
    # ... while leaving the root needs a child
    assert len(bounded_sat(P("E X !root"), b).model) == 2
    g = P("E X (!root & p & E X (q & !p))")
    assert not bounded_sat(g, SearchBounds(props=("p", "q"), max_nodes=2)).satisfiable
    assert len(bounded_sat(g, b).model) == 3


def test_bounded_sat_errors():
    with pytest.raises(ValueError):
        bounded_sat(P("r"), SearchBounds(props=("p",)))
    with pytest.raises(BudgetExceeded):
        bounded_sat(P("p & !p"), SearchBounds(props=("p", "q"), max_nodes=5), budget=50)
    with pytest.raises(ValueError):
        SearchBounds(max_nodes=0)


def test_equisat_on_fairness_elimination():
    f = P("E(G p & Finf q)")
    rep = eliminate_past_fairness(f)
    assert rep.kind == "satisfiability-preserving" and rep.fresh == ["p1"]
    b = SearchBounds(max_depth=3, max_branching=2, props=("p", "q", "p1"), max_nodes=5)
    res = equisat_check(f, rep.output, b)
    assert res.verdict == "agree"


def test_equisat_reports_disagreement_and_budget():
    b = SearchBounds(props=("p",), max_nodes=3)
    res = equisat_check(P("p"), P("p & !p"), b)
    assert res.verdict == "disagree" and res.witness is not None
    assert res.as_dict()["left"] == "sat"
    assert equisat_check(P("p"), P("p"), b, budget=1).verdict == "inconclusive"


def test_equivalent_on_trees():
    b = SearchBounds(props=("p",), max_nodes=4)
    assert equivalent_on_trees(P("A G p"), P("!E F !p"), b).equivalent
    rep = equivalent_on_trees(P("E F p"), P("p"), b)
    assert not rep.equivalent and not models(rep.disagreement.tree, P("p"))
    rep = equivalent_on_trees(P("E F x1"), P("x1"), b)
    assert rep.disagreement.assignment != ()
