import random

import pytest

from hbtl.formula import A, E, size, subformulas
from hbtl.gen import random_h1, random_h1plus
from hbtl.parser import parse_formula as P
from hbtl.rewriter import (
    RewriteError, check_h1_past, ctlplus_to_ctl, ctlplus_to_ctl_report, eliminate_past_fairness,
    push_negations, rewrite, to_e_normal, to_u_normal,
)
from hbtl.sat import SearchBounds, compare_on_trees, equivalent_on_trees


def test_u_normal_examples():
    assert to_u_normal(P("A X p")) == P("!E X !p")
    assert to_u_normal(P("E G p")) == P("!A(true U !p)")
    assert to_u_normal(P("E F p")) == P("E(true U p)")


def test_e_normal_examples():
    assert to_e_normal(P("A(p U q)")) == P("!(E(!q U (!q & !p))) & !E G !q")
    assert to_e_normal(P("E X p")) == P("E X p")
    f = P("A((A(p U q)) U r)")
    g = to_e_normal(f)
    assert not any(isinstance(x, A) for x in subformulas(g))
    assert equivalent_on_trees(f, g, SearchBounds(props=("p", "q", "r"), max_nodes=5)).equivalent


def test_normal_forms_reject_ctl_plus():
    for fn in (to_u_normal, to_e_normal):
        with pytest.raises(RewriteError):
            fn(P("E(F p & F q)"))


def test_push_negations_examples():
    assert push_negations(P("!(p U q)")) == P("((p & !q) U (!p & !q)) | G !q")
    assert push_negations(P("!!p")) == P("p")
    assert push_negations(P("!Ginf p")) == P("Finf !p")
    assert push_negations(P("!Y p")) == P("wY !p")


def test_ctl_examples():
    assert ctlplus_to_ctl(P("E(F p1 & F p2)")) == P("(E F (p1 & E F p2)) | E F (p2 & E F p1)")
    assert ctlplus_to_ctl(P("E(X p | G q)")) == P("(E X p) | E G q")
    f = P("down x1 . E(F x1 & F p)")
    g = ctlplus_to_ctl(f)
    rep = equivalent_on_trees(f, g, SearchBounds(props=("p",), max_nodes=6), k=1)
    assert rep.equivalent


def test_ctl_rejects_star_nesting_and_past():
    with pytest.raises(RewriteError):
        ctlplus_to_ctl(P("E F G p"))
    with pytest.raises(RewriteError):
        ctlplus_to_ctl(P("E(Y p & F q)"))


def test_ctl_report():
    rep = ctlplus_to_ctl_report(P("E(F p & F q)"))
    d = rep.as_dict()
    assert d["kind"] == "logical" and d["fresh"] == [] and d["output_size"] > d["input_size"]


def test_random_ctl_plus_translation_small_trees():
    rng = random.Random(11)
    pairs = [(f, ctlplus_to_ctl(f)) for f in (random_h1plus(rng, 10) for _ in range(40))]
    reps = compare_on_trees(pairs, SearchBounds(props=("p", "q"), max_nodes=4), k=1)
    assert all(r.equivalent for r in reps)


def test_u_normal_linear_and_equivalent():
    rng = random.Random(5)
    fs = [random_h1(rng, 12) for _ in range(60)]
    pairs = [(f, to_u_normal(f)) for f in fs]
    assert all(size(g) <= 4 * size(f) for f, g in pairs)
    assert all(r.equivalent for r in compare_on_trees(pairs, SearchBounds(props=("p", "q"), max_nodes=4), k=1))


def test_past_fairness_examples():
    assert eliminate_past_fairness(P("E(Y p & X q)")).output == P("Y p & E X q")
    assert eliminate_past_fairness(P("E(G p & Ginf q)")).output == P("E(p U E G (p & q))")
    rep = eliminate_past_fairness(P("E(G p & Finf q)"))
    assert rep.output == P("(A G !E G (p1 & !q)) & E G (p & p1)")
    assert rep.kind == "satisfiability-preserving" and rep.fresh == ["p1"]


def test_past_fairness_postcondition():
    for text in ("E(X p & F q & Ginf r & !Finf p)", "A(p U q | Finf r)", "E((p S q) & X r & G p)",
                 "!A(F p & F q & F r)"):
        f = P(text)
        try:
            out = eliminate_past_fairness(f).output
        except RewriteError:
            continue
        assert check_h1_past(out) == []


def test_past_fairness_errors():
    with pytest.raises(RewriteError):
        eliminate_past_fairness(P("!E(G p & Finf q)"))  # negative polarity
    with pytest.raises(RewriteError):
        eliminate_past_fairness(P("E Finf p1"))  # reserved fresh name
    with pytest.raises(RewriteError):
        eliminate_past_fairness(P("E Finf q"), fresh_prefix="1bad")
    with pytest.raises(RewriteError):
        eliminate_past_fairness(P("down x1 . E Finf x1"))


def test_rewrite_dispatch():
    assert rewrite("nnf", P("!E X p")).output == P("A X !p")
    with pytest.raises(RewriteError):
        rewrite("nope", P("p"))
