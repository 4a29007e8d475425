"""Formula-to-formula transformations.

* ``push_negations``: negation normal form.
* ``to_u_normal`` / ``to_e_normal``: CTL-shaped formulas into EX/EU/AU form
  or into a form without the A quantifier.
* ``ctlplus_to_ctl``: CTL+-shaped (hybrid) formulas into CTL-shaped ones.
* ``eliminate_past_fairness``: the staged pipeline that removes F∞/G∞ and
  Boolean path combinations from formulas with past and fairness operators.

The last two share one engine.  Each ``E ψ`` is rewritten bottom-up: push
negations inside ψ, distribute E over ∨, merge X/Y/G/G∞ conjuncts, pull
state and past conjuncts out of the quantifier, then eliminate X, the
untils (a disjunction over all orders in which their goals are met), G∞,
¬F∞ and finally F∞ (the only step that needs fresh propositions and is
satisfiability-preserving rather than an equivalence).  Hybrid
subformulas are opaque state atoms throughout.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import permutations

from .formula import (
    A, AlmostAlways, Always, And, At, AtRoot, Bind, Const, E, Eventually,
    FALSE, Formula, Iff, Implies, InfOften, Next, Not, Or, PAST, Prev, Prop,
    Root, Since, TRUE, Until, Var, WeakPrev, WeakSince, conj, disj, is_basic,
    is_plus_shaped, is_state, propositions, size, subformulas, uses_fairness,
    uses_past,
)


class RewriteError(ValueError):
    pass


LOGICAL = "logical"
SAT_PRESERVING = "satisfiability-preserving"


@dataclass
class RewriteReport:
    input: Formula
    output: Formula
    kind: str = LOGICAL
    fresh: list[str] = field(default_factory=list)
    steps: list[str] = field(default_factory=list)

    @property
    def input_size(self) -> int:
        return size(self.input)

    @property
    def output_size(self) -> int:
        return size(self.output)

    def as_dict(self) -> dict:
        return {
            "input": str(self.input),
            "output": str(self.output),
            "input_size": self.input_size,
            "output_size": self.output_size,
            "kind": self.kind,
            "fresh": list(self.fresh),
            "steps": list(self.steps),
        }


# --------------------------------------------------------------- negations


def _neg_atom(f: Formula) -> Formula:
    if isinstance(f, Not):
        return f.arg
    if isinstance(f, Const):
        return Const(not f.value)
    return Not(f)


def push_negations(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form.

    Negations end up on propositions, variables, ``root`` and on F∞, which
    has no dual among the operators (¬F∞φ is G∞¬φ only in the reverse
    direction of (5), and the pipeline treats ¬F∞ as a literal).
    """
    n = push_negations
    if isinstance(f, (Prop, Var, Root)):
        return Not(f) if negate else f
    if isinstance(f, Const):
        return Const(f.value != negate)
    if isinstance(f, Not):
        return n(f.arg, not negate)
    if isinstance(f, (And, Or)):
        cls = type(f) if not negate else (Or if isinstance(f, And) else And)
        return cls(n(f.left, negate), n(f.right, negate))
    if isinstance(f, Implies):
        return n(Or(Not(f.left), f.right), negate)
    if isinstance(f, Iff):
        a, b = f.left, f.right
        if negate:
            return Or(And(n(a), n(b, True)), And(n(a, True), n(b)))
        return Or(And(n(a), n(b)), And(n(a, True), n(b, True)))
    if isinstance(f, (E, A)):
        cls = type(f) if not negate else (A if isinstance(f, E) else E)
        return cls(n(f.arg, negate))
    if isinstance(f, Bind):
        return Bind(f.var, n(f.arg, negate))
    if isinstance(f, At):
        return At(f.var, n(f.arg, negate))
    if isinstance(f, AtRoot):
        return AtRoot(n(f.arg, negate))
    if isinstance(f, Next):
        return Next(n(f.arg, negate))
    if isinstance(f, (Prev, WeakPrev)):
        cls = type(f) if not negate else (WeakPrev if isinstance(f, Prev) else Prev)
        return cls(n(f.arg, negate))
    if isinstance(f, Until):
        if not negate:
            return Until(n(f.left), n(f.right))
        a, na, nb = n(f.left), n(f.left, True), n(f.right, True)
        return Or(Until(And(a, nb), And(na, nb)), Always(nb))
    if isinstance(f, (Since, WeakSince)):
        if not negate:
            return type(f)(n(f.left), n(f.right))
        a, na, nb = n(f.left), n(f.left, True), n(f.right, True)
        cls = WeakSince if isinstance(f, Since) else Since
        return cls(And(a, nb), And(na, nb))
    if isinstance(f, (Eventually, Always)):
        cls = type(f) if not negate else (Always if isinstance(f, Eventually) else Eventually)
        return cls(n(f.arg, negate))
    if isinstance(f, AlmostAlways):
        return InfOften(n(f.arg, True)) if negate else AlmostAlways(n(f.arg))
    if isinstance(f, InfOften):
        return Not(InfOften(n(f.arg))) if negate else InfOften(n(f.arg))
    raise TypeError(f"unknown node {f!r}")


# ------------------------------------------------------------ normal forms


def _require_ctl(f: Formula) -> None:
    for g in subformulas(f):
        if isinstance(g, (E, A)) and not (is_basic(g.arg) and not isinstance(g.arg, PAST + (InfOften, AlmostAlways))):
            raise RewriteError(f"not CTL-shaped: {g}")
        if isinstance(g, PAST + (InfOften, AlmostAlways)):
            raise RewriteError(f"past and fairness operators are not supported here: {g}")
    if not is_state(f):
        raise RewriteError("expected a state formula")


def _map_state(f: Formula, quant) -> Formula:
    """Rebuild f, rewriting every E/A node with ``quant(node, args)``."""
    if isinstance(f, (E, A)):
        psi = f.arg
        args = [_map_state(c, quant) for c in psi.children]
        return quant(f, psi, args)
    if not f.children:
        return f
    from .formula import rebuild

    return rebuild(f, [_map_state(c, quant) for c in f.children])


def to_u_normal(f: Formula) -> Formula:
    """Equivalent formula whose quantified subformulas are only EX, EU and AU."""
    _require_ctl(f)

    def quant(q, psi, args):
        ex = isinstance(q, E)
        if isinstance(psi, Next):
            return E(Next(args[0])) if ex else Not(E(Next(_neg_atom(args[0]))))
        if isinstance(psi, Until):
            return type(q)(Until(args[0], args[1]))
        if isinstance(psi, Eventually):
            return type(q)(Until(TRUE, args[0]))
        if isinstance(psi, Always):  # E G φ = ¬A(⊤U¬φ), A G φ = ¬E(⊤U¬φ)
            dual = A if ex else E
            return Not(dual(Until(TRUE, _neg_atom(args[0]))))
        raise RewriteError(f"not CTL-shaped: {q}")  # pragma: no cover

    return _map_state(f, quant)


def to_e_normal(f: Formula) -> Formula:
    """Equivalent formula without the A quantifier (possibly exponentially larger)."""
    _require_ctl(f)

    def quant(q, psi, args):
        if isinstance(q, E):
            from .formula import rebuild

            return E(rebuild(psi, args))
        if isinstance(psi, Next):
            return Not(E(Next(_neg_atom(args[0]))))
        if isinstance(psi, Until):
            a, b = args
            nb = _neg_atom(b)
            return And(Not(E(Until(nb, And(nb, _neg_atom(a))))), Not(E(Always(nb))))
        if isinstance(psi, Eventually):
            return Not(E(Always(_neg_atom(args[0]))))
        if isinstance(psi, Always):
            return Not(E(Eventually(_neg_atom(args[0]))))
        raise RewriteError(f"not CTL-shaped: {q}")  # pragma: no cover

    return _map_state(f, quant)


# ------------------------------------------------------- quantifier engine

_FUTURE_BASIC = (Next, Until, Eventually, Always)


def _until(a: Formula, b: Formula) -> Formula:
    return Eventually(b) if a == TRUE else Until(a, b)


def _free_vars(f: Formula) -> set[int]:
    if isinstance(f, Var):
        return {f.index}
    out: set[int] = set()
    for c in f.children:
        out |= _free_vars(c)
    if isinstance(f, Bind):
        out.discard(f.var)
    elif isinstance(f, At):
        out.add(f.var)
    return out


class _Engine:
    def __init__(self, allow_past_fairness: bool, prefix: str = "p"):
        self.allow = allow_past_fairness
        self.prefix = prefix
        self.fresh: list[str] = []
        self.steps: set[str] = set()

    def fire(self, step: str) -> None:
        self.steps.add(step)

    # -- state level -------------------------------------------------
    def state(self, f: Formula, pol: int) -> Formula:
        if isinstance(f, (Prop, Const, Var, Root)):
            return f
        if isinstance(f, Not):
            return Not(self.state(f.arg, -pol))
        if isinstance(f, (And, Or)):
            return type(f)(self.state(f.left, pol), self.state(f.right, pol))
        if isinstance(f, Implies):
            return Implies(self.state(f.left, -pol), self.state(f.right, pol))
        if isinstance(f, Iff):
            return Iff(self.state(f.left, 0), self.state(f.right, 0))
        if isinstance(f, (Bind, At)):
            return type(f)(f.var, self.state(f.arg, pol))
        if isinstance(f, AtRoot):
            return AtRoot(self.state(f.arg, pol))
        if isinstance(f, PAST):
            self._check_past(f)
            return type(f)(*[self.state(c, pol) for c in f.children])
        if isinstance(f, (E, A)):
            psi = f.arg
            if is_basic(psi) and isinstance(psi, _FUTURE_BASIC):
                return type(f)(type(psi)(*[self.state(c, pol) for c in psi.children]))
            if not is_plus_shaped(psi):
                raise RewriteError(f"path formula beyond CTL+ (nested temporal operators): {f}")
            if isinstance(f, E):
                return self.exists(psi, pol)
            return Not(self.exists(Not(psi), -pol))
        raise RewriteError(f"unexpected {type(f).__name__} at state level")

    def _check_past(self, f: Formula) -> None:
        if not self.allow:
            raise RewriteError(f"past and fairness operators are not supported here: {f}")

    # -- path level ---------------------------------------------------
    def operands(self, psi: Formula, pol: int) -> Formula:
        """Rewrite the state operands of a CTL+-shaped path formula."""
        if is_state(psi) and not isinstance(psi, PAST):
            return self.state(psi, pol)
        if isinstance(psi, PAST + (InfOften, AlmostAlways)):
            self._check_past(psi)
        if isinstance(psi, Not):
            return Not(self.operands(psi.arg, -pol))
        if isinstance(psi, Implies):
            return Implies(self.operands(psi.left, -pol), self.operands(psi.right, pol))
        if isinstance(psi, Iff):
            return Iff(self.operands(psi.left, 0), self.operands(psi.right, 0))
        return type(psi)(*[self.operands(c, pol) for c in psi.children])

    def nnf(self, psi: Formula, negate: bool = False) -> Formula:
        """Push negations to the basics of a path formula ((1)-(5) and De Morgan)."""
        n = self.nnf
        if isinstance(psi, Not):
            return n(psi.arg, not negate)
        if isinstance(psi, (And, Or)):
            cls = type(psi) if not negate else (Or if isinstance(psi, And) else And)
            return cls(n(psi.left, negate), n(psi.right, negate))
        if isinstance(psi, Implies):
            return n(Or(Not(psi.left), psi.right), negate)
        if isinstance(psi, Iff):
            a, b = psi.left, psi.right
            if negate:
                return Or(And(n(a), n(b, True)), And(n(a, True), n(b)))
            return Or(And(n(a), n(b)), And(n(a, True), n(b, True)))
        if not negate:
            return psi
        if isinstance(psi, Next):
            self.fire("(1)")
            return Next(_neg_atom(psi.arg))
        if isinstance(psi, Prev):
            self.fire("(2)")
            return WeakPrev(_neg_atom(psi.arg))
        if isinstance(psi, WeakPrev):
            self.fire("(2)")
            return Prev(_neg_atom(psi.arg))
        if isinstance(psi, Until):
            self.fire("(3)")
            a, b = psi.left, psi.right
            na, nb = _neg_atom(a), _neg_atom(b)
            return Or(Until(conj(a, nb), conj(na, nb)), Always(nb))
        if isinstance(psi, Eventually):
            return Always(_neg_atom(psi.arg))
        if isinstance(psi, Always):
            return Eventually(_neg_atom(psi.arg))
        if isinstance(psi, (Since, WeakSince)):
            self.fire("(4)")
            a, b = psi.left, psi.right
            na, nb = _neg_atom(a), _neg_atom(b)
            cls = WeakSince if isinstance(psi, Since) else Since
            return cls(conj(a, nb), conj(na, nb))
        if isinstance(psi, AlmostAlways):
            self.fire("(5)")
            return InfOften(_neg_atom(psi.arg))
        if isinstance(psi, InfOften):
            return Not(psi)
        return _neg_atom(psi)  # a state formula

    @staticmethod
    def dnf(psi: Formula) -> list[list[Formula]]:
        if isinstance(psi, Or):
            return _Engine.dnf(psi.left) + _Engine.dnf(psi.right)
        if isinstance(psi, And):
            return [a + b for a in _Engine.dnf(psi.left) for b in _Engine.dnf(psi.right)]
        return [[psi]]

    def exists(self, psi: Formula, pol: int) -> Formula:
        psi = self.nnf(self.operands(psi, pol))
        clauses = self.dnf(psi)
        if len(clauses) > 1:
            self.fire("(6)")
        return disj(*[self.exists_conj(c, pol) for c in clauses])

    def exists_conj(self, lits: list[Formula], pol: int) -> Formula:
        now, prevs, wprevs = [], [], []
        nexts, globs, ginfs, untils, finfs, nfinfs = [], [], [], [], [], []
        for lit in lits:
            if isinstance(lit, Prev) and is_state(lit.arg):
                prevs.append(lit.arg)
            elif isinstance(lit, WeakPrev) and is_state(lit.arg):
                wprevs.append(lit.arg)
            elif is_state(lit):
                now.append(lit)
            elif isinstance(lit, Next):
                nexts.append(lit.arg)
            elif isinstance(lit, Always):
                globs.append(lit.arg)
            elif isinstance(lit, AlmostAlways):
                ginfs.append(lit.arg)
            elif isinstance(lit, Until):
                untils.append((lit.left, lit.right))
            elif isinstance(lit, Eventually):
                untils.append((TRUE, lit.arg))
            elif isinstance(lit, InfOften):
                finfs.append(lit.arg)
            elif isinstance(lit, Not) and isinstance(lit.arg, InfOften):
                nfinfs.append(lit.arg.arg)
            else:  # pragma: no cover - guarded by is_plus_shaped
                raise RewriteError(f"unexpected literal {lit}")
        for items, step in ((nexts, "(7)"), (prevs, "(8)"), (globs, "(9)"), (ginfs, "(10)")):
            if len(items) > 1:
                self.fire(step)
        past = []
        if prevs:
            past.append(Prev(conj(*prevs)))
        if wprevs:
            past.append(WeakPrev(conj(*wprevs)))
        extracted = now + past
        if extracted and any(isinstance(g, PAST) for x in extracted for g in subformulas(x)):
            self.fire("(11)")
        rest = self.future(conj(*nexts) if nexts else None, conj(*globs),
                           conj(*ginfs) if ginfs else None, untils, finfs, nfinfs, pol)
        return conj(*extracted, rest)

    def future(self, nxt, glob, ginf, untils, finfs, nfinfs, pol) -> Formula:
        if nxt is not None:  # (12)
            self.fire("(12)")
            out = []
            for mask in range(1 << len(untils)):
                inside = [u for i, u in enumerate(untils) if mask >> i & 1]
                outside = [u for i, u in enumerate(untils) if not mask >> i & 1]
                later = self.future(None, glob, ginf, outside, finfs, nfinfs, pol)
                out.append(conj(*[b for _, b in inside], glob, *[a for a, _ in outside],
                                E(Next(conj(nxt, later)))))
            return disj(*out)
        if untils:  # (13)
            self.fire("(13)")
            out = []
            innermost = self.future(None, glob, ginf, [], finfs, nfinfs, pol)
            for order in permutations(range(len(untils))):
                inner = innermost
                for pos in range(len(order) - 1, -1, -1):
                    pending = sorted(order[pos:])
                    left = conj(*[untils[i][0] for i in pending], glob)
                    inner = E(_until(left, conj(untils[order[pos]][1], inner)))
                out.append(inner)
            return disj(*out)
        if ginf is not None:  # (14)
            self.fire("(14)")
            return E(_until(glob, self.future(None, conj(glob, ginf), None, [], finfs, nfinfs, pol)))
        if nfinfs:  # (15)
            self.fire("(15)")
            inner = self.future(None, conj(glob, *[_neg_atom(x) for x in nfinfs]), None, [], finfs, [], pol)
            return E(_until(glob, inner))
        if finfs:  # (16)
            if pol != 1:
                raise RewriteError(
                    "F∞ under a negative or mixed polarity cannot be eliminated by fresh "
                    "propositions while keeping satisfiability")
            for k in finfs:
                if _free_vars(k):
                    raise RewriteError(f"F∞ argument with free variables is not supported: {k}")
            self.fire("(16)")
            fresh = []
            for _ in finfs:
                name = f"{self.prefix}{len(self.fresh) + 1}"
                self.fresh.append(name)
                fresh.append(Prop(name))
            guards = [A(Always(Not(E(Always(conj(p, _neg_atom(k))))))) for p, k in zip(fresh, finfs)]
            return conj(*guards, E(Always(conj(glob, *fresh))))
        return TRUE if glob == TRUE else E(Always(glob))


_STEP_ORDER = [f"({i})" for i in range(1, 17)]


def _report(f: Formula, out: Formula, engine: _Engine) -> RewriteReport:
    steps = sorted(engine.steps, key=_STEP_ORDER.index)
    kind = SAT_PRESERVING if "(16)" in engine.steps else LOGICAL
    return RewriteReport(f, out, kind, list(engine.fresh), steps)


def ctlplus_to_ctl(f: Formula) -> Formula:
    """Equivalent CTL-shaped formula for a CTL+-shaped one (hybrid operators pass through)."""
    return ctlplus_to_ctl_report(f).output


def ctlplus_to_ctl_report(f: Formula) -> RewriteReport:
    if not is_state(f):
        raise RewriteError("expected a state formula")
    if uses_past(f) or uses_fairness(f):
        raise RewriteError("past and fairness operators are handled by eliminate_past_fairness")
    engine = _Engine(False)
    return _report(f, engine.state(f, 1), engine)


def eliminate_past_fairness(f: Formula, fresh_prefix: str = "p") -> RewriteReport:
    """Remove F∞, G∞ and Boolean path combinations; keep Y, wY, S, wS.

    The result is logically equivalent unless F∞ had to be eliminated with
    fresh propositions, in which case it is only equisatisfiable (the report
    says which).  Input propositions named like fresh ones are rejected.
    """
    if not is_state(f):
        raise RewriteError("expected a state formula")
    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", fresh_prefix):
        raise RewriteError(f"invalid fresh-proposition prefix {fresh_prefix!r}")
    clash = sorted(p for p in propositions(f) if re.fullmatch(re.escape(fresh_prefix) + r"\d+", p))
    if clash:
        raise RewriteError(f"input uses reserved fresh-proposition names {clash}")
    engine = _Engine(True, fresh_prefix)
    return _report(f, engine.state(f, 1), engine)


def check_h1_past(f: Formula) -> list[str]:
    """Violations of the pipeline's output shape: no F∞/G∞ and every
    quantifier applied to a single temporal operator."""
    problems = []
    for g in subformulas(f):
        if isinstance(g, (InfOften, AlmostAlways)):
            problems.append(f"fairness operator: {g}")
        if isinstance(g, (E, A)) and not (isinstance(g.arg, _FUTURE_BASIC) and is_basic(g.arg)):
            problems.append(f"quantifier over a non-basic path formula: {g}")
    return problems


PIPELINES = {
    "u-normal": lambda f: RewriteReport(f, to_u_normal(f)),
    "e-normal": lambda f: RewriteReport(f, to_e_normal(f)),
    "to-ctl": ctlplus_to_ctl_report,
    "eliminate-past-fairness": eliminate_past_fairness,
    "nnf": lambda f: RewriteReport(f, push_negations(f)),
}


def rewrite(pipeline: str, f: Formula) -> RewriteReport:
    try:
        fn = PIPELINES[pipeline]
    except KeyError:
        raise RewriteError(f"unknown pipeline {pipeline!r}; choose from {sorted(PIPELINES)}") from None
    return fn(f)


__all__ = [
    "RewriteError", "RewriteReport", "LOGICAL", "SAT_PRESERVING", "push_negations",
    "to_u_normal", "to_e_normal", "ctlplus_to_ctl", "ctlplus_to_ctl_report",
    "eliminate_past_fairness", "check_h1_past", "rewrite", "PIPELINES",
]
