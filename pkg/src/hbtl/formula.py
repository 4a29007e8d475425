"""Formula AST for hybrid branching-time logic with past and fairness.

State and path formulas share one class hierarchy.  A state formula used
where a path formula is expected is lifted implicitly (it is evaluated at
the current position of the path).  Past operators whose operands are state
formulas count as state formulas themselves: they are evaluated on the
history of the current node (the unique root-to-node path).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator


class FormulaError(ValueError):
    """Raised when a formula is used outside its syntactic class."""


@dataclass(frozen=True)
class Formula:
    def __str__(self) -> str:
        from .parser import print_formula

        return print_formula(self)

    @property
    def children(self) -> tuple["Formula", ...]:
        return ()


# ----------------------------------------------------------------- atoms


@dataclass(frozen=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True)
class Const(Formula):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Var(Formula):
    index: int


@dataclass(frozen=True)
class Root(Formula):
    pass


# ------------------------------------------------------------- unary nodes


@dataclass(frozen=True)
class _Unary(Formula):
    arg: Formula

    @property
    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Not(_Unary):
    pass


@dataclass(frozen=True)
class E(_Unary):
    pass


@dataclass(frozen=True)
class A(_Unary):
    pass


@dataclass(frozen=True)
class AtRoot(_Unary):
    pass


@dataclass(frozen=True)
class Next(_Unary):
    pass


@dataclass(frozen=True)
class Eventually(_Unary):
    pass


@dataclass(frozen=True)
class Always(_Unary):
    pass


@dataclass(frozen=True)
class Prev(_Unary):
    pass


@dataclass(frozen=True)
class WeakPrev(_Unary):
    pass


@dataclass(frozen=True)
class InfOften(_Unary):
    pass


@dataclass(frozen=True)
class AlmostAlways(_Unary):
    pass


@dataclass(frozen=True)
class Bind(Formula):
    var: int
    arg: Formula

    @property
    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class At(Formula):
    var: int
    arg: Formula

    @property
    def children(self):
        return (self.arg,)


# ------------------------------------------------------------ binary nodes


@dataclass(frozen=True)
class _Binary(Formula):
    left: Formula
    right: Formula

    @property
    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class And(_Binary):
    pass


@dataclass(frozen=True)
class Or(_Binary):
    pass


@dataclass(frozen=True)
class Implies(_Binary):
    pass


@dataclass(frozen=True)
class Iff(_Binary):
    pass


@dataclass(frozen=True)
class Until(_Binary):
    pass


@dataclass(frozen=True)
class Since(_Binary):
    pass


@dataclass(frozen=True)
class WeakSince(_Binary):
    """φ wS ψ: φ S ψ, or φ held at every position so far."""


BOOLEAN = (Not, And, Or, Implies, Iff)
FUTURE = (Next, Until, Eventually, Always, InfOften, AlmostAlways)
PAST = (Prev, WeakPrev, Since, WeakSince)
FAIRNESS = (InfOften, AlmostAlways)
TEMPORAL = FUTURE + PAST
QUANTIFIERS = (E, A)
HYBRID = (Bind, Var, At, Root, AtRoot)


# ---------------------------------------------------------------- builders


def _fold(cls, items: list[Formula]) -> Formula:
    # left fold reads naturally; long lists are split to keep recursion shallow
    if len(items) <= 32:
        out = items[0]
        for f in items[1:]:
            out = cls(out, f)
        return out
    mid = len(items) // 2
    return cls(_fold(cls, items[:mid]), _fold(cls, items[mid:]))


def conj(*fs: Formula) -> Formula:
    """Conjunction that drops ⊤ operands; the empty conjunction is ⊤."""
    items = [f for f in fs if f != TRUE]
    return _fold(And, items) if items else TRUE


def disj(*fs: Formula) -> Formula:
    """Disjunction that drops ⊥ operands; the empty disjunction is ⊥."""
    items = [f for f in fs if f != FALSE]
    return _fold(Or, items) if items else FALSE


def EX(f):
    return E(Next(f))


def AX(f):
    return A(Next(f))


def EF(f):
    return E(Eventually(f))


def AF(f):
    return A(Eventually(f))


def EG(f):
    return E(Always(f))


def AG(f):
    return A(Always(f))


# ------------------------------------------------------------------ walks


def subformulas(f: Formula) -> Iterator[Formula]:
    """All subformula occurrences in pre-order."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(g.children))


def propositions(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Prop))


def max_var(f: Formula) -> int:
    k = 0
    for g in subformulas(f):
        if isinstance(g, (Var, Bind, At)):
            k = max(k, g.index if isinstance(g, Var) else g.var)
    return k


def uses_past(f: Formula) -> bool:
    return any(isinstance(g, PAST) for g in subformulas(f))


def uses_fairness(f: Formula) -> bool:
    return any(isinstance(g, FAIRNESS) for g in subformulas(f))


def is_state(f: Formula) -> bool:
    """True if f can be evaluated at a node (no future operator outside E/A)."""
    if isinstance(f, (Prop, Const, Var, Root, E, A)):
        return True
    if isinstance(f, FUTURE):
        return False
    return all(is_state(c) for c in f.children)


def is_propositional(f: Formula) -> bool:
    return all(isinstance(g, (Prop, Const) + BOOLEAN) for g in subformulas(f))


# ----------------------------------------------------------------- metrics

_SIZE_EXTRA = {Implies: 1, Eventually: 1, Always: 3}


def size(f: Formula) -> int:
    """Node count of the formula after expanding F, G, → and ↔.

    F ψ counts as ⊤Uψ, G ψ as ¬(⊤U¬ψ), a→b as ¬a∨b and a↔b as
    (a∧b)∨(¬a∧¬b); the expansion itself is never built.
    """
    memo: dict[int, int] = {}

    def go(g: Formula) -> int:
        key = id(g)
        if key in memo:
            return memo[key]
        ch = [go(c) for c in g.children]
        if isinstance(g, Iff):
            n = 5 + 2 * ch[0] + 2 * ch[1]
        else:
            n = 1 + sum(ch) + _SIZE_EXTRA.get(type(g), 0)
        memo[key] = n
        return n

    return go(f)


def depth(f: Formula) -> int:
    """Nesting depth of path quantifiers."""
    d = max((depth(c) for c in f.children), default=0)
    return d + 1 if isinstance(f, QUANTIFIERS) else d


def normalize(f: Formula) -> Formula:
    """Expand derived operators into the ¬/∧/∨/X/U basis (plus past/fairness)."""
    if not f.children:
        return f
    args = [normalize(c) for c in f.children]
    if isinstance(f, Eventually):
        return Until(TRUE, args[0])
    if isinstance(f, Always):
        return Not(Until(TRUE, Not(args[0])))
    if isinstance(f, Implies):
        return Or(Not(args[0]), args[1])
    if isinstance(f, Iff):
        a, b = args
        return Or(And(a, b), And(Not(a), Not(b)))
    return rebuild(f, args)


def rebuild(f: Formula, args) -> Formula:
    """Same node type as f with new children."""
    if isinstance(f, (Bind, At)):
        return type(f)(f.var, args[0])
    if isinstance(f, _Binary):
        return type(f)(args[0], args[1])
    if isinstance(f, _Unary):
        return type(f)(args[0])
    return f


# ---------------------------------------------------------- classification

CTL, CTL_PLUS, CTL_STAR = "CTL", "CTL+", "CTL*"
_LEVEL = {CTL: 0, CTL_PLUS: 1, CTL_STAR: 2}


@dataclass(frozen=True)
class Classification:
    level: str
    k: int
    uses_past: bool
    uses_fairness: bool

    def as_dict(self) -> dict:
        return {
            "class": self.level,
            "k": self.k,
            "uses_past": self.uses_past,
            "uses_fairness": self.uses_fairness,
        }


def is_basic(psi: Formula) -> bool:
    """A single temporal operator applied to state formulas."""
    return isinstance(psi, TEMPORAL) and all(is_state(c) for c in psi.children)


def is_plus_shaped(psi: Formula) -> bool:
    """A Boolean combination of basics and state formulas."""
    if is_state(psi) or is_basic(psi):
        return True
    return isinstance(psi, BOOLEAN) and all(is_plus_shaped(c) for c in psi.children)


def _operands(psi: Formula) -> Iterator[Formula]:
    """State formulas at the leaves of a CTL+-shaped path formula."""
    if is_basic(psi):
        yield from psi.children
    elif is_state(psi):
        yield psi
    else:
        for c in psi.children:
            yield from _operands(c)


def _level(f: Formula) -> int:
    if isinstance(f, QUANTIFIERS):
        psi = f.arg
        if is_basic(psi):
            return max(_level(c) for c in psi.children)
        if is_plus_shaped(psi):
            return max([_LEVEL[CTL_PLUS]] + [_level(c) for c in _operands(psi)])
        return _LEVEL[CTL_STAR]
    return max((_level(c) for c in f.children), default=0)


def classify(f: Formula) -> Classification:
    """Least syntactic class (CTL ⊂ CTL+ ⊂ CTL*) of a state formula."""
    if not is_state(f):
        raise FormulaError("classify expects a state formula")
    names = [CTL, CTL_PLUS, CTL_STAR]
    return Classification(names[_level(f)], max_var(f), uses_past(f), uses_fairness(f))
