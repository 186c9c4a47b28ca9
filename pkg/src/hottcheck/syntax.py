"""Core term language: nameless (de Bruijn) syntax and the purely
syntactic operations everything else builds on.

Binder-carrying subterms are stored directly; a field marked as binding
k variables means Var(0)..Var(k-1) inside it refer to that node's own
binders.  Display names survive only as non-compared hints, so dataclass
equality is exactly alpha-equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import NamedTuple


class Span(NamedTuple):
    start: int
    end: int


@dataclass(frozen=True)
class Term:
    pass


def _node(cls):
    """Register a Term variant's binder structure from field metadata."""
    cls = dataclass(frozen=True)(cls)
    struct = []
    for f in fields(cls):
        kind = f.metadata.get("kind")
        if kind is not None:
            struct.append((f.name, kind, f.metadata.get("binds", 0)))
    _STRUCTURE[cls] = struct
    return cls


_STRUCTURE: dict[type, list[tuple[str, str, int]]] = {}


def _sub(binds=0):
    return field(metadata={"kind": "term", "binds": binds})


def _subs():
    return field(metadata={"kind": "terms", "binds": 0})


def _meta():
    return field(default=None, compare=False, repr=False)


@_node
class Var(Term):
    index: int
    span: Span | None = _meta()


@_node
class Univ(Term):
    level: int
    span: Span | None = _meta()


@_node
class Pi(Term):
    dom: Term = _sub()
    cod: Term = _sub(binds=1)
    span: Span | None = _meta()
    hint: str | None = _meta()


@_node
class Lam(Term):
    body: Term = _sub(binds=1)
    span: Span | None = _meta()
    hint: str | None = _meta()


@_node
class App(Term):
    fn: Term = _sub()
    arg: Term = _sub()
    span: Span | None = _meta()


@_node
class Sigma(Term):
    dom: Term = _sub()
    cod: Term = _sub(binds=1)
    span: Span | None = _meta()
    hint: str | None = _meta()


@_node
class Pair(Term):
    first: Term = _sub()
    second: Term = _sub()
    span: Span | None = _meta()


@_node
class Fst(Term):
    pair: Term = _sub()
    span: Span | None = _meta()


@_node
class Snd(Term):
    pair: Term = _sub()
    span: Span | None = _meta()


@_node
class Sum(Term):
    left: Term = _sub()
    right: Term = _sub()
    span: Span | None = _meta()


@_node
class Inl(Term):
    value: Term = _sub()
    span: Span | None = _meta()


@_node
class Inr(Term):
    value: Term = _sub()
    span: Span | None = _meta()


@_node
class SumElim(Term):
    motive: Term = _sub(binds=1)
    left_case: Term = _sub(binds=1)
    right_case: Term = _sub(binds=1)
    scrutinee: Term = _sub()
    span: Span | None = _meta()


@_node
class Nat(Term):
    span: Span | None = _meta()


@_node
class Zero(Term):
    span: Span | None = _meta()


@_node
class Succ(Term):
    pred: Term = _sub()
    span: Span | None = _meta()


@_node
class NatElim(Term):
    motive: Term = _sub(binds=1)
    zero_case: Term = _sub()
    succ_case: Term = _sub(binds=2)
    scrutinee: Term = _sub()
    span: Span | None = _meta()


@_node
class Id(Term):
    carrier: Term = _sub()
    lhs: Term = _sub()
    rhs: Term = _sub()
    span: Span | None = _meta()


@_node
class Refl(Term):
    point: Term = _sub()
    span: Span | None = _meta()


@_node
class J(Term):
    motive: Term = _sub(binds=3)
    base: Term = _sub(binds=1)
    lhs: Term = _sub()
    rhs: Term = _sub()
    proof: Term = _sub()
    span: Span | None = _meta()


@_node
class HitForm(Term):
    name: str
    args: tuple = _subs()
    span: Span | None = _meta()


@_node
class HitCtor(Term):
    name: str
    ctor: str
    args: tuple = _subs()
    span: Span | None = _meta()


@_node
class HitElim(Term):
    name: str
    motive: Term = _sub(binds=1)
    methods: tuple = _subs()
    scrutinee: Term = _sub()
    span: Span | None = _meta()


@_node
class Const(Term):
    name: str
    span: Span | None = _meta()


@_node
class Ann(Term):
    term: Term = _sub()
    type: Term = _sub()
    span: Span | None = _meta()


@_node
class Hole(Term):
    span: Span | None = _meta()


@_node
class Mark(Term):
    """Free-variable placeholder (a de Bruijn level) used while building
    generated terms; never survives into checked syntax."""

    lvl: int
    span: Span | None = _meta()


# --- higher inductive type declarations ---

# Classification of a constructor argument's type: external ("ext"),
# the HIT itself ("rec"), or an identity type over the HIT ("idrec",
# path-constructors only).
ARG_EXT = "ext"
ARG_REC = "rec"
ARG_IDREC = "idrec"


@dataclass(frozen=True)
class CtorArg:
    hint: str | None
    type: Term  # scoped in [params, earlier args]
    role: str  # ARG_EXT / ARG_REC / ARG_IDREC


@dataclass(frozen=True)
class PointCtor:
    name: str
    args: tuple


@dataclass(frozen=True)
class PathCtor:
    name: str
    args: tuple
    target: Term  # Id(...) scoped in [params, args]
    level: int  # 1 or 2


@dataclass(frozen=True)
class HitDecl:
    name: str
    params: tuple  # of (hint, Term), each scoped in earlier params
    level: int  # universe of the formed type
    points: tuple
    paths: tuple

    def point(self, ctor: str) -> PointCtor:
        for c in self.points:
            if c.name == ctor:
                return c
        raise KeyError(ctor)

    def path(self, ctor: str) -> PathCtor:
        for c in self.paths:
            if c.name == ctor:
                return c
        raise KeyError(ctor)

    def is_point(self, ctor: str) -> bool:
        return any(c.name == ctor for c in self.points)


def map_vars(t: Term, on_var, cutoff: int = 0) -> Term:
    """Rebuild t, replacing each free Var(i) (i >= cutoff) with
    on_var(i - cutoff, cutoff); cutoff grows under binders."""
    if isinstance(t, Var):
        if t.index >= cutoff:
            return on_var(t.index - cutoff, cutoff)
        return t
    struct = _STRUCTURE[type(t)]
    changes = {}
    for name, kind, binds in struct:
        old = getattr(t, name)
        if kind == "term":
            new = map_vars(old, on_var, cutoff + binds)
        else:
            new = tuple(map_vars(u, on_var, cutoff) for u in old)
        if new is not old and new != old:
            changes[name] = new
    if not changes:
        return t
    kwargs = {f.name: getattr(t, f.name) for f in fields(t)}
    kwargs.update(changes)
    return type(t)(**kwargs)


def shift(t: Term, amount: int, cutoff: int = 0) -> Term:
    """Shift every free Var(i) with i >= cutoff by amount."""
    if amount == 0:
        return t
    return map_vars(t, lambda i, c: Var(i + c + amount), cutoff)


def instantiate(body: Term, arg: Term) -> Term:
    """Substitute arg for Var(0) in body; remaining free indices drop by one."""

    def on_var(i, c):
        if i == 0:
            return shift(arg, c)
        return Var(i - 1 + c)

    return map_vars(body, on_var)


def subst_free(t: Term, replacements: list[Term]) -> Term:
    """Simultaneously replace free Var(i) with replacements[i].

    Every free index of t must be covered; replacements must be closed
    terms (they are not shifted under binders beyond the cutoff fix-up).
    """

    def on_var(i, c):
        return shift(replacements[i], c)

    return map_vars(t, on_var)


def structural_eq(t: Term, u: Term) -> bool:
    """Identical trees; with nameless binding this is alpha-equivalence."""
    return t == u


def free_var_bound(t: Term) -> int:
    """Smallest n such that t is well-scoped in a context of length n."""
    bound = 0
    if isinstance(t, Var):
        return t.index + 1
    for name, kind, binds in _STRUCTURE[type(t)]:
        val = getattr(t, name)
        if kind == "term":
            bound = max(bound, free_var_bound(val) - binds)
        else:
            for u in val:
                bound = max(bound, free_var_bound(u))
    return bound


def mentions_hit(t: Term, name: str) -> bool:
    """True if t refers to the HIT called name (as former, ctor, or elim)."""
    if isinstance(t, (HitForm, HitCtor, HitElim)) and t.name == name:
        return True
    for fname, kind, _ in _STRUCTURE[type(t)]:
        val = getattr(t, fname)
        if kind == "term":
            if mentions_hit(val, name):
                return True
        else:
            if any(mentions_hit(u, name) for u in val):
                return True
    return False
