"""Semantic domain for normalization by evaluation.

Values are weak-head(-and-beyond) results; closures capture the value
environment at construction time.  Neutrals record computations stuck on
free variables, postulated constants, or HIT path-constructors, as a head
plus a spine of elimination frames in application order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import Term


@dataclass(eq=False)
class Value:
    pass


@dataclass(eq=False)
class Closure:
    """A body binding one or more variables, paired with its environment.

    env is indexed by de Bruijn index (env[0] is the innermost binder of
    the surrounding scope).
    """

    env: tuple
    body: Term
    hint: str | None = None


@dataclass(eq=False)
class VUniv(Value):
    level: int


@dataclass(eq=False)
class VPi(Value):
    dom: Value
    cod: Closure


@dataclass(eq=False)
class VLam(Value):
    closure: Closure


@dataclass(eq=False)
class VSigma(Value):
    dom: Value
    cod: Closure


@dataclass(eq=False)
class VPair(Value):
    first: Value
    second: Value


@dataclass(eq=False)
class VSum(Value):
    left: Value
    right: Value


@dataclass(eq=False)
class VInl(Value):
    value: Value


@dataclass(eq=False)
class VInr(Value):
    value: Value


@dataclass(eq=False)
class VNat(Value):
    pass


@dataclass(eq=False)
class VZero(Value):
    pass


@dataclass(eq=False)
class VSucc(Value):
    pred: Value


@dataclass(eq=False)
class VId(Value):
    carrier: Value
    lhs: Value
    rhs: Value


@dataclass(eq=False)
class VRefl(Value):
    point: Value


@dataclass(eq=False)
class VHitForm(Value):
    name: str
    args: tuple


@dataclass(eq=False)
class VHitCtor(Value):
    name: str
    ctor: str
    args: tuple


# --- neutrals ---


@dataclass(eq=False)
class Head:
    pass


@dataclass(eq=False)
class HVar(Head):
    level: int


@dataclass(eq=False)
class HConst(Head):
    name: str


@dataclass(eq=False)
class HPathCtor(Head):
    name: str
    ctor: str
    args: tuple


@dataclass(eq=False)
class Frame:
    pass


@dataclass(eq=False)
class FApp(Frame):
    arg: Value


@dataclass(eq=False)
class FFst(Frame):
    pass


@dataclass(eq=False)
class FSnd(Frame):
    pass


@dataclass(eq=False)
class FSumElim(Frame):
    motive: Closure
    left_case: Closure
    right_case: Closure


@dataclass(eq=False)
class FNatElim(Frame):
    motive: Closure
    zero_case: Value
    succ_case: Closure


@dataclass(eq=False)
class FJ(Frame):
    motive: Closure
    base: Closure


@dataclass(eq=False)
class FHitElim(Frame):
    name: str
    motive: Closure
    methods: tuple


@dataclass(eq=False)
class Neutral:
    head: Head
    spine: tuple


@dataclass(eq=False)
class VNeutral(Value):
    neutral: Neutral


_FRESH_VARS: list = []


def fresh_var(level: int) -> Value:
    # one canonical object per level, so memo tables keyed on object
    # identity recognize repeated work under the same binder depth
    while len(_FRESH_VARS) <= level:
        _FRESH_VARS.append(VNeutral(Neutral(HVar(len(_FRESH_VARS)), ())))
    return _FRESH_VARS[level]
