"""Scope resolution: named surface terms to nameless core terms.

Local names resolve to de Bruijn indices; everything else resolves to
builtins (Nat, zero, succ, natElim, sumElim, J and the projection and
injection heads), declared higher-inductive type formers, or global
constants.  Builtins and type formers that are applied to fewer
arguments than their elimination form needs are eta-expanded here, so
the kernel only ever sees saturated nodes.
"""

from __future__ import annotations

from . import parser as P
from . import syntax as S
from .diagnostics import UNBOUND_NAME, error
from .environment import GlobalEnv

# builtin heads with the number of arguments their core node consumes
_BUILTIN_ARITY = {
    "succ": 1,
    "fst": 1,
    "snd": 1,
    "inl": 1,
    "inr": 1,
    "refl": 1,
    "natElim": 4,
    "sumElim": 4,
    "J": 3,
}

BUILTIN_NAMES = frozenset(_BUILTIN_ARITY) | {"Nat", "zero"}


def _motive_body(fn: S.Term, k: int) -> S.Term:
    """Turn a function-valued core term into a k-binder body by applying
    it to the bound variables.  Literal lambdas are beta-reduced on the
    spot so the checker never has to infer a redex."""
    out = S.shift(fn, k)
    for i in range(k):
        arg = S.Var(k - 1 - i)
        if isinstance(out, S.Lam):
            out = S.instantiate(out.body, arg)
        else:
            out = S.App(out, arg)
    return out


def _build_builtin(name: str, args: list, span) -> S.Term:
    match name:
        case "succ":
            return S.Succ(args[0], span=span)
        case "fst":
            return S.Fst(args[0], span=span)
        case "snd":
            return S.Snd(args[0], span=span)
        case "inl":
            return S.Inl(args[0], span=span)
        case "inr":
            return S.Inr(args[0], span=span)
        case "refl":
            return S.Refl(args[0], span=span)
        case "natElim":
            m, z, s, n = args
            return S.NatElim(
                _motive_body(m, 1), z, _motive_body(s, 2), n, span=span
            )
        case "sumElim":
            m, l, r, s = args
            return S.SumElim(
                _motive_body(m, 1), _motive_body(l, 1), _motive_body(r, 1), s, span=span
            )
        case "J":
            m, d, p = args
            return S.J(
                _motive_body(m, 3), _motive_body(d, 1), S.Hole(), S.Hole(), p, span=span
            )
    raise AssertionError(name)


def _saturate(arity: int, args: list, span, build) -> S.Term:
    """Apply build to exactly arity core arguments, eta-expanding when
    under-applied and re-applying any surplus."""
    if len(args) >= arity:
        out = build(args[:arity])
        for extra in args[arity:]:
            out = S.App(out, extra, span=span)
        return out
    missing = arity - len(args)
    shifted = [S.shift(a, missing) for a in args]
    vars_ = [S.Var(missing - 1 - i) for i in range(missing)]
    out = build(shifted + vars_)
    for _ in range(missing):
        out = S.Lam(out, span=span)
    return out


class Elaborator:
    """Surface-to-core translation against one global environment.

    While a higher-inductive declaration is being processed, its name
    and already-seen constructor names resolve through pending_hit and
    pending_ctors rather than the global environment.
    """

    def __init__(self, glob: GlobalEnv):
        self.glob = glob
        self.pending_hit: tuple | None = None  # (name, nparams)
        self.pending_ctors: dict[str, str] = {}

    def elaborate(self, t: P.SurfaceTerm, scope: list) -> S.Term:
        """scope is the list of bound names, outermost first."""
        match t:
            case P.SRef() | P.SApp():
                head, args = self._spine(t)
                return self._resolve(head, args, scope)
            case P.SNum(value=n, span=sp):
                out: S.Term = S.Zero(span=sp)
                for _ in range(n):
                    out = S.Succ(out, span=sp)
                return out
            case P.SUniv(level=l, span=sp):
                return S.Univ(l, span=sp)
            case P.SHole(span=sp):
                return S.Hole(span=sp)
            case P.SLam(names=names, body=b, span=sp):
                inner = self.elaborate(b, scope + list(names))
                for name in reversed(names):
                    inner = S.Lam(inner, span=sp, hint=name)
                return inner
            case P.SPi(name=x, dom=d, cod=c, span=sp):
                return S.Pi(
                    self.elaborate(d, scope),
                    self.elaborate(c, scope + [x]),
                    span=sp,
                    hint=x,
                )
            case P.SSigma(name=x, dom=d, cod=c, span=sp):
                return S.Sigma(
                    self.elaborate(d, scope),
                    self.elaborate(c, scope + [x]),
                    span=sp,
                    hint=x,
                )
            case P.SSum(left=l, right=r, span=sp):
                return S.Sum(
                    self.elaborate(l, scope), self.elaborate(r, scope), span=sp
                )
            case P.SEq(lhs=l, rhs=r, carrier=a, span=sp):
                return S.Id(
                    self.elaborate(a, scope),
                    self.elaborate(l, scope),
                    self.elaborate(r, scope),
                    span=sp,
                )
            case P.SPair(first=a, second=b, span=sp):
                return S.Pair(
                    self.elaborate(a, scope), self.elaborate(b, scope), span=sp
                )
            case P.SAnn(term=tm, type=ty, span=sp):
                return S.Ann(
                    self.elaborate(tm, scope), self.elaborate(ty, scope), span=sp
                )
            case _:
                raise AssertionError(f"unhandled surface node {type(t).__name__}")

    def _spine(self, t: P.SurfaceTerm):
        args = []
        while isinstance(t, P.SApp):
            args.append(t.arg)
            t = t.fn
        return t, list(reversed(args))

    def _resolve(self, head: P.SurfaceTerm, args: list, scope: list) -> S.Term:
        if not isinstance(head, P.SRef):
            out = self.elaborate(head, scope)
            for a in args:
                arg = self.elaborate(a, scope)
                out = S.App(out, arg, span=head.span)
            return out
        name, span = head.name, head.span
        cargs = [self.elaborate(a, scope) for a in args]

        def apply_to(out: S.Term) -> S.Term:
            for a in cargs:
                out = S.App(out, a, span=span)
            return out

        # local variables shadow everything else
        for pos in range(len(scope) - 1, -1, -1):
            if scope[pos] == name:
                return apply_to(S.Var(len(scope) - 1 - pos, span=span))

        if name == "Nat":
            return apply_to(S.Nat(span=span))
        if name == "zero":
            return apply_to(S.Zero(span=span))
        if name in _BUILTIN_ARITY:
            if name == "refl" and not cargs:
                return S.Refl(S.Hole(span=span), span=span)
            return _saturate(
                _BUILTIN_ARITY[name],
                cargs,
                span,
                lambda xs: _build_builtin(name, xs, span),
            )
        if self.pending_hit is not None and name == self.pending_hit[0]:
            return S.HitForm(name, tuple(cargs), span=span)
        if name in self.pending_ctors:
            return S.HitCtor(self.pending_ctors[name], name, tuple(cargs), span=span)
        if name in self.glob.hits:
            nparams = len(self.glob.hits[name].decl.params)
            return _saturate(
                nparams,
                cargs,
                span,
                lambda xs: S.HitForm(name, tuple(xs), span=span),
            )
        if name in self.glob.definitions or name in self.glob.postulates:
            return apply_to(S.Const(name, span=span))
        raise error(UNBOUND_NAME, f"unknown name '{name}'", span)
