"""Printing core terms back to surface-style concrete syntax.

Output is deterministic: binder names come from stored hints with a
numeric suffix appended on clashes, and layout is a single line with
minimal parentheses.
"""

from __future__ import annotations

from . import syntax as S

# precedence levels, loosest first
_P_LOW = 0  # fun, binders
_P_ARROW = 1  # ->, right-assoc
_P_EQ = 2  # l = r in A
_P_SUM = 3  # +
_P_PROD = 4  # *
_P_APP = 5  # application
_P_ATOM = 6


def _fresh(hint: str | None, used: set) -> str:
    base = hint or "x"
    name = base
    k = 1
    while name in used:
        name = f"{base}{k}"
        k += 1
    return name


def _uses_binder(t: S.Term, cutoff: int = 0) -> bool:
    """Does Var(0) of the enclosing binder occur free in t?"""
    if isinstance(t, S.Var):
        return t.index == cutoff
    hit = False
    for fname, kind, binds in S._STRUCTURE[type(t)]:
        val = getattr(t, fname)
        if kind == "term":
            hit = hit or _uses_binder(val, cutoff + binds)
        else:
            hit = hit or any(_uses_binder(u, cutoff) for u in val)
    return hit


def _nat_literal(t: S.Term) -> int | None:
    n = 0
    while isinstance(t, S.Succ):
        n += 1
        t = t.pred
    if isinstance(t, S.Zero):
        return n
    return None


def print_term(t: S.Term, names: list | None = None) -> str:
    """Render a core term; names gives display names for free variables,
    innermost (index 0) first."""
    return _pr(t, list(names or []), _P_LOW)


def _wrap(s: str, level: int, ctx_level: int) -> str:
    return f"({s})" if level < ctx_level else s


def _pr(t: S.Term, names: list, ctx: int) -> str:
    match t:
        case S.Var(index=i):
            if i < len(names):
                return names[i]
            return f"#{i - len(names)}"
        case S.Univ(level=l):
            return _wrap(f"U {l}", _P_APP, ctx)
        case S.Pi():
            return _wrap(_pr_pi(t, names), _P_ARROW, ctx)
        case S.Lam():
            return _wrap(_pr_lam(t, names), _P_LOW, ctx)
        case S.App():
            return _wrap(_pr_app(t, names), _P_APP, ctx)
        case S.Sigma(dom=d, cod=c, hint=h):
            used = set(names)
            if not _uses_binder(c):
                left = _pr(d, names, _P_APP)
                right = _pr(S.instantiate(c, S.Hole()), names, _P_PROD)
                return _wrap(f"{left} * {right}", _P_PROD, ctx)
            x = _fresh(h, used)
            left = _pr(d, names, _P_LOW)
            right = _pr(c, [x] + names, _P_PROD)
            return _wrap(f"({x} : {left}) * {right}", _P_PROD, ctx)
        case S.Pair(first=a, second=b):
            return f"<{_pr(a, names, _P_LOW)}, {_pr(b, names, _P_LOW)}>"
        case S.Fst(pair=p):
            return _wrap(f"fst {_pr(p, names, _P_ATOM)}", _P_APP, ctx)
        case S.Snd(pair=p):
            return _wrap(f"snd {_pr(p, names, _P_ATOM)}", _P_APP, ctx)
        case S.Sum(left=l, right=r):
            return _wrap(
                f"{_pr(l, names, _P_PROD)} + {_pr(r, names, _P_SUM)}", _P_SUM, ctx
            )
        case S.Inl(value=v):
            return _wrap(f"inl {_pr(v, names, _P_ATOM)}", _P_APP, ctx)
        case S.Inr(value=v):
            return _wrap(f"inr {_pr(v, names, _P_ATOM)}", _P_APP, ctx)
        case S.SumElim(motive=m, left_case=l, right_case=r, scrutinee=s):
            parts = [
                "sumElim",
                _pr_binder1(m, names, "x"),
                _pr_binder1(l, names, "a"),
                _pr_binder1(r, names, "b"),
                _pr(s, names, _P_ATOM),
            ]
            return _wrap(" ".join(parts), _P_APP, ctx)
        case S.Nat():
            return "Nat"
        case S.Zero():
            return "0"
        case S.Succ():
            lit = _nat_literal(t)
            if lit is not None:
                return str(lit)
            return _wrap(f"succ {_pr(t.pred, names, _P_ATOM)}", _P_APP, ctx)
        case S.NatElim(motive=m, zero_case=z, succ_case=s, scrutinee=n):
            parts = [
                "natElim",
                _pr_binder1(m, names, "n"),
                _pr(z, names, _P_ATOM),
                _pr_binder2(s, names, "n", "ih"),
                _pr(n, names, _P_ATOM),
            ]
            return _wrap(" ".join(parts), _P_APP, ctx)
        case S.Id(carrier=a, lhs=l, rhs=r):
            return _wrap(
                f"{_pr(l, names, _P_SUM)} = {_pr(r, names, _P_SUM)} "
                f"in {_pr(a, names, _P_EQ)}",
                _P_EQ,
                ctx,
            )
        case S.Refl(point=p):
            return _wrap(f"refl {_pr(p, names, _P_ATOM)}", _P_APP, ctx)
        case S.J(motive=m, base=b, proof=p):
            parts = [
                "J",
                _pr_binder3(m, names),
                _pr_binder1(b, names, "x"),
                _pr(p, names, _P_ATOM),
            ]
            return _wrap(" ".join(parts), _P_APP, ctx)
        case S.HitForm(name=name, args=args):
            return _pr_spine(name, args, names, ctx)
        case S.HitCtor(ctor=c, args=args):
            return _pr_spine(c, args, names, ctx)
        case S.HitElim(name=name, motive=m, methods=ms, scrutinee=s):
            parts = ["elim", name, _pr_binder1(m, names, "x")]
            parts += [_pr(x, names, _P_ATOM) for x in ms]
            parts.append(_pr(s, names, _P_ATOM))
            return _wrap(" ".join(parts), _P_APP, ctx)
        case S.Const(name=name):
            return name
        case S.Ann(term=tm, type=ty):
            return f"({_pr(tm, names, _P_LOW)} : {_pr(ty, names, _P_LOW)})"
        case S.Hole():
            return "_"
        case _:
            return f"<{type(t).__name__}>"


def _pr_spine(head: str, args: tuple, names: list, ctx: int) -> str:
    if not args:
        return head
    parts = [head] + [_pr(a, names, _P_ATOM) for a in args]
    return _wrap(" ".join(parts), _P_APP, ctx)


def _pr_binder1(body: S.Term, names: list, hint: str) -> str:
    x = _fresh(hint, set(names))
    return f"(fun {x}. {_pr(body, [x] + names, _P_LOW)})"


def _pr_binder2(body: S.Term, names: list, h1: str, h2: str) -> str:
    used = set(names)
    x = _fresh(h1, used)
    used.add(x)
    y = _fresh(h2, used)
    return f"(fun {x} {y}. {_pr(body, [y, x] + names, _P_LOW)})"


def _pr_binder3(body: S.Term, names: list) -> str:
    used = set(names)
    out = []
    for h in ("x", "y", "p"):
        n = _fresh(h, used)
        used.add(n)
        out.append(n)
    inner = _pr(body, list(reversed(out)) + names, _P_LOW)
    return f"(fun {' '.join(out)}. {inner})"


def _pr_lam(t: S.Lam, names: list) -> str:
    used = set(names)
    binders = []
    body: S.Term = t
    inner = list(names)
    while isinstance(body, S.Lam):
        x = _fresh(body.hint, used)
        used.add(x)
        binders.append(x)
        inner = [x] + inner
        body = body.body
    return f"fun {' '.join(binders)}. {_pr(body, inner, _P_LOW)}"


def _pr_pi(t: S.Pi, names: list) -> str:
    used = set(names)
    groups = []
    body: S.Term = t
    inner = list(names)
    while isinstance(body, S.Pi):
        dom, cod, hint = body.dom, body.cod, body.hint
        if not _uses_binder(cod):
            # non-dependent arrow; stop grouping named binders here
            break
        x = _fresh(hint, used)
        used.add(x)
        groups.append(f"({x} : {_pr(dom, inner, _P_LOW)})")
        inner = [x] + inner
        body = cod
    if groups:
        rest = _pr(body, inner, _P_ARROW)
        return f"{' '.join(groups)} -> {rest}"
    # plain arrow chain
    left = _pr(t.dom, names, _P_EQ)
    dummy = _fresh(None, used)
    rest = _pr(t.cod, [dummy] + names, _P_ARROW)
    return f"{left} -> {rest}"


def _pr_app(t: S.App, names: list) -> str:
    spine = []
    head: S.Term = t
    while isinstance(head, S.App):
        spine.append(head.arg)
        head = head.fn
    parts = [_pr(head, names, _P_ATOM)]
    parts += [_pr(a, names, _P_ATOM) for a in reversed(spine)]
    return " ".join(parts)
