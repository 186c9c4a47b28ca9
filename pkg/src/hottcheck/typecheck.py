"""Bidirectional typechecking over the core syntax.

Introduction forms check against a type; elimination forms infer.  Both
directions return the elaborated term (holes that the expected type
determines are filled in), and all failures are structured diagnostics.
"""

from __future__ import annotations

from . import syntax as S
from .diagnostics import (
    INVALID_HIT,
    NOT_A_FUNCTION,
    NOT_A_PAIR,
    TYPE_MISMATCH,
    UNBOUND_NAME,
    UNIVERSE_ERROR,
    UNSOLVED_HOLE,
    error,
)
from .environment import Context, Definition, GlobalEnv, HitInfo, Postulate
from .evaluate import (
    apply_closure,
    const_type_value,
    convertible,
    do_fst,
    evaluate,
    free_indices,
    free_levels,
    make_closure,
    quote,
    quote_type,
)
from .hits import generate_hit_constants, validate_hit_decl
from .pretty import _fresh, print_term
from .values import (
    Closure,
    Value,
    VHitForm,
    VId,
    VInl,
    VInr,
    VLam,
    VNat,
    VPi,
    VRefl,
    VSigma,
    VSucc,
    VSum,
    VUniv,
    VZero,
)


def _names(ctx: Context) -> list:
    """Display names for the context's variables, innermost first."""
    used: set = set()
    by_level = []
    for h in ctx.hints:
        n = _fresh(h, used)
        used.add(n)
        by_level.append(n)
    return list(reversed(by_level))


def show_type(glob: GlobalEnv, ctx: Context, ty: Value) -> str:
    return print_term(quote_type(glob, list(ctx.types), ty), _names(ctx))


def show_value(glob: GlobalEnv, ctx: Context, ty: Value, v: Value) -> str:
    return print_term(quote(glob, list(ctx.types), ty, v), _names(ctx))


def _mismatch(glob, ctx, span, expected: Value, actual: Value):
    if isinstance(expected, VUniv) and isinstance(actual, VUniv):
        return error(
            UNIVERSE_ERROR,
            f"universe level mismatch: a point of U {expected.level} is "
            f"required, but this lives in U {actual.level}",
            span,
        )
    return error(
        TYPE_MISMATCH,
        "term does not have the required type",
        span,
        expected=show_type(glob, ctx, expected),
        actual=show_type(glob, ctx, actual),
    )


def _cannot_infer(t: S.Term, what: str):
    return error(
        TYPE_MISMATCH,
        f"cannot determine the type of {what}; add an annotation",
        t.span,
    )


def check_type(glob: GlobalEnv, ctx: Context, t: S.Term) -> tuple:
    """Check that t is a type; returns (elaborated term, universe level)."""
    t2, ty = infer(glob, ctx, t)
    if isinstance(ty, VUniv):
        return t2, ty.level
    raise error(
        TYPE_MISMATCH,
        "a type was expected here",
        t.span,
        actual=show_type(glob, ctx, ty),
    )


def _tc_key(glob: GlobalEnv, ctx: Context, tag: str, t: S.Term, ty=None):
    """Memo key for (re-)checking an interned term: the node's identity
    plus only the context entries its free variables (and the expected
    type's free levels) actually reach.  Returns (key, levels), or None
    when no sound key exists: the term is not interned (identity is not
    canonical), or a value mentions levels outside the context (closures
    capture whole environments, so a semantically closed value can carry
    unused out-of-scope variables)."""
    if id(t) not in glob.intern_ids:
        return None
    depth = len(ctx)
    levels = frozenset(depth - 1 - k for k in free_indices(glob, t))
    if ty is not None:
        levels = levels | free_levels(glob, ty)
    if any(l < 0 or l >= depth for l in levels):
        return None
    base = (tag, id(t)) if ty is None else (tag, id(t), id(ty))
    if not levels:
        return base, levels
    key = base + (
        depth,
        tuple((l, id(ctx.types[l]), id(ctx.env[depth - 1 - l])) for l in sorted(levels)),
    )
    return key, levels


def infer(glob: GlobalEnv, ctx: Context, t: S.Term) -> tuple:
    """Synthesize a type for t; returns (elaborated term, type value)."""
    keyed = _tc_key(glob, ctx, "i", t)
    if keyed is None:
        return _infer(glob, ctx, t)
    key, levels = keyed
    hit = glob.tc_cache.get(key)
    if hit is None:
        hit = _infer(glob, ctx, t)
        # only cache results whose type stays within the keyed levels;
        # a captured-but-unused variable from this context must not leak
        # into other contexts through the cache
        if free_levels(glob, hit[1]) <= levels:
            glob.tc_cache[key] = hit
            glob.tc_keep.append((t, ctx))
    return hit


def _infer(glob: GlobalEnv, ctx: Context, t: S.Term) -> tuple:
    match t:
        case S.Var(index=i):
            return t, ctx.var_type(i)
        case S.Univ(level=l):
            return t, VUniv(l + 1)
        case S.Pi(dom=d, cod=c, hint=h):
            d2, i = check_type(glob, ctx, d)
            ctx2 = ctx.extend(evaluate(glob, ctx.env, d2), h)
            c2, j = check_type(glob, ctx2, c)
            return S.Pi(d2, c2, span=t.span, hint=h), VUniv(max(i, j))
        case S.Sigma(dom=d, cod=c, hint=h):
            d2, i = check_type(glob, ctx, d)
            ctx2 = ctx.extend(evaluate(glob, ctx.env, d2), h)
            c2, j = check_type(glob, ctx2, c)
            return S.Sigma(d2, c2, span=t.span, hint=h), VUniv(max(i, j))
        case S.Sum(left=l, right=r):
            l2, i = check_type(glob, ctx, l)
            r2, j = check_type(glob, ctx, r)
            return S.Sum(l2, r2, span=t.span), VUniv(max(i, j))
        case S.Nat():
            return t, VUniv(0)
        case S.Zero():
            return t, VNat()
        case S.Succ(pred=p):
            p2 = check(glob, ctx, p, VNat())
            return S.Succ(p2, span=t.span), VNat()
        case S.App(fn=f, arg=a):
            f2, fty = infer(glob, ctx, f)
            if not isinstance(fty, VPi):
                raise error(
                    NOT_A_FUNCTION,
                    "this expression is applied to an argument but is not "
                    "a function",
                    t.span,
                    actual=show_type(glob, ctx, fty),
                )
            a2 = check(glob, ctx, a, fty.dom)
            av = evaluate(glob, ctx.env, a2)
            return S.App(f2, a2, span=t.span), apply_closure(glob, fty.cod, av)
        case S.Fst(pair=p):
            p2, pty = infer(glob, ctx, p)
            if not isinstance(pty, VSigma):
                raise error(
                    NOT_A_PAIR,
                    "a projection was applied to a non-pair",
                    t.span,
                    actual=show_type(glob, ctx, pty),
                )
            return S.Fst(p2, span=t.span), pty.dom
        case S.Snd(pair=p):
            p2, pty = infer(glob, ctx, p)
            if not isinstance(pty, VSigma):
                raise error(
                    NOT_A_PAIR,
                    "a projection was applied to a non-pair",
                    t.span,
                    actual=show_type(glob, ctx, pty),
                )
            pv = evaluate(glob, ctx.env, p2)
            return (
                S.Snd(p2, span=t.span),
                apply_closure(glob, pty.cod, do_fst(glob, pv)),
            )
        case S.Id(carrier=a, lhs=l, rhs=r):
            a2, i = check_type(glob, ctx, a)
            av = evaluate(glob, ctx.env, a2)
            l2 = check(glob, ctx, l, av)
            r2 = check(glob, ctx, r, av)
            return S.Id(a2, l2, r2, span=t.span), VUniv(i)
        case S.Refl(point=p):
            if isinstance(p, S.Hole):
                raise error(
                    UNSOLVED_HOLE,
                    "the endpoint of this reflexivity proof cannot be "
                    "determined without an expected identification type",
                    t.span,
                )
            p2, a = infer(glob, ctx, p)
            pv = evaluate(glob, ctx.env, p2)
            return S.Refl(p2, span=t.span), VId(a, pv, pv)
        case S.J():
            return _infer_j(glob, ctx, t)
        case S.NatElim():
            return _infer_nat_elim(glob, ctx, t)
        case S.SumElim():
            return _infer_sum_elim(glob, ctx, t)
        case S.HitForm():
            return _infer_hit_form(glob, ctx, t)
        case S.HitCtor():
            return _infer_hit_ctor(glob, ctx, t)
        case S.HitElim():
            return _infer_hit_elim(glob, ctx, t)
        case S.Const(name=name):
            if name in glob.definitions or name in glob.postulates:
                return t, const_type_value(glob, name)
            raise error(UNBOUND_NAME, f"unknown name '{name}'", t.span)
        case S.Ann(term=tm, type=ty):
            ty2, _ = check_type(glob, ctx, ty)
            tyv = evaluate(glob, ctx.env, ty2)
            tm2 = check(glob, ctx, tm, tyv)
            return tm2, tyv
        case S.Hole():
            raise error(
                UNSOLVED_HOLE,
                "hole in a position where its value is not determined",
                t.span,
            )
        case S.Lam():
            raise _cannot_infer(t, "an unannotated function")
        case S.Pair():
            raise _cannot_infer(t, "an unannotated pair")
        case S.Inl() | S.Inr():
            raise _cannot_infer(t, "a bare sum injection")
        case _:
            raise _cannot_infer(t, "this expression")


def _infer_j(glob: GlobalEnv, ctx: Context, t: S.J) -> tuple:
    p2, pty = infer(glob, ctx, t.proof)
    if not isinstance(pty, VId):
        raise error(
            TYPE_MISMATCH,
            "the final argument of J must be an identification",
            t.span,
            actual=show_type(glob, ctx, pty),
        )
    a = pty.carrier
    ctx_x = ctx.extend(a, "x")
    x = ctx_x.env[0]
    ctx_xy = ctx_x.extend(a, "y")
    y = ctx_xy.env[0]
    ctx_m = ctx_xy.extend(VId(a, x, y), "p")
    m2, _ = check_type(glob, ctx_m, t.motive)

    base_ty = evaluate(glob, (VRefl(x), x, x) + ctx.env, m2)
    b2 = check(glob, ctx_x, t.base, base_ty)

    def endpoint(term, val):
        if isinstance(term, S.Hole):
            return quote(glob, list(ctx.types), a, val)
        e2 = check(glob, ctx, term, a)
        ev = evaluate(glob, ctx.env, e2)
        if not convertible(glob, len(ctx), ev, val):
            raise error(
                TYPE_MISMATCH,
                "endpoint does not match the identification being "
                "eliminated",
                term.span,
                expected=show_value(glob, ctx, a, val),
                actual=show_value(glob, ctx, a, ev),
            )
        return e2

    l2 = endpoint(t.lhs, pty.lhs)
    r2 = endpoint(t.rhs, pty.rhs)
    pv = evaluate(glob, ctx.env, p2)
    result = evaluate(glob, (pv, pty.rhs, pty.lhs) + ctx.env, m2)
    return S.J(m2, b2, l2, r2, p2, span=t.span), result


def _infer_nat_elim(glob: GlobalEnv, ctx: Context, t: S.NatElim) -> tuple:
    ctx_n = ctx.extend(VNat(), "n")
    m2, _ = check_type(glob, ctx_n, t.motive)
    z2 = check(glob, ctx, t.zero_case, evaluate(glob, (VZero(),) + ctx.env, m2))
    n = ctx_n.env[0]
    ctx_ih = ctx_n.extend(evaluate(glob, (n,) + ctx.env, m2), "ih")
    s_ty = evaluate(glob, (VSucc(n),) + ctx.env, m2)
    s2 = check(glob, ctx_ih, t.succ_case, s_ty)
    sc2 = check(glob, ctx, t.scrutinee, VNat())
    sv = evaluate(glob, ctx.env, sc2)
    return (
        S.NatElim(m2, z2, s2, sc2, span=t.span),
        evaluate(glob, (sv,) + ctx.env, m2),
    )


def _infer_sum_elim(glob: GlobalEnv, ctx: Context, t: S.SumElim) -> tuple:
    sc2, sty = infer(glob, ctx, t.scrutinee)
    if not isinstance(sty, VSum):
        raise error(
            TYPE_MISMATCH,
            "case analysis requires a sum-typed scrutinee",
            t.span,
            actual=show_type(glob, ctx, sty),
        )
    ctx_s = ctx.extend(sty, "s")
    m2, _ = check_type(glob, ctx_s, t.motive)

    ctx_l = ctx.extend(sty.left, "a")
    l_ty = evaluate(glob, (VInl(ctx_l.env[0]),) + ctx.env, m2)
    l2 = check(glob, ctx_l, t.left_case, l_ty)
    ctx_r = ctx.extend(sty.right, "b")
    r_ty = evaluate(glob, (VInr(ctx_r.env[0]),) + ctx.env, m2)
    r2 = check(glob, ctx_r, t.right_case, r_ty)
    sv = evaluate(glob, ctx.env, sc2)
    return (
        S.SumElim(m2, l2, r2, sc2, span=t.span),
        evaluate(glob, (sv,) + ctx.env, m2),
    )


def _check_spine(glob, ctx, span, args, telescope):
    """Check arguments against a telescope of (hint, type term) entries,
    each scoped in the earlier ones.  Returns (elaborated args, env)."""
    if len(args) != len(telescope):
        raise error(
            TYPE_MISMATCH,
            f"expected {len(telescope)} argument(s), got {len(args)}",
            span,
        )
    out = []
    env: tuple = ()
    for a, (_, ty_term) in zip(args, telescope):
        tyv = evaluate(glob, env, ty_term)
        a2 = check(glob, ctx, a, tyv)
        out.append(a2)
        env = (evaluate(glob, ctx.env, a2),) + env
    return tuple(out), env


def _infer_hit_form(glob: GlobalEnv, ctx: Context, t: S.HitForm) -> tuple:
    if t.name not in glob.hits:
        raise error(UNBOUND_NAME, f"unknown type '{t.name}'", t.span)
    decl = glob.hits[t.name].decl
    args2, _ = _check_spine(glob, ctx, t.span, t.args, decl.params)
    return S.HitForm(t.name, args2, span=t.span), VUniv(decl.level)


def _infer_hit_ctor(glob: GlobalEnv, ctx: Context, t: S.HitCtor) -> tuple:
    if t.name not in glob.hits:
        raise error(UNBOUND_NAME, f"unknown type '{t.name}'", t.span)
    decl = glob.hits[t.name].decl
    if decl.is_point(t.ctor):
        spec_args = decl.point(t.ctor).args
    else:
        spec_args = decl.path(t.ctor).args
    telescope = list(decl.params) + [(a.hint, a.type) for a in spec_args]
    args2, env = _check_spine(glob, ctx, t.span, t.args, telescope)
    t2 = S.HitCtor(t.name, t.ctor, args2, span=t.span)
    if decl.is_point(t.ctor):
        pvals = tuple(evaluate(glob, ctx.env, a) for a in args2[: len(decl.params)])
        return t2, VHitForm(t.name, pvals)
    return t2, evaluate(glob, env, decl.path(t.ctor).target)


def _infer_hit_elim(glob: GlobalEnv, ctx: Context, t: S.HitElim) -> tuple:
    sc2, sty = infer(glob, ctx, t.scrutinee)
    if not (isinstance(sty, VHitForm) and sty.name == t.name):
        raise error(
            TYPE_MISMATCH,
            f"eliminator for '{t.name}' applied to a value of another type",
            t.span,
            expected=t.name,
            actual=show_type(glob, ctx, sty),
        )
    info = glob.hits[t.name]
    ctx_x = ctx.extend(sty, "x")
    m2, _ = check_type(glob, ctx_x, t.motive)
    if len(t.methods) != len(info.method_types):
        raise error(
            TYPE_MISMATCH,
            f"eliminator for '{t.name}' takes {len(info.method_types)} "
            f"method(s), got {len(t.methods)}",
            t.span,
        )
    p_val = VLam(make_closure(glob, ctx.env, m2, 1))
    env: tuple = (p_val,)
    for a in reversed(sty.args):
        env = env + (a,)
    ms2 = []
    for mt_term, m in zip(info.method_types, t.methods):
        mtv = evaluate(glob, env, mt_term)
        m_checked = check(glob, ctx, m, mtv)
        ms2.append(m_checked)
        env = (evaluate(glob, ctx.env, m_checked),) + env
    sv = evaluate(glob, ctx.env, sc2)
    return (
        S.HitElim(t.name, m2, tuple(ms2), sc2, span=t.span),
        evaluate(glob, (sv,) + ctx.env, m2),
    )


def check(glob: GlobalEnv, ctx: Context, t: S.Term, ty: Value) -> S.Term:
    """Check t against the type value ty; returns the elaborated term."""
    keyed = _tc_key(glob, ctx, "c", t, ty)
    if keyed is None:
        return _check(glob, ctx, t, ty)
    key, _ = keyed
    hit = glob.tc_cache.get(key)
    if hit is None:
        hit = _check(glob, ctx, t, ty)
        glob.tc_cache[key] = hit
        glob.tc_keep.append((t, ty, ctx))
    return hit


def _check(glob: GlobalEnv, ctx: Context, t: S.Term, ty: Value) -> S.Term:
    match t:
        case S.Lam(body=b, hint=h):
            if not isinstance(ty, VPi):
                raise error(
                    TYPE_MISMATCH,
                    "a function literal was given, but a non-function type "
                    "is required",
                    t.span,
                    expected=show_type(glob, ctx, ty),
                )
            ctx2 = ctx.extend(ty.dom, h or ty.cod.hint)
            b2 = check(glob, ctx2, b, apply_closure(glob, ty.cod, ctx2.env[0]))
            return S.Lam(b2, span=t.span, hint=h)
        case S.Pair(first=a, second=b):
            if not isinstance(ty, VSigma):
                raise error(
                    TYPE_MISMATCH,
                    "a pair was given, but a non-pair type is required",
                    t.span,
                    expected=show_type(glob, ctx, ty),
                )
            a2 = check(glob, ctx, a, ty.dom)
            av = evaluate(glob, ctx.env, a2)
            b2 = check(glob, ctx, b, apply_closure(glob, ty.cod, av))
            return S.Pair(a2, b2, span=t.span)
        case S.Inl(value=v):
            if not isinstance(ty, VSum):
                raise error(
                    TYPE_MISMATCH,
                    "a left injection was given, but a non-sum type is "
                    "required",
                    t.span,
                    expected=show_type(glob, ctx, ty),
                )
            return S.Inl(check(glob, ctx, v, ty.left), span=t.span)
        case S.Inr(value=v):
            if not isinstance(ty, VSum):
                raise error(
                    TYPE_MISMATCH,
                    "a right injection was given, but a non-sum type is "
                    "required",
                    t.span,
                    expected=show_type(glob, ctx, ty),
                )
            return S.Inr(check(glob, ctx, v, ty.right), span=t.span)
        case S.Refl(point=p) if isinstance(ty, VId):
            if not convertible(glob, len(ctx), ty.lhs, ty.rhs):
                raise error(
                    TYPE_MISMATCH,
                    "refl only proves identifications whose endpoints are "
                    "definitionally equal",
                    t.span,
                    expected=show_value(glob, ctx, ty.carrier, ty.lhs),
                    actual=show_value(glob, ctx, ty.carrier, ty.rhs),
                )
            if isinstance(p, S.Hole):
                p2 = quote(glob, list(ctx.types), ty.carrier, ty.lhs)
            else:
                p2 = check(glob, ctx, p, ty.carrier)
                pv = evaluate(glob, ctx.env, p2)
                if not convertible(glob, len(ctx), pv, ty.lhs):
                    raise error(
                        TYPE_MISMATCH,
                        "the point of this reflexivity proof differs from "
                        "the identification's endpoint",
                        t.span,
                        expected=show_value(glob, ctx, ty.carrier, ty.lhs),
                        actual=show_value(glob, ctx, ty.carrier, pv),
                    )
            return S.Refl(p2, span=t.span)
        case S.Hole():
            raise error(
                UNSOLVED_HOLE,
                "unsolved hole",
                t.span,
                expected=show_type(glob, ctx, ty),
            )
        case S.Ann(term=tm, type=ann_ty):
            ann2, _ = check_type(glob, ctx, ann_ty)
            annv = evaluate(glob, ctx.env, ann2)
            if not convertible(glob, len(ctx), annv, ty):
                raise _mismatch(glob, ctx, t.span, ty, annv)
            return check(glob, ctx, tm, annv)
        case _:
            t2, ity = infer(glob, ctx, t)
            if not convertible(glob, len(ctx), ity, ty):
                raise _mismatch(glob, ctx, t.span, ty, ity)
            return t2


# --- declarations ---


def _no_clash(glob: GlobalEnv, name: str, span, error_class=TYPE_MISMATCH):
    if name in glob:
        raise error(error_class, f"'{name}' is already defined", span)


def check_definition(
    glob: GlobalEnv, name: str, type_term: S.Term, body_term: S.Term, span=None
) -> None:
    _no_clash(glob, name, span)
    ty2, _ = check_type(glob, Context(), type_term)
    tyv = evaluate(glob, (), ty2)
    body2 = check(glob, Context(), body_term, tyv)
    glob.add_definition(name, Definition(ty2, body2, tyv, None))


def check_postulate(glob: GlobalEnv, name: str, type_term: S.Term, span=None) -> None:
    _no_clash(glob, name, span)
    ty2, _ = check_type(glob, Context(), type_term)
    glob.add_postulate(name, Postulate(ty2, evaluate(glob, (), ty2)))


def check_hit(
    glob: GlobalEnv,
    name: str,
    params: list,
    level: int,
    ctors: list,
    span=None,
) -> None:
    """Check a higher-inductive-type declaration and install it with all
    of its generated constants.

    params is a list of (hint, type term, span), each scoped in earlier
    params; ctors is a list of (ctor name, type term, span), scoped in
    the params and free to mention the declared type and earlier
    point-constructors.
    """
    _no_clash(glob, name, span, INVALID_HIT)
    if level < 0 or level > 1:
        raise error(
            INVALID_HIT,
            f"a declared type must live in U 0 or U 1, not U {level}",
            span,
        )

    ctx = Context()
    checked_params = []
    for hint, pty, pspan in params:
        pty2, _ = check_type(glob, ctx, pty)
        checked_params.append((hint, pty2))
        ctx = ctx.extend(evaluate(glob, ctx.env, pty2), hint)

    # provisional registration so constructor types can mention the type
    # being declared (and earlier point-constructors)
    info = HitInfo(validate_hit_decl(name, tuple(checked_params), level, []))
    glob.hits[name] = info
    added: list[str] = []
    try:
        checked_ctors = []
        for cname, ctype, cspan in ctors:
            ctype2, clvl = check_type(glob, ctx, ctype)
            if clvl > level:
                raise error(
                    INVALID_HIT,
                    f"constructor '{cname}' lives in U {clvl}, above the "
                    f"declared type's U {level}",
                    cspan,
                )
            checked_ctors.append((cname, ctype2, cspan))
            info.decl = validate_hit_decl(
                name, tuple(checked_params), level, checked_ctors
            )
        decl = info.decl
        ctor_consts, method_types, elim_consts, beta_consts = (
            generate_hit_constants(decl)
        )
        info.method_types = method_types
        info.elim_names = {0: f"{name}-elim", 1: f"{name}-elim1"}

        for cname, cty, cbody in list(ctor_consts) + list(elim_consts):
            _no_clash(glob, cname, span, INVALID_HIT)
            cty2, _ = check_type(glob, Context(), cty)
            tyv = evaluate(glob, (), cty2)
            cbody2 = check(glob, Context(), cbody, tyv)
            glob.add_definition(cname, Definition(cty2, cbody2, tyv, None))
            added.append(cname)
        for bname, bty in beta_consts:
            _no_clash(glob, bname, span, INVALID_HIT)
            bty2, _ = check_type(glob, Context(), bty)
            glob.add_postulate(bname, Postulate(bty2, evaluate(glob, (), bty2)))
            added.append(bname)
    except BaseException:
        del glob.hits[name]
        for extra in added:
            glob.definitions.pop(extra, None)
            glob.postulates.pop(extra, None)
            glob.order.remove(extra)
        raise
    glob.order.append(name)
