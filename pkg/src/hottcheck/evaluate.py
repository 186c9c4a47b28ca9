"""Normalization by evaluation: the environment machine, read-back to
normal-form terms, and the conversion test used by the typechecker.

Definitions unfold eagerly (and are cached); postulates and HIT
path-constructors evaluate to neutrals, so nothing computes past them.
quote is type-directed and produces beta-normal, eta-long (for Pi and
Sigma) terms; convertible compares values directly, with the eta laws
handled semantically.
"""

from __future__ import annotations

from . import syntax as S
from .environment import Context, GlobalEnv
from .values import (
    Closure,
    FApp,
    FFst,
    FHitElim,
    FJ,
    FNatElim,
    FSnd,
    FSumElim,
    Frame,
    HConst,
    Head,
    HPathCtor,
    HVar,
    Neutral,
    Value,
    VHitCtor,
    VHitForm,
    VId,
    VInl,
    VInr,
    VLam,
    VNat,
    VNeutral,
    VPair,
    VPi,
    VRefl,
    VSigma,
    VSucc,
    VSum,
    VUniv,
    VZero,
    fresh_var,
)


class KernelError(Exception):
    """Internal invariant violation: fired only on input the checker
    should never have let through."""


def _hc(glob: GlobalEnv, cls, *args):
    """Hash-cons a value-layer object: identical components (by object
    identity) yield the identical object."""
    parts = [cls]
    for a in args:
        if isinstance(a, tuple):
            parts.append(tuple(map(id, a)))
        elif isinstance(a, (str, int, type(None))):
            parts.append(a)
        else:
            parts.append(id(a))
    key = tuple(parts)
    hit = glob.value_intern.get(key)
    if hit is None:
        hit = cls(*args)
        glob.value_intern[key] = hit
        glob.value_keep.append(args)
    return hit


def apply_closure(glob: GlobalEnv, clo: Closure, *args: Value) -> Value:
    key = (id(clo), tuple(map(id, args)))
    hit = glob.apply_cache.get(key)
    if hit is not None:
        return hit
    value = evaluate(glob, tuple(reversed(args)) + clo.env, clo.body)
    glob.apply_cache[key] = value
    glob.apply_keep.append((clo, args))
    return value


def _memo(glob: GlobalEnv, key: tuple, pins: tuple, compute):
    hit = glob.apply_cache.get(key)
    if hit is not None:
        return hit
    value = compute()
    glob.apply_cache[key] = value
    glob.apply_keep.append(pins)
    return value


def do_app(glob: GlobalEnv, fn: Value, arg: Value) -> Value:
    return _memo(glob, ("app", id(fn), id(arg)), (fn, arg),
                 lambda: _do_app(glob, fn, arg))


def _do_app(glob: GlobalEnv, fn: Value, arg: Value) -> Value:
    if isinstance(fn, VLam):
        return apply_closure(glob, fn.closure, arg)
    if isinstance(fn, VNeutral):
        n = fn.neutral
        return _hc(glob, VNeutral, _hc(glob, Neutral, n.head, n.spine + (_hc(glob, FApp, arg),)))
    raise KernelError("NotApplicable: applied a non-function value")


def do_fst(glob: GlobalEnv, v: Value) -> Value:
    return _memo(glob, ("fst", id(v)), (v,), lambda: _do_fst(glob, v))


def _do_fst(glob: GlobalEnv, v: Value) -> Value:
    if isinstance(v, VPair):
        return v.first
    if isinstance(v, VNeutral):
        n = v.neutral
        return _hc(glob, VNeutral, _hc(glob, Neutral, n.head, n.spine + (_hc(glob, FFst),)))
    raise KernelError("projected a non-pair value")


def do_snd(glob: GlobalEnv, v: Value) -> Value:
    return _memo(glob, ("snd", id(v)), (v,), lambda: _do_snd(glob, v))


def _do_snd(glob: GlobalEnv, v: Value) -> Value:
    if isinstance(v, VPair):
        return v.second
    if isinstance(v, VNeutral):
        n = v.neutral
        return _hc(glob, VNeutral, _hc(glob, Neutral, n.head, n.spine + (_hc(glob, FSnd),)))
    raise KernelError("projected a non-pair value")


def do_nat_elim(glob, motive: Closure, zero: Value, succ: Closure, scrut: Value) -> Value:
    return _memo(
        glob,
        ("natelim", id(motive), id(zero), id(succ), id(scrut)),
        (motive, zero, succ, scrut),
        lambda: _do_nat_elim(glob, motive, zero, succ, scrut),
    )


def _do_nat_elim(glob, motive: Closure, zero: Value, succ: Closure, scrut: Value) -> Value:
    if isinstance(scrut, VZero):
        return zero
    if isinstance(scrut, VSucc):
        ih = do_nat_elim(glob, motive, zero, succ, scrut.pred)
        return apply_closure(glob, succ, scrut.pred, ih)
    if isinstance(scrut, VNeutral):
        n = scrut.neutral
        return _hc(glob, VNeutral, _hc(glob, Neutral, n.head, n.spine + (_hc(glob, FNatElim, motive, zero, succ),)))
    raise KernelError("NatElim on a non-natural value")


def do_sum_elim(glob, motive: Closure, left: Closure, right: Closure, scrut: Value) -> Value:
    return _memo(
        glob,
        ("sumelim", id(motive), id(left), id(right), id(scrut)),
        (motive, left, right, scrut),
        lambda: _do_sum_elim(glob, motive, left, right, scrut),
    )


def _do_sum_elim(glob, motive: Closure, left: Closure, right: Closure, scrut: Value) -> Value:
    if isinstance(scrut, VInl):
        return apply_closure(glob, left, scrut.value)
    if isinstance(scrut, VInr):
        return apply_closure(glob, right, scrut.value)
    if isinstance(scrut, VNeutral):
        n = scrut.neutral
        return _hc(glob, VNeutral, _hc(glob, Neutral, n.head, n.spine + (_hc(glob, FSumElim, motive, left, right),)))
    raise KernelError("SumElim on a non-sum value")


def do_j(glob, motive: Closure, base: Closure, proof: Value) -> Value:
    return _memo(
        glob,
        ("j", id(motive), id(base), id(proof)),
        (motive, base, proof),
        lambda: _do_j(glob, motive, base, proof),
    )


def _do_j(glob, motive: Closure, base: Closure, proof: Value) -> Value:
    if isinstance(proof, VRefl):
        return apply_closure(glob, base, proof.point)
    if isinstance(proof, VNeutral):
        n = proof.neutral
        return _hc(glob, VNeutral, _hc(glob, Neutral, n.head, n.spine + (_hc(glob, FJ, motive, base),)))
    raise KernelError("J on a non-identification value")


def do_hit_elim(glob, name: str, motive: Closure, methods: tuple, scrut: Value) -> Value:
    return _memo(
        glob,
        ("hitelim", name, id(motive), tuple(map(id, methods)), id(scrut)),
        (motive, methods, scrut),
        lambda: _do_hit_elim(glob, name, motive, methods, scrut),
    )


def _do_hit_elim(glob, name: str, motive: Closure, methods: tuple, scrut: Value) -> Value:
    decl = glob.hits[name].decl
    if isinstance(scrut, VHitCtor) and scrut.name == name and decl.is_point(scrut.ctor):
        idx = [c.name for c in decl.points].index(scrut.ctor)
        method = methods[idx]
        nparams = len(decl.params)
        result = method
        for arg_spec, arg in zip(decl.point(scrut.ctor).args, scrut.args[nparams:]):
            result = do_app(glob, result, arg)
            if arg_spec.role == S.ARG_REC:
                ih = do_hit_elim(glob, name, motive, methods, arg)
                result = do_app(glob, result, ih)
        return result
    if isinstance(scrut, VNeutral):
        n = scrut.neutral
        return _hc(glob, VNeutral, _hc(glob, Neutral, n.head, n.spine + (_hc(glob, FHitElim, name, motive, methods),)))
    raise KernelError("HitElim on a foreign value")


def const_value(glob: GlobalEnv, name: str) -> Value:
    if name in glob.definitions:
        entry = glob.definitions[name]
        if entry.body_value is None:
            entry.body_value = evaluate(glob, (), entry.body_term)
        return entry.body_value
    if name in glob.postulates:
        return _hc(glob, VNeutral, _hc(glob, Neutral, _hc(glob, HConst, name), ()))
    raise KernelError(f"UnresolvedConstant: {name}")


def const_type_value(glob: GlobalEnv, name: str) -> Value:
    if name in glob.definitions:
        entry = glob.definitions[name]
        if entry.type_value is None:
            entry.type_value = evaluate(glob, (), entry.type_term)
        return entry.type_value
    if name in glob.postulates:
        entry = glob.postulates[name]
        if entry.type_value is None:
            entry.type_value = evaluate(glob, (), entry.type_term)
        return entry.type_value
    raise KernelError(f"UnresolvedConstant: {name}")


# placeholder for environment slots a term never reads: canonicalizing
# unused entries lets structurally equal closures share one object and
# keeps captured-but-unused variables from looking like free variables
_UNUSED_SLOT = VNeutral(Neutral(HConst("_unused"), ()))


def _trim_env(glob: GlobalEnv, env: tuple, free: frozenset, offset: int) -> tuple:
    """Keep only the entries of env read by a body whose free indices are
    given; entry k is read when k + offset is free.  Unused entries become
    the canonical placeholder; an unused tail is dropped."""
    if not env:
        return env
    used = [k for k in range(len(env)) if (k + offset) in free]
    if not used:
        return ()
    top = used[-1] + 1
    return tuple(
        env[k] if (k + offset) in free else _UNUSED_SLOT for k in range(top)
    )


def make_closure(glob: GlobalEnv, env: tuple, body: S.Term, binds: int, hint=None) -> Closure:
    """Build a closure capturing only the environment entries its body
    can reach through variables bound outside its own binder block."""
    env = _trim_env(glob, env, free_indices(glob, body), binds)
    return _hc(glob, Closure, env, body, hint)


def evaluate(glob: GlobalEnv, env: tuple, t: S.Term) -> Value:
    env = _trim_env(glob, env, free_indices(glob, t), 0)
    key = (id(t), tuple(map(id, env)))
    hit = glob.eval_cache.get(key)
    if hit is not None:
        return hit
    value = _evaluate(glob, env, t)
    glob.eval_cache[key] = value
    glob.eval_keep.append((t, env))
    return value


def _evaluate(glob: GlobalEnv, env: tuple, t: S.Term) -> Value:
    match t:
        case S.Var(index=i):
            return env[i]
        case S.Univ(level=l):
            return _hc(glob, VUniv, l)
        case S.Pi(dom=d, cod=c, hint=h):
            return _hc(glob, VPi, evaluate(glob, env, d), make_closure(glob, env, c, 1, h))
        case S.Lam(body=b, hint=h):
            return _hc(glob, VLam, make_closure(glob, env, b, 1, h))
        case S.App(fn=f, arg=a):
            return do_app(glob, evaluate(glob, env, f), evaluate(glob, env, a))
        case S.Sigma(dom=d, cod=c, hint=h):
            return _hc(glob, VSigma, evaluate(glob, env, d), make_closure(glob, env, c, 1, h))
        case S.Pair(first=a, second=b):
            return _hc(glob, VPair, evaluate(glob, env, a), evaluate(glob, env, b))
        case S.Fst(pair=p):
            return do_fst(glob, evaluate(glob, env, p))
        case S.Snd(pair=p):
            return do_snd(glob, evaluate(glob, env, p))
        case S.Sum(left=l, right=r):
            return _hc(glob, VSum, evaluate(glob, env, l), evaluate(glob, env, r))
        case S.Inl(value=v):
            return _hc(glob, VInl, evaluate(glob, env, v))
        case S.Inr(value=v):
            return _hc(glob, VInr, evaluate(glob, env, v))
        case S.SumElim(motive=m, left_case=l, right_case=r, scrutinee=s):
            return do_sum_elim(
                glob,
                make_closure(glob, env, m, 1),
                make_closure(glob, env, l, 1),
                make_closure(glob, env, r, 1),
                evaluate(glob, env, s),
            )
        case S.Nat():
            return _hc(glob, VNat)
        case S.Zero():
            return _hc(glob, VZero)
        case S.Succ(pred=p):
            return _hc(glob, VSucc, evaluate(glob, env, p))
        case S.NatElim(motive=m, zero_case=z, succ_case=s, scrutinee=n):
            return do_nat_elim(
                glob,
                make_closure(glob, env, m, 1),
                evaluate(glob, env, z),
                make_closure(glob, env, s, 2),
                evaluate(glob, env, n),
            )
        case S.Id(carrier=c, lhs=l, rhs=r):
            return _hc(
                glob,
                VId,
                evaluate(glob, env, c),
                evaluate(glob, env, l),
                evaluate(glob, env, r),
            )
        case S.Refl(point=p):
            return _hc(glob, VRefl, evaluate(glob, env, p))
        case S.J(motive=m, base=b, proof=p):
            return do_j(glob, make_closure(glob, env, m, 3), make_closure(glob, env, b, 1), evaluate(glob, env, p))
        case S.HitForm(name=name, args=args):
            return _hc(glob, VHitForm, name, tuple(evaluate(glob, env, a) for a in args))
        case S.HitCtor(name=name, ctor=ctor, args=args):
            vargs = tuple(evaluate(glob, env, a) for a in args)
            if glob.hits[name].decl.is_point(ctor):
                return _hc(glob, VHitCtor, name, ctor, vargs)
            return _hc(glob, VNeutral, _hc(glob, Neutral, _hc(glob, HPathCtor, name, ctor, vargs), ()))
        case S.HitElim(name=name, motive=m, methods=ms, scrutinee=s):
            return do_hit_elim(
                glob,
                name,
                make_closure(glob, env, m, 1),
                tuple(evaluate(glob, env, x) for x in ms),
                evaluate(glob, env, s),
            )
        case S.Const(name=name):
            return const_value(glob, name)
        case S.Ann(term=tm):
            return evaluate(glob, env, tm)
        case _:
            raise KernelError(f"cannot evaluate {type(t).__name__}")


# --- read-back ---


def _ctor_telescope_types(glob, decl, ctor_args, values):
    """Type values for a constructor's full telescope (params then args),
    given the value of each entry."""
    types = []
    env: tuple = ()
    for (_, pty), v in zip(decl.params, values[: len(decl.params)]):
        types.append(evaluate(glob, env, pty))
        env = (v,) + env
    for spec, v in zip(ctor_args, values[len(decl.params):]):
        types.append(evaluate(glob, env, spec.type))
        env = (v,) + env
    return types


_FIELDS_CACHE: dict = {}


def _term_fields(cls):
    cached = _FIELDS_CACHE.get(cls)
    if cached is None:
        import dataclasses

        cached = _FIELDS_CACHE[cls] = tuple(dataclasses.fields(cls))
    return cached


def intern_term(glob: GlobalEnv, t: S.Term) -> S.Term:
    """Hash-cons a read-back term: child terms are interned first, so a
    node's key is its class plus child identities plus literal fields."""
    if id(t) in glob.intern_ids:
        return t
    key: list = [type(t)]
    rebuilt = {}
    for f in _term_fields(type(t)):
        v = getattr(t, f.name)
        if isinstance(v, S.Term):
            v = intern_term(glob, v)
            key.append(id(v))
        elif isinstance(v, tuple) and v and isinstance(v[0], S.Term):
            v = tuple(intern_term(glob, x) for x in v)
            key.append(tuple(map(id, v)))
        else:
            key.append(v)
        rebuilt[f.name] = v
    tkey = tuple(key)
    shared = glob.intern_table.get(tkey)
    if shared is not None:
        return shared
    node = type(t)(**rebuilt)
    glob.intern_table[tkey] = node
    glob.intern_ids[id(node)] = node
    return node


_EMPTY_LEVELS: frozenset = frozenset()


def free_levels(glob: GlobalEnv, obj) -> frozenset:
    """Levels of the free variables reachable from a value (closures
    contribute the free levels of their captured environments)."""
    out = glob.free_cache.get(id(obj))
    if out is not None:
        return out
    if isinstance(obj, HVar):
        out = frozenset((obj.level,))
    elif isinstance(obj, VNeutral):
        out = free_levels(glob, obj.neutral)
    elif isinstance(obj, Neutral):
        out = free_levels(glob, obj.head)
        for frame in obj.spine:
            out = out | free_levels(glob, frame)
    elif isinstance(obj, Closure):
        out = _EMPTY_LEVELS
        for entry in obj.env:
            out = out | free_levels(glob, entry)
    elif isinstance(obj, (Value, Head, Frame)):
        out = _EMPTY_LEVELS
        for field in _term_fields(type(obj)):
            child = getattr(obj, field.name)
            if isinstance(child, (Value, Closure)):
                out = out | free_levels(glob, child)
            elif isinstance(child, tuple):
                for item in child:
                    if isinstance(item, (Value, Closure)):
                        out = out | free_levels(glob, item)
    else:
        out = _EMPTY_LEVELS
    glob.free_cache[id(obj)] = out
    glob.free_keep.append(obj)
    return out


def free_indices(glob: GlobalEnv, t: S.Term) -> frozenset:
    """Free de Bruijn indices of a term, memoized on object identity
    (meant for interned terms, whose identity is canonical)."""
    out = glob.term_free_cache.get(id(t))
    if out is not None:
        return out
    if isinstance(t, S.Var):
        out = frozenset((t.index,))
    else:
        out = _EMPTY_LEVELS
        for name, kind, binds in S._STRUCTURE[type(t)]:
            child = getattr(t, name)
            if kind == "term":
                sub = free_indices(glob, child)
            else:
                sub = _EMPTY_LEVELS
                for item in child:
                    sub = sub | free_indices(glob, item)
            if binds:
                sub = frozenset(i - binds for i in sub if i >= binds)
            out = out | sub
    glob.term_free_cache[id(t)] = out
    glob.term_free_keep.append(t)
    return out


def _quote_key(glob: GlobalEnv, lvls: list, tag: str, *objs) -> tuple:
    # the read-back result depends only on the levels actually free in
    # the inputs; keying on just those (plus the depth, which fixes the
    # level-to-index conversion) lets closed values hit the cache under
    # any binder stack
    rel: frozenset = _EMPTY_LEVELS
    for obj in objs:
        rel = rel | free_levels(glob, obj)
    ids = tuple(id(o) for o in objs)
    if not rel:
        return (tag, *ids)
    return (tag, *ids, len(lvls), tuple((l, id(lvls[l])) for l in sorted(rel)))


def quote(glob: GlobalEnv, lvls: list, ty: Value, v: Value) -> S.Term:
    key = _quote_key(glob, lvls, "v", ty, v)
    hit = glob.quote_cache.get(key)
    if hit is not None:
        return hit
    term = intern_term(glob, _quote(glob, lvls, ty, v))
    glob.quote_cache[key] = term
    glob.quote_keep.append((ty, v, tuple(lvls)))
    return term


def _quote(glob: GlobalEnv, lvls: list, ty: Value, v: Value) -> S.Term:
    depth = len(lvls)
    match ty:
        case VPi(dom=dom, cod=cod):
            x = fresh_var(depth)
            body = do_app(glob, v, x)
            bty = apply_closure(glob, cod, x)
            return S.Lam(quote(glob, lvls + [dom], bty, body), hint=cod.hint)
        case VSigma(dom=dom, cod=cod):
            a = do_fst(glob, v)
            b = do_snd(glob, v)
            return S.Pair(
                quote(glob, lvls, dom, a),
                quote(glob, lvls, apply_closure(glob, cod, a), b),
            )
        case VUniv():
            return quote_type(glob, lvls, v)
        case VNat():
            if isinstance(v, VZero):
                return S.Zero()
            if isinstance(v, VSucc):
                return S.Succ(quote(glob, lvls, ty, v.pred))
            return _quote_neutral_value(glob, lvls, v)
        case VId(carrier=a):
            if isinstance(v, VRefl):
                return S.Refl(quote(glob, lvls, a, v.point))
            return _quote_neutral_value(glob, lvls, v)
        case VSum(left=l, right=r):
            if isinstance(v, VInl):
                return S.Inl(quote(glob, lvls, l, v.value))
            if isinstance(v, VInr):
                return S.Inr(quote(glob, lvls, r, v.value))
            return _quote_neutral_value(glob, lvls, v)
        case VHitForm(name=name):
            if isinstance(v, VHitCtor):
                decl = glob.hits[name].decl
                spec = decl.point(v.ctor)
                types = _ctor_telescope_types(glob, decl, spec.args, v.args)
                args = tuple(
                    quote(glob, lvls, t, a) for t, a in zip(types, v.args)
                )
                return S.HitCtor(name, v.ctor, args)
            return _quote_neutral_value(glob, lvls, v)
        case _:
            # stuck type (neutral): the value can only be neutral too
            return _quote_neutral_value(glob, lvls, v)


def _quote_neutral_value(glob, lvls, v: Value) -> S.Term:
    if not isinstance(v, VNeutral):
        raise KernelError("expected a neutral value during read-back")
    term, _ = quote_neutral(glob, lvls, v.neutral)
    return term


def quote_type(glob: GlobalEnv, lvls: list, v: Value) -> S.Term:
    """Read back a value known to be a type."""
    key = _quote_key(glob, lvls, "t", v)
    hit = glob.quote_cache.get(key)
    if hit is not None:
        return hit
    term = intern_term(glob, _quote_type(glob, lvls, v))
    glob.quote_cache[key] = term
    glob.quote_keep.append((v, tuple(lvls)))
    return term


def _quote_type(glob: GlobalEnv, lvls: list, v: Value) -> S.Term:
    depth = len(lvls)
    match v:
        case VUniv(level=l):
            return S.Univ(l)
        case VPi(dom=dom, cod=cod):
            x = fresh_var(depth)
            return S.Pi(
                quote_type(glob, lvls, dom),
                quote_type(glob, lvls + [dom], apply_closure(glob, cod, x)),
                hint=cod.hint,
            )
        case VSigma(dom=dom, cod=cod):
            x = fresh_var(depth)
            return S.Sigma(
                quote_type(glob, lvls, dom),
                quote_type(glob, lvls + [dom], apply_closure(glob, cod, x)),
                hint=cod.hint,
            )
        case VSum(left=l, right=r):
            return S.Sum(quote_type(glob, lvls, l), quote_type(glob, lvls, r))
        case VNat():
            return S.Nat()
        case VId(carrier=a, lhs=l, rhs=r):
            return S.Id(
                quote_type(glob, lvls, a),
                quote(glob, lvls, a, l),
                quote(glob, lvls, a, r),
            )
        case VHitForm(name=name, args=args):
            decl = glob.hits[name].decl
            types = _ctor_telescope_types(glob, decl, (), args)
            qargs = tuple(quote(glob, lvls, t, a) for t, a in zip(types, args))
            return S.HitForm(name, qargs)
        case VNeutral(neutral=n):
            term, _ = quote_neutral(glob, lvls, n)
            return term
        case _:
            raise KernelError(f"not a type value: {type(v).__name__}")


def path_ctor_type(glob: GlobalEnv, name: str, ctor: str, args: tuple) -> Value:
    """Type value of a fully applied path-constructor."""
    decl = glob.hits[name].decl
    spec = decl.path(ctor)
    env: tuple = ()
    for a in args:
        env = (a,) + env
    return evaluate(glob, env, spec.target)


def quote_neutral(glob: GlobalEnv, lvls: list, n: Neutral):
    """Read back a neutral, synthesizing its type along the spine."""
    depth = len(lvls)
    head = n.head
    if isinstance(head, HVar):
        term: S.Term = S.Var(depth - 1 - head.level)
        ty = lvls[head.level]
    elif isinstance(head, HConst):
        term = S.Const(head.name)
        ty = const_type_value(glob, head.name)
    elif isinstance(head, HPathCtor):
        decl = glob.hits[head.name].decl
        spec = decl.path(head.ctor)
        types = _ctor_telescope_types(glob, decl, spec.args, head.args)
        qargs = tuple(quote(glob, lvls, t, a) for t, a in zip(types, head.args))
        term = S.HitCtor(head.name, head.ctor, qargs)
        ty = path_ctor_type(glob, head.name, head.ctor, head.args)
    else:
        raise KernelError("unknown neutral head")

    prefix = _hc(glob, Neutral, head, ())
    for frame in n.spine:
        value = _hc(glob, VNeutral, prefix)
        term, ty = _quote_frame(glob, lvls, frame, term, ty, value)
        prefix = _hc(glob, Neutral, prefix.head, prefix.spine + (frame,))
    return term, ty


def _quote_closure_type(glob, lvls, clo: Closure, arg_types: list) -> S.Term:
    """Read back a type-valued closure under fresh variables."""
    depth = len(lvls)
    xs = [fresh_var(depth + i) for i in range(len(arg_types))]
    body = apply_closure(glob, clo, *xs)
    return quote_type(glob, lvls + arg_types, body)


def _quote_frame(glob, lvls, frame: Frame, term: S.Term, ty: Value, value: Value):
    depth = len(lvls)
    match frame:
        case FApp(arg=a):
            if not isinstance(ty, VPi):
                raise KernelError("application frame on non-function neutral")
            return (
                S.App(term, quote(glob, lvls, ty.dom, a)),
                apply_closure(glob, ty.cod, a),
            )
        case FFst():
            if not isinstance(ty, VSigma):
                raise KernelError("projection frame on non-pair neutral")
            return S.Fst(term), ty.dom
        case FSnd():
            if not isinstance(ty, VSigma):
                raise KernelError("projection frame on non-pair neutral")
            return S.Snd(term), apply_closure(glob, ty.cod, do_fst(glob, value))
        case FNatElim(motive=m, zero_case=z, succ_case=s):
            qm = _quote_closure_type(glob, lvls, m, [_hc(glob, VNat)])
            qz = quote(glob, lvls, apply_closure(glob, m, _hc(glob, VZero)), z)
            x = fresh_var(depth)
            ihty = apply_closure(glob, m, x)
            sty = apply_closure(glob, m, _hc(glob, VSucc, x))
            qs = quote(
                glob,
                lvls + [_hc(glob, VNat), ihty],
                sty,
                apply_closure(glob, s, x, fresh_var(depth + 1)),
            )
            return S.NatElim(qm, qz, qs, term), apply_closure(glob, m, value)
        case FSumElim(motive=m, left_case=lc, right_case=rc):
            if not isinstance(ty, VSum):
                raise KernelError("sum eliminator on non-sum neutral")
            qm = _quote_closure_type(glob, lvls, m, [ty])
            a = fresh_var(depth)
            ql = quote(
                glob,
                lvls + [ty.left],
                apply_closure(glob, m, _hc(glob, VInl, a)),
                apply_closure(glob, lc, a),
            )
            qr = quote(
                glob,
                lvls + [ty.right],
                apply_closure(glob, m, _hc(glob, VInr, a)),
                apply_closure(glob, rc, a),
            )
            return S.SumElim(qm, ql, qr, term), apply_closure(glob, m, value)
        case FJ(motive=m, base=b):
            if not isinstance(ty, VId):
                raise KernelError("J frame on non-identification neutral")
            a = ty.carrier
            x = fresh_var(depth)
            y = fresh_var(depth + 1)
            qm = _quote_closure_type(glob, lvls, m, [a, a, _hc(glob, VId, a, x, y)])
            qb = quote(
                glob,
                lvls + [a],
                apply_closure(glob, m, x, x, _hc(glob, VRefl, x)),
                apply_closure(glob, b, x),
            )
            return (
                S.J(qm, qb, quote(glob, lvls, a, ty.lhs), quote(glob, lvls, a, ty.rhs), term),
                apply_closure(glob, m, ty.lhs, ty.rhs, value),
            )
        case FHitElim(name=name, motive=m, methods=ms):
            if not isinstance(ty, VHitForm):
                raise KernelError("HIT eliminator on foreign neutral")
            info = glob.hits[name]
            qm = _quote_closure_type(glob, lvls, m, [ty])
            env: tuple = (_hc(glob, VLam, m),)
            for a in reversed(ty.args):
                env = env + (a,)
            qms = []
            for mt_term, mv in zip(info.method_types, ms):
                mty = evaluate(glob, env, mt_term)
                qms.append(quote(glob, lvls, mty, mv))
                env = (mv,) + env
            return (
                S.HitElim(name, qm, tuple(qms), term),
                apply_closure(glob, m, value),
            )
        case _:
            raise KernelError("unknown spine frame")


def normalize(glob: GlobalEnv, ctx: Context, t: S.Term, ty: Value) -> S.Term:
    """Full normal form of t (which must have type ty in ctx)."""
    return quote(glob, list(ctx.types), ty, evaluate(glob, ctx.env, t))


# --- conversion ---


def convertible(glob: GlobalEnv, depth: int, v: Value, u: Value) -> bool:
    """Definitional equality of two values of the same type."""
    # shared value objects (cached definition bodies and their parts)
    if v is u:
        return True
    # conversion never consults the context: the depth only seeds fresh
    # variables, and scoping guarantees it exceeds every free level, so
    # the outcome for a given pair of value objects never changes
    key = ("cv", id(v), id(u))
    hit = glob.apply_cache.get(key)
    if hit is not None:
        return hit
    result = _convertible(glob, depth, v, u)
    glob.apply_cache[key] = result
    glob.apply_cache[("cv", id(u), id(v))] = result
    glob.apply_keep.append((v, u))
    return result


def _convertible(glob: GlobalEnv, depth: int, v: Value, u: Value) -> bool:
    # eta for functions
    if isinstance(v, VLam) or isinstance(u, VLam):
        x = fresh_var(depth)
        return convertible(glob, depth + 1, do_app(glob, v, x), do_app(glob, u, x))
    # eta for pairs
    if isinstance(v, VPair) or isinstance(u, VPair):
        return convertible(glob, depth, do_fst(glob, v), do_fst(glob, u)) and convertible(
            glob, depth, do_snd(glob, v), do_snd(glob, u)
        )
    match (v, u):
        case (VUniv(level=i), VUniv(level=j)):
            return i == j
        case (VPi(dom=d1, cod=c1), VPi(dom=d2, cod=c2)):
            return convertible(glob, depth, d1, d2) and _conv_closure(glob, depth, c1, c2, 1)
        case (VSigma(dom=d1, cod=c1), VSigma(dom=d2, cod=c2)):
            return convertible(glob, depth, d1, d2) and _conv_closure(glob, depth, c1, c2, 1)
        case (VSum(left=l1, right=r1), VSum(left=l2, right=r2)):
            return convertible(glob, depth, l1, l2) and convertible(glob, depth, r1, r2)
        case (VNat(), VNat()):
            return True
        case (VZero(), VZero()):
            return True
        case (VSucc(pred=a), VSucc(pred=b)):
            return convertible(glob, depth, a, b)
        case (VId(carrier=a1, lhs=l1, rhs=r1), VId(carrier=a2, lhs=l2, rhs=r2)):
            return (
                convertible(glob, depth, a1, a2)
                and convertible(glob, depth, l1, l2)
                and convertible(glob, depth, r1, r2)
            )
        case (VRefl(point=a), VRefl(point=b)):
            return convertible(glob, depth, a, b)
        case (VInl(value=a), VInl(value=b)):
            return convertible(glob, depth, a, b)
        case (VInr(value=a), VInr(value=b)):
            return convertible(glob, depth, a, b)
        case (VHitForm(name=n1, args=a1), VHitForm(name=n2, args=a2)):
            return n1 == n2 and _conv_all(glob, depth, a1, a2)
        case (VHitCtor(name=n1, ctor=c1, args=a1), VHitCtor(name=n2, ctor=c2, args=a2)):
            return n1 == n2 and c1 == c2 and _conv_all(glob, depth, a1, a2)
        case (VNeutral(neutral=n1), VNeutral(neutral=n2)):
            return _conv_neutral(glob, depth, n1, n2)
        case _:
            return False


def _conv_all(glob, depth, xs, ys) -> bool:
    return len(xs) == len(ys) and all(
        convertible(glob, depth, x, y) for x, y in zip(xs, ys)
    )


def _conv_closure(glob, depth, c1: Closure, c2: Closure, nvars: int) -> bool:
    xs = [fresh_var(depth + i) for i in range(nvars)]
    return convertible(
        glob,
        depth + nvars,
        apply_closure(glob, c1, *xs),
        apply_closure(glob, c2, *xs),
    )


def _conv_neutral(glob, depth, n1: Neutral, n2: Neutral) -> bool:
    h1, h2 = n1.head, n2.head
    match (h1, h2):
        case (HVar(level=l1), HVar(level=l2)):
            if l1 != l2:
                return False
        case (HConst(name=a), HConst(name=b)):
            if a != b:
                return False
        case (HPathCtor(name=a, ctor=c, args=x), HPathCtor(name=b, ctor=d, args=y)):
            if a != b or c != d or not _conv_all(glob, depth, x, y):
                return False
        case _:
            return False
    if len(n1.spine) != len(n2.spine):
        return False
    for f1, f2 in zip(n1.spine, n2.spine):
        if not _conv_frame(glob, depth, f1, f2):
            return False
    return True


def _conv_frame(glob, depth, f1: Frame, f2: Frame) -> bool:
    match (f1, f2):
        case (FApp(arg=a), FApp(arg=b)):
            return convertible(glob, depth, a, b)
        case (FFst(), FFst()):
            return True
        case (FSnd(), FSnd()):
            return True
        case (FNatElim(motive=m1, zero_case=z1, succ_case=s1), FNatElim(motive=m2, zero_case=z2, succ_case=s2)):
            return (
                _conv_closure(glob, depth, m1, m2, 1)
                and convertible(glob, depth, z1, z2)
                and _conv_closure(glob, depth, s1, s2, 2)
            )
        case (FSumElim(motive=m1, left_case=l1, right_case=r1), FSumElim(motive=m2, left_case=l2, right_case=r2)):
            return (
                _conv_closure(glob, depth, m1, m2, 1)
                and _conv_closure(glob, depth, l1, l2, 1)
                and _conv_closure(glob, depth, r1, r2, 1)
            )
        case (FJ(motive=m1, base=b1), FJ(motive=m2, base=b2)):
            return _conv_closure(glob, depth, m1, m2, 3) and _conv_closure(
                glob, depth, b1, b2, 1
            )
        case (FHitElim(name=a, motive=m1, methods=x), FHitElim(name=b, motive=m2, methods=y)):
            return (
                a == b
                and _conv_closure(glob, depth, m1, m2, 1)
                and _conv_all(glob, depth, x, y)
            )
        case _:
            return False
