"""Higher-inductive-type schema: declaration validation and generation of
dependent eliminators and propositional path-computation constants.

The schema allows point-constructor arguments that are external types or
the HIT itself (simple strict positivity), path-constructor arguments that
may additionally be identity types over the HIT, and identification
targets of level at most 2.  Eliminators are generated at motive
universes 0 and 1 (`X-elim`, `X-elim1`); each path-constructor gets a
postulated computation constant stating the apd-equality for the matching
eliminator, with transport and apd spelled out inline through J.
"""

from __future__ import annotations

from . import syntax as S
from .diagnostics import INVALID_HIT, error
from .syntax import (
    ARG_EXT,
    ARG_IDREC,
    ARG_REC,
    CtorArg,
    HitDecl,
    PathCtor,
    PointCtor,
    Term,
)

# --- validation ---


def _peel_pis(t: Term):
    args = []
    while isinstance(t, S.Pi):
        args.append((t.hint, t.dom))
        t = t.cod
    return args, t


def _param_var_form(name: str, nparams: int, depth: int) -> Term:
    """HitForm(name, params) as seen from a scope of the given depth
    (params are the outermost nparams variables)."""
    return S.HitForm(
        name, tuple(S.Var(depth - 1 - i) for i in range(nparams))
    )


def _is_self_form(t: Term, name: str, nparams: int, depth: int) -> bool:
    return S.structural_eq(t, _param_var_form(name, nparams, depth))


def _check_boundary(t: Term, name: str, decl_points: list, span) -> None:
    """Boundary endpoints may use the HIT only through applications of its
    own point-constructors (plus variables, Refl, and external material)."""
    if not S.mentions_hit(t, name):
        return
    match t:
        case S.Var():
            return
        case S.Refl(point=p):
            _check_boundary(p, name, decl_points, span)
        case S.HitCtor(name=n, ctor=c, args=args) if n == name:
            if c not in decl_points:
                raise error(
                    INVALID_HIT,
                    f"boundary of a path-constructor uses '{c}', which is not "
                    f"an earlier point-constructor of {name}",
                    span,
                )
            for a in args:
                _check_boundary(a, name, decl_points, span)
        case _:
            raise error(
                INVALID_HIT,
                f"path-constructor boundary must be built from "
                f"point-constructors, earlier arguments, and refl",
                span,
            )


def validate_hit_decl(
    name: str,
    params: tuple,
    level: int,
    ctors: list,
) -> HitDecl:
    """Classify and validate elaborated constructor types.

    ctors is a list of (ctor_name, core type scoped in the params, span);
    the types have already been checked as types by the caller.
    """
    nparams = len(params)
    points: list[PointCtor] = []
    paths: list[PathCtor] = []
    seen: set[str] = set()
    point_names: list[str] = []

    for cname, ctype, span in ctors:
        if cname in seen:
            raise error(INVALID_HIT, f"duplicate constructor '{cname}'", span)
        seen.add(cname)

        raw_args, target = _peel_pis(ctype)
        args: list[CtorArg] = []
        for j, (hint, dom) in enumerate(raw_args):
            depth = nparams + j
            if not S.mentions_hit(dom, name):
                args.append(CtorArg(hint, dom, ARG_EXT))
            elif _is_self_form(dom, name, nparams, depth):
                args.append(CtorArg(hint, dom, ARG_REC))
            elif isinstance(dom, S.Id) and _is_self_form(
                dom.carrier, name, nparams, depth
            ):
                _check_boundary(dom.lhs, name, point_names, span)
                _check_boundary(dom.rhs, name, point_names, span)
                args.append(CtorArg(hint, dom, ARG_IDREC))
            else:
                raise error(
                    INVALID_HIT,
                    f"constructor '{cname}' has an argument in which {name} "
                    f"occurs other than as the type itself (negative or "
                    f"nested occurrence)",
                    span,
                )

        depth = nparams + len(args)
        if _is_self_form(target, name, nparams, depth):
            if any(a.role == ARG_IDREC for a in args):
                raise error(
                    INVALID_HIT,
                    f"point-constructor '{cname}' may not take identification "
                    f"arguments over {name}",
                    span,
                )
            points.append(PointCtor(cname, tuple(args)))
            point_names.append(cname)
        elif isinstance(target, S.Id):
            lvl2 = isinstance(target.carrier, S.Id)
            inner = target.carrier.carrier if lvl2 else target.carrier
            if isinstance(inner, S.Id):
                raise error(
                    INVALID_HIT,
                    f"identification-constructor '{cname}' targets level > 2",
                    span,
                )
            if not _is_self_form(inner, name, nparams, depth):
                raise error(
                    INVALID_HIT,
                    f"constructor '{cname}' must target {name} or an "
                    f"identity type over it",
                    span,
                )
            if lvl2:
                for side in (target.carrier.lhs, target.carrier.rhs, target.lhs, target.rhs):
                    _check_boundary(side, name, point_names, span)
            else:
                _check_boundary(target.lhs, name, point_names, span)
                _check_boundary(target.rhs, name, point_names, span)
            paths.append(
                PathCtor(cname, tuple(args), target, 2 if lvl2 else 1)
            )
        else:
            raise error(
                INVALID_HIT,
                f"constructor '{cname}' must target {name} or an identity "
                f"type over it",
                span,
            )

    return HitDecl(name, tuple(params), level, tuple(points), tuple(paths))


# --- generation ---


class Builder:
    """Builds core terms with de Bruijn levels (Mark nodes) for free
    variables; finalize() converts them to indices.  Every binder slot in
    a generated term must be introduced through bind()."""

    def __init__(self, depth: int = 0):
        self.depth = depth

    def bind(self, k: int, f) -> Term:
        marks = [S.Mark(self.depth + i) for i in range(k)]
        self.depth += k
        body = f(*marks)
        self.depth -= k
        return body

    def pi(self, dom: Term, f, hint: str | None = None) -> Term:
        return S.Pi(dom, self.bind(1, f), hint=hint)

    def lam(self, f, hint: str | None = None) -> Term:
        return S.Lam(self.bind(1, f), hint=hint)


def finalize(t: Term, depth: int = 0) -> Term:
    """Convert Mark levels to Var indices relative to depth binder slots."""
    if isinstance(t, S.Mark):
        return S.Var(depth - 1 - t.lvl)
    struct = S._STRUCTURE[type(t)]
    changes = {}
    for fname, kind, binds in struct:
        old = getattr(t, fname)
        if kind == "term":
            new = finalize(old, depth + binds)
        else:
            new = tuple(finalize(u, depth) for u in old)
        if new != old:
            changes[fname] = new
    if not changes:
        return t
    from dataclasses import fields

    kwargs = {f.name: getattr(t, f.name) for f in fields(t)}
    kwargs.update(changes)
    return type(t)(**kwargs)


def _inst(t: Term, scope: list) -> Term:
    """Instantiate a declaration-scoped term: scope lists the replacement
    for each telescope variable, outermost first."""
    return S.subst_free(t, list(reversed(scope)))


def _apps(fn: Term, *args: Term) -> Term:
    for a in args:
        fn = S.App(fn, a)
    return fn


def transport_term(b: Builder, family, lhs: Term, rhs: Term, path: Term, point: Term) -> Term:
    """transport along path in the given type family, inlined through J."""
    motive = b.bind(
        3, lambda x, y, p: S.Pi(family(x), b.bind(1, lambda _: family(y)))
    )
    base = b.bind(1, lambda x: S.Lam(b.bind(1, lambda w: w)))
    return S.App(S.J(motive, base, lhs, rhs, path), point)


def apd_term(b: Builder, family, fn_at, lhs: Term, rhs: Term, path: Term) -> Term:
    """Dependent action of a section on a path: apd f path, inlined."""
    motive = b.bind(
        3,
        lambda x, y, q: S.Id(
            family(y), transport_term(b, family, x, y, q, fn_at(x)), fn_at(y)
        ),
    )
    base = b.bind(1, lambda x: S.Refl(fn_at(x)))
    return S.J(motive, base, lhs, rhs, path)


class _ElimGen:
    """Shared state for generating one HIT's eliminator-related terms."""

    def __init__(self, decl: HitDecl):
        self.decl = decl
        self.name = decl.name
        self.nparams = len(decl.params)

    def self_form(self, pmarks: list) -> Term:
        return S.HitForm(self.name, tuple(pmarks))

    def image(self, t: Term, scope: list, himg: dict) -> Term:
        """Motive-level image of a boundary term.  scope maps telescope
        positions to marks; himg maps the position of a rec/idrec argument
        to a thunk producing its hypothesis term (a mark, an eliminator
        application, or an apd term).  Thunks rather than terms so that
        hypotheses containing binders are rebuilt at their use depth."""
        match t:
            case S.Var(index=i):
                pos = len(scope) - 1 - i
                if pos not in himg:
                    raise error(
                        INVALID_HIT,
                        "boundary variable has no induction hypothesis",
                    )
                return himg[pos]()
            case S.Refl(point=p):
                return S.Refl(self.image(p, scope, himg))
            case S.HitCtor(name=n, ctor=c, args=args) if n == self.name:
                spec = self.decl.point(c)
                method = self.method_ref(c)
                out = method
                for arg_spec, a in zip(spec.args, args[self.nparams:]):
                    out = S.App(out, _inst(a, scope))
                    if arg_spec.role == ARG_REC:
                        out = S.App(out, self.image(a, scope, himg))
                return out
            case _:
                raise error(INVALID_HIT, "unsupported boundary term shape")

    # bound by generate() before use
    method_ref = None


def _fold_telescope(b: Builder, entries, scope: list, make, inner):
    """Quantify over a declaration telescope; make(mark, spec, scope, cont)
    may add hypothesis binders after each entry."""
    if not entries:
        return inner(scope)
    spec = entries[0]
    dom = _inst(spec.type, scope)
    return b.pi(
        dom,
        lambda x: make(
            x,
            spec,
            scope + [x],
            lambda: _fold_telescope(b, entries[1:], scope + [x], make, inner),
        ),
        spec.hint,
    )


def generate_hit_constants(decl: HitDecl):
    """All constants a checked HIT declaration adds to the environment.

    Returns (ctor_consts, method_types, elim_consts, beta_consts) where
    ctor_consts / elim_consts are lists of (name, type_term, body_term),
    beta_consts is a list of (name, type_term) postulates, and
    method_types are scoped in [params, motive, earlier methods].
    """
    gen = _ElimGen(decl)
    name = decl.name
    nparams = gen.nparams
    param_entries = [CtorArg(h, t, ARG_EXT) for h, t in decl.params]

    ctor_consts = []
    for ctor in list(decl.points) + list(decl.paths):
        is_point = isinstance(ctor, PointCtor)
        b = Builder()

        def ctor_type(scope, ctor=ctor, is_point=is_point, b=b):
            def after_params(pscope):
                def inner(full_scope):
                    if is_point:
                        return gen.self_form(full_scope[:nparams])
                    return _inst(ctor.target, full_scope)

                return _fold_telescope(
                    b,
                    list(ctor.args),
                    pscope,
                    lambda x, spec, sc, cont: cont(),
                    inner,
                )

            return after_params(scope)

        ty = _fold_telescope(
            b,
            param_entries,
            [],
            lambda x, spec, sc, cont: cont(),
            ctor_type,
        )
        # body: lambdas over params and args, returning the constructor form
        b2 = Builder()

        def lam_chain(k, scope, b=b2, ctor=ctor):
            if k == 0:
                return S.HitCtor(name, ctor.name, tuple(scope))
            return b.lam(lambda x: lam_chain(k - 1, scope + [x]))

        body = lam_chain(nparams + len(ctor.args), [])
        ctor_consts.append((ctor.name, finalize(ty), finalize(body)))

    # method types (scoped [params, P, earlier methods]) and eliminators
    elim_consts = []
    beta_consts = []
    method_types: list[Term] = []

    for univ in (0, 1):
        suffix = "" if univ == 0 else "1"
        elim_name = f"{name}-elim{suffix}"
        b = Builder()
        recorded = univ == 0
        mt_acc: list[Term] = []

        def elim_type():
            def with_params(pscope):
                X = gen.self_form(pscope)
                motive_ty = b.pi(X, lambda _: S.Univ(univ), "x")
                return b.pi(
                    motive_ty,
                    lambda P: _methods(pscope, P, [], list(decl.points) + list(decl.paths)),
                    "P",
                )

            def _methods(pscope, P, mmarks, remaining):
                gen.method_ref = lambda c: mmarks[
                    [x.name for x in decl.points].index(c)
                ]
                if not remaining:
                    X = gen.self_form(pscope)
                    return b.pi(
                        X, lambda x: S.App(P, x), "x"
                    )
                ctor = remaining[0]
                mty = _method_type(pscope, P, mmarks, ctor)
                if recorded:
                    mt_acc.append(finalize(mty, b.depth))
                return b.pi(
                    mty,
                    lambda m: _methods(pscope, P, mmarks + [m], remaining[1:]),
                    ctor.name,
                )

            def _method_type(pscope, P, mmarks, ctor):
                himg: dict[int, Term] = {}

                def make(x, spec, sc, cont):
                    pos = len(sc) - 1
                    if spec.role == ARG_REC:
                        return b.pi(
                            S.App(P, x),
                            lambda h: (himg.__setitem__(pos, lambda h=h: h), cont())[1],
                        )
                    if spec.role == ARG_IDREC:
                        dom = spec.type  # Id(X, u, v) in decl scope
                        scope_before = sc[:-1]
                        u_img = gen.image(dom.lhs, scope_before, himg)
                        v_img = gen.image(dom.rhs, scope_before, himg)
                        po = S.Id(
                            S.App(P, _inst(dom.rhs, scope_before)),
                            transport_term(
                                b,
                                lambda w: S.App(P, w),
                                _inst(dom.lhs, scope_before),
                                _inst(dom.rhs, scope_before),
                                x,
                                u_img,
                            ),
                            v_img,
                        )
                        return b.pi(
                            po,
                            lambda h: (himg.__setitem__(pos, lambda h=h: h), cont())[1],
                        )
                    return cont()

                def inner(sc):
                    if isinstance(ctor, PointCtor):
                        return S.App(P, S.HitCtor(name, ctor.name, tuple(sc)))
                    return _path_method_target(ctor, sc, P, himg)

                def _path_method_target(ctor, sc, P, himg):
                    P_at = lambda w: S.App(P, w)
                    img = lambda t: gen.image(t, sc, himg)
                    pathterm = S.HitCtor(name, ctor.name, tuple(sc))
                    tgt = ctor.target
                    if ctor.level == 1:
                        l, r = tgt.lhs, tgt.rhs
                        return S.Id(
                            P_at(_inst(r, sc)),
                            transport_term(
                                b, P_at, _inst(l, sc), _inst(r, sc), pathterm, img(l)
                            ),
                            img(r),
                        )
                    # level 2: target Id(Id(X, a, b), p1, p2)
                    a_t, b_t = tgt.carrier.lhs, tgt.carrier.rhs
                    p1, p2 = tgt.lhs, tgt.rhs

                    def po_at(r):
                        return S.Id(
                            P_at(_inst(b_t, sc)),
                            transport_term(
                                b, P_at, _inst(a_t, sc), _inst(b_t, sc), r, img(a_t)
                            ),
                            img(b_t),
                        )

                    return S.Id(
                        po_at(_inst(p2, sc)),
                        transport_term(
                            b, po_at, _inst(p1, sc), _inst(p2, sc), pathterm, img(p1)
                        ),
                        img(p2),
                    )

                return _fold_telescope(
                    b, list(ctor.args), pscope, make, inner
                )

            return _fold_telescope(
                b, param_entries, [], lambda x, spec, sc, cont: cont(), with_params
            )

        ety = finalize(elim_type())
        if recorded:
            method_types = mt_acc

        # eliminator body
        b3 = Builder()
        nmethods = len(decl.points) + len(decl.paths)

        def elim_body(k, scope, b=b3):
            if k == 0:
                pmarks = scope[:nparams]
                P = scope[nparams]
                ms = scope[nparams + 1 : nparams + 1 + nmethods]
                x = scope[-1]
                motive = b.bind(1, lambda w: S.App(P, w))
                return S.HitElim(name, motive, tuple(ms), x)
            return b.lam(lambda v: elim_body(k - 1, scope + [v]))

        ebody = finalize(elim_body(nparams + 1 + nmethods + 1, []))
        elim_consts.append((elim_name, ety, ebody))

        # path-beta constants
        for pc in decl.paths:
            beta_name = f"{name}-{pc.name}-beta{suffix}"
            bb = Builder()

            def beta_type(pc=pc, b=bb, elim_name=elim_name):
                def with_params(pscope):
                    X = gen.self_form(pscope)
                    motive_ty = b.pi(X, lambda _: S.Univ(univ), "x")
                    return b.pi(
                        motive_ty, lambda P: with_methods(pscope, P, []), "P"
                    )

                def with_methods(pscope, P, mmarks):
                    gen.method_ref = lambda c: mmarks[
                        [x.name for x in decl.points].index(c)
                    ]
                    total = len(decl.points) + len(decl.paths)
                    if len(mmarks) == total:
                        return with_args(pscope, P, mmarks)
                    ctor = (list(decl.points) + list(decl.paths))[len(mmarks)]
                    mty = _method_type_for_beta(pscope, P, mmarks, ctor)
                    return b.pi(
                        mty,
                        lambda m: with_methods(pscope, P, mmarks + [m]),
                        ctor.name,
                    )

                def _method_type_for_beta(pscope, P, mmarks, ctor):
                    # reuse the recorded method types by instantiating them
                    idx = len(mmarks)
                    return _inst(method_types[idx], pscope + [P] + mmarks)

                def with_args(pscope, P, mmarks):
                    E = _apps(S.Const(elim_name), *pscope, P, *mmarks)
                    P_at = lambda w: S.App(P, w)
                    E_at = lambda w: S.App(E, w)
                    himg: dict[int, Term] = {}

                    def make(x, spec, sc, cont):
                        pos = len(sc) - 1
                        if spec.role == ARG_REC:
                            himg[pos] = lambda x=x: S.App(E, x)
                        elif spec.role == ARG_IDREC:
                            dom = spec.type
                            scope_before = sc[:-1]
                            himg[pos] = lambda x=x, dom=dom, sb=tuple(scope_before): apd_term(
                                b,
                                P_at,
                                E_at,
                                _inst(dom.lhs, list(sb)),
                                _inst(dom.rhs, list(sb)),
                                x,
                            )
                        return cont()

                    def inner(sc):
                        img = lambda t: gen.image(t, sc, himg)
                        pathterm = S.HitCtor(name, pc.name, tuple(sc))
                        tgt = pc.target
                        # method value applied to the plain telescope with
                        # hypotheses instantiated by the eliminator
                        midx = len(decl.points) + [
                            x.name for x in decl.paths
                        ].index(pc.name)
                        rhs = mmarks[midx]
                        for j, spec in enumerate(pc.args):
                            arg_mark = sc[nparams + j]
                            rhs = S.App(rhs, arg_mark)
                            if spec.role in (ARG_REC, ARG_IDREC):
                                rhs = S.App(rhs, himg[nparams + j]())
                        if pc.level == 1:
                            l, r = tgt.lhs, tgt.rhs
                            carrier = S.Id(
                                P_at(_inst(r, sc)),
                                transport_term(
                                    b, P_at, _inst(l, sc), _inst(r, sc), pathterm, img(l)
                                ),
                                img(r),
                            )
                            lhs = apd_term(
                                b, P_at, E_at, _inst(l, sc), _inst(r, sc), pathterm
                            )
                            return S.Id(carrier, lhs, rhs)
                        a_t, b_t = tgt.carrier.lhs, tgt.carrier.rhs
                        p1, p2 = tgt.lhs, tgt.rhs

                        def po_at(r):
                            return S.Id(
                                P_at(_inst(b_t, sc)),
                                transport_term(
                                    b, P_at, _inst(a_t, sc), _inst(b_t, sc), r, img(a_t)
                                ),
                                img(b_t),
                            )

                        def f_at(r):
                            return apd_term(
                                b, P_at, E_at, _inst(a_t, sc), _inst(b_t, sc), r
                            )

                        carrier = S.Id(
                            po_at(_inst(p2, sc)),
                            transport_term(
                                b, po_at, _inst(p1, sc), _inst(p2, sc), pathterm, img(p1)
                            ),
                            img(p2),
                        )
                        lhs = apd_term(
                            b, po_at, f_at, _inst(p1, sc), _inst(p2, sc), pathterm
                        )
                        return S.Id(carrier, lhs, rhs)

                    return _fold_telescope(b, list(pc.args), pscope, make, inner)

                return _fold_telescope(
                    b, param_entries, [], lambda x, spec, sc, cont: cont(), with_params
                )

            beta_consts.append((beta_name, finalize(beta_type())))

    return ctor_consts, method_types, elim_consts, beta_consts
