"""De Bruijn machinery: shifting, substitution, scope accounting."""

from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st

from hottcheck import syntax as S


def _leaf(max_index: int):
    leaves = [
        st.builds(S.Var, st.integers(min_value=0, max_value=max_index)),
        st.builds(S.Univ, st.integers(min_value=0, max_value=1)),
        st.just(S.Nat()),
        st.just(S.Zero()),
        st.builds(S.Const, st.sampled_from(["c", "d"])),
    ]
    return st.one_of(leaves)


def _extend(children):
    return st.one_of(
        st.builds(S.Lam, children),
        st.builds(S.Pi, children, children),
        st.builds(S.Sigma, children, children),
        st.builds(S.App, children, children),
        st.builds(S.Pair, children, children),
        st.builds(S.Fst, children),
        st.builds(S.Snd, children),
        st.builds(S.Succ, children),
        st.builds(S.Refl, children),
        st.builds(S.Id, children, children, children),
    )


terms = st.recursive(_leaf(4), _extend, max_leaves=12)
amounts = st.integers(min_value=0, max_value=3)


@given(terms)
def test_shift_by_zero_is_identity(t):
    assert S.shift(t, 0) == t


@given(terms, amounts, amounts)
def test_shifts_compose_additively(t, a, b):
    assert S.shift(S.shift(t, a), b) == S.shift(t, a + b)


@given(terms, amounts)
def test_shift_raises_the_scope_bound_of_open_terms(t, a):
    before = S.free_var_bound(t)
    after = S.free_var_bound(S.shift(t, a))
    if before == 0:
        assert after == 0
    else:
        assert after == before + a


@given(terms, terms.filter(lambda u: S.free_var_bound(u) == 0))
def test_instantiate_undoes_a_shift(t, arg):
    # Var(0) does not occur in shift(t, 1), so substituting for it only
    # renumbers the remaining variables back down
    assert S.instantiate(S.shift(t, 1), arg) == t


@given(terms.filter(lambda t: S.free_var_bound(t) == 1))
def test_instantiating_the_last_variable_closes_the_term(t):
    closed = S.instantiate(t, S.Zero())
    assert S.free_var_bound(closed) == 0


@given(terms)
def test_closing_every_variable_with_closed_terms(t):
    n = S.free_var_bound(t)
    closed = S.subst_free(t, [S.Zero()] * n)
    assert S.free_var_bound(closed) == 0


def test_structural_equality_ignores_spans_and_hints():
    a = S.Lam(S.Var(0), hint="x", span=S.Span(0, 5))
    b = S.Lam(S.Var(0), hint="y", span=None)
    assert S.structural_eq(a, b)
    assert not S.structural_eq(S.Lam(S.Var(0)), S.Lam(S.Zero()))


def test_binder_crossing_shift_respects_the_cutoff():
    # fun. x1 x0 — only the outer reference moves
    t = S.Lam(S.App(S.Var(1), S.Var(0)))
    assert S.shift(t, 2) == S.Lam(S.App(S.Var(3), S.Var(0)))


def test_instantiate_shifts_the_argument_under_binders():
    # (fun. x1) [x0 := x0] must not capture: the argument is shifted as
    # it crosses the binder
    body = S.Lam(S.Var(1))
    assert S.instantiate(body, S.Var(0)) == S.Lam(S.Var(1))


def test_mentions_hit_sees_all_reference_forms():
    assert S.mentions_hit(S.HitForm("X", ()), "X")
    assert S.mentions_hit(S.Lam(S.HitCtor("X", "mk", ())), "X")
    assert not S.mentions_hit(S.HitForm("Y", ()), "X")
