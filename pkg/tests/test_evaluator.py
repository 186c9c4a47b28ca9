"""Normalization: arithmetic against an independent oracle, eta-long
read-back, idempotence, and the conversion test."""

from __future__ import annotations

import os

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ROOT, env_from_source, load_env

from hottcheck import syntax as S
from hottcheck.evaluate import (
    const_type_value,
    const_value,
    convertible,
    evaluate,
    quote,
)
from hottcheck.values import VNat


def _numeral(n: int) -> S.Term:
    t: S.Term = S.Zero()
    for _ in range(n):
        t = S.Succ(t)
    return t


def _successor_count(t: S.Term) -> int:
    n = 0
    while isinstance(t, S.Succ):
        n += 1
        t = t.pred
    assert isinstance(t, S.Zero)
    return n


@pytest.fixture(scope="module")
def nat_env():
    return load_env(os.path.join(ROOT, "stdlib", "nat.hott"))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=25), st.integers(min_value=0, max_value=25))
def test_addition_matches_the_counting_oracle(m, n):
    glob = test_addition_matches_the_counting_oracle.env
    t = S.App(S.App(S.Const("plus"), _numeral(m)), _numeral(n))
    nf = quote(glob, [], VNat(), evaluate(glob, (), t))
    assert _successor_count(nf) == m + n


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=12), st.integers(min_value=0, max_value=12))
def test_multiplication_matches_the_counting_oracle(m, n):
    glob = test_multiplication_matches_the_counting_oracle.env
    t = S.App(S.App(S.Const("mult"), _numeral(m)), _numeral(n))
    nf = quote(glob, [], VNat(), evaluate(glob, (), t))
    assert _successor_count(nf) == m * n


@pytest.fixture(scope="module", autouse=True)
def _attach_env(nat_env):
    # hypothesis-driven tests cannot take fixtures directly
    test_addition_matches_the_counting_oracle.env = nat_env
    test_multiplication_matches_the_counting_oracle.env = nat_env


def _normal_form(glob, name):
    ty = const_type_value(glob, name)
    return quote(glob, [], ty, const_value(glob, name))


def test_functions_read_back_eta_long():
    glob = env_from_source("postulate f : Nat -> Nat\n")
    nf = quote(
        glob, [], const_type_value(glob, "f"), const_value(glob, "f")
    )
    # a postulated function prints as fun x. f x, not as a bare constant
    assert nf == S.Lam(S.App(S.Const("f"), S.Var(0)))


def test_pairs_read_back_via_surjective_pairing():
    glob = env_from_source("postulate p : Nat * Nat\n")
    nf = quote(
        glob, [], const_type_value(glob, "p"), const_value(glob, "p")
    )
    assert nf == S.Pair(S.Fst(S.Const("p")), S.Snd(S.Const("p")))


def test_normalization_is_idempotent_on_library_definitions(nat_env):
    for name in ["plus", "mult", "plus-zero-l"]:
        nf1 = _normal_form(nat_env, name)
        ty = const_type_value(nat_env, name)
        nf2 = quote(nat_env, [], ty, evaluate(nat_env, (), nf1))
        assert nf1 == nf2


def test_definitions_unfold_during_conversion():
    glob = env_from_source(
        "def two : Nat := 2\n"
        "def also-two : Nat := succ (succ 0)\n"
    )
    assert convertible(
        glob, 0, const_value(glob, "two"), const_value(glob, "also-two")
    )


def test_conversion_distinguishes_different_numerals():
    glob = env_from_source("def two : Nat := 2\ndef three : Nat := 3\n")
    assert not convertible(
        glob, 0, const_value(glob, "two"), const_value(glob, "three")
    )


def test_eta_equates_a_function_with_its_expansion():
    glob = env_from_source(
        "postulate f : Nat -> Nat\n"
        "def g : Nat -> Nat := fun n. f n\n"
    )
    assert convertible(
        glob, 0, const_value(glob, "f"), const_value(glob, "g")
    )


def test_identity_eliminator_computes_on_reflexivity():
    glob = env_from_source(
        "def moved : Nat\n"
        "  := J (fun x y p. Nat) (fun x. succ x) (refl 2)\n"
    )
    nf = _normal_form(glob, "moved")
    assert _successor_count(nf) == 3
