"""Bidirectional checking: accepted judgments, rejected judgments, and
the error class each failure reports."""

from __future__ import annotations

import pytest

from conftest import env_from_source

from hottcheck import syntax as S
from hottcheck.diagnostics import CheckError
from hottcheck.environment import Context
from hottcheck.evaluate import evaluate
from hottcheck.typecheck import check, infer
from hottcheck.values import VNat, VPi, VUniv


def _rejects(source: str, error_class: str):
    with pytest.raises(CheckError) as exc:
        env_from_source(source)
    assert exc.value.diagnostic.error_class == error_class, (
        exc.value.diagnostic
    )


def test_infer_universe_lands_one_level_up():
    glob = env_from_source("")
    _, ty = infer(glob, Context(), S.Univ(0))
    assert isinstance(ty, VUniv) and ty.level == 1


def test_infer_variable_reads_the_context():
    glob = env_from_source("")
    ctx = Context().extend(VNat(), "n")
    _, ty = infer(glob, ctx, S.Var(0))
    assert isinstance(ty, VNat)


def test_check_accepts_a_simple_function():
    glob = env_from_source("")
    ty = evaluate(glob, (), S.Pi(S.Nat(), S.Nat()))
    assert isinstance(ty, VPi)
    check(glob, Context(), S.Lam(S.Succ(S.Var(0))), ty)


def test_dependent_application_substitutes_the_argument():
    glob = env_from_source(
        "postulate P : Nat -> U 0\n"
        "postulate all : (n : Nat) -> P n\n"
        "def at-two : P 2 := all 2\n"
    )
    assert "at-two" in glob.definitions


def test_self_containing_universe_is_a_universe_error():
    _rejects("def bad : U 0 := U 0\n", "UniverseError")


def test_level_confusion_is_a_universe_error():
    _rejects("def bad : U 0 := Nat -> U 0\n", "UniverseError")


def test_applying_a_number_is_not_a_function():
    _rejects("def bad : Nat := 2 3\n", "NotAFunction")


def test_projecting_a_function_is_not_a_pair():
    _rejects(
        "postulate f : Nat -> Nat\ndef bad : Nat := fst f\n", "NotAPair"
    )


def test_unknown_identifier_is_unbound():
    _rejects("def bad : Nat := missing\n", "UnboundName")


def test_wrong_body_type_is_a_mismatch():
    _rejects("def bad : Nat := fun x. x\n", "TypeMismatch")


def test_undetermined_hole_is_unsolved():
    _rejects("def bad : Nat := _\n", "UnsolvedHole")


def test_duplicate_definition_is_rejected():
    _rejects("def a : Nat := 0\ndef a : Nat := 1\n", "TypeMismatch")


def test_refl_needs_definitionally_equal_endpoints():
    env_from_source("def ok : 2 = 2 in Nat := refl 2\n")
    _rejects("def bad : 2 = 3 in Nat := refl 2\n", "TypeMismatch")


def test_refl_point_must_match_the_endpoints():
    _rejects("def bad : 2 = 2 in Nat := refl 3\n", "TypeMismatch")


def test_annotation_must_agree_with_the_expected_type():
    _rejects(
        "def bad : Nat := (fun x. x : Bool' -> Bool')\n"
        .replace("Bool'", "Nat"),
        "TypeMismatch",
    )


def test_eliminator_motive_type_is_enforced():
    # the zero branch must live in the motive's fiber at zero
    _rejects(
        "def bad : Nat := natElim (fun k. Nat) (fun x. x) (fun k ih. ih) 2\n",
        "TypeMismatch",
    )


def test_identifications_respect_their_carrier():
    _rejects(
        "postulate f : Nat -> Nat\n"
        "def bad : 2 = f in Nat := refl 2\n",
        "TypeMismatch",
    )
