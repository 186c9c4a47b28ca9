"""Declared types with point and path constructors: generated constants,
computation rules, and schema validation."""

from __future__ import annotations

import pytest

from conftest import env_from_source

from hottcheck import syntax as S
from hottcheck.diagnostics import CheckError
from hottcheck.evaluate import const_type_value, const_value, quote


INTERVAL = """
hit I : U 0 where
| left : I
| right : I
| seg : left = right in I
"""

TREE = """
hit Tree : U 0 where
| leaf : Tree
| node : Tree -> Tree -> Tree
"""


def _rejects(source: str, error_class: str = "InvalidHit"):
    with pytest.raises(CheckError) as exc:
        env_from_source(source)
    assert exc.value.diagnostic.error_class == error_class, (
        exc.value.diagnostic
    )


def test_declaration_generates_constructors_and_eliminators():
    glob = env_from_source(INTERVAL)
    for name in ["left", "right", "seg", "I-elim", "I-elim1"]:
        assert name in glob.definitions, name
    # each path constructor gets a postulated computation rule per
    # eliminator level
    assert "I-seg-beta" in glob.postulates
    assert "I-seg-beta1" in glob.postulates


def test_eliminator_computes_on_point_constructors():
    glob = env_from_source(
        "hit Two : U 0 where\n"
        "| one : Two\n"
        "| other : Two\n"
        "def pick : Two -> Nat := fun t. Two-elim (fun x. Nat) 0 1 t\n"
        "def at-one : pick one = 0 in Nat := refl 0\n"
        "def at-other : pick other = 1 in Nat := refl 1\n"
    )
    assert "at-one" in glob.definitions and "at-other" in glob.definitions


def test_recursive_constructors_get_induction_hypotheses():
    glob = env_from_source(
        TREE
        + "def size : Tree -> Nat\n"
        + "  := fun t. Tree-elim (fun x. Nat) 1\n"
        + "       (fun l ihl r ihr. succ (natElim (fun k. Nat) ihr (fun k ih. succ ih) ihl)) t\n"
        + "def two-leaves : size (node leaf leaf) = 3 in Nat := refl 3\n"
    )
    assert "two-leaves" in glob.definitions


def test_parameters_are_threaded_through_constructors():
    glob = env_from_source(
        "hit Box (A : U 0) : U 0 where\n"
        "| pack : A -> Box A\n"
        "def unpack : (A : U 0) -> Box A -> A\n"
        "  := fun A b. Box-elim A (fun x. A) (fun a. a) b\n"
    )
    ty = quote(
        glob, [], const_type_value(glob, "pack"), const_value(glob, "pack")
    )
    assert isinstance(ty, S.Lam)  # params come first: fun A a. pack A a


def test_function_arguments_over_the_type_itself_are_rejected():
    _rejects(
        "hit Bad : U 0 where\n| mk : (Nat -> Bad) -> Bad\n"
    )


def test_constructor_target_must_be_the_declared_type():
    _rejects("hit Bad : U 0 where\n| mk : Nat\n")


def test_point_constructors_cannot_return_other_types():
    _rejects(
        "hit Bad : U 0 where\n| mk : Bad -> Nat\n"
    )


def test_path_endpoints_must_inhabit_the_declared_type():
    _rejects(
        "hit Bad : U 0 where\n| p : 0 = 1 in Nat\n"
    )


def test_declared_type_cannot_exceed_its_universe():
    with pytest.raises(CheckError) as exc:
        env_from_source("hit Bad : U 0 where\n| mk : U 0 -> Bad\n")
    assert exc.value.diagnostic.error_class in ("InvalidHit", "UniverseError")


def test_duplicate_constructor_names_are_rejected():
    _rejects(
        "hit Bad : U 0 where\n| mk : Bad\n| mk : Bad\n"
    )


def test_failed_declaration_leaves_no_residue():
    glob = None
    try:
        glob = env_from_source("hit Bad : U 0 where\n| mk : Nat\n")
    except CheckError:
        pass
    assert glob is None
    # a fresh environment after the failure can reuse the names
    glob = env_from_source("def mk : Nat := 0\n")
    assert "mk" in glob.definitions
