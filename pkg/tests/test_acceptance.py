"""End-to-end acceptance checks, one test per criterion.  Run with -v
to get one pass/fail line per criterion."""

from __future__ import annotations

import os
import re
import time

from conftest import (
    DATA,
    ROOT,
    load_env,
    negative_files,
    positive_files,
    run_cli,
)

from hottcheck import syntax as S
from hottcheck.evaluate import const_type_value, const_value, evaluate, quote


def _normal_form(glob, name: str) -> S.Term:
    ty = const_type_value(glob, name)
    return quote(glob, [], ty, const_value(glob, name))


def test_criterion_01_full_corpus_checks_cleanly_within_ten_seconds():
    files = positive_files()
    assert len(files) >= 16
    start = time.monotonic()
    result = run_cli("check", *files, "--path", "stdlib")
    elapsed = time.monotonic() - start
    assert result.returncode == 0, result.stderr
    assert elapsed < 10.0, f"corpus check took {elapsed:.2f}s"


def test_criterion_02_negative_corpus_fails_with_declared_error_classes():
    negatives = negative_files()
    assert len(negatives) >= 5
    for rel, expected_class in negatives:
        result = run_cli("check", rel, "--path", "stdlib")
        assert result.returncode == 1, f"{rel}: exit {result.returncode}"
        match = re.search(r"^[^\n]*?:\d+:\d+: ([A-Za-z]+):", result.stderr, re.M)
        assert match, f"{rel}: no diagnostic in {result.stderr!r}"
        assert match.group(1) == expected_class, f"{rel}: got {match.group(1)}"


def test_criterion_03_identity_eliminator_computes_on_reflexivity():
    glob = load_env(os.path.join(DATA, "j_instances.hott"))
    pairs = [
        ("j-on-refl-nat", "j-base-nat"),
        ("j-on-refl-bool", "j-base-bool"),
        ("j-on-refl-int", "j-base-int"),
    ]
    for eliminated, direct in pairs:
        assert _normal_form(glob, eliminated) == _normal_form(glob, direct)


def test_criterion_04_unary_arithmetic_normal_forms():
    def successor_count(t: S.Term) -> int:
        # independent oracle: walk the successor spine and count
        n = 0
        while isinstance(t, S.Succ):
            n += 1
            t = t.pred
        assert isinstance(t, S.Zero), f"not a numeral: {t}"
        return n

    glob = load_env(os.path.join(DATA, "arith.hott"))
    assert successor_count(_normal_form(glob, "two-plus-two")) == 2 + 2
    assert successor_count(_normal_form(glob, "three-times-three")) == 3 * 3
    # the printer renders the same normal forms as decimal literals
    result = run_cli("normalize", "tests/data/arith.hott", "two-plus-two",
                     "--path", "stdlib")
    assert result.returncode == 0 and result.stdout.strip() == "4"
    result = run_cli("normalize", "tests/data/arith.hott", "three-times-three",
                     "--path", "stdlib")
    assert result.returncode == 0 and result.stdout.strip() == "9"


def test_criterion_05_circle_loop_space_equivalent_to_integers():
    result = run_cli("check", "stdlib/circle.hott", "--path", "stdlib")
    assert result.returncode == 0, result.stderr
    # the named proof checks at exactly the stated equivalence type
    result = run_cli("check", "tests/data/flagship.hott", "--path", "stdlib")
    assert result.returncode == 0, result.stderr


def test_criterion_06_truncations_land_at_their_levels():
    result = run_cli("check", "tests/data/truncation_levels.hott",
                     "--path", "stdlib")
    assert result.returncode == 0, result.stderr


def test_criterion_07_two_transports_of_one_predicate_disagree():
    result = run_cli("check", "tests/data/two_transports.hott",
                     "--path", "stdlib")
    assert result.returncode == 0, result.stderr


def test_criterion_08_normal_forms_are_stable_and_well_typed(corpus_env):
    from hottcheck.environment import Context
    from hottcheck.typecheck import check

    glob = corpus_env
    empty = Context()
    assert glob.definitions
    for name in glob.definitions:
        ty = const_type_value(glob, name)
        nf1 = quote(glob, [], ty, const_value(glob, name))
        nf2 = quote(glob, [], ty, evaluate(glob, (), nf1))
        assert nf1 == nf2, f"normalization not idempotent on {name}"
        check(glob, empty, nf1, ty)  # re-checks at the inferred type


def test_criterion_09_consecutive_runs_are_byte_identical():
    files = positive_files()
    for extra in ([], ["--json"]):
        first = run_cli("check", *files, "--path", "stdlib", *extra, binary=True)
        second = run_cli("check", *files, "--path", "stdlib", *extra, binary=True)
        assert first.returncode == 0
        assert first.returncode == second.returncode
        assert first.stdout == second.stdout
        assert first.stderr == second.stderr


def test_criterion_10_self_containing_universe_rejected():
    result = run_cli("check", "tests/neg/universe.hott")
    assert result.returncode == 1
    match = re.search(r"^[^\n]*?:\d+:\d+: ([A-Za-z]+):", result.stderr, re.M)
    assert match and match.group(1) == "UniverseError", result.stderr
