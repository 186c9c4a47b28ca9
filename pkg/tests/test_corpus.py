"""The checked library corpus and its manifest: the manifest is
exhaustive over the library and negative directories, and every entry
behaves as recorded."""

from __future__ import annotations

import os
import re

import pytest

from conftest import (
    ROOT,
    STDLIB,
    manifest_entries,
    negative_files,
    positive_files,
    run_cli,
)

from hottcheck.diagnostics import ERROR_CLASSES


def test_manifest_covers_every_library_file():
    listed = {p for p, _ in manifest_entries()}
    on_disk = {
        os.path.join("stdlib", f)
        for f in os.listdir(STDLIB)
        if f.endswith(".hott")
    }
    assert on_disk <= listed, on_disk - listed


def test_manifest_covers_every_negative_file():
    listed = {p for p, _ in manifest_entries()}
    neg_dir = os.path.join(ROOT, "tests", "neg")
    on_disk = {
        os.path.join("tests", "neg", f)
        for f in os.listdir(neg_dir)
        if f.endswith(".hott")
    }
    assert on_disk <= listed, on_disk - listed


def test_manifest_entries_point_at_real_files():
    for path, _ in manifest_entries():
        assert os.path.isfile(os.path.join(ROOT, path)), path


def test_declared_error_classes_are_known():
    for _, expected in negative_files():
        assert expected in ERROR_CLASSES, expected


@pytest.mark.parametrize("rel", positive_files())
def test_positive_file_checks(rel):
    result = run_cli("check", rel, "--path", "stdlib")
    assert result.returncode == 0, result.stderr


@pytest.mark.parametrize("rel,expected", negative_files())
def test_negative_file_fails_with_its_class(rel, expected):
    result = run_cli("check", rel, "--path", "stdlib")
    assert result.returncode == 1
    match = re.search(r"^[^\n]*?:\d+:\d+: ([A-Za-z]+):", result.stderr, re.M)
    assert match and match.group(1) == expected, result.stderr
