"""Shared test helpers: repository paths, a subprocess harness for the
command line, manifest parsing, and a session-wide environment holding
the fully checked library corpus."""

from __future__ import annotations

import os
import subprocess
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
STDLIB = os.path.join(ROOT, "stdlib")
MANIFEST = os.path.join(ROOT, "corpus.manifest")
DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def run_cli(*args: str, binary: bool = False) -> subprocess.CompletedProcess:
    """Run the checker command line in a fresh interpreter from the
    repository root."""
    return subprocess.run(
        [sys.executable, "-m", "hottcheck.cli", *args],
        cwd=ROOT,
        capture_output=True,
        text=not binary,
    )


def manifest_entries() -> list[tuple[str, str]]:
    entries = []
    with open(MANIFEST, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                path, status = line.split()
                entries.append((path, status))
    return entries


def positive_files() -> list[str]:
    return [p for p, s in manifest_entries() if s == "ok"]


def negative_files() -> list[tuple[str, str]]:
    return [
        (p, s.removeprefix("err:"))
        for p, s in manifest_entries()
        if s.startswith("err:")
    ]


def load_env(*entry_files: str):
    """Check the import closure of the given files into one global
    environment and return it."""
    from hottcheck.modules import GlobalEnv, check_module, resolve_imports

    glob = GlobalEnv()
    visited: set = set()
    for path in entry_files:
        for mod in resolve_imports(path, [STDLIB], {}, visited):
            check_module(glob, mod)
    return glob


def env_from_source(text: str, path: str = "<test>"):
    """Check a single module given as a string (no imports) into a fresh
    global environment and return it."""
    from hottcheck.environment import GlobalEnv
    from hottcheck.modules import check_module
    from hottcheck.parser import parse_module

    glob = GlobalEnv()
    check_module(glob, parse_module(text, path))
    return glob


@pytest.fixture(scope="session")
def corpus_env():
    """Every positive corpus file, checked into a single environment."""
    return load_env(*(os.path.join(ROOT, rel) for rel in positive_files()))
