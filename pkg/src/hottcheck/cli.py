"""Command-line driver: check files, print types, print normal forms."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .diagnostics import CheckError, emit_diagnostics
from .environment import Context, GlobalEnv
from .evaluate import const_value, const_type_value, quote, quote_type
from .modules import FileError, check_module, resolve_imports
from .pretty import print_term


def _search_path(args) -> list:
    dirs = list(args.path or [])
    env = os.environ.get("HOTT_PATH")
    if env:
        dirs += [d for d in env.split(":") if d]
    return dirs


def _fail(diags, fmt: str, sources: dict) -> int:
    text = emit_diagnostics(diags, fmt, sources)
    stream = sys.stdout if fmt == "json" else sys.stderr
    print(text, file=stream)
    return 1


def _check_closure(args, sources: dict):
    """Resolve and check the import closure of every input file, filling
    sources with path -> text as files are read.  Returns (glob, results);
    raises CheckError or FileError."""
    glob = GlobalEnv()
    visited: set = set()
    results = []
    for path in args.files:
        mods = resolve_imports(path, _search_path(args), sources, visited)
        for mod in mods:
            results.append((mod.path, check_module(glob, mod)))
    return glob, results


def _run_check(args) -> int:
    fmt = "json" if args.json else "human"
    sources: dict = {}
    try:
        _, results = _check_closure(args, sources)
    except CheckError as e:
        return _fail([e.diagnostic], fmt, sources)
    if fmt == "json":
        out = [{"file": p, "declarations": n} for p, n in results]
        print(json.dumps(out, indent=2))
    else:
        for p, n in results:
            print(f"ok {p} ({n} declarations)")
    return 0


def _target_strings(glob, name: str):
    """(printed type, printed normal form) of a checked declaration."""
    ty = const_type_value(glob, name)
    ty_str = print_term(quote_type(glob, [], ty))
    body = const_value(glob, name)
    body_str = print_term(quote(glob, [], ty, body))
    return ty_str, body_str


def _run_query(args, which: str) -> int:
    fmt = "json" if args.json else "human"
    sources: dict = {}
    try:
        glob, _ = _check_closure(args, sources)
    except CheckError as e:
        return _fail([e.diagnostic], fmt, sources)
    name = args.name
    if not (name in glob.definitions or name in glob.postulates):
        from .diagnostics import Diagnostic, UNBOUND_NAME

        return _fail(
            [Diagnostic(UNBOUND_NAME, f"no declaration named '{name}'")],
            fmt,
            sources,
        )
    ty_str, body_str = _target_strings(glob, name)
    text = ty_str if which == "typeof" else body_str
    if fmt == "json":
        key = "type" if which == "typeof" else "normalForm"
        print(json.dumps({"name": name, key: text}, indent=2))
    else:
        print(text)
    return 0


def main(argv=None) -> int:
    sys.setrecursionlimit(40000)
    ap = argparse.ArgumentParser(
        prog="hott", description="Proof checker for a small homotopy type theory"
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, nfiles):
        p.add_argument("files", nargs=nfiles, help="source file(s), .hott")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument(
            "--path",
            action="append",
            metavar="DIR",
            help="import search directory (repeatable; HOTT_PATH also applies)",
        )

    p_check = sub.add_parser("check", help="check files and their imports")
    common(p_check, "+")
    p_typeof = sub.add_parser("typeof", help="print the type of a declaration")
    common(p_typeof, 1)
    p_typeof.add_argument("name", help="declaration name")
    p_norm = sub.add_parser("normalize", help="print a declaration's normal form")
    common(p_norm, 1)
    p_norm.add_argument("name", help="declaration name")

    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0

    try:
        if args.command == "check":
            return _run_check(args)
        return _run_query(args, args.command)
    except FileError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
