"""Import resolution and whole-module checking.

The import closure is walked depth-first in source order, each file
visited once; cycles are reported as diagnostics and unreadable files as
FileError (an I/O failure, not a proof failure).
"""

from __future__ import annotations

import os

from . import parser as P
from .diagnostics import CheckError, IMPORT_CYCLE, error
from .elaborate import BUILTIN_NAMES, Elaborator
from .environment import GlobalEnv
from .typecheck import check_definition, check_hit, check_postulate


class FileError(Exception):
    """Unreadable or unresolvable source file; maps to exit code 2."""


def _attach_file(exc: CheckError, path: str) -> CheckError:
    if exc.diagnostic.file is None:
        exc.diagnostic.file = path
    return exc


def _parse_file(path: str, sources: dict) -> P.ModuleSource:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise FileError(f"cannot read '{path}': {e.strerror}") from e
    sources[path] = text
    try:
        return P.parse_module(text, path)
    except CheckError as e:
        raise _attach_file(e, path)


def _locate(name: str, importer_dir: str, search_path: list) -> str:
    candidates = [importer_dir] + list(search_path)
    for d in candidates:
        p = os.path.join(d, name + ".hott")
        if os.path.isfile(p):
            return p
    raise FileError(
        f"cannot resolve import '{name}' "
        f"(searched: {', '.join(candidates)})"
    )


def resolve_imports(entry: str, search_path: list, sources: dict | None = None, _visited: set | None = None) -> list:
    """Depth-first, source-order import closure of entry, imports first,
    each module once.  sources, if given, collects path -> text."""
    if sources is None:
        sources = {}
    visited = _visited if _visited is not None else set()
    order: list = []
    stack: list = []

    def visit(path: str, span, importer: str | None):
        real = os.path.realpath(path)
        if real in visited:
            return
        if real in stack:
            cycle = stack[stack.index(real):] + [real]
            listing = " -> ".join(os.path.basename(p) for p in cycle)
            err = error(IMPORT_CYCLE, f"import cycle: {listing}", span)
            err.diagnostic.file = importer
            raise err
        mod = _parse_file(path, sources)
        stack.append(real)
        importer_dir = os.path.dirname(path) or "."
        for name, ispan in mod.imports:
            visit(_locate(name, importer_dir, search_path), ispan, path)
        stack.pop()
        visited.add(real)
        order.append(mod)

    if not os.path.isfile(entry):
        raise FileError(f"cannot read '{entry}': no such file")
    visit(entry, None, None)
    return order


def check_module(glob: GlobalEnv, mod: P.ModuleSource) -> int:
    """Check every declaration of an already-resolved module; returns the
    number of declarations checked."""
    elab = Elaborator(glob)
    try:
        for d in mod.decls:
            _check_decl(glob, elab, d)
    except CheckError as e:
        raise _attach_file(e, mod.path)
    return len(mod.decls)


def _check_decl(glob: GlobalEnv, elab: Elaborator, d) -> None:
    if isinstance(d, (P.DDef, P.DPostulate, P.DHit)) and d.name in BUILTIN_NAMES:
        from .diagnostics import TYPE_MISMATCH

        raise error(TYPE_MISMATCH, f"'{d.name}' is a builtin name", d.span)
    match d:
        case P.DDef(name=name, type=ty, body=body, span=span):
            check_definition(
                glob, name, elab.elaborate(ty, []), elab.elaborate(body, []), span
            )
        case P.DPostulate(name=name, type=ty, span=span):
            check_postulate(glob, name, elab.elaborate(ty, []), span)
        case P.DHit(name=name, params=params, level=level, ctors=ctors, span=span):
            pnames = [p[0] for p in params]
            core_params = []
            for i, (pname, pty, pspan) in enumerate(params):
                core_params.append(
                    (pname, elab.elaborate(pty, pnames[:i]), pspan)
                )
            elab.pending_hit = (name, len(params))
            elab.pending_ctors = {}
            try:
                core_ctors = []
                for cname, cty, cspan in ctors:
                    core_ctors.append((cname, elab.elaborate(cty, pnames), cspan))
                    elab.pending_ctors[cname] = name
                check_hit(glob, name, core_params, level, core_ctors, span)
            finally:
                elab.pending_hit = None
                elab.pending_ctors = {}
        case _:
            raise AssertionError(f"unhandled declaration {type(d).__name__}")
