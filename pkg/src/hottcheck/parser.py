"""Recursive-descent parser from tokens to the named surface syntax.

Precedence, loosest first: fun-abstraction and binder telescopes,
`->` (right-associative), `l = r in A`, `+`, `*`, application, atoms.
A parenthesized group `(x y : A)` is tried as a binder telescope and
re-parsed as an annotation when no arrow or product follows.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import PARSE_ERROR, error
from .lexer import Token, tokenize
from .syntax import Span


@dataclass(frozen=True)
class SurfaceTerm:
    pass


@dataclass(frozen=True)
class SRef(SurfaceTerm):
    name: str
    span: Span


@dataclass(frozen=True)
class SNum(SurfaceTerm):
    value: int
    span: Span


@dataclass(frozen=True)
class SUniv(SurfaceTerm):
    level: int
    span: Span


@dataclass(frozen=True)
class SHole(SurfaceTerm):
    span: Span


@dataclass(frozen=True)
class SLam(SurfaceTerm):
    names: tuple
    body: SurfaceTerm
    span: Span


@dataclass(frozen=True)
class SPi(SurfaceTerm):
    name: str | None
    dom: SurfaceTerm
    cod: SurfaceTerm
    span: Span


@dataclass(frozen=True)
class SSigma(SurfaceTerm):
    name: str | None
    dom: SurfaceTerm
    cod: SurfaceTerm
    span: Span


@dataclass(frozen=True)
class SSum(SurfaceTerm):
    left: SurfaceTerm
    right: SurfaceTerm
    span: Span


@dataclass(frozen=True)
class SEq(SurfaceTerm):
    lhs: SurfaceTerm
    rhs: SurfaceTerm
    carrier: SurfaceTerm
    span: Span


@dataclass(frozen=True)
class SApp(SurfaceTerm):
    fn: SurfaceTerm
    arg: SurfaceTerm
    span: Span


@dataclass(frozen=True)
class SPair(SurfaceTerm):
    first: SurfaceTerm
    second: SurfaceTerm
    span: Span


@dataclass(frozen=True)
class SAnn(SurfaceTerm):
    term: SurfaceTerm
    type: SurfaceTerm
    span: Span


# --- declarations ---


@dataclass(frozen=True)
class DImport:
    name: str
    span: Span


@dataclass(frozen=True)
class DDef:
    name: str
    type: SurfaceTerm
    body: SurfaceTerm
    span: Span


@dataclass(frozen=True)
class DPostulate:
    name: str
    type: SurfaceTerm
    span: Span


@dataclass(frozen=True)
class DHit:
    name: str
    params: tuple  # of (name, SurfaceTerm, Span)
    level: int
    ctors: tuple  # of (name, SurfaceTerm, Span)
    span: Span


@dataclass(frozen=True)
class ModuleSource:
    path: str
    imports: tuple  # of (name, Span)
    decls: tuple


# builtin reference keywords usable in term position
_REF_KWS = {"fst", "snd", "inl", "inr", "refl"}

_ATOM_STARTS = {"ident", "num", "(", "<", "_", "kw"}


class _Parser:
    def __init__(self, tokens: list, source_len: int):
        self.toks = tokens
        self.pos = 0
        self.end = source_len

    def peek(self) -> Token | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def _here(self) -> Span:
        t = self.peek()
        return t.span if t else Span(self.end, self.end)

    def fail(self, expected: str):
        t = self.peek()
        got = f"'{t.value}'" if t else "end of input"
        raise error(PARSE_ERROR, f"expected {expected}, found {got}", self._here())

    def take(self, kind: str, expected: str | None = None) -> Token:
        t = self.peek()
        if t is None or t.kind != kind:
            self.fail(expected or f"'{kind}'")
        self.pos += 1
        return t

    def take_kw(self, word: str) -> Token:
        t = self.peek()
        if t is None or t.kind != "kw" or t.value != word:
            self.fail(f"'{word}'")
        self.pos += 1
        return t

    def at(self, kind: str, value: str | None = None) -> bool:
        t = self.peek()
        return t is not None and t.kind == kind and (value is None or t.value == value)

    def ident(self) -> Token:
        return self.take("ident", "an identifier")

    # --- terms ---

    def term(self) -> SurfaceTerm:
        if self.at("kw", "fun"):
            start = self.take_kw("fun").span
            names = [self.ident()]
            while self.at("ident"):
                names.append(self.ident())
            self.take(".")
            body = self.term()
            return SLam(
                tuple(n.value for n in names), body, Span(start.start, body.span.end)
            )
        return self.arrow()

    def _try_binder_groups(self):
        """One or more '(x y : A)' groups; None if the input is not shaped
        like a binder telescope followed by '->' or '*'."""
        save = self.pos
        groups = []
        while self.at("("):
            mark = self.pos
            self.take("(")
            names = []
            while self.at("ident"):
                names.append(self.take("ident"))
            if not names or not self.at(":"):
                self.pos = mark
                break
            self.take(":")
            ty = self.term()
            if not self.at(")"):
                self.pos = mark
                break
            self.take(")")
            groups.append((names, ty))
        if groups and (self.at("->") or self.at("*")):
            return groups
        self.pos = save
        return None

    def arrow(self) -> SurfaceTerm:
        groups = self._try_binder_groups()
        if groups is not None:
            if self.at("*"):
                if len(groups) != 1 or len(groups[0][0]) != 1:
                    self.fail("'->'")
                self.take("*")
                (names, dom) = groups[0]
                cod = self.prod()
                t: SurfaceTerm = SSigma(
                    names[0].value,
                    dom,
                    cod,
                    Span(names[0].span.start, cod.span.end),
                )
                return self._arrow_tail(t)
            self.take("->")
            cod = self.arrow()
            for names, dom in reversed(groups):
                for n in reversed(names):
                    cod = SPi(n.value, dom, cod, Span(n.span.start, cod.span.end))
            return cod
        t = self.eq()
        return self._arrow_tail(t)

    def _arrow_tail(self, t: SurfaceTerm) -> SurfaceTerm:
        if self.at("->"):
            self.take("->")
            cod = self.arrow()
            return SPi(None, t, cod, Span(t.span.start, cod.span.end))
        return t

    def eq(self) -> SurfaceTerm:
        l = self.sum()
        if self.at("="):
            self.take("=")
            r = self.sum()
            self.take_kw("in")
            a = self.eq()
            return SEq(l, r, a, Span(l.span.start, a.span.end))
        return l

    def sum(self) -> SurfaceTerm:
        l = self.prod()
        if self.at("+"):
            self.take("+")
            r = self.sum()
            return SSum(l, r, Span(l.span.start, r.span.end))
        return l

    def prod(self) -> SurfaceTerm:
        l = self.app()
        if self.at("*"):
            self.take("*")
            r = self.prod()
            return SSigma(None, l, r, Span(l.span.start, r.span.end))
        return l

    def _at_atom(self) -> bool:
        t = self.peek()
        if t is None:
            return False
        if t.kind == "kw":
            return t.value in _REF_KWS or t.value == "U"
        return t.kind in ("ident", "num", "(", "<", "_")

    def app(self) -> SurfaceTerm:
        t = self.atom()
        while self._at_atom():
            a = self.atom()
            t = SApp(t, a, Span(t.span.start, a.span.end))
        return t

    def atom(self) -> SurfaceTerm:
        t = self.peek()
        if t is None:
            self.fail("a term")
        if t.kind == "ident":
            self.pos += 1
            return SRef(t.value, t.span)
        if t.kind == "kw" and t.value in _REF_KWS:
            self.pos += 1
            return SRef(t.value, t.span)
        if t.kind == "kw" and t.value == "U":
            self.pos += 1
            lvl = self.take("num", "a universe level")
            return SUniv(int(lvl.value), Span(t.span.start, lvl.span.end))
        if t.kind == "num":
            self.pos += 1
            return SNum(int(t.value), t.span)
        if t.kind == "_":
            self.pos += 1
            return SHole(t.span)
        if t.kind == "<":
            self.pos += 1
            a = self.term()
            self.take(",")
            b = self.term()
            close = self.take(">")
            return SPair(a, b, Span(t.span.start, close.span.end))
        if t.kind == "(":
            self.pos += 1
            inner = self.term()
            if self.at(":"):
                self.take(":")
                ty = self.term()
                close = self.take(")")
                return SAnn(inner, ty, Span(t.span.start, close.span.end))
            self.take(")")
            return inner
        self.fail("a term")

    # --- declarations ---

    def module(self, path: str) -> ModuleSource:
        imports = []
        decls = []
        while self.peek() is not None:
            t = self.peek()
            if t.kind != "kw":
                self.fail("a declaration")
            if t.value == "import":
                self.pos += 1
                name = self.ident()
                imports.append((name.value, name.span))
            elif t.value == "def":
                self.pos += 1
                name = self.ident()
                self.take(":")
                ty = self.term()
                self.take(":=")
                body = self.term()
                decls.append(
                    DDef(name.value, ty, body, Span(t.span.start, body.span.end))
                )
            elif t.value == "postulate":
                self.pos += 1
                name = self.ident()
                self.take(":")
                ty = self.term()
                decls.append(
                    DPostulate(name.value, ty, Span(t.span.start, ty.span.end))
                )
            elif t.value == "hit":
                decls.append(self.hit_decl())
            else:
                self.fail("a declaration")
        return ModuleSource(path, tuple(imports), tuple(decls))

    def hit_decl(self) -> DHit:
        start = self.take_kw("hit").span
        name = self.ident()
        params = []
        while self.at("("):
            self.take("(")
            pnames = [self.ident()]
            while self.at("ident"):
                pnames.append(self.ident())
            self.take(":")
            pty = self.term()
            self.take(")")
            for p in pnames:
                params.append((p.value, pty, p.span))
        self.take(":")
        target = self.atom()
        if not isinstance(target, SUniv):
            raise error(
                PARSE_ERROR,
                "a declared type must be given a universe, like 'U 0'",
                target.span,
            )
        self.take_kw("where")
        ctors = []
        last = target.span
        while self.at("|"):
            self.take("|")
            cname = self.ident()
            self.take(":")
            cty = self.term()
            ctors.append((cname.value, cty, cname.span))
            last = cty.span
        return DHit(
            name.value,
            tuple(params),
            target.level,
            tuple(ctors),
            Span(start.start, last.end),
        )


def parse_module(source: str, path: str) -> ModuleSource:
    toks = tokenize(source)
    return _Parser(toks, len(source)).module(path)


def parse_term(source: str) -> SurfaceTerm:
    toks = tokenize(source)
    p = _Parser(toks, len(source))
    t = p.term()
    if p.peek() is not None:
        p.fail("end of input")
    return t
