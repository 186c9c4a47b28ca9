"""Lexing, parsing, elaboration scoping, and import resolution."""

from __future__ import annotations

import os
import textwrap

import pytest

from conftest import STDLIB, env_from_source

from hottcheck.diagnostics import CheckError
from hottcheck.lexer import tokenize
from hottcheck.modules import FileError, resolve_imports
from hottcheck.parser import parse_module, parse_term


def test_identifiers_allow_hyphens_and_primes():
    kinds = [(t.kind, t.value) for t in tokenize("plus-zero-l x' U0")]
    assert kinds == [
        ("ident", "plus-zero-l"),
        ("ident", "x'"),
        ("ident", "U0"),
    ]


def test_double_dash_always_starts_a_comment():
    tokens = tokenize("a -- trailing words\nb")
    assert [t.value for t in tokens] == ["a", "b"]


def test_unicode_punctuation_aliases_normalize():
    tokens = tokenize("→ × ⟨ ⟩")
    assert [t.kind for t in tokens] == ["->", "*", "<", ">"]


def test_spans_are_byte_offsets():
    (tok,) = tokenize("  abc")
    assert (tok.span.start, tok.span.end) == (2, 5)


def test_illegal_character_is_a_parse_error():
    with pytest.raises(CheckError) as exc:
        tokenize("def a := @")
    assert exc.value.diagnostic.error_class == "ParseError"


def test_keywords_are_not_identifiers():
    with pytest.raises(CheckError) as exc:
        parse_term("fun in. in")
    assert exc.value.diagnostic.error_class == "ParseError"


def test_arrows_associate_to_the_right():
    env_from_source(
        "def k : Nat -> Nat -> Nat := fun a b. a\n"
        "def use : Nat := k 1 2\n"
    )


def test_incomplete_declaration_is_a_parse_error():
    with pytest.raises(CheckError) as exc:
        parse_module("def a : Nat :=", "<test>")
    assert exc.value.diagnostic.error_class == "ParseError"


def test_module_collects_imports_in_order():
    mod = parse_module("import a\nimport b\ndef x : Nat := 0\n", "<test>")
    assert [name for name, _ in mod.imports] == ["a", "b"]
    assert len(mod.decls) == 1


def test_import_closure_is_depth_first_dependencies_first():
    order = [
        os.path.basename(m.path)
        for m in resolve_imports(
            os.path.join(STDLIB, "circle.hott"), [STDLIB]
        )
    ]
    # every import is checked before the module that names it
    assert order[-1] == "circle.hott"
    assert order.index("equality.hott") < order.index("nat.hott")
    assert order.index("equiv.hott") < order.index("univalence.hott")


def test_each_module_is_visited_once(tmp_path):
    a = tmp_path / "a.hott"
    b = tmp_path / "b.hott"
    c = tmp_path / "c.hott"
    a.write_text("import b\nimport c\n")
    b.write_text("import c\n")
    c.write_text("def z : Nat := 0\n")
    order = [os.path.basename(m.path) for m in resolve_imports(str(a), [])]
    assert order == ["c.hott", "b.hott", "a.hott"]


def test_import_cycles_are_reported(tmp_path):
    a = tmp_path / "a.hott"
    b = tmp_path / "b.hott"
    a.write_text("import b\n")
    b.write_text("import a\n")
    with pytest.raises(CheckError) as exc:
        resolve_imports(str(a), [])
    assert exc.value.diagnostic.error_class == "ImportCycle"


def test_unresolvable_import_is_a_file_error(tmp_path):
    a = tmp_path / "a.hott"
    a.write_text("import nowhere\n")
    with pytest.raises(FileError):
        resolve_imports(str(a), [])


def test_binders_scope_lexically():
    source = textwrap.dedent(
        """
        def const : (A : U 0) (B : U 0) -> A -> B -> A
          := fun A B a b. a
        def shadow : Nat -> Nat -> Nat
          := fun n n. n
        def use : shadow 1 2 = 2 in Nat := refl 2
        """
    )
    glob = env_from_source(source)
    assert "use" in glob.definitions
