"""Command-line behavior: exit codes, output formats, diagnostics."""

from __future__ import annotations

import json
import re

from conftest import run_cli


def test_checking_a_good_file_exits_zero():
    result = run_cli("check", "stdlib/nat.hott", "--path", "stdlib")
    assert result.returncode == 0
    assert "ok stdlib/nat.hott" in result.stdout
    assert result.stderr == ""


def test_json_check_output_lists_files_and_counts():
    result = run_cli("check", "stdlib/logic.hott", "--json")
    assert result.returncode == 0
    payload = json.loads(result.stdout)
    assert payload[-1]["file"] == "stdlib/logic.hott"
    assert payload[-1]["declarations"] > 0


def test_proof_failures_exit_one_with_located_diagnostics(tmp_path):
    bad = tmp_path / "bad.hott"
    bad.write_text("def x : Nat := fun a. a\n")
    result = run_cli("check", str(bad))
    assert result.returncode == 1
    assert re.search(r"bad\.hott:1:\d+: TypeMismatch:", result.stderr)


def test_json_diagnostics_go_to_stdout(tmp_path):
    bad = tmp_path / "bad.hott"
    bad.write_text("def x : Nat := missing\n")
    result = run_cli("check", str(bad), "--json")
    assert result.returncode == 1
    (diag,) = json.loads(result.stdout)
    assert diag["class"] == "UnboundName"
    assert diag["file"].endswith("bad.hott")


def test_missing_file_exits_two():
    result = run_cli("check", "no-such-file.hott")
    assert result.returncode == 2
    assert "no-such-file" in result.stderr


def test_unresolvable_import_exits_two(tmp_path):
    f = tmp_path / "a.hott"
    f.write_text("import nowhere\n")
    result = run_cli("check", str(f))
    assert result.returncode == 2


def test_bad_usage_exits_two():
    result = run_cli("check")
    assert result.returncode == 2


def test_typeof_prints_the_declared_type():
    result = run_cli("typeof", "stdlib/nat.hott", "plus", "--path", "stdlib")
    assert result.returncode == 0
    assert result.stdout.strip() == "Nat -> Nat -> Nat"


def test_normalize_prints_numerals_in_decimal(tmp_path):
    f = tmp_path / "n.hott"
    f.write_text("def six : Nat := succ (succ (succ 3))\n")
    result = run_cli("normalize", str(f), "six")
    assert result.returncode == 0
    assert result.stdout.strip() == "6"


def test_normalize_json_reports_name_and_form(tmp_path):
    f = tmp_path / "n.hott"
    f.write_text("def two : Nat := 2\n")
    result = run_cli("normalize", str(f), "two", "--json")
    assert result.returncode == 0
    assert json.loads(result.stdout) == {"name": "two", "normalForm": "2"}


def test_querying_an_unknown_name_exits_one(tmp_path):
    f = tmp_path / "n.hott"
    f.write_text("def two : Nat := 2\n")
    result = run_cli("typeof", str(f), "three")
    assert result.returncode == 1
    assert "UnboundName" in result.stderr


def test_search_path_is_used_for_imports(tmp_path):
    f = tmp_path / "uses.hott"
    f.write_text("import nat\ndef n : Nat := plus 1 1\n")
    result = run_cli("check", str(f), "--path", "stdlib")
    assert result.returncode == 0
