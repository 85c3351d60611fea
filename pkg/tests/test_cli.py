"""End-to-end tests for the `oja` command line, run as subprocesses."""

from __future__ import annotations

import json
import subprocess
import sys
from functools import lru_cache
from pathlib import Path

import pytest

from oja.catalog import load_catalog, serialize


def _run(*argv: str) -> subprocess.CompletedProcess:
    return subprocess.run([sys.executable, "-m", "oja.cli", *argv],
                          capture_output=True, text=True)


def _lines(result: subprocess.CompletedProcess) -> list[str]:
    return result.stdout.splitlines()


# --- transpose ----------------------------------------------------------------


def test_transpose_swaps_the_exponent_matrix():
    result = _run("transpose", "x1^3*x2+x2^3+x3^2")
    assert result.returncode == 0
    assert result.stdout == "x1*x2^3 + x1^3 + x3^2\n"


def test_transpose_is_an_involution_on_the_command_line():
    once = _run("transpose", "x1^5+x1*x2^3+x3^2").stdout.strip()
    twice = _run("transpose", once).stdout.strip()
    assert twice == "x1^5 + x1*x2^3 + x3^2"


def test_transpose_accepts_alias_variable_names():
    inferred = _run("transpose", "x^3*y+y^3+z^2")
    explicit = _run("transpose", "x^3*y+y^3+z^2", "--vars", "x,y,z")
    assert inferred.returncode == explicit.returncode == 0
    assert inferred.stdout == explicit.stdout == "x*y^3 + x^3 + z^2\n"


def test_transpose_json_reports_the_weight_system():
    result = _run("--json", "transpose", "x1^3*x2+x2^3+x3^2")
    data = json.loads(result.stdout)
    assert data["polynomial"] == "x1*x2^3 + x1^3 + x3^2"
    assert data["variables"] == ["x1", "x2", "x3"]
    assert data["weights"] == [6, 4, 9]
    assert data["degree"] == 18


# --- symmetry -----------------------------------------------------------------


def test_symmetry_reports_the_full_diagonal_group():
    result = _run("symmetry", "x1^4+x2^3+x3^3")
    assert result.returncode == 0
    assert _lines(result) == [
        "order 36",
        "generator (1/4,0,0)",
        "generator (0,1/3,0)",
        "generator (0,0,1/3)",
    ]


def test_symmetry_sl_picks_the_integral_age_subgroup():
    result = _run("symmetry", "x1^4+x2^3+x3^3", "--sl")
    assert result.returncode == 0
    assert _lines(result) == ["order 3", "generator (0,2/3,1/3)"]


def test_symmetry_sl_of_order_two():
    result = _run("symmetry", "x1^8+x2^3+x3^2", "--sl")
    assert _lines(result) == ["order 2", "generator (1/2,0,1/2)"]


def test_symmetry_sl_can_be_trivial():
    result = _run("symmetry", "x3^4+x1^3+x3*x2^2", "--sl")
    assert result.returncode == 0
    assert _lines(result) == ["order 1"]


def test_symmetry_json_lists_all_elements():
    result = _run("symmetry", "x1^4+x2^3+x3^3", "--sl", "--json")
    data = json.loads(result.stdout)
    assert data["order"] == 3
    assert data["generators"] == ["0,2/3,1/3"]
    assert sorted(data["elements"]) == ["0,0,0", "0,1/3,2/3", "0,2/3,1/3"]


# --- milnor ---------------------------------------------------------------------


@pytest.mark.parametrize("poly, mu", [
    ("x1^8+x2^3+x3^2", 14),
    ("x^4+y^3+x*z^2", 10),
    ("x1^3*x2+x2^3+x1*x3^2", 11),
    ("x1^5+x2^3+x1*x3^2", 12),
    ("x1^4+x2^2*x3+x1*x3^2", 11),
    ("x^4+y^3+z^3", 12),
    ("x^5+y^4+z^2", 12),
])
def test_milnor_numbers(poly: str, mu: int):
    result = _run("milnor", poly)
    assert result.returncode == 0
    assert result.stdout == f"{mu}\n"


def test_milnor_json():
    data = json.loads(_run("milnor", "x1^8+x2^3+x3^2", "--json").stdout)
    assert data == {"milnor": 14, "polynomial": "x1^8 + x2^3 + x3^2"}


# --- jacobian -------------------------------------------------------------------


def test_jacobian_summary():
    result = _run("jacobian", "x1^8+x2^3+x3^2")
    assert result.returncode == 0
    assert _lines(result) == [
        "dimension 14",
        "weights 3,8,12",
        "degree 24",
        "socle x1^6*x2",
    ]


def test_jacobian_basis_lists_standard_monomials():
    result = _run("jacobian", "x1^8+x2^3+x3^2", "--basis")
    basis = _lines(result)
    assert len(basis) == 14
    assert basis[0] == "1"
    assert "x1^6*x2" in basis
    assert "x3" not in basis  # x3 dies on the quadratic term's derivative


def test_jacobian_hessian_normal_form():
    result = _run("jacobian", "x1^8+x2^3+x3^2", "--hessian")
    assert result.stdout == "672*x1^6*x2\n"


def test_jacobian_trace_of_the_socle():
    result = _run("jacobian", "x1^8+x2^3+x3^2", "--trace")
    assert _lines(result) == ["socle x1^6*x2", "trace 1/48"]


def test_jacobian_json():
    data = json.loads(_run("jacobian", "x1^8+x2^3+x3^2", "--json").stdout)
    assert data["dimension"] == 14
    assert data["weights"] == [3, 8, 12]
    assert data["degree"] == 24
    assert data["socle"] == "x1^6*x2"
    assert data["hessian"] == "672*x1^6*x2"
    assert data["trace"] == "1/48"
    assert len(data["basis"]) == 14


# --- orbifold -------------------------------------------------------------------


def test_orbifold_reports_dimension_and_graded_basis():
    result = _run("orbifold", "x1^8+x2^3+x3^2", "--group", "1/2,0,1/2")
    lines = _lines(result)
    assert result.returncode == 0
    assert lines[0] == "dimension 10"
    assert len(lines) == 11
    assert "[1] v_(1/2,0,1/2)  degree 3/8  even" in lines
    assert "[x1^6*x2] v_(id)  degree 13/12  even" in lines


def test_orbifold_structure_contains_the_twisted_square():
    result = _run("orbifold", "x1^8+x2^3+x3^2", "--group", "1/2,0,1/2",
                  "--structure")
    lines = _lines(result)
    assert "[1] v_(1/2,0,1/2) * [1] v_(1/2,0,1/2) = (16) [x1^6] v_(id)" in lines
    assert "[1] v_(id) * [1] v_(id) = (1) [1] v_(id)" in lines


def test_orbifold_pairing_is_perfect():
    result = _run("orbifold", "x1^8+x2^3+x3^2", "--group", "1/2,0,1/2",
                  "--pairing")
    lines = _lines(result)
    assert len(lines) == 10  # one partner per basis vector
    assert "eta[[1] v_(id), [x1^6*x2] v_(id)] = 1/24" in lines
    assert "eta[[1] v_(1/2,0,1/2), [x2] v_(1/2,0,1/2)] = 2/3" in lines


def test_orbifold_accepts_repeated_group_flags():
    result = _run("orbifold", "x1^4+x2^3+x3^3",
                  "--group", "0,1/3,2/3", "--group", "0,2/3,1/3")
    assert result.returncode == 0
    assert _lines(result)[0] == "dimension 12"


def test_orbifold_rejects_a_non_sl_group():
    result = _run("orbifold", "x1^8+x2^3+x3^2", "--group", "1/2,0,0")
    assert result.returncode == 2
    assert "special-linear" in result.stderr


def test_orbifold_rejects_wrong_arity_generators():
    result = _run("orbifold", "x1^8+x2^3+x3^2", "--group", "1/2,0")
    assert result.returncode == 2
    assert "expected 3" in result.stderr


def test_orbifold_json_carries_the_structure_tensor():
    result = _run("orbifold", "x1^8+x2^3+x3^2", "--group", "1/2,0,1/2", "--json")
    data = json.loads(result.stdout)
    assert data["dimension"] == 10
    assert len(data["basis"]) == 10
    assert len(data["gram"]) == 10
    assert {s["element"] for s in data["sectors"]} == {"0,0,0", "1/2,0,1/2"}
    assert all(len(entry) == 4 for entry in data["structure"])


# --- verify ---------------------------------------------------------------------


def test_verify_row_with_embedded_witness():
    result = _run("verify", "--row", "2")
    lines = _lines(result)
    assert result.returncode == 0
    assert lines[0] == "row 2: Q10 ~ E14 frobenius (embedded witness)"
    assert "  x3 -> (1/2*z^6) [1] v_(1/2,0,1/2)" in lines
    for name in ("relations", "surjective", "dimension", "pairings"):
        assert f"  {name}: ok" in lines


def test_verify_row_by_search():
    result = _run("verify", "--row", "2", "--search")
    assert result.returncode == 0
    assert _lines(result)[0] == "row 2: Q10 ~ E14 frobenius (ansatz search)"


def test_verify_algebra_only_row_exits_nonzero():
    result = _run("verify", "--row", "19")
    assert result.returncode == 1
    assert _lines(result)[0] == "row 19: W13 ~ S11 algebra (ansatz search)"


def test_verify_unknown_row_is_an_input_error():
    result = _run("verify", "--row", "99")
    assert result.returncode == 2
    assert "no catalog row 99" in result.stderr


def test_verify_needs_a_row_selection():
    result = _run("verify")
    assert result.returncode == 2


def test_verify_json_row():
    result = _run("--json", "verify", "--row", "3")
    data = json.loads(result.stdout)
    assert result.returncode == 0
    assert data["passed"] is True
    assert data["frobenius"] == data["total"] == 1
    row = data["rows"][0]
    assert row["pair"] == ["Q11", "Z13"]
    assert row["certificate"]["level"] == "frobenius"
    assert row["certificate"]["report"]["passed"] is True


def test_verify_accepts_a_catalog_file(tmp_path: Path):
    path = tmp_path / "catalog.json"
    path.write_text(serialize(load_catalog()))
    before = _run("--catalog", str(path), "verify", "--row", "2")
    after = _run("verify", "--row", "2", "--catalog", str(path))
    assert before.returncode == after.returncode == 0
    assert before.stdout == after.stdout


def test_verify_rejects_an_invalid_catalog(tmp_path: Path):
    path = tmp_path / "broken.json"
    path.write_text('{"version": 1}')
    result = _run("--catalog", str(path), "verify", "--row", "2")
    assert result.returncode == 2
    assert "invalid catalog" in result.stderr


def test_verify_rejects_a_missing_catalog_file():
    result = _run("--catalog", "/no/such/catalog.json", "verify", "--row", "2")
    assert result.returncode == 2
    assert "not found" in result.stderr


# --- graph ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def _graph(*argv: str) -> subprocess.CompletedProcess:
    return _run("graph", *argv)


def test_graph_text_summary():
    result = _graph()
    lines = _lines(result)
    assert result.returncode == 0
    assert lines[0] == "nodes 23"
    assert lines[1] == "edges 24"
    assert "component A B C" in lines
    assert "component J K L M" in lines
    assert "row 2: C ~ B by embedded witness" in lines
    assert "variable renaming: X ~ W" in lines
    assert "compare D J: equal" in lines
    assert "compare G O: distinct" in lines
    assert sum(1 for line in lines if line.startswith("component ")) == 8
    assert sum(1 for line in lines if line.startswith("compare ")) == 6


def test_graph_dot_output():
    result = _graph("--dot")
    assert result.returncode == 0
    assert result.stdout.startswith("graph duality {")
    assert result.stdout.count(" -- ") == 24
    assert result.stdout.count('[label="') == 23


def test_graph_json_output():
    result = _graph("--json")
    data = json.loads(result.stdout)
    assert data["component_sizes"] == [2, 2, 2, 3, 3, 3, 4, 4]
    assert len(data["nodes"]) == 23
    assert len(data["edges"]) == 24
    assert len(data["fingerprint_comparisons"]) == 6


# --- input handling -------------------------------------------------------------


def test_mixed_variable_conventions_are_rejected():
    result = _run("milnor", "x1^2+y^3")
    assert result.returncode == 2
    assert "cannot infer variables" in result.stderr


def test_parse_errors_exit_with_code_two():
    result = _run("milnor", "x1^(3)")
    assert result.returncode == 2
    assert "error:" in result.stderr


def test_non_invertible_polynomial_is_an_input_error():
    result = _run("transpose", "x1^2+x1*x2")  # degenerate exponent matrix
    assert result.returncode == 2


def test_running_without_a_command_prints_help():
    result = _run()
    assert result.returncode == 2
    assert "usage: oja" in result.stderr


def test_json_flag_position_does_not_matter():
    before = _run("--json", "milnor", "x^4+y^3+z^3")
    after = _run("milnor", "x^4+y^3+z^3", "--json")
    assert before.stdout == after.stdout
    assert json.loads(before.stdout)["milnor"] == 12
