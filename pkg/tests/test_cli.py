import json
import subprocess
import sys

from pencil_lab.cli import run_cli


def run_json(*argv):
    code, out = run_cli(list(argv) + ["--json"])
    return code, json.loads(out)


def test_analyze_pencil_free_example():
    code, rep = run_json("analyze-pencil", "--forms", "x0*x2, 2*x0*x1 + x3^2")
    assert code == 0
    assert rep["schema"] == "pencil-lab/1"
    assert (rep["r1"], rep["c"], rep["free"], rep["exponents"]) == (1, [1], True, [-1, -1])


def test_analyze_pencil_non_regular_pair_still_reports():
    code, rep = run_json("analyze-pencil", "--forms", "x0*x2, x0*x1", "--n", "3")
    assert code == 0 and rep["regular_sequence"] is False
    assert rep["n"] == 3


def test_trailing_variables_matter():
    _, a = run_json("analyze-pencil", "--forms", "x0*x1, x2*x3")
    _, b = run_json("analyze-pencil", "--forms", "x0*x1, x2*x3", "--n", "5")
    assert (a["m"], b["m"]) == (0, 2)
    assert sorted(b["exponents"]) == [-1, -1, 0, 0]


def test_json_round_trip(tmp_path):
    _, rep = run_json("analyze-pencil", "--forms", "x0*x1 + x2*x3, x0^2 + x2^2")
    path = tmp_path / "pencil.json"
    path.write_text(json.dumps(rep))
    _, again = run_json("analyze-pencil", "--matrices", str(path))
    assert again == rep


def test_prime_field_backend():
    code, rep = run_json("analyze-pencil", "--forms", "x0*x1, x2*x3", "--field", "fp:101")
    assert code == 0 and rep["field"] == "F_101" and rep["segre_symbol"] == "[(1^2),(1^2)]"


def test_analyze_sequence_example():
    code, rep = run_json("analyze-sequence", "--forms", "x0*x1 + x2*x3, x0*x1*x2*x3", "--max-degree", "6")
    assert code == 0
    assert rep["minors"]["l"] == 2 and rep["minors"]["common_factor"] == "x0*x1 - x2*x3"


def test_exit_codes():
    assert run_cli(["analyze-pencil", "--forms", "x0*, x1"])[0] == 1
    assert run_cli(["analyze-pencil", "--forms", "x0*x1, x0*x1*x2"])[0] == 2
    assert run_cli(["analyze-pencil", "--forms", "x0^2, 2*x0^2"])[0] == 2
    assert run_cli(["analyze-sequence", "--forms", "x0*x2, x0*x1"])[0] == 2
    assert run_cli(["analyze-sequence", "--forms", "x0*x1, x2^3 + x3^3", "--max-degree", "1"])[0] == 3
    assert run_cli(["analyze-pencil", "--field", "reals", "--forms", "x0^2, x1^2"])[0] == 1
    assert run_cli(["atlas", "--n", "99"])[0] == 1
    assert run_cli(["no-such-command"])[0] == 1


def test_recover():
    code, rep = run_json("recover", "--degree-vector", "1", "--segre", "[1]")
    assert code == 0 and rep["n"] == 3 and rep["invariants"]["segre_symbol"] == "[1]"
    code, rep = run_json("recover", "--degree-vector", "0,1", "--segre", "[(2,1)]", "--points", "3")
    assert code == 0 and rep["invariants"]["degree_vector"] == [0, 1]
    assert run_cli(["recover", "--segre", "[1,1]", "--points", "2,2"])[0] == 1


def test_atlas_formats():
    code, out = run_cli(["atlas", "--n", "3", "--regular"])
    assert code == 0 and out.strip().endswith("13 rows")
    code, out = run_cli(["atlas", "--n", "3", "--irregular", "--format", "csv"])
    assert code == 0 and len(out.strip().splitlines()) == 10
    code, rep = run_json("atlas", "--n", "5", "--irregular", "--by", "splitting")
    assert len(rep["rows"]) == 12


def test_reproduce_subset():
    code, out = run_cli(["reproduce-paper", "--items", "3,7"])
    assert code == 0
    assert out.count("[PASS]") == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pencil_lab", "atlas", "--n", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "rows" in proc.stdout
