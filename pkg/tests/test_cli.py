import csv
import io
import json
import subprocess
import sys

import pytest

from confhyp.cli import main, parse_complex, parse_params


def run_cli(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def invoke(*args):
    return subprocess.run([sys.executable, "-m", "confhyp", *args], capture_output=True, text=True)


@pytest.mark.parametrize(
    "text,want",
    [("1", 1), ("-2.5", -2.5), ("1+2i", 1 + 2j), ("1-2i", 1 - 2j), ("i", 1j), ("-i", -1j),
     ("3.5i", 3.5j), ("1e-3-4e2i", 1e-3 - 400j), ("2+i", 2 + 1j)],
)
def test_parse_complex(text, want):
    assert parse_complex(text) == want


@pytest.mark.parametrize("text", ["1 + 2i", "1+2j", "", "abc"])
def test_parse_complex_rejects(text):
    with pytest.raises(ValueError):
        parse_complex(text)


def test_parse_params():
    assert parse_params("1,2:3,1+i").entries == ((1, 1), (2, 3), (1 + 1j, 1))
    assert len(parse_params("")) == 0


def test_eval_examples(capsys):
    code, out, _ = run_cli(capsys, "eval", "w", "--alpha", "1", "--beta", "2", "--gamma", "1", "--delta", "3", "--z", "1e6")
    assert code == 0
    assert abs(float(json.loads(out)["value_re"]) - 0.25) < 1e-6
    code, out, _ = run_cli(capsys, "eval", "efun", "--upper", "1", "--lower", "1", "--z", "2")
    assert code == 0 and float(json.loads(out)["value_re"]) == pytest.approx(0.6065306597, rel=1e-10)
    code, out, _ = run_cli(
        capsys, "eval", "f2", "--a", "1", "--b1", "1", "--b2", "1", "--c1", "2", "--c2", "2", "--x", "0.5", "--y", "0"
    )
    assert code == 0 and float(json.loads(out)["value_re"]) == pytest.approx(1.3862943611, rel=1e-10)


def test_eval_fields(capsys):
    code, out, _ = run_cli(capsys, "eval", "gamma", "--z", "0.5+1i")
    data = json.loads(out)
    assert code == 0
    assert set(data) == {"value_re", "value_im", "abs_error_estimate", "terms_used", "converged"}
    assert all(isinstance(data[k], str) for k in ("value_re", "value_im", "abs_error_estimate"))


def test_exit_codes(capsys):
    assert run_cli(capsys, "eval", "gamma", "--z", "-2")[0] == 1
    assert run_cli(capsys, "eval", "w", "--alpha", "1", "--beta", "2", "--gamma", "1", "--delta", "3", "--z", "0")[0] == 1
    assert run_cli(capsys, "eval", "gamma", "--z", "1 + 2i")[0] == 1
    assert run_cli(capsys, "eval", "bogus")[0] == 1
    code, _, err = run_cli(capsys, "--max-terms", "3", "eval", "pfq", "--upper", "1", "--lower", "2", "--x", "5")
    assert code == 2 and err
    assert run_cli(capsys, "eval", "f2", "--a", "1", "--b1", "1", "--b2", "1", "--c1", "2", "--c2", "2",
                   "--x", "0.6", "--y", "0.6")[0] == 1


def test_formats(capsys):
    code, out, _ = run_cli(capsys, "--format", "csv", "eval", "efun", "--upper", "1", "--lower", "1", "--z", "2")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0][0] == "value_re" and out.endswith("\r\n")
    code, out, _ = run_cli(capsys, "eval", "efun", "--upper", "1", "--lower", "1", "--z", "2", "--format", "text")
    assert code == 0 and out.startswith("value_re: 0.6065306597")


def test_table_integral(capsys):
    code, out, _ = run_cli(capsys, "table", "integral", "--alpha", "1", "--beta", "1", "--gamma", "0", "--l", "0",
                           "--rho-start", "1", "--rho-stop", "2", "--steps", "2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert [float(r["value_re"]) for r in rows] == pytest.approx([0.5, 2.0], rel=1e-10)
    assert all(r["status"] == "ok" for r in rows)


def test_table_w(capsys):
    code, out, _ = run_cli(capsys, "table", "w", "--alpha", "1", "--beta", "2", "--gamma", "1", "--delta", "3",
                           "--z-start", "10", "--z-stop", "1000", "--steps", "3")
    rows = json.loads(out)
    dev = [abs(float(r["value_re"]) - 0.25) for r in rows]
    assert code == 0 and dev[0] > dev[1] > dev[2]


def test_table_isolates_failures(capsys):
    code, out, _ = run_cli(capsys, "--format", "csv", "table", "w", "--alpha", "1", "--beta", "-0.5", "--gamma", "1",
                           "--delta", "3", "--z-start", "0.0001", "--z-stop", "5", "--steps", "3", "--arg", "3.1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 3
    assert rows[0]["status"] != "ok"
    assert [r["status"] for r in rows[1:]] == ["ok", "ok"]


def test_table_bad_grid(capsys):
    assert run_cli(capsys, "table", "integral", "--alpha", "1", "--beta", "1", "--gamma", "0",
                   "--rho-start", "2", "--rho-stop", "1", "--steps", "2")[0] == 1


def test_verify_recurrences(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "recurrences", "--draws", "50", "--seed", "7", "--tol", "1e-9")
    assert code == 0
    assert all(r["passed"] for r in json.loads(out))


def test_verify_fixtures_only(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "all", "--draws", "0")
    rows = json.loads(out)
    assert code == 0
    assert any(r["check"] == "golden_integrals" and r["draws"] > 0 for r in rows)


def test_verify_reports_failing_draw(capsys):
    code, _, err = run_cli(capsys, "verify", "--suite", "recurrences", "--draws", "3", "--seed", "1", "--tol", "0")
    assert code == 3
    assert "FAIL recurrence_8" in err and "alpha" in err


def test_binary_determinism():
    args = ["--seed", "11", "--format", "csv", "verify", "--suite", "recurrences", "--draws", "5"]
    first, second = invoke(*args), invoke(*args)
    assert first.returncode == 0
    assert first.stdout == second.stdout and first.stdout
