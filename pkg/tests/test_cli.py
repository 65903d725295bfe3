import csv
import io
import json
import subprocess
import sys

import pytest

from slcone.cli import main
from slcone.files import write_spectrum
from slcone.lattice import hl_spectrum

TABLE_ROWS = [
    [3, 13, 6, 0], [4, 27, 12, 6], [5, 51, 20, 20], [6, 93, 30, 50], [7, 169, 42, 112],
    [8, 311, 126, 238], [9, 331, 240, 240], [10, 201, 90, 90], [11, 243, 110, 110],
    [12, 289, 132, 132],
]


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def run_module(*args):
    cmd = [sys.executable, "-m", "slcone", *args]
    return subprocess.run(cmd, capture_output=True, text=True)


def test_module_entry_point_help():
    cp = run_module("--help")
    assert cp.returncode == 0, cp.stderr
    for name in ("hl-table", "hl-spectrum", "index", "moduli", "fredholm", "verify"):
        assert name in cp.stdout


def test_hl_table_csv(capsys):
    code, out, _ = run(capsys, "hl-table", "--m-min", "3", "--m-max", "12", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["m", "N(2)", "m(2)", "s-ind"]
    assert [[int(x) for x in r] for r in rows[1:]] == TABLE_ROWS


def test_hl_table_single_row_json(capsys):
    code, out, _ = run(capsys, "hl-table", "--m-min", "3", "--m-max", "3", "--format", "json")
    assert json.loads(out) == [{"m": 3, "N(2)": 13, "m(2)": 6, "s-ind": 0}]


def test_hl_table_closed_form_rows(capsys):
    _, out, _ = run(capsys, "hl-table", "--m-min", "10", "--m-max", "12", "--format", "json")
    for row in json.loads(out):
        m = row["m"]
        assert row["N(2)"] == 2 * m * m + 1
        assert row["m(2)"] == row["s-ind"] == m * m - m


def test_hl_table_text_mirrors_column_order(capsys):
    _, out, _ = run(capsys, "hl-table", "--m", "3")
    header = out.splitlines()[0].split()
    assert header == ["m", "N(2)", "m(2)", "s-ind"]
    assert out.splitlines()[2].split() == ["3", "13", "6", "0"]


def test_hl_table_json_csv_agree(capsys):
    _, js, _ = run(capsys, "hl-table", "--m-min", "4", "--m-max", "6", "--format", "json")
    _, cs, _ = run(capsys, "hl-table", "--m-min", "4", "--m-max", "6", "--format", "csv")
    from_csv = [{k: int(v) for k, v in r.items()} for r in csv.DictReader(io.StringIO(cs))]
    assert json.loads(js) == from_csv


def test_hl_table_bad_range(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["hl-table", "--m-min", "5", "--m-max", "4"])
    assert exc.value.code == 2


def test_spectrum_json_golden(capsys):
    code, out, _ = run(capsys, "hl-spectrum", "--m", "3", "--lambda-max", "6", "--format", "json")
    assert code == 0
    assert out == (
        '{"m": 3, "b0": 1, "dim_g": 2, "complete_up_to": [6, 1], '
        '"entries": [[0, 1, 1], [2, 1, 6], [6, 1, 6]]}\n'
    )


def test_spectrum_csv_zero(capsys):
    _, out, _ = run(capsys, "hl-spectrum", "--m", "3", "--lambda-max", "0", "--format", "csv")
    assert out == "lambda_num,lambda_den,mult\n0,1,1\n"


def test_spectrum_round_trip_and_threads(capsys, tmp_path):
    path = tmp_path / "hl5.json"
    code, _, _ = run(capsys, "hl-spectrum", "--m", "5", "--lambda-max", "18",
                     "--format", "json", "--output", str(path))
    assert code == 0
    from slcone.files import read_spectrum

    spec, b0, dim_g = read_spectrum(path)
    assert spec == hl_spectrum(5, 18) and (b0, dim_g) == (1, 4)
    _, out2, _ = run(capsys, "hl-spectrum", "--m", "5", "--lambda-max", "18",
                     "--format", "json", "--threads", "3")
    assert out2 == path.read_text()


def test_index_builtin_and_file(capsys, tmp_path):
    _, builtin, _ = run(capsys, "index", "--m", "5", "--format", "json")
    assert json.loads(builtin)["s_ind"] == 20
    path = tmp_path / "hl5.json"
    write_spectrum(path, hl_spectrum(5, 10), 1, 4)
    _, from_file, _ = run(capsys, "index", "--spectrum", str(path), "--format", "json")
    assert from_file == builtin


def test_index_truncated_file(capsys, tmp_path):
    path = tmp_path / "short.json"
    write_spectrum(path, hl_spectrum(5, 9), 1, 4)
    code, out, err = run(capsys, "index", "--spectrum", str(path))
    assert code == 3
    assert "spectrum truncated" in err and out == ""


def test_index_b0_override_reports_violation(capsys):
    _, out, _ = run(capsys, "index", "--m", "3", "--b0", "2", "--format", "json")
    report = json.loads(out)
    assert report["bound_violations"] and "m(0) = b0" in report["bound_violations"][0]


def write_config(tmp_path, doc):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(doc))
    return str(path)


def test_moduli_three_stable_cones(capsys, tmp_path):
    path = write_config(tmp_path, {
        "m": 3, "topology": {"b1_x_prime": 7, "restriction_rank": 3},
        "points": [{"cone": "hl"}] * 3,
    })
    code, out, _ = run(capsys, "moduli", "--config", path, "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert (report["dim_I"], report["dim_O"], report["expected_dim"]) == (4, 0, 4)


def test_moduli_family(capsys, tmp_path):
    path = write_config(tmp_path, {
        "m": 3, "family_dim": 2, "topology": {"b1_x_prime": 3, "restriction_rank": 0},
        "points": [{"cone": "hl"}],
    })
    _, out, _ = run(capsys, "moduli", "--config", path, "--format", "json")
    report = json.loads(out)
    assert report["family_expected_dim"] == 2 + report["dim_I"] == 5
    assert report["family_case"] == "stable"


def test_moduli_json_csv_agree(capsys, tmp_path):
    path = write_config(tmp_path, {
        "m": 4, "topology": {"b1_x_prime": 4}, "points": [{"cone": "hl"}],
    })
    _, js, _ = run(capsys, "moduli", "--config", path, "--format", "json")
    _, cs, _ = run(capsys, "moduli", "--config", path, "--format", "csv")
    row = next(csv.DictReader(io.StringIO(cs)))
    report = json.loads(js)
    assert row.keys() == report.keys()
    for key, value in report.items():
        if isinstance(value, bool):
            assert row[key] == str(value).lower()
        elif isinstance(value, list):
            assert row[key] == "; ".join(value)
        else:
            assert row[key] == str(value)


def test_moduli_malformed_config(capsys, tmp_path):
    path = write_config(tmp_path, {"m": 3, "points": [{"cone": "hl"}], "topology": {"b1_x_prime": "two"}})
    code, _, err = run(capsys, "moduli", "--config", path)
    assert code == 5
    assert "b1_x_prime" in err


def test_fredholm_cli(capsys, tmp_path):
    _, out, _ = run(capsys, "fredholm", "--m", "3", "--rates", "9/4", "--format", "json")
    assert json.loads(out)["index"] == -13
    path = write_config(tmp_path, {"m": 3, "points": [{"cone": "hl"}] * 2})
    _, out, _ = run(capsys, "fredholm", "--config", path, "--rates", "9/4,9/4", "--format", "json")
    assert json.loads(out)["index"] == -26
    _, out, _ = run(capsys, "fredholm", "--m", "3", "--rates", "1", "--format", "json")
    assert json.loads(out)["fredholm"] is False


def test_fredholm_rejects_decimals(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["fredholm", "--m", "3", "--rates", "2.25"])
    assert exc.value.code == 2


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--m-max", "12")
    assert code == 0
    assert "FAIL" not in out
    assert out.splitlines()[-1].endswith("checks passed")


def test_verify_m13_extends_closed_form(capsys):
    code, out, _ = run(capsys, "verify", "--m-max", "13", "--format", "json")
    assert code == 0
    names = {c["check"]: c["passed"] for c in json.loads(out)}
    assert names["closed form m=13"] is True


def test_verify_usage_error():
    cp = run_module("verify", "--m-max", "2")
    assert cp.returncode == 2
    assert "m-max" in cp.stderr


def test_resource_limit_exit_code(capsys):
    code, _, err = run(capsys, "hl-spectrum", "--m", "8", "--lambda-max", "60", "--max-points", "50")
    assert code == 4
    assert "cap" in err


def test_machine_output_is_stable():
    first = run_module("hl-table", "--m-min", "3", "--m-max", "6", "--format", "csv")
    second = run_module("hl-table", "--m-min", "3", "--m-max", "6", "--format", "csv", "--threads", "2")
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout
