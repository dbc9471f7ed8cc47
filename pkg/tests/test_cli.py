import json

import numpy as np
import pytest

from qig import cli
from qig.verify import SUITE_NAMES


@pytest.fixture
def matrix_files(tmp_path):
    d1 = tmp_path / "d1.json"
    d2 = tmp_path / "d2.json"
    x = tmp_path / "x.json"
    cli.write_matrix(d1, np.diag([0.5, 0.5]).astype(complex))
    cli.write_matrix(d2, np.diag([0.75, 0.25]).astype(complex))
    cli.write_matrix(x, np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex))
    return {"d1": str(d1), "d2": str(d2), "x": str(x)}


def test_matrix_round_trip_bit_exact(tmp_path):
    rng = np.random.default_rng(0)
    M = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    path = tmp_path / "m.json"
    cli.write_matrix(path, M)
    back = cli.read_matrix(str(path))
    assert np.array_equal(M, back)


def test_compute_umegaki_golden(matrix_files, capsys):
    rc = cli.main(["compute", "umegaki", "--state", matrix_files["d1"], "--state2", matrix_files["d2"]])
    assert rc == 0
    assert capsys.readouterr().out.strip() == "0.143841036226"


def test_compute_skew_golden(matrix_files, capsys):
    rc = cli.main(
        ["compute", "skew", "--fn", "sld", "--state", matrix_files["d2"], "--obs", matrix_files["x"]]
    )
    assert rc == 0
    assert capsys.readouterr().out.strip() == "0.25"


def test_compute_gen_cov_and_fisher(matrix_files, capsys):
    rc = cli.main(
        ["compute", "gen-cov", "--fn", "harmonic", "--state", matrix_files["d2"], "--obs", matrix_files["x"]]
    )
    assert rc == 0
    assert capsys.readouterr().out.strip() == "0.75"
    rc = cli.main(
        ["compute", "cov", "--state", matrix_files["d2"], "--obs", matrix_files["x"]]
    )
    assert rc == 0
    assert capsys.readouterr().out.strip() == "1"


def test_compute_quasi_entropy_defaults_to_identity_operand(matrix_files, capsys):
    rc = cli.main(
        [
            "compute",
            "quasi-entropy",
            "--kernel",
            "neglog",
            "--state",
            matrix_files["d1"],
            "--state2",
            matrix_files["d2"],
        ]
    )
    assert rc == 0
    assert capsys.readouterr().out.strip() == "0.143841036226"


def test_compute_renyi_zero_alpha_is_domain_error(matrix_files, capsys):
    rc = cli.main(
        ["compute", "renyi", "--alpha", "0", "--state", matrix_files["d1"], "--state2", matrix_files["d2"]]
    )
    assert rc == 4
    assert "alpha must be nonzero" in capsys.readouterr().err


def test_compute_malformed_file_exit_2(tmp_path, matrix_files, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    rc = cli.main(["compute", "umegaki", "--state", str(bad), "--state2", matrix_files["d2"]])
    assert rc == 2
    assert str(bad) in capsys.readouterr().err


def test_compute_schema_violations_exit_2(tmp_path, matrix_files):
    wrong = tmp_path / "wrong.json"
    wrong.write_text('{"n": 2, "data": [[[1, 0]], [[0, 0], [1, 0]]]}')
    assert cli.main(["compute", "umegaki", "--state", str(wrong), "--state2", matrix_files["d2"]]) == 2


def test_compute_non_density_exit_3(tmp_path, matrix_files, capsys):
    nondens = tmp_path / "nd.json"
    cli.write_matrix(nondens, np.diag([0.9, 0.9]).astype(complex))
    rc = cli.main(["compute", "umegaki", "--state", str(nondens), "--state2", matrix_files["d2"]])
    assert rc == 3
    assert "trace" in capsys.readouterr().err


def test_compute_non_hermitian_obs_exit_3(tmp_path, matrix_files):
    skew = tmp_path / "sk.json"
    cli.write_matrix(skew, np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))
    rc = cli.main(
        ["compute", "skew", "--fn", "sld", "--state", matrix_files["d2"], "--obs", str(skew)]
    )
    assert rc == 3


def test_compute_missing_required_flag_is_usage_error(matrix_files):
    with pytest.raises(SystemExit) as exc:
        cli.main(["compute", "umegaki", "--state", matrix_files["d1"]])
    assert exc.value.code == 2


def test_compute_unknown_function_exit_4(matrix_files):
    rc = cli.main(
        ["compute", "skew", "--fn", "bogus", "--state", matrix_files["d2"], "--obs", matrix_files["x"]]
    )
    assert rc == 4


def test_compute_hansen_function_from_file(tmp_path, matrix_files, capsys):
    mu = tmp_path / "mu.json"
    mu.write_text("[[1.0, 1.0]]")  # point mass at 1 gives the arithmetic-mean function
    rc = cli.main(
        ["compute", "skew", "--fn", f"hansen:{mu}", "--state", matrix_files["d2"], "--obs", matrix_files["x"]]
    )
    assert rc == 0
    assert capsys.readouterr().out.strip() == "0.25"


def test_verify_writes_report_and_exit_zero(tmp_path, capsys):
    report = tmp_path / "report.json"
    rc = cli.main(
        ["verify", "skew-identity", "--trials", "20", "--dim", "4", "--seed", "7", "--report", str(report)]
    )
    assert rc == 0
    payload = json.loads(report.read_text())
    assert payload["seed"] == 7
    assert payload["suites"][0]["suite"] == "skew-identity"
    assert payload["suites"][0]["max_residual"] <= 1e-9
    assert payload["suites"][0]["failures"] == []


def test_verify_report_is_deterministic_apart_from_elapsed(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        rc = cli.main(
            ["verify", "renyi-limit", "--trials", "10", "--dim", "3", "--seed", "2", "--report", str(path)]
        )
        assert rc == 0

    def strip_elapsed(text):
        payload = json.loads(text)
        for suite in payload["suites"]:
            suite.pop("elapsed")
        return json.dumps(payload, sort_keys=True)

    a, b = (p.read_text() for p in paths)
    assert strip_elapsed(a) == strip_elapsed(b)
    # byte-identical apart from the elapsed lines
    kept_a = [ln for ln in a.splitlines() if '"elapsed"' not in ln]
    kept_b = [ln for ln in b.splitlines() if '"elapsed"' not in ln]
    assert kept_a == kept_b


def test_verify_all_zero_trials(capsys):
    rc = cli.main(["verify", "all", "--trials", "0"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload["suites"]) == len(SUITE_NAMES)
    assert all(s["failures"] == [] for s in payload["suites"])


def test_verify_unknown_suite_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "bogus"])
    assert exc.value.code == 2


def test_verify_tolerance_override_failure_exit_1(capsys):
    rc = cli.main(
        ["verify", "wyd-consistency", "--trials", "3", "--dim", "3", "--tol", "residual=0"]
    )
    assert rc == 1
    err = capsys.readouterr().err
    assert "FAIL wyd-consistency" in err


def test_verify_markdown_format(capsys):
    rc = cli.main(["verify", "skew-identity", "--trials", "5", "--format", "markdown"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "| suite |" in out and "skew-identity" in out


def test_verify_dim_list(capsys):
    rc = cli.main(["verify", "oracle-equivalence", "--trials", "5", "--dim", "2,3"])
    assert rc == 0


def test_list_output(capsys):
    rc = cli.main(["list"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "sld f(0)=0.5" in out
    assert "wyd:<p> f(0)=p(1-p)" in out
    for name in SUITE_NAMES:
        assert name in out
    assert len(SUITE_NAMES) == 13
