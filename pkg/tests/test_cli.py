import json

from click.testing import CliRunner

from lmoment.cli import main


def _run(*args, env=None):
    return CliRunner().invoke(main, list(args), env=env)


def test_help():
    res = _run("--help")
    assert res.exit_code == 0
    for name in ("moments", "psi-coeffs", "table", "verify", "ratio-scan", "em-demo"):
        assert name in res.output


def test_moments_csv_shape():
    res = _run("moments", "--q", "4", "--conrey", "3", "--nmax", "3", "--prec", "96")
    assert res.exit_code == 0
    lines = res.output.strip().splitlines()
    assert lines[0] == "q,conrey,N,method,prec_bits,value_re,value_im,residual"
    assert len(lines) == 5
    assert lines[1].startswith("4,3,0,closed,96,0.5,")
    assert "runtime_ms" not in res.output


def test_moments_json_has_runtime():
    res = _run("moments", "--q", "3", "--conrey", "2", "--nmax", "1", "--prec", "96", "--format", "json")
    assert res.exit_code == 0
    rows = [json.loads(line) for line in res.output.strip().splitlines()]
    assert len(rows) == 2
    for row in rows:
        assert row["q"] == 3 and row["conrey"] == 2
        assert isinstance(row["runtime_ms"], int)
        assert row["method"] == "closed"


def test_moments_both_reports_disagreement():
    res = _run("moments", "--q", "4", "--conrey", "3", "--nmax", "0", "--prec", "96", "--method", "both")
    assert res.exit_code == 0
    header = res.output.strip().splitlines()[0]
    assert header.endswith(",disagreement")


def test_moments_zero_tolerance_trips_oracle_gate():
    res = _run(
        "moments", "--q", "4", "--conrey", "3", "--nmax", "0", "--prec", "96", "--method", "both", "--tol", "0"
    )
    assert res.exit_code == 4


def test_bad_inputs_exit_two():
    assert _run("moments", "--q", "9", "--conrey", "8", "--nmax", "0").exit_code == 2  # imprimitive
    assert _run("moments", "--q", "6", "--conrey", "5", "--nmax", "0").exit_code == 2
    assert _run("moments", "--q", "4", "--conrey", "2", "--nmax", "0").exit_code == 2  # not coprime
    assert _run("moments", "--q", "4", "--conrey", "3", "--nmax", "-1").exit_code == 2
    assert _run("moments", "--q", "4", "--conrey", "3", "--prec", "32").exit_code == 2
    assert _run("em-demo", "--alpha", "7/5").exit_code == 2
    assert _run("em-demo", "--alpha", "zebra").exit_code == 2
    assert _run("verify", "--suite", "nonsense").exit_code == 2


def test_env_precision_override():
    res = _run("moments", "--q", "4", "--conrey", "3", "--nmax", "0", env={"LMOMENT_PREC_BITS": "96"})
    assert res.exit_code == 0
    assert ",96," in res.output.strip().splitlines()[1]


def test_psi_coeffs_csv_columns():
    res = _run("psi-coeffs", "--q", "5", "--conrey", "3", "--nmax", "4", "--prec", "96")
    assert res.exit_code == 0
    lines = res.output.strip().splitlines()
    assert lines[0].split(",") == [
        "q",
        "conrey",
        "n",
        "method",
        "prec_bits",
        "value_re",
        "value_im",
        "residual",
        "scaled_abs",
        "im_re_ratio",
    ]
    assert len(lines) == 6


def test_table_passes():
    res = _run("table")
    assert res.exit_code == 0
    assert "all 33 fixtures reproduced" in res.output


def test_verify_exact_suite():
    res = _run("verify", "--suite", "stirling")
    assert res.exit_code == 0
    assert "PASS" in res.output and "FAIL" not in res.output


def test_ratio_scan_deterministic_and_seed_sensitive():
    a = _run("ratio-scan", "--nprimes", "3", "--seed", "5", "--prec", "96")
    b = _run("ratio-scan", "--nprimes", "3", "--seed", "5", "--prec", "96")
    c = _run("ratio-scan", "--nprimes", "3", "--seed", "6", "--prec", "96")
    assert a.exit_code == b.exit_code == c.exit_code == 0
    assert a.output == b.output
    assert a.output != c.output
    assert a.output.splitlines()[0] == "n,p_n,conrey,ratio"


def test_em_demo_names_the_half_shift_constant():
    res = _run("em-demo", "--alpha", "1/2", "--order", "3", "--prec", "96")
    assert res.exit_code == 0
    assert "2 log 2" in res.output


def test_plots_are_written(tmp_path):
    out = tmp_path / "moments.png"
    res = _run(
        "moments", "--q", "4", "--conrey", "3", "--nmax", "4", "--prec", "96", "--plot", str(out)
    )
    assert res.exit_code == 0
    assert out.exists() and out.stat().st_size > 1000
    out2 = tmp_path / "psi.png"
    res = _run("psi-coeffs", "--q", "5", "--conrey", "3", "--nmax", "10", "--prec", "96", "--plot", str(out2))
    assert res.exit_code == 0
    assert out2.exists() and out2.stat().st_size > 1000
    out3 = tmp_path / "scan.png"
    res = _run("ratio-scan", "--nprimes", "3", "--prec", "96", "--plot", str(out3))
    assert res.exit_code == 0
    assert out3.exists() and out3.stat().st_size > 1000
