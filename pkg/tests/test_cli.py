import math
import shutil
import subprocess

import pytest

from extdelay import ResultRow, load_results, persist_results, wilson_interval
from extdelay.cli import main, parse_config_file, parse_k_values


def synthetic_rows(ks, estimator="mie", rho=math.sqrt(0.5)):
    rows = []
    for k in ks:
        trials = 10**15
        errors = round(2.0 ** (-k / 3.0) * trials)
        lo, hi = wilson_interval(errors, trials)
        rows.append(ResultRow(estimator=estimator, k=k, n_samples=2**k, rho=rho,
                              snr_db=0.0, d_max=10, trials=trials, errors=errors,
                              p_err=errors / trials, ci_low=lo, ci_high=hi,
                              master_seed=0))
    return rows


def test_parse_k_values_forms():
    assert parse_k_values("6,8,10") == (6, 8, 10)
    assert parse_k_values("12") == (12,)
    assert parse_k_values("6:9") == (6, 7, 8, 9)
    assert parse_k_values("6:14:2") == (6, 8, 10, 12, 14)
    assert parse_k_values(" 4 ") == (4,)
    for bad in ("9:6", "6:14:0", "6:14:2:1", "a:b"):
        with pytest.raises(ValueError):
            parse_k_values(bad)


def test_run_writes_csv(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    rc = main(["run", "--snr-db", "0", "--dmax", "2", "--k", "4,6",
               "--trials", "100", "--seed", "3", "--out", str(out)])
    assert rc == 0
    text = capsys.readouterr().out
    assert f"wrote 2 rows to {out}" in text
    rows = load_results(out)
    assert [(r.estimator, r.k) for r in rows] == [("mie", 4), ("mie", 6)]
    assert all(r.master_seed == 3 and r.trials == 100 for r in rows)


def test_run_config_file_and_flag_precedence(tmp_path, capsys):
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text(
        "# comment line\n"
        "snr_db = 0\n"
        "dmax = 2\n"
        "k = 4\n"
        "trials = 100\n"
        f"out = {out_a}\n"
        "estimators = mie,onebit\n"
    )
    assert main(["run", "--config", str(cfg)]) == 0
    rows = load_results(out_a)
    assert [r.estimator for r in rows] == ["mie", "onebit"]
    assert rows[0].trials == 100
    capsys.readouterr()

    # flags win over the file
    rc = main(["run", "--config", str(cfg), "--trials", "200", "--out", str(out_b)])
    assert rc == 0
    rows = load_results(out_b)
    assert all(r.trials == 200 for r in rows)


def test_config_file_rejects_unknown_or_malformed_keys(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("bogus = 1\n")
    rc = main(["run", "--config", str(bad)])
    assert rc == 2
    assert "unknown key" in capsys.readouterr().err

    nokv = tmp_path / "nokv.cfg"
    nokv.write_text("snr_db\n")
    with pytest.raises(ValueError, match=":1:"):
        parse_config_file(nokv)


def test_run_missing_required_settings(capsys):
    rc = main(["run", "--snr-db", "0"])
    assert rc == 2
    err = capsys.readouterr().err
    assert "missing required settings" in err
    assert "dmax" in err and "out" in err


def test_run_rejects_unknown_estimator(tmp_path, capsys):
    rc = main(["run", "--snr-db", "0", "--dmax", "2", "--k", "4",
               "--trials", "100", "--estimators", "bogus",
               "--out", str(tmp_path / "x.csv")])
    assert rc == 2
    assert "unknown estimators" in capsys.readouterr().err


def test_run_n_samples_override(tmp_path):
    out = tmp_path / "n.csv"
    rc = main(["run", "--snr-db", "0", "--dmax", "2", "--k", "6",
               "--trials", "100", "--n-samples", "16", "--out", str(out)])
    assert rc == 0
    assert load_results(out)[0].n_samples == 16


def test_run_trace_prints_every_trial(tmp_path, capsys):
    out = tmp_path / "t.csv"
    rc = main(["run", "--snr-db", "3", "--dmax", "2", "--k", "4",
               "--trials", "100", "--out", str(out), "--trace"])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    trace = [l for l in lines if l.startswith("k=4 trial=")]
    assert len(trace) == 100
    for line in trace:
        fields = dict(p.split("=", 1) for p in line.split())
        assert len(fields["bits"]) == 4 and set(fields["bits"]) <= {"0", "1"}


def test_bounds_table(capsys):
    rc = main(["bounds", "--rho", "1", "--k", "8:12:2", "--dmax", "150"])
    assert rc == 0
    out = capsys.readouterr().out.splitlines()
    assert "upper" in out[0] and "threshold" in out[0]
    assert len(out) == 1 + 3
    assert out[1].lstrip().startswith("8 ")


def test_bounds_csv_values(capsys):
    rc = main(["bounds", "--rho", "1", "--k", "10", "--dmax", "150", "--format", "csv"])
    assert rc == 0
    header, row = capsys.readouterr().out.splitlines()
    assert header == "k,rho,d_max,upper,lower,exponent,threshold"
    vals = row.split(",")
    assert vals[0] == "10" and vals[2] == "150"
    assert abs(float(vals[3]) - 0.29296875) < 1e-15
    assert float(vals[5]) == 1.0


def test_bounds_snr_db_form(capsys):
    rc = main(["bounds", "--snr-db", "0", "--k", "12", "--dmax", "10",
               "--format", "csv"])
    assert rc == 0
    row = capsys.readouterr().out.splitlines()[1]
    assert abs(float(row.split(",")[1]) - math.sqrt(0.5)) < 1e-15


def test_bounds_rho_and_snr_are_mutually_exclusive(capsys):
    with pytest.raises(SystemExit):
        main(["bounds", "--rho", "1", "--snr-db", "0", "--k", "10", "--dmax", "5"])
    with pytest.raises(SystemExit):
        main(["bounds", "--k", "10", "--dmax", "5"])


def test_fit_command(tmp_path, capsys):
    path = tmp_path / "rows.csv"
    persist_results(synthetic_rows((6, 9, 12, 15)), path)
    rc = main(["fit", "--in", str(path), "--estimator", "mie"])
    assert rc == 0
    pairs = dict(l.split("=", 1) for l in capsys.readouterr().out.strip().splitlines())
    assert pairs["estimator"] == "mie"
    assert abs(float(pairs["slope_bits"]) + 1 / 3) < 1e-9
    assert abs(float(pairs["exponent_theory"]) - 1 / 3) < 1e-12
    assert pairs["k_min"] == "6" and pairs["k_max"] == "15"


def test_fit_missing_estimator_lists_available(tmp_path, capsys):
    path = tmp_path / "rows.csv"
    persist_results(synthetic_rows((6, 9, 12)), path)
    rc = main(["fit", "--in", str(path), "--estimator", "rd"])
    assert rc == 2
    err = capsys.readouterr().err
    assert "no rows for estimator 'rd'" in err and "mie" in err


def test_fit_missing_file_reports_error(tmp_path, capsys):
    rc = main(["fit", "--in", str(tmp_path / "absent.csv"), "--estimator", "mie"])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_check_command(capsys):
    rc = main(["check"])
    assert rc == 0
    out = capsys.readouterr().out.splitlines()
    assert sum(1 for l in out if l.startswith("PASS ")) == 6
    assert out[-1] == "all 6 checks passed"


def test_console_script_installed():
    exe = shutil.which("extdelay")
    assert exe, "console script should be on PATH after pip install -e ."
    proc = subprocess.run([exe, "bounds", "--rho", "1", "--k", "10", "--dmax", "150"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "0.292969" in proc.stdout
