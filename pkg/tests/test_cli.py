import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from quadcorr import cli
from quadcorr.cli import COLUMNS, ExperimentSpec, fit_exponent, load_config, main, read_report, run_correlate
from quadcorr.constants import archimedean
from quadcorr.errors import DomainError


def test_columns_and_header(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["correlate", "--kind", "r2", "--X", "100,1000", "--l", "1,3", "--pmax", "50", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# quadcorr correlate spec-sha256=")
    assert lines[1] == ",".join(COLUMNS)
    rows = read_report(out)
    assert [(r["X"], r["shift"]) for r in rows] == [("100", "1"), ("1000", "1"), ("100", "3"), ("1000", "3")]
    for r in rows:
        assert float(r["ratio"]) == pytest.approx(int(r["empirical"]) / float(r["predicted"]), rel=1e-15)
        assert float(r["sigma_inf"]) == pytest.approx(math.pi**2)


def test_deterministic_across_threads_and_cache(tmp_path):
    args = ["correlate", "--kind", "split", "--X", "200,400", "--l", "0,1", "--pmax", "20", "--no-timing"]
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b), "--threads", "4", "--cache", str(tmp_path / "cache")]) == 0
    assert main(args + ["--out", str(c), "--cache", str(tmp_path / "cache")]) == 0
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()
    assert all(float(r["seconds"]) == 0 for r in read_report(a))


def test_digest_tracks_spec():
    s1 = ExperimentSpec("split", (100,), (1,), 20)
    s2 = ExperimentSpec("split", (100,), (1,), 30)
    assert s1.digest() == ExperimentSpec("split", (100,), (1,), 20).digest() != s2.digest()


def test_spec_validation():
    for bad in [("nope", (1,), (1,), 10), ("split", (), (1,), 10), ("split", (10, 5), (1,), 10),
                ("split", (10,), (1,), 2), ("r2", (10,), (0,), 10), ("split", (0,), (1,), 10)]:
        with pytest.raises(DomainError):
            ExperimentSpec(*bad)


def test_config_file(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("# nonsplit run\nkind = nonsplit\nX = 100, 200\nl = 2\npmax = 20\nno-timing = true\n")
    assert load_config(cfg)["no_timing"] == "true"
    out = tmp_path / "o.csv"
    assert main(["correlate", "--config", str(cfg), "--out", str(out)]) == 0
    rows = read_report(out)
    assert [r["kind"] for r in rows] == ["nonsplit", "nonsplit"]
    # flags override the file
    assert main(["correlate", "--config", str(cfg), "--X", "50", "--out", str(out)]) == 0
    assert [r["X"] for r in read_report(out)] == ["50"]
    (tmp_path / "bad.cfg").write_text("kind nonsplit\n")
    assert main(["correlate", "--config", str(tmp_path / "bad.cfg")]) == 2


def test_rq_forms_flag(tmp_path):
    out = tmp_path / "q.csv"
    assert main(["correlate", "--kind", "rq", "--X", "2000", "--l", "1", "--pmax", "30",
                 "--forms", "diag:1,1,2;diag:1,1,1", "--out", str(out)]) == 0
    assert float(read_report(out)[0]["ratio"]) == pytest.approx(1, abs=0.1)
    assert main(["correlate", "--kind", "rq", "--X", "10", "--l", "1", "--forms", "diag:1,1"]) == 2


def test_zero_main_term_flagged(capsys):
    spec = ExperimentSpec("split", (100,), (2,), 10)
    buf = io.StringIO()
    run_correlate(spec, buf, timing=False)
    row = buf.getvalue().splitlines()[-1].split(",")
    assert row[COLUMNS.index("predicted")] == "0" and row[COLUMNS.index("ratio")] == "nan"
    assert "zero main term" in capsys.readouterr().err


def test_rows_stream(monkeypatch):
    seen = []

    class Spy(io.StringIO):
        def flush(self):
            seen.append(self.getvalue().count("\n"))

    run_correlate(ExperimentSpec("r2", (10, 20, 30), (1,), 10), Spy(), timing=False)
    assert seen[-3:] == [3, 4, 5]


def test_fit_exponent_synthetic():
    X = np.array([1e3, 3e3, 1e4, 3e4, 1e5])
    pred = X**2
    slope, resid = fit_exponent(X, pred + 7 * X**1.5, pred)
    assert slope == pytest.approx(1.5) and resid < 1e-9
    slope, _ = fit_exponent(X, pred + 3, pred)
    assert slope == pytest.approx(0, abs=1e-9)
    with pytest.raises(DomainError):
        fit_exponent(X[:3], X[:3] + 1, X[:3])
    with pytest.raises(DomainError):
        fit_exponent(X, pred, pred)


def test_fit_exponent_command(tmp_path, capsys):
    path = tmp_path / "r.csv"
    X = [1000, 3000, 10000, 30000]
    lines = ["# synthetic", ",".join(COLUMNS)]
    for x in X:
        lines.append(f"split,{x},1,{x**2 + x:.17g},{x**2:.17g},1,1,1,0")
    lines.append("split,1000,12,5,4,1,1,1,0")
    path.write_text("\n".join(lines) + "\n")
    assert main(["fit-exponent", "--in", str(path)]) == 1
    out = json.loads(capsys.readouterr().out)
    good = [o for o in out if o["shift"] == 1][0]
    assert good["slope"] == pytest.approx(1.0) and "error" in [o for o in out if o["shift"] == 12][0]


def test_verify_filter(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert main(["verify", "--filter", "sigma", "--out", str(out)]) == 0
    summary = json.loads(out.read_text())
    assert summary["passed"] and [c["name"] for c in summary["checks"]] == ["sigma_inf"]
    assert main(["verify", "--filter", "nothing-matches"]) == 1


def test_verify_catches_wrong_prefactor(monkeypatch, capsys):
    # a 1% error in the closed form must be reported as a failure
    monkeypatch.setattr(archimedean, "SIGMA_INF_PREFACTOR", archimedean.SIGMA_INF_PREFACTOR * 1.01)
    assert main(["verify", "--filter", "sigma_inf"]) == 1
    assert json.loads(capsys.readouterr().out)["passed"] is False


def test_sieve_command(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("QUADCORR_CACHE", raising=False)
    assert main(["sieve", "--N", "100"]) == 2
    assert main(["sieve", "--N", "500", "--form", "diag:1,1,2", "--cache", str(tmp_path)]) == 0
    assert any(tmp_path.iterdir())


def test_console_script_entry():
    res = subprocess.run([sys.executable, "-m", "quadcorr.cli", "verify", "--filter", "iwaniec"],
                         capture_output=True, text=True, timeout=300)
    assert res.returncode == 0 and json.loads(res.stdout)["passed"]


def test_defaults_cover_all_kinds():
    assert set(cli.DEFAULT_PMAX) == set(cli.KINDS)
