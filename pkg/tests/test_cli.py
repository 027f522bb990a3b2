import json
import os
import subprocess
import sys
import time

import numpy as np
import pytest

jsonschema = pytest.importorskip("jsonschema")

from oracles import logistic_map  # noqa: E402
from specpred.cli import main  # noqa: E402
from specpred.schema import load_schema  # noqa: E402
from specpred.series_io import write_wide_csv  # noqa: E402


def _validate(path, schema):
    jsonschema.validate(json.loads(path.read_text()), load_schema(schema))


@pytest.fixture
def sine_csv(tmp_path):
    t = np.arange(4096)
    p = tmp_path / "sine.csv"
    write_wide_csv(p, {"a": np.sin(2 * np.pi * t / 33.3), "b": np.cos(2 * np.pi * t / 64)})
    return p


def test_omega_command(sine_csv, tmp_path, capsys):
    out = tmp_path / "o"
    assert main(["omega", str(sine_csv), "--out", str(out)]) == 0
    _validate(out / "omega.json", "omega_report")
    lines = (out / "omega.csv").read_text().splitlines()
    assert lines[0] == "series,T_used,K,H_nats,H_max_nats,omega,degenerate"
    assert lines[-1].startswith("__dataset_mean__")
    assert "mean omega" in capsys.readouterr().out


def test_taper_none_changes_result(sine_csv, tmp_path):
    main(["omega", str(sine_csv), "--out", str(tmp_path / "h")])
    main(["omega", str(sine_csv), "--taper", "none", "--out", str(tmp_path / "n")])
    h = json.loads((tmp_path / "h" / "omega.json").read_text())["series"][0]["omega"]
    n = json.loads((tmp_path / "n" / "omega.json").read_text())["series"][0]["omega"]
    assert abs(h - n) > 0.01


def test_constant_column_exit_2(tmp_path, capsys):
    p = tmp_path / "flat.csv"
    write_wide_csv(p, {"flatline": np.ones(512)})
    assert main(["omega", str(p), "--out", str(tmp_path / "o")]) == 2
    err = capsys.readouterr().err
    assert "DegenerateSpectrum" in err and "flatline" in err


def test_partial_degenerate_exit_0(tmp_path):
    p = tmp_path / "mixed.csv"
    write_wide_csv(p, {"flat": np.ones(512), "ok": np.sin(np.arange(512) / 3.0)})
    assert main(["omega", str(p), "--out", str(tmp_path / "o")]) == 0
    rep = json.loads((tmp_path / "o" / "omega.json").read_text())
    assert rep["n_skipped"] == 1


def test_usage_errors_exit_1(tmp_path, capsys):
    with pytest.raises(SystemExit) as e:
        main(["omega"])
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        main(["nosuchcommand"])
    assert e.value.code == 1
    assert main(["synth", "--targets", "0.2:0.8", "--out", str(tmp_path)]) == 1
    assert main(["recommend", "x.csv", "--high", "0.3", "--low", "0.6"]) == 1


def test_missing_file_exit_2(tmp_path):
    assert main(["omega", str(tmp_path / "nope.csv")]) == 2


def test_omega_performance(tmp_path):
    rng = np.random.default_rng(0)
    p = tmp_path / "wide.csv"
    write_wide_csv(p, {f"c{i}": rng.normal(size=4096).cumsum() for i in range(10)})
    t0 = time.perf_counter()
    assert main(["omega", str(p), "--max-len", "4096", "--out", str(tmp_path / "o")]) == 0
    assert time.perf_counter() - t0 < 5.0


def test_lle_logistic(tmp_path):
    p = tmp_path / "logistic.csv"
    write_wide_csv(p, {"x": logistic_map(4096)})
    out = tmp_path / "l"
    assert main(["lle", str(p), "--m", "2", "--tau", "1", "--fit", "1:8", "--out", str(out)]) == 0
    _validate(out / "lle.json", "lle_report")
    lam = json.loads((out / "lle.json").read_text())["lambda_max"]
    assert abs(lam - np.log(2)) <= 0.10


def test_lle_too_short_exit_2(tmp_path, capsys):
    p = tmp_path / "short.csv"
    write_wide_csv(p, {"x": np.sin(np.arange(60.0))})
    assert main(["lle", str(p), "--out", str(tmp_path / "l")]) == 2
    assert "SeriesTooShort" in capsys.readouterr().err


def test_synth_is_byte_identical(tmp_path):
    args = ["synth", "--targets", "0.3,0.6", "--per-level", "2", "--length", "1024", "--seed", "7"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    for name in ("synth.csv", "synth_manifest.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    _validate(tmp_path / "a" / "synth_manifest.json", "synth_manifest")
    header = (tmp_path / "a" / "synth.csv").read_text().splitlines()[0]
    assert header == "t,omega_0.30_00,omega_0.30_01,omega_0.60_00,omega_0.60_01"


def test_synth_partial_failure(tmp_path):
    out = tmp_path / "s"
    assert main(["synth", "--targets", "0.5,0.999", "--per-level", "1", "--length", "256",
                 "--out", str(out)]) == 0
    man = json.loads((out / "synth_manifest.json").read_text())
    assert man["n_failed"] == 1
    assert man["items"][1]["status"] == "CalibrationFailed"
    assert main(["synth", "--targets", "0.999", "--per-level", "1", "--length", "256",
                 "--out", str(out)]) == 2


def test_seed_from_environment(tmp_path, monkeypatch):
    args = ["synth", "--targets", "0.4", "--per-level", "1", "--length", "512"]
    monkeypatch.setenv("SPECPRED_SEED", "11")
    main(args + ["--out", str(tmp_path / "env")])
    main(args + ["--seed", "11", "--out", str(tmp_path / "flag")])
    assert (tmp_path / "env" / "synth.csv").read_bytes() == (tmp_path / "flag" / "synth.csv").read_bytes()
    monkeypatch.setenv("SPECPRED_SEED", "abc")
    assert main(args + ["--out", str(tmp_path / "bad")]) == 1


def test_sweep_then_stats(tmp_path):
    sw = tmp_path / "sw"
    assert main(["sweep", "--targets", "0.3,0.5,0.7", "--per-level", "4", "--length", "1024",
                 "--seed", "1", "--out", str(sw)]) == 0
    _validate(sw / "sweep_report.json", "sweep_report")
    st = tmp_path / "st"
    assert main(["stats", str(sw / "sweep_metrics.csv"), str(sw / "sweep_omega.csv"),
                 "--nboot", "20", "--out", str(st)]) == 0
    _validate(st / "stats.json", "stats_report")
    assert (st / "stats_trend.csv").read_text().startswith("grid,fit,band_low,band_high\n")
    assert len((st / "stats_trend.csv").read_text().splitlines()) == 101

    dl = tmp_path / "dl"
    assert main(["stats", str(sw / "sweep_metrics.csv"), str(sw / "sweep_omega.csv"),
                 "--nboot", "20", "--delta", "Seasonal_Naive:Naive", "--out", str(dl)]) == 0
    rep = json.loads((dl / "stats.json").read_text())
    assert isinstance(rep["delta"]["theil_sen_slope"], float)
    assert len((dl / "deltas.csv").read_text().splitlines()) == 13


def test_stats_defaults():
    from specpred.cli import build_parser
    a = build_parser().parse_args(["stats", "r.csv", "o.csv"])
    assert (a.bins, a.frac, a.nboot) == (6, 0.4, 300)
    a = build_parser().parse_args(["lle", "x.csv"])
    assert (a.m, a.tau, a.max_len) == (4, 10, 4096)


def test_stats_join_failure(tmp_path, capsys):
    r = tmp_path / "r.csv"
    r.write_text("model,family,dataset,smape\nNaive,statistical,alpha,0.5\nNaive,statistical,beta,0.4\n")
    o = tmp_path / "o.csv"
    o.write_text("dataset,omega\nalpha,0.5\n")
    assert main(["stats", str(r), str(o), "--out", str(tmp_path / "s")]) == 2
    assert "beta" in capsys.readouterr().err


def test_recommend_command(sine_csv, tmp_path, capsys):
    out = tmp_path / "r"
    assert main(["recommend", str(sine_csv), "--out", str(out)]) == 0
    _validate(out / "recommendation.json", "recommendation")
    assert "zero_shot" in capsys.readouterr().out
    assert main(["recommend", str(sine_csv), "--exogenous", "--out", str(out)]) == 0
    rec = json.loads((out / "recommendation.json").read_text())
    assert rec["confident"] is False and "exogenous_flagged" in rec["warnings"]


def test_module_entry_point(sine_csv, tmp_path):
    env = dict(os.environ)
    proc = subprocess.run([sys.executable, "-m", "specpred", "omega", str(sine_csv),
                           "--out", str(tmp_path / "m")], capture_output=True, text=True, env=env)
    assert proc.returncode == 0, proc.stderr
    proc = subprocess.run([sys.executable, "-m", "specpred", "omega"], capture_output=True, text=True)
    assert proc.returncode == 1
