"""``specpred`` command line.

Exit status: 0 success (possibly with warnings), 1 usage error, 2 data or
computation failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import __version__
from .chaos import LleConfig, lle_dataset
from .errors import DataError, SpecPredError
from .forecast_metrics import read_metric_rows, write_metric_rows
from .pipeline import json_ready, read_omega_table, run_stats, run_sweep
from .selector import SelectorPolicy, recommend
from .series_io import PreprocessPolicy, load_dataset, preprocess, write_wide_csv
from .spectral import SpectralConfig, omega_dataset
from .synthgen import SweepFailure, generate_sweep, parse_targets

SEED_ENV = "SPECPRED_SEED"
EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

log = logging.getLogger("specpred")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _fit_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("fit range must look like LO:HI") from None
    return lo, hi


def _pair(text: str) -> tuple[str, str]:
    parts = text.split(":")
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError("expected A:B")
    return parts[0], parts[1]


def _max_len(text: str) -> int | None:
    if text.lower() in ("none", "unlimited", "0"):
        return None
    return int(text)


def _add_input(p):
    p.add_argument("input", help="dataset file (wide CSV, long CSV or JSONL)")
    p.add_argument("--format", choices=("wide_csv", "long_csv", "jsonl"),
                   help="input layout (inferred when omitted)")
    p.add_argument("--max-len", type=_max_len, default=4096,
                   help="keep at most this many samples per series (default 4096; 'none' = all)")
    p.add_argument("--take", choices=("head", "tail"), default="head")
    p.add_argument("--missing", choices=("drop", "linear_interpolate", "error"), default="drop")
    p.add_argument("--zeros-missing", action="store_true", help="treat literal zeros as missing")
    p.add_argument("--dt", type=float, default=1.0, help="time between samples")


def _add_taper(p):
    p.add_argument("--taper", choices=("hann", "none"), default="hann")


def _add_out(p):
    p.add_argument("--out", type=Path, default=Path("specpred-out"), help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="specpred", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("omega", help="spectral predictability per series and per dataset")
    _add_input(p)
    _add_taper(p)
    _add_out(p)

    p = sub.add_parser("lle", help="largest Lyapunov exponent per series and per dataset")
    _add_input(p)
    p.add_argument("--m", type=int, default=4, help="embedding dimension")
    p.add_argument("--tau", type=int, default=10, help="embedding delay in steps")
    p.add_argument("--kmax", type=int, default=50, help="divergence horizon in steps")
    p.add_argument("--fit", type=_fit_range, default=(1, 20), help="slope fit range LO:HI")
    p.add_argument("--theiler", type=int, default=None, help="temporal exclusion (default m*tau)")
    _add_out(p)

    p = sub.add_parser("synth", help="generate series with calibrated omega")
    p.add_argument("--targets", default="0.2:0.8:0.1", help="START:STOP:STEP or comma list")
    p.add_argument("--per-level", type=int, default=10)
    p.add_argument("--length", type=int, default=4096)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--tolerance", type=float, default=0.02)
    p.add_argument("--harmonics", type=int, default=1)
    _add_out(p)

    p = sub.add_parser("sweep", help="synthetic sweep scored with Naive / Seasonal Naive")
    p.add_argument("--targets", default="0.2:0.8:0.1")
    p.add_argument("--per-level", type=int, default=10)
    p.add_argument("--length", type=int, default=4096)
    p.add_argument("--context", type=int, default=512)
    p.add_argument("--horizon", type=int, default=96)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--tolerance", type=float, default=0.02)
    p.add_argument("--harmonics", type=int, default=1)
    _add_taper(p)
    _add_out(p)

    p = sub.add_parser("stats", help="correlations, quantile bins and LOWESS band")
    p.add_argument("results", help="MetricRow CSV: model,family,dataset,smape[,mse]")
    p.add_argument("omegas", help="CSV: dataset,omega[,lle]")
    p.add_argument("--bins", type=int, default=6)
    p.add_argument("--frac", type=float, default=0.4)
    p.add_argument("--nboot", type=int, default=300)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--delta", type=_pair, default=None, metavar="A:B",
                   help="relative error gain of model/family A over B")
    _add_out(p)

    p = sub.add_parser("recommend", help="regime, reliability warnings and model families")
    _add_input(p)
    _add_taper(p)
    p.add_argument("--high", type=float, default=0.5, help="high-regime threshold")
    p.add_argument("--low", type=float, default=0.4, help="low-regime threshold")
    p.add_argument("--min-length", type=int, default=1000)
    p.add_argument("--drift", type=float, default=0.10, help="split-half omega drift limit")
    p.add_argument("--exogenous", action="store_true",
                   help="dynamics are dominated by external shocks")
    p.add_argument("--with-lle", action="store_true", help="also report the dataset LLE")
    _add_out(p)
    return parser


def _load(args):
    try:
        policy = PreprocessPolicy(args.missing, args.max_len, args.take, args.zeros_missing)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not args.dt > 0:
        raise UsageError("--dt must be positive")
    return preprocess(load_dataset(args.input, args.format, dt=args.dt), policy)


def _config(factory, *a, **kw):
    try:
        return factory(*a, **kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(json_ready(obj), indent=2, sort_keys=False) + "\n", encoding="utf-8")


def _write_csv(path: Path, header, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(["" if v is None else v for v in row])


def cmd_omega(args) -> int:
    cfg = _config(SpectralConfig, taper=args.taper)
    t0 = time.perf_counter()
    d = _load(args)
    res = omega_dataset(d, cfg)
    elapsed = time.perf_counter() - t0
    payload = res.to_dict()
    payload.update(taper=args.taper, max_len=args.max_len, warnings=list(d.warnings),
                   elapsed_seconds=round(elapsed, 6))
    _write_json(args.out / "omega.json", payload)
    rows = [(r.series, r.T, r.K, repr(r.H), repr(r.H_max), repr(r.omega), "false")
            for r in res.reports]
    rows += [(name, "", "", "", "", "", "true") for name in res.skipped]
    rows.append(("__dataset_mean__", "", "", "", "", repr(res.omega), "false"))
    _write_csv(args.out / "omega.csv",
               ["series", "T_used", "K", "H_nats", "H_max_nats", "omega", "degenerate"], rows)
    for r in res.reports:
        print(f"{r.series}: omega={r.omega:.4f} (T={r.T}, peak bin {r.peak_bins[0]})")
    for name, err in res.skipped.items():
        print(f"{name}: skipped ({err})")
    print(f"{d.name}: mean omega={res.omega:.4f} over {len(res.reports)} series "
          f"[{elapsed:.3f} s]")
    return EXIT_OK


def cmd_lle(args) -> int:
    cfg = _config(LleConfig, m=args.m, tau=args.tau, k_max=args.kmax,
                  fit_lo=args.fit[0], fit_hi=args.fit[1], theiler=args.theiler)
    t0 = time.perf_counter()
    d = _load(args)
    res = lle_dataset(d, cfg)
    elapsed = time.perf_counter() - t0
    payload = res.to_dict()
    payload.update(max_len=args.max_len, elapsed_seconds=round(elapsed, 6))
    _write_json(args.out / "lle.json", payload)
    _write_csv(args.out / "lle.csv",
               ["series", "lambda_max", "n_pairs", "fit_r2", "m", "tau", "k_max", "fit_lo", "fit_hi"],
               [(r.series, repr(r.lambda_max), r.n_pairs, repr(r.fit_r2), cfg.m, cfg.tau,
                 cfg.k_max, cfg.fit_lo, cfg.fit_hi) for r in res.reports])
    for r in res.reports:
        flag = " (low confidence)" if r.low_confidence else ""
        print(f"{r.series}: lambda_max={r.lambda_max:.4f} nats/unit, r2={r.fit_r2:.3f}{flag}")
    for name, err in res.skipped.items():
        print(f"{name}: skipped ({err})")
    print(f"{d.name}: mean lambda_max={res.lambda_max:.4f} [{elapsed:.3f} s]")
    return EXIT_OK


def _targets(text):
    try:
        targets = parse_targets(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not targets or not all(0 < t < 1 for t in targets):
        raise UsageError("targets must be non-empty and inside (0, 1)")
    return targets


def _check_synth_flags(args):
    if args.per_level < 1:
        raise UsageError("--per-level must be >= 1")
    if args.length < 256:
        raise UsageError("--length must be >= 256")
    if not args.tolerance > 0:
        raise UsageError("--tolerance must be positive")
    if not 1 <= args.harmonics <= 8:
        raise UsageError("--harmonics must be in 1..8")
    if args.seed < 0:
        raise UsageError("--seed must be non-negative")


def cmd_synth(args) -> int:
    targets = _targets(args.targets)
    _check_synth_flags(args)
    results = generate_sweep(targets, args.per_level, args.length, args.seed,
                             args.tolerance, args.harmonics)
    ok = [r for r in results if not isinstance(r, SweepFailure)]
    manifest = {"targets": targets, "per_level": args.per_level, "length": args.length,
                "seed": args.seed, "tolerance": args.tolerance, "n_harmonics": args.harmonics,
                "n_ok": len(ok), "n_failed": len(results) - len(ok),
                "items": [r.to_dict() for r in results]}
    _write_json(args.out / "synth_manifest.json", manifest)
    if ok:
        args.out.mkdir(parents=True, exist_ok=True)
        write_wide_csv(args.out / "synth.csv", {r.series.name: r.series.values for r in ok})
    for r in results:
        if isinstance(r, SweepFailure):
            print(f"{r.name}: CalibrationFailed ({r.error})")
    print(f"generated {len(ok)}/{len(results)} series -> {args.out}")
    if not ok:
        log.error("every calibration failed")
        return EXIT_DATA
    return EXIT_OK


def cmd_sweep(args) -> int:
    targets = _targets(args.targets)
    _check_synth_flags(args)
    if args.context < 4 or args.horizon < 1 or args.context + args.horizon > args.length:
        raise UsageError("need context >= 4, horizon >= 1 and context + horizon <= length")
    cfg = _config(SpectralConfig, taper=args.taper)
    out = run_sweep(targets, args.per_level, args.length, args.seed, args.context,
                    args.horizon, args.tolerance, args.harmonics, cfg)
    if not out.series:
        print("every calibration failed", file=sys.stderr)
        return EXIT_DATA
    args.out.mkdir(parents=True, exist_ok=True)
    write_metric_rows(args.out / "sweep_metrics.csv", out.rows)
    _write_csv(args.out / "sweep_omega.csv", ["dataset", "omega"],
               [(s.dataset, repr(s.context_omega)) for s in out.series])
    _write_csv(args.out / "sweep_series.csv",
               ["dataset", "target_omega", "achieved_omega", "context_omega", "season_length"],
               [(s.dataset, s.target_omega, repr(s.achieved_omega), repr(s.context_omega),
                 s.season_length) for s in out.series])
    report = dict(out.report)
    report["failures"] = [f.to_dict() for f in out.failures]
    _write_json(args.out / "sweep_report.json", report)
    for model, info in out.report["models"].items():
        c = info["smape"]
        if "error" in c:
            print(f"{model}: correlation unavailable ({c['error']})")
        else:
            print(f"{model}: Spearman(omega, sMAPE)={c['spearman_rho']:.3f}, "
                  f"Pearson r={c['pearson_r']:.3f} [{c['ci_low']:.3f}, {c['ci_high']:.3f}]")
    print(f"{len(out.series)} series scored, {len(out.failures)} calibration failures -> {args.out}")
    return EXIT_OK


def cmd_stats(args) -> int:
    if args.bins < 1 or not 0 < args.frac <= 1 or args.nboot < 1:
        raise UsageError("need --bins >= 1, 0 < --frac <= 1 and --nboot >= 1")
    rows = read_metric_rows(args.results)
    omegas = read_omega_table(args.omegas)
    report, band, deltas = run_stats(rows, omegas, args.bins, args.frac, args.nboot,
                                     args.seed, args.delta)
    _write_json(args.out / "stats.json", report)
    if band is not None:
        _write_csv(args.out / "stats_trend.csv", ["grid", "fit", "band_low", "band_high"],
                   [tuple(repr(v) for v in row) for row in band.rows()])
    if deltas:
        _write_csv(args.out / "deltas.csv", ["model_a", "model_b", "dataset", "omega", "delta_pct"],
                   [(d.model_a, d.model_b, d.dataset, repr(d.omega), repr(d.delta_pct))
                    for d in deltas])
        ts = report["delta"]["theil_sen_slope"]
        if isinstance(ts, float):
            print(f"Theil-Sen slope of delta vs omega: {ts:.3f} %/unit omega over {len(deltas)} datasets")
    c = report["correlations"]["all_rows"]
    if "error" not in c:
        print(f"all rows: n={c['n']}, Pearson r={c['pearson_r']:.3f} "
              f"[{c['ci_low']:.3f}, {c['ci_high']:.3f}], Spearman rho={c['spearman_rho']:.3f}")
    print(f"wrote {args.out / 'stats.json'}")
    return EXIT_OK


def cmd_recommend(args) -> int:
    policy = _config(SelectorPolicy, high_threshold=args.high, low_threshold=args.low,
                     min_length=args.min_length, stationarity_drift=args.drift,
                     exogenous_dominated=args.exogenous)
    cfg = _config(SpectralConfig, taper=args.taper)
    d = _load(args)
    lle = None
    if args.with_lle:
        try:
            lle = lle_dataset(d).lambda_max
        except DataError as exc:
            log.warning("LLE unavailable: %s", exc)
    rec = recommend(d, policy, cfg, lle)
    _write_json(args.out / "recommendation.json", rec.to_dict())
    print(rec.verdict())
    return EXIT_OK


COMMANDS = {"omega": cmd_omega, "lle": cmd_lle, "synth": cmd_synth, "sweep": cmd_sweep,
            "stats": cmd_stats, "recommend": cmd_recommend}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if getattr(args, "seed", "n/a") is None:
            args.seed = _default_seed()
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"specpred {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpecPredError as exc:
        print(f"specpred {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
