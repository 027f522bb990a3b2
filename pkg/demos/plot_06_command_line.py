"""
The ``specpred`` command line
=============================

Every library workflow is also a subcommand. This script drives them
through ``specpred.cli.main`` in a temporary directory. The same calls
work from a shell as ``specpred omega data.csv`` and so on.
"""

import json
import tempfile
from pathlib import Path

import numpy as np

from specpred.cli import main
from specpred.series_io import write_wide_csv

work = Path(tempfile.mkdtemp(prefix="specpred-demo-"))
t = np.arange(4096)
rng = np.random.default_rng(0)
write_wide_csv(work / "sensors.csv", {
    "temp": np.sin(2 * np.pi * t / 24) + 0.1 * rng.normal(size=4096),
    "flow": rng.normal(size=4096).cumsum(),
})

###############################################################################
# Omega per column and for the dataset; exit status 0 on success.
print("exit", main(["omega", str(work / "sensors.csv"), "--out", str(work / "omega")]))

###############################################################################
# A recommendation with the user's exogenous flag.
main(["recommend", str(work / "sensors.csv"), "--exogenous", "--out", str(work / "rec")])
print(json.loads((work / "rec" / "recommendation.json").read_text())["warnings"])

###############################################################################
# A small sweep, then the statistics over its own output. The second call
# compares Seasonal Naive against Naive dataset by dataset.
main(["sweep", "--per-level", "4", "--length", "2048", "--seed", "1", "--out", str(work / "sweep")])
main(["stats", str(work / "sweep" / "sweep_metrics.csv"), str(work / "sweep" / "sweep_omega.csv"),
      "--nboot", "100", "--delta", "Seasonal_Naive:Naive", "--out", str(work / "stats")])

###############################################################################
# Bad input is a data error (exit 2); a bad flag is a usage error (exit 1).
write_wide_csv(work / "flat.csv", {"flat": np.ones(256)})
print("constant column exit", main(["omega", str(work / "flat.csv"), "--out", str(work / "x")]))
print("bad targets exit", main(["synth", "--targets", "0.2:0.8", "--out", str(work / "x")]))
print("outputs in", work)
