"""
Correlations, bins and a LOWESS trend band
==========================================

The statistics used to relate omega to forecast error: Pearson with a
Fisher-z interval, Spearman, Theil-Sen, quantile bins and a LOWESS curve
with a bootstrap percentile band.
"""

import numpy as np

from specpred.statlab import (bootstrap_band, correlation_summary, fisher_ci, quantile_bins,
                              theil_sen_slope)

###############################################################################
# Fisher-z intervals for a few published (r, n) pairs.
for name, r, n in [("CarbonCast", -0.68, 33), ("PEMS", -0.75, 18), ("Synthetic", -0.72, 42)]:
    lo, hi = fisher_ci(r, n)
    print(f"{name:10s} r={r:+.2f} n={n:2d}  95% CI ({lo:+.3f}, {hi:+.3f})")

###############################################################################
# A toy leaderboard: error falls with omega, plus noise and two outliers.
rng = np.random.default_rng(3)
om = rng.uniform(0.1, 0.8, 60)
err = 1.2 - om + 0.1 * rng.normal(size=60)
err[:2] += 1.5
s = correlation_summary(om, err)
print(f"Pearson r={s.pearson_r:.3f} [{s.ci_low:.3f}, {s.ci_high:.3f}], "
      f"Spearman rho={s.spearman_rho:.3f} (p={s.spearman_p:.1e})")
print(f"Theil-Sen slope {theil_sen_slope(om, err):.3f}, least squares {np.polyfit(om, err, 1)[0]:.3f}")

###############################################################################
# Six quantile bins hold ten points each.
b = quantile_bins(om, err, 6)
for lo, hi, m, se, c in zip(b.bin_edges[:-1], b.bin_edges[1:], b.mean_y, b.se_y, b.count):
    print(f"  [{lo:.2f}, {hi:.2f})  n={c}  mean error {m:.3f} +/- {se:.3f}")

###############################################################################
# LOWESS with frac 0.4 and a 300-replicate band, shown every 20 grid points.
band = bootstrap_band(om, err, frac=0.4, n_boot=300, seed=0)
for g, f, lo, hi in list(band.rows())[::20]:
    print(f"  omega {g:.3f}: fit {f:.3f}  band [{lo:.3f}, {hi:.3f}]")
