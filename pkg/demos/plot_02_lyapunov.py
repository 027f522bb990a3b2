"""
Largest Lyapunov exponent with delay embedding
==============================================

The logistic map at r = 4 is chaotic with exponent ln 2. Rosenstein's
method follows nearest neighbours in a delay embedding and fits the slope
of their mean log separation.
"""

import numpy as np

from specpred import LleConfig, lle_rosenstein

x = np.empty(4096)
x[0] = 0.1234
for i in range(1, x.size):
    x[i] = 4.0 * x[i - 1] * (1.0 - x[i - 1])

###############################################################################
# A 2-d embedding with unit delay is enough for this map. The divergence
# saturates after about ten steps, so the fit uses steps 1..8.
cfg = LleConfig(m=2, tau=1, fit_lo=1, fit_hi=8)
rep = lle_rosenstein(x, cfg)
print(f"logistic map: lambda_max={rep.lambda_max:.4f} (ln 2 = {np.log(2):.4f}), r2={rep.fit_r2:.3f}")
print("divergence curve, first 10 steps:", np.round(rep.divergence_curve[:10], 3))

###############################################################################
# A periodic signal does not diverge; the slope is close to zero.
sine = np.sin(2 * np.pi * np.arange(4096) / 37.3)
print(f"sine: lambda_max={lle_rosenstein(sine).lambda_max:.4f}")

###############################################################################
# For white noise the separation jumps on the first step and then stays
# flat. The straight-line fit is poor, so the report carries a warning.
noise = np.random.default_rng(1).standard_normal(4096)
rep = lle_rosenstein(noise)
print(f"noise: lambda_max={rep.lambda_max:.4f}, r2={rep.fit_r2:.3f}, warnings={rep.warnings}")
