"""
Spectral predictability of simple signals
=========================================

Omega is one minus the normalised entropy of a series' power spectrum. A
pure tone puts its power in a handful of bins and scores near 1. White
noise spreads it evenly and scores near 0.
"""

import numpy as np

from specpred import SpectralConfig, omega

T = 1024
t = np.arange(T)
rng = np.random.default_rng(0)

###############################################################################
# A sine that completes exactly 64 cycles. The Hann taper spreads its power
# over bins 63-65, so omega stays a little below 1.
sine = np.sin(2 * np.pi * 64 * t / T)
rep = omega(sine)
print(f"sine          omega={rep.omega:.3f}  peak bins {rep.peak_bins}")
print("power ratio around the peak:", np.round(rep.psd[62:65] / rep.psd[63], 3))

###############################################################################
# Without the taper the same tone is a single point mass: omega is exactly 1.
print(f"sine, no taper omega={omega(sine, SpectralConfig(taper='none')).omega:.3f}")

###############################################################################
# Adding noise lowers omega, pure noise sits near zero.
noise = rng.standard_normal(T)
for label, x in [("sine + noise", sine + noise), ("noise", noise)]:
    print(f"{label:13s} omega={omega(x).omega:.3f}")

###############################################################################
# Omega does not care about units or offsets.
x = sine + 0.5 * noise
print("affine invariance:", omega(x).omega, omega(1e3 * x - 42).omega)

###############################################################################
# The dominant period follows from the peak bin.
print(f"dominant period of the sine: {rep.dominant_period:.1f} samples")
