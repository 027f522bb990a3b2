"""
From omega to a model-family shortlist
======================================

``recommend`` classifies a dataset into a low, mid or high regime and
attaches reliability warnings. A warning does not change the shortlist,
it only marks the advice as less certain.
"""

import numpy as np

from specpred import Dataset, SelectorPolicy, recommend

rng = np.random.default_rng(5)
t = np.arange(4096)

datasets = {
    "traffic-like": {"lane1": np.sin(2 * np.pi * t / 24) + 0.2 * rng.normal(size=4096)},
    "noisy": {"x": rng.normal(size=4096)},
    "short": {"x": np.sin(2 * np.pi * t[:800] / 24)},
    "regime-change": {"x": np.concatenate([np.sin(2 * np.pi * t[:2048] / 24),
                                           rng.normal(size=2048)])},
}

for name, cols in datasets.items():
    rec = recommend(Dataset.from_arrays(name, cols))
    print(rec.verdict())

###############################################################################
# Exogenous shocks cannot be detected from the series; the user flags them.
rec = recommend(Dataset.from_arrays("grid-load", datasets["traffic-like"]),
                SelectorPolicy(exogenous_dominated=True))
print(rec.verdict())
print(rec.families[0][1])
