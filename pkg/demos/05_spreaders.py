"""
Seeding an SIR outbreak
=======================

"""

import numpy as np

from kcore_resilience.applications import spreader_experiment
from kcore_resilience.graph import Graph
from kcore_resilience.sir import SirConfig, default_beta

rng = np.random.default_rng(5)
n = 200
g = Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.05])

# just above the epidemic threshold <k>/<k^2>
beta = default_beta(g)
cfg = SirConfig(beta, recover_prob=0.01, steps=15, runs=50, seed=0)
print(f"beta = {beta}")

# 20% of nodes as seeds, picked per method
out = spreader_experiment(g, ["rs_od", "rs_id", "kshell", "iks", "random"], 0.2, cfg, trials=3)
for method, (seeds, trace) in out.items():
    print(f"{method:>7}: S_t at t=5 {trace.S_t[5]:.3f}, final {trace.final:.3f}")
