"""
Which edges hurt the k-core most?
=================================

"""

import numpy as np

from kcore_resilience.applications import critical_edge_experiment
from kcore_resilience.graph import Graph

rng = np.random.default_rng(11)
n = 150
g = Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.05])
budgets = [5, 10, 20, 40]

# F = percent of nodes whose core number moved after the budgeted change
for kind, methods in (("remove", ["rs_id", "rs_od", "random", "degree", "core_strength"]),
                      ("insert", ["is_id", "is_od", "random", "degree"])):
    print(kind)
    for r in critical_edge_experiment(g, kind, methods, budgets, seed=0, random_runs=20, trials=3):
        print(f"  {r.method:>14}: " + "  ".join(f"{f:5.1f}" for f in r.F))
