"""
Core numbers and single-edge updates
====================================

"""

import numpy as np

from kcore_resilience.cores import core_decompose, delta_partition
from kcore_resilience.graph import loads
from kcore_resilience.incremental import DynamicCores, insert_edge_update, remove_edge_update

# a node with two triangles hanging off it
g = loads("""
1 2
1 3
1 4
1 5
2 3
4 5
""")
cs = core_decompose(g)
print("core numbers:", dict(zip(g.labels, cs.core.tolist())))
print("shells:", {k: [g.labels[u] for u in v] for k, v in cs.shell_index.items()})

# neighbors split by core number relative to each node
dp = delta_partition(g, cs)
print("|delta >=| per node:", [len(dp.geq(u)) for u in g.nodes()])

# what one removal or insertion would do, without touching g
a, b = g.node_of(1), g.node_of(2)
print("remove (1,2):", remove_edge_update(g, cs, (a, b)).as_dict())
c, d = g.node_of(2), g.node_of(4)
print("insert (2,4):", insert_edge_update(g, cs, (c, d)).as_dict())

# a stream of changes applied to a private copy
dyn = DynamicCores(g, cs)
dyn.insert(c, d)
dyn.insert(g.node_of(3), g.node_of(5))
print("after two insertions:", np.array(dyn.core))
