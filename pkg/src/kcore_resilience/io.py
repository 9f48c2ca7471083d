"""CSV / JSON writers.  Nodes are written with their original labels."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path


def fmt(x) -> str:
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return format(x, ".12g")


def _write(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return path


def write_core_state(path, g, cs):
    sid = cs.subcore_id
    rows = ((g.labels[u], int(cs.core[u]), int(cs.core[u]), int(sid[u])) for u in g.nodes())
    return _write(path, ["node", "core", "shell", "subcore"], rows)


def write_removal_strengths(path, g, result):
    st = result.strengths
    rows = ((g.labels[u], int(result.core.core[u]), int(result.core_strength[u]), st.rs_id[u], int(st.rs_od[u]))
            for u in g.nodes())
    return _write(path, ["node", "core", "cs", "rs_id", "rs_od"], rows)


def write_insertion_strengths(path, g, st):
    rows = ((g.labels[u], st.is_id[u], st.is_od[u], st.is_id_star[u], st.is_od_star[u], st.stddev_is_id[u])
            for u in g.nodes())
    return _write(path, ["node", "is_id", "is_od", "is_id_star", "is_od_star", "stddev_is_id"], rows)


def write_dependency_edges(path, g, dep, trial=None):
    if trial is None:
        rows = ((g.labels[s], g.labels[d]) for s, d in dep.edges())
        return _write(path, ["src", "dst"], rows)
    return _write(path, ["trial", "src", "dst"], ((t, g.labels[s], g.labels[d])
                                                  for t, dg in enumerate(dep) for s, d in dg.edges()))


def write_candidate_edges(path, g, candidate_graphs):
    rows = ((t, g.labels[u], g.labels[v], tag)
            for t, ic in enumerate(candidate_graphs) for (u, v), tag in ic.edges.items())
    return _write(path, ["trial", "u", "v", "origin"], rows)


def write_critical_results(path, results):
    rows = ((r.method, c, f) for r in results for c, f in zip(r.budgets, r.F))
    return _write(path, ["method", "budget", "F"], rows)


def write_traces(path, traces):
    rows = ((m, t, tr.S_t[t], tr.S_t_std[t]) for m, (_, tr) in traces.items() for t in range(len(tr.S_t)))
    return _write(path, ["method", "t", "S_t_mean", "S_t_std"], rows)


def write_seed_sets(path, g, traces):
    rows = ((m, i, g.labels[x]) for m, (seeds, _) in traces.items() for i, x in enumerate(seeds))
    return _write(path, ["method", "rank", "node"], rows)


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n")
    return path


def _json_default(o):
    if hasattr(o, "tolist"):
        return o.tolist()
    if isinstance(o, (set, frozenset, tuple)):
        return list(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def read_json(path):
    with open(path) as fh:
        return json.load(fh)
