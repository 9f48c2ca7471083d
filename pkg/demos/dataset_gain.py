"""
Removal gain on downloaded networks
===================================

Usage: python3 demos/dataset_gain.py DATA_DIR

DATA_DIR holds edge lists named after the networks (jazz.txt, USAir97.txt,
...).  Nothing is downloaded.  Prints our %gain next to the reference value.
"""

import sys
from pathlib import Path

from kcore_resilience.cli import benchmark_removal
from kcore_resilience.cores import core_decompose
from kcore_resilience.graph import load_edge_list

REFERENCE_GAIN = {
    "as19971108": 50.2, "as19990309": 54.4, "bio-dmela": 79.4, "ca-CondMat": 89.0, "ca-Erdos992": 39.1,
    "ca-GrQc": 84.4, "inf-openflights": 86.8, "inf-power": 63.8, "jazz": 97.8, "p2p-Gnutella08": 80.3,
    "p2p-Gnutella09": 78.8, "soc-hamsterster": 93.6, "soc-wiki-Vote": 81.2, "tech-routers-rf": 77.8,
    "tech-WHOIS": 89.9, "USAir97": 91.2, "web-spam": 91.5,
}

root = Path(sys.argv[1] if len(sys.argv) > 1 else "data")
found = 0
for name, ref in REFERENCE_GAIN.items():
    path = next((root / f"{name}{ext}" for ext in (".txt", ".edges", ".mtx") if (root / f"{name}{ext}").exists()), None)
    if path is None:
        continue
    found += 1
    g = load_edge_list(path)
    rep = benchmark_removal(g, core_decompose(g))
    gain = 100 * rep["gain"]
    flag = "ok" if abs(gain - ref) <= 0.5 else "off"
    print(f"{name:>16} |V|={g.n:6d} |E|={g.m:6d} gain {gain:5.1f}% (ref {ref}%) {flag} speedup {rep['speedup']:.2f}x")
if not found:
    print(f"no networks found under {root}")
