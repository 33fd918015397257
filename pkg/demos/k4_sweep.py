"""
Exact sigma(K4, n) sweep
========================

Runs the same sweep as ``potentialh sweep K4 -n 8..11`` and writes the CSV
next to this script. At n = 8 the answer exceeds 4n - 4 because the
sequence (7^4, 0) is graphic, not potentially K4-graphic, and has sum 28;
without zero terms the value drops back to 28.
"""

import sys
from pathlib import Path

from potentialh.cli import SWEEP_COLUMNS, RunConfig, _csv_text, sweep_rows
from potentialh.graphkit import complete_graph
from potentialh.oracle import sigma_exact

k4 = complete_graph(4).with_label("K4")
ns = range(8, 12) if len(sys.argv) < 2 else range(8, int(sys.argv[1]) + 1)

rows = sweep_rows([k4], list(ns), RunConfig())
text = _csv_text(rows, SWEEP_COLUMNS)
print(text)
out = Path(__file__).with_name("k4_sweep.csv")
out.write_text(text + "\n")
print(f"wrote {out}")

# zero-free comparison at n = 8
res = sigma_exact(k4, 8, positive=True)
print(f"zero-free sigma(K4, 8) = {res.sigma}, witness {res.witness}")
