"""Plot a sweep CSV: throughput against load, one curve per (epsilon, N, decoder).

    polar-aloha simulate --N 64 --epsilon 0,0.1 --G 0.3,0.5,0.7,0.9 --out sweep.csv
    python demos/plot_sweep.py sweep.csv sweep.png
"""
import sys
from collections import defaultdict

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from polar_aloha.sim import read_csv

rows = read_csv(sys.argv[1])
curves = defaultdict(list)
for row in rows:
    curves[(row["epsilon"], row["N"], row["decoder"], row["L"])].append(row)
for (eps, N, dec, L), pts in sorted(curves.items()):
    pts.sort(key=lambda p: p["G"])
    plt.plot([p["G"] for p in pts], [p["T"] for p in pts], "o-", label=f"N={N} eps={eps} {dec} L={L}")
    plt.fill_between([p["G"] for p in pts], [p["T_lower"] for p in pts],
                     [p["T_upper"] for p in pts], alpha=0.15)
plt.xlabel("offered load G")
plt.ylabel("throughput T")
plt.legend(fontsize=7)
plt.savefig(sys.argv[2] if len(sys.argv) > 2 else "sweep.png", dpi=150)
