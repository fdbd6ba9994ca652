"""Sweep the weight-matrix spectral radius against the snowflake parameter.

Writes a CSV with one column per sample graph so the monotone growth of the
radius, and the root crossing radius 1, can be eyeballed or plotted.

    python3 scripts/radius_sweep.py [out.csv]
"""

import csv
import sys

import numpy as np

from cxcdyn.dimension import graph_spectral_radius
from cxcdyn.graphs import make_graph

GRAPHS = {
    "two_loops_d2": make_graph(1, [(1, 1, 2), (1, 1, 2)]),
    "two_loops_d4": make_graph(1, [(1, 1, 4), (1, 1, 4)]),
    "mixed_d2_d8": make_graph(1, [(1, 1, 2), (1, 1, 8)]),
    "two_vertex": make_graph(2, [(1, 2, 2), (1, 2, 2), (2, 1, 3), (2, 2, 2)]),
}


def main(path="radius_sweep.csv"):
    alphas = np.geomspace(0.05, 8.0, 60)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["alpha"] + list(GRAPHS))
        for alpha in alphas:
            row = [f"{alpha:.6f}"]
            for graph in GRAPHS.values():
                row.append(f"{graph_spectral_radius(graph, float(alpha)).radius:.9f}")
            writer.writerow(row)
    print(f"wrote {len(alphas)} rows to {path}")
    for name, graph in GRAPHS.items():
        lo = graph_spectral_radius(graph, 0.05).radius
        hi = graph_spectral_radius(graph, 8.0).radius
        print(f"  {name}: radius runs {lo:.4f} -> {hi:.4f}")


if __name__ == "__main__":
    main(*sys.argv[1:])
