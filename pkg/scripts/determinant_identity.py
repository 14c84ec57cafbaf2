"""Cycle-matrix determinant against the spanning-tree expansion on random graphs.

    python scripts/determinant_identity.py --graphs 200 --max-vertices 7
"""
import argparse

import numpy as np

from revmarkov.graph import build_graph, complete_graph, kirchhoff_count
from revmarkov.paths import SimplexPoint
from revmarkov.prior import det_cycle_matrix


def random_graph(rng, n):
    order = rng.permutation(n)
    edges = {tuple(sorted((int(order[i]), int(order[rng.integers(i)])))) for i in range(1, n)}
    edges |= {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5}
    edges |= {(u, u) for u in range(n) if rng.random() < 0.3}
    return build_graph(range(n), sorted(edges))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--graphs", type=int, default=100)
    parser.add_argument("--max-vertices", type=int, default=6)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    k4 = complete_graph(range(4), loops=False)
    x = SimplexPoint(k4, np.full(6, 1 / 6))
    print(f"K4, uniform weights: det = {det_cycle_matrix(k4, x):.6f}")

    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.graphs):
        g = random_graph(rng, int(rng.integers(2, args.max_vertices + 1)))
        x = SimplexPoint(g, rng.dirichlet(np.ones(g.num_edges)))
        a = det_cycle_matrix(g, x)
        b = det_cycle_matrix(g, x, method="spanning-trees")
        worst = max(worst, abs(a / b - 1))
    print(f"{args.graphs} random graphs: max relative difference {worst:.2e}")
    print(f"spanning trees of K{args.max_vertices}: {kirchhoff_count(complete_graph(range(args.max_vertices), loops=False))}")


if __name__ == "__main__":
    main()
