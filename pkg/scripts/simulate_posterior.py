"""Posterior samples of edge weights by many independent reinforced walks.

Runs ``--walkers`` walks of ``--steps`` steps on the triangle (or the
complete graph with loops on ``--vertices`` vertices) and compares the
sample means with prior means from importance sampling on the simplex.

    python scripts/simulate_posterior.py --steps 10000 --walkers 10000 --seed 1
"""
import argparse
import math
import time

import numpy as np

from revmarkov.errw import RandomSource, estimate_stationary, simulate_edge_counts
from revmarkov.graph import build_graph, complete_graph
from revmarkov.prior import PriorParams, log_density_many, sample_uniform_simplex


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=10_000)
    parser.add_argument("--walkers", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--vertices", type=int, default=0, help="complete graph with loops on this many vertices")
    parser.add_argument("--importance-samples", type=int, default=1_000_000)
    args = parser.parse_args()

    if args.vertices:
        g = complete_graph(range(1, args.vertices + 1))
    else:
        g = build_graph([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    params = PriorParams.uniform(g, 0)

    t0 = time.perf_counter()
    counts = simulate_edge_counts(params, args.steps, args.walkers, RandomSource(args.seed), args.workers)
    elapsed = time.perf_counter() - t0
    freq = counts / args.steps
    se = freq.std(axis=0, ddof=1) / math.sqrt(args.walkers)

    xs = sample_uniform_simplex(np.random.default_rng(args.seed), args.importance_samples, g.num_edges)
    w = np.exp(log_density_many(params, xs))
    prior_mean = (w[:, None] * xs).sum(axis=0) / w.sum()

    print(f"{args.walkers} walkers x {args.steps} steps in {elapsed:.2f}s")
    print(f"{'edge':>8} {'walk mean':>10} {'se':>8} {'prior mean':>11}")
    for e in range(g.num_edges):
        print(f"{g.edge_label(e):>8} {freq[:, e].mean():10.5f} {se[e]:8.5f} {prior_mean[e]:11.5f}")

    mean_nu, _ = estimate_stationary(params, args.steps, min(args.walkers, 2000), RandomSource(args.seed + 1))
    print("stationary distribution estimate", np.round(mean_nu, 5), "sum", mean_nu.sum())


if __name__ == "__main__":
    main()
