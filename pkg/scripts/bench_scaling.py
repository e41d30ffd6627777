"""Solve time and memory on synthetic regulatory networks of growing size."""
import argparse
import csv
import resource
import sys
import time

from cutsets import build_glc, solve
from cutsets.synthetic import RegulatorySpec, default_targets, regulatory_network


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sizes", type=int, nargs="+", default=[1000, 4000, 16000])
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    out = csv.writer(sys.stdout)
    out.writerow(["components", "nodes", "edges", "n", "visits", "solve_s", "sets", "peak_mb"])
    for size in args.sizes:
        spec = RegulatorySpec(n_components=size, seed=args.seed)
        net, ctx = regulatory_network(spec)
        targets = default_targets(spec)
        g = build_glc(net, ctx, targets)
        for n in range(1, args.n + 1):
            t0 = time.perf_counter()
            v = solve(g, n=n)
            elapsed = time.perf_counter() - t0
            peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024
            out.writerow([size, len(g), g.n_edges, n, v.stats.visits, f"{elapsed:.2f}",
                          sum(len(v.family(t)) for t in targets), f"{peak:.0f}"])


if __name__ == "__main__":
    main()
