"""Solve the four-automata example for a3 under both contexts and compare with the oracle."""
import argparse
from pathlib import Path

from cutsets import build_glc, load_network, solve
from cutsets.oracle import enumerate_cut_nsets

MODELS = Path(__file__).resolve().parent.parent / "models"


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=2)
    args = p.parse_args()
    for name in ("example1.an", "example1_d1.an"):
        net, ctx = load_network(MODELS / name)
        a3 = net.parse_local("a=3")
        g = build_glc(net, ctx, [a3])
        v = solve(g, n=args.n)
        print(f"{name}: {len(g)} nodes, {g.n_edges} edges, {v.stats.visits} visits")
        for i, node in enumerate(g.nodes):
            print(f"  rank {g.rank[i]:>2}  {g.label(i):<32} "
                  + " ".join(net.fmt_set(s) for s in v.family(i)))
        exact = enumerate_cut_nsets(net, ctx, a3, net.local_states(), args.n)
        print("  oracle:", " ".join(net.fmt_set(s) for s in exact))


if __name__ == "__main__":
    main()
