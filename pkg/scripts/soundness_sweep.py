"""Check solver cut sets against exhaustive reachability on many random networks."""
import argparse
import random
import time

from cutsets import build_glc, solve
from cutsets.oracle import RandomSpec, enumerate_cut_nsets, is_cut_set, random_network


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--networks", type=int, default=500)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--automata", type=int, default=5)
    p.add_argument("--states", type=int, default=3)
    p.add_argument("--labels", type=int, default=12)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    checked = violations = found = exact_total = 0
    t0 = time.perf_counter()
    for k in range(args.networks):
        seed = args.seed + k
        rng = random.Random(seed)
        spec = RandomSpec(n_automata=rng.randint(2, args.automata),
                          n_states=rng.randint(2, args.states),
                          n_labels=rng.randint(4, args.labels), seed=seed)
        net, ctx = random_network(spec)
        g = build_glc(net, ctx, net.local_states())
        v = solve(g, n=args.n)
        for ls in g.local_states():
            fam = [s for s in v.family(ls) if s != {ls}]
            exact = [s for s in enumerate_cut_nsets(net, ctx, ls, net.local_states(), args.n,
                                                    self_cut=False)]
            found += sum(1 for s in fam if s in exact)
            exact_total += len(exact)
            for kls in fam:
                checked += 1
                if not is_cut_set(net, ctx, ls, kls, self_cut=False):
                    violations += 1
                    print(f"seed {seed}: {net.fmt_set(kls)} does not cut {net.fmt(ls)}")
    elapsed = time.perf_counter() - t0
    print(f"{args.networks} networks, {checked} solver sets checked, {violations} violations")
    print(f"solver recovered {found} of {exact_total} minimal oracle sets "
          f"({100 * found / max(exact_total, 1):.1f}%) in {elapsed:.1f}s")


if __name__ == "__main__":
    main()
