"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Two criteria cannot hold as stated for the four-automata example network
(see the notes on each); they are implemented literally and marked as
expected failures so the rest of the suite stays green.
"""
import random
import resource
import time

import pytest

from cutsets import nsets
from cutsets.glc import Objective, build_glc, compute_sol
from cutsets.nsets import NSets
from cutsets.oracle import RandomSpec, enumerate_cut_nsets, is_cut_set, random_network
from cutsets.solver import dominates, solve, update
from cutsets.synthetic import RegulatorySpec, default_targets, regulatory_network

from . import naive
from .conftest import fam

EXPECTED = {
    "a=3": ["a=3", "b=1", "b=3,c=2", "c=2,d=2"],
    "b=3": ["b=1", "b=3", "d=2"],
    "d=2": ["b=1", "d=2"],
    "b=1": ["b=1"],
    "c=2": ["c=2"],
}
EXPECTED_OBJECTIVE = ["b=1", "b=3,c=2", "c=2,d=2"]


def report(capsys, criterion, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")


def show(net, family):
    return " ".join(net.fmt_set(s) for s in sorted(family, key=lambda s: (len(s), sorted(s)))) or "-"


class Monitor:
    """Records every per-node valuation change that breaks the domination order."""

    def __init__(self, n):
        self.alg = NSets(n)
        self.calls = 0
        self.violations = 0

    def __call__(self, nid, old, new):
        self.calls += 1
        if not dominates(self.alg, new, old):
            self.violations += 1


def worked_valuation_mismatches(net, ctx, monitor=None):
    a3 = net.parse_local("a=3")
    g = build_glc(net, ctx, [a3])
    v = solve(g, n=2, monitor=monitor)
    bad = []
    for name, sets in EXPECTED.items():
        got = set(v.family(net.parse_local(name)))
        if got != fam(net, *sets):
            bad.append(f"{name}: {show(net, got)}")
    got = set(v.family(Objective(0, 1, 3)))
    if got != fam(net, *EXPECTED_OBJECTIVE):
        bad.append(f"a=1 ->* a=3: {show(net, got)}")
    for i, node in enumerate(g.nodes):
        if isinstance(node, Objective) and node.source == node.target and v.values[i] is not nsets.BOT:
            bad.append(f"{g.label(i)} not empty")
    for p, c in g.edges():
        if g.rank[c] > g.rank[p] or (g.rank[c] == g.rank[p]) != (g.scc[c] == g.scc[p]):
            bad.append("ranks disagree with components")
    return bad, v


@pytest.mark.xfail(strict=True, reason="the listed valuation needs d to start in state 1")
def test_criterion_1_stated_context(capsys, ex1):
    net, ctx = ex1
    t0 = time.perf_counter()
    bad, _ = worked_valuation_mismatches(net, ctx)
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 1.0
    report(capsys, "1 (context d={2}, as stated)", ok,
           f"{elapsed:.3f}s; mismatches: {'; '.join(bad) or 'none'}")
    assert ok


def test_criterion_1_worked_context(capsys, ex1_d1):
    net, ctx = ex1_d1
    t0 = time.perf_counter()
    monitor = Monitor(2)
    bad, v = worked_valuation_mismatches(net, ctx, monitor)
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 1.0 and monitor.violations == 0
    report(capsys, "1 (context d={1}, the one the listed valuation implies)", ok,
           f"{elapsed:.3f}s, {v.stats.visits} visits; mismatches: {'; '.join(bad) or 'none'}")
    assert ok


@pytest.mark.xfail(strict=True, reason="the closure of the example has 18 nodes, not 17/22")
def test_criterion_2(capsys, ex1, ex1_d1):
    t0 = time.perf_counter()
    net, _ = ex1
    sol = set(compute_sol(net, Objective(0, 1, 3)))
    sol_ok = sol == fam(net, "b=1,c=2", "b=3")
    counts = []
    for n_, c_ in (ex1, ex1_d1):
        g = build_glc(n_, c_, [n_.parse_local("a=3")])
        counts.append((len(g), g.n_edges))
    elapsed = time.perf_counter() - t0
    ok = sol_ok and all(c == (17, 22) for c in counts) and elapsed < 1.0
    report(capsys, 2, ok,
           f"solutions of a=1 ->* a=3: {show(net, sol)} ({'ok' if sol_ok else 'wrong'}); "
           f"graph nodes/edges with d={{2}}: {counts[0]}, with d={{1}}: {counts[1]}; "
           f"expected (17, 22); {elapsed:.3f}s")
    assert ok


def test_criterion_2_solutions_and_shape(capsys, ex1_d1):
    net, ctx = ex1_d1
    sol = set(compute_sol(net, Objective(0, 1, 3)))
    g = build_glc(net, ctx, [net.parse_local("a=3")])
    ok = sol == fam(net, "b=1,c=2", "b=3") and (len(g), g.n_edges) == (18, 19)
    report(capsys, "2 (solutions plus the drawn graph: 18 nodes, 19 edges)", ok,
           f"{show(net, sol)}; {len(g)} nodes, {g.n_edges} edges")
    assert ok


SOUNDNESS_NETWORKS = 220


@pytest.fixture(scope="module")
def soundness_runs():
    """Solve N=2 on seeded random networks, recording monotonicity and oracle checks."""
    t0 = time.perf_counter()
    runs = []
    for seed in range(SOUNDNESS_NETWORKS):
        rng = random.Random(seed)
        spec = RandomSpec(n_automata=rng.randint(2, 5), n_states=rng.randint(2, 3),
                          n_labels=rng.randint(4, 12), seed=seed)
        net, ctx = random_network(spec)
        g = build_glc(net, ctx, net.local_states())
        monitor = Monitor(2)
        v = solve(g, n=2, monitor=monitor)
        checked = violations = 0
        for ls in g.local_states():
            for kls in v.family(ls):
                if kls == {ls}:
                    continue
                checked += 1
                if not is_cut_set(net, ctx, ls, kls, self_cut=False):
                    violations += 1
        stable = all(update(g, v, i).values[i] == v.values[i] for i in range(len(g)))
        runs.append({"checked": checked, "violations": violations, "monitor": monitor,
                     "stable": stable, "visits": v.stats.visits, "nodes": len(g)})
    return runs, time.perf_counter() - t0


def test_criterion_3(capsys, soundness_runs):
    runs, elapsed = soundness_runs
    checked = sum(r["checked"] for r in runs)
    violations = sum(r["violations"] for r in runs)
    ok = len(runs) >= 200 and violations == 0 and elapsed < 60 and checked > 0
    report(capsys, 3, ok, f"{len(runs)} networks, {checked} cut sets checked, "
                          f"{violations} violations, {elapsed:.1f}s")
    assert ok


def random_raw_family(rng, universe, n):
    f = nsets.BOT
    for _ in range(rng.randint(0, 6)):
        elems = sorted(rng.sample(range(universe), rng.randint(0, min(universe, n))))
        chain = nsets.TOP
        for e in reversed(elems):
            chain = ((e, chain),)
        f = nsets.union(f, chain)
    return f


def test_criterion_4(capsys):
    rng = random.Random(20240)
    t0 = time.perf_counter()
    sequences = 1200
    ops = mismatches = 0
    sets_of = lambda f: set(nsets.to_sets(f))
    for _ in range(sequences):
        n = rng.randint(1, 3)
        universe = rng.randint(1, 8)
        alg = NSets(n)
        pool = [random_raw_family(rng, universe, n) for _ in range(3)]
        for _ in range(rng.randint(3, 8)):
            a, b = rng.choice(pool), rng.choice(pool)
            op = rng.choice(["union", "product", "remove", "simplify"])
            if op == "union":
                out = nsets.union(a, b)
                good = sets_of(out) == naive.prefix_reduce(sets_of(a) | sets_of(b))
            elif op == "product":
                out = alg.product(a, b)
                expected = naive.bound(naive.times(sets_of(a), sets_of(b)), n)
                good = naive.minimize(sets_of(out)) == naive.minimize(expected)
            elif op == "remove":
                out = alg.remove(a, b)
                good = sets_of(out) == naive.without_sursets(sets_of(a), sets_of(b))
            else:
                out = alg.simplify(a)
                good = sets_of(out) == naive.minimize(sets_of(a))
            try:
                nsets.check_invariants(out, n)
            except AssertionError:
                good = False
            ops += 1
            mismatches += not good
            pool.append(out)
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 30
    report(capsys, 4, ok, f"{sequences} sequences, {ops} operations, {mismatches} mismatches, "
                          f"{elapsed:.1f}s")
    assert ok


def test_criterion_5(capsys, ex1, ex1_d1, soundness_runs):
    monitors = []
    stable = True
    for net, ctx in (ex1, ex1_d1):
        m = Monitor(2)
        g = build_glc(net, ctx, [net.parse_local("a=3")])
        v = solve(g, n=2, monitor=m)
        stable &= all(update(g, v, i).values[i] == v.values[i] for i in range(len(g)))
        monitors.append(m)
    runs, _ = soundness_runs
    monitors += [r["monitor"] for r in runs]
    stable &= all(r["stable"] for r in runs)
    calls = sum(m.calls for m in monitors)
    violations = sum(m.violations for m in monitors)
    ok = violations == 0 and stable and calls > 0
    report(capsys, 5, ok, f"{len(monitors)} runs, {calls} updates observed, "
                          f"{violations} order violations, worklist emptied at a fixed point: {stable}")
    assert ok


def test_criterion_6(capsys, ex1_d1):
    net, ctx = ex1_d1
    a3 = net.parse_local("a=3")
    exact = enumerate_cut_nsets(net, ctx, a3, net.local_states(), 1)
    found = solve(build_glc(net, ctx, [a3]), n=1).family(a3)
    verified = all(is_cut_set(net, ctx, a3, s) for s in found)
    oracle_only = [s for s in exact if s not in found]
    ok = (set(exact) == fam(net, "a=1", "a=3", "b=1") and set(found) == fam(net, "a=3", "b=1")
          and verified and set(found) <= set(exact) and oracle_only == [net.parse_locals("a=1")])
    report(capsys, 6, ok, f"oracle {show(net, exact)}; solver {show(net, found)}; "
                          f"oracle only {show(net, oracle_only)}")
    assert ok


def test_criterion_7(capsys):
    spec = RegulatorySpec()
    net, ctx = regulatory_network(spec)
    targets = default_targets(spec)
    t0 = time.perf_counter()
    g = build_glc(net, ctx, targets)
    v = solve(g, n=3)
    elapsed = time.perf_counter() - t0
    peak_mb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024
    sizes = [len(v.family(t)) for t in targets]
    ok = len(g) >= 20_000 and elapsed < 60 and peak_mb < 2048
    report(capsys, 7, ok, f"{len(g)} nodes, {g.n_edges} edges, N=3 in {elapsed:.1f}s "
                          f"({v.stats.visits} visits), peak RSS {peak_mb:.0f} MB, "
                          f"family sizes {sizes}")
    assert ok


def test_criterion_8(capsys, ex1, ex1_d1):
    cases = [(n_, c_, [n_.parse_local("a=3")]) for n_, c_ in (ex1, ex1_d1)]
    for seed in range(20):
        net, ctx = random_network(RandomSpec(n_automata=5, n_states=3, n_labels=12, seed=1000 + seed))
        cases.append((net, ctx, net.local_states()))
    runs = differ = 0
    for net, ctx, omega in cases:
        g = build_glc(net, ctx, omega)
        base = solve(g, n=2).values
        for shuffle in range(50):
            runs += 1
            differ += solve(g, n=2, rng=random.Random(shuffle)).values != base
    ok = differ == 0
    report(capsys, 8, ok, f"{len(cases)} graphs, {runs} shuffled runs, {differ} differing")
    assert ok
