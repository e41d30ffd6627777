"""Fixed-point computation of cut N-sets over a GLC.

Solutions take the union of their children's cut sets, objectives and local
states the product; an observed local state also counts as its own cut set.
Nodes are updated lowest rank first, re-queueing parents whenever a value
changes, until nothing is pending.
"""
from __future__ import annotations

import heapq
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from . import nsets
from .glc import Glc, Kind
from .network import LocalState
from .nsets import BOT, TOP, Forest, NSets


@dataclass
class SolveStats:
    visits: int = 0
    first_pass: int = 0
    changes: int = 0
    wall_time: float = 0.0

    @property
    def revisits(self) -> int:
        return self.visits - self.first_pass


@dataclass
class Valuation:
    glc: Glc
    algebra: NSets
    obs: frozenset[int]
    values: list[Forest]
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def n(self) -> int:
        return self.algebra.n

    def forest(self, node) -> Forest:
        nid = node if isinstance(node, int) else self.glc.node_id(node)
        return self.values[nid]

    def family(self, node) -> list[frozenset[LocalState]]:
        """Cut sets of ``node`` sorted by cardinality, then by element order."""
        decode = self.glc.net.decode
        sets = [tuple(decode(c) for c in s) for s in nsets.iter_sets(self.forest(node))]
        sets.sort(key=lambda s: (len(s), s))
        return [frozenset(s) for s in sets]

    def copy(self) -> "Valuation":
        return Valuation(self.glc, self.algebra, self.obs, list(self.values), self.stats)


def _evaluate(g: Glc, alg: NSets, obs: frozenset[int], values: list[Forest], nid: int) -> Forest:
    kind = g.kind(nid)
    kids = g.children[nid]
    if kind is Kind.SOLUTION:
        acc: Forest = BOT
        for c in kids:
            acc = nsets.union(acc, values[c])
            if acc is TOP:
                break
        return alg.simplify(acc)
    acc = TOP
    for c in kids:
        acc = alg.simplify(alg.product(acc, values[c]))
        if acc is BOT:
            break
    if kind is Kind.LOCAL:
        code = g.net.code(g.nodes[nid])
        if code in obs:
            acc = alg.simplify(nsets.union(acc, alg.singleton(code)))
    return acc


def update(g: Glc, v: Valuation, node) -> Valuation:
    """Return a copy of ``v`` with ``node`` re-evaluated from its children."""
    nid = node if isinstance(node, int) else g.node_id(node)
    if not 0 <= nid < len(g):
        raise KeyError(f"node id {nid} is not in the GLC")
    out = v.copy()
    out.values[nid] = _evaluate(g, v.algebra, v.obs, v.values, nid)
    return out


def observe_all(g: Glc) -> frozenset[LocalState]:
    return frozenset(g.local_states())


def empty_valuation(g: Glc, obs: Iterable[LocalState], n: int) -> Valuation:
    codes = frozenset(g.net.code(ls) for ls in obs)
    return Valuation(g, NSets(n), codes, [BOT] * len(g))


Monitor = Callable[[int, Forest, Forest], None]


def solve(g: Glc, obs: Optional[Iterable[LocalState]] = None, n: int = 1, *,
          rng: Optional[random.Random] = None, priority: Optional[Sequence[float]] = None,
          monitor: Optional[Monitor] = None) -> Valuation:
    """Run the worklist to a fixed point.

    Pending nodes are taken lowest rank first.  Ties go to the earliest
    created node, to the lowest ``priority[node]`` when given, or to a random
    pick when ``rng`` is given.  ``monitor`` is
    called as ``monitor(node_id, old, new)`` after every update.
    """
    if obs is None:
        obs = observe_all(g)
    obs = list(obs)
    for ls in obs:
        g.net.check_local(ls)
    v = empty_valuation(g, obs, n)
    alg, codes, values = v.algebra, v.obs, v.values
    rank = g.rank
    stats = v.stats
    start = time.perf_counter()

    def key(nid: int):
        if rng is not None:
            return (rank[nid], rng.random(), nid)
        if priority is not None:
            return (rank[nid], priority[nid], nid)
        return (rank[nid], nid, nid)

    heap = [key(i) for i in range(len(g))]
    heapq.heapify(heap)
    pending = [True] * len(g)
    seen = [False] * len(g)
    while heap:
        nid = heapq.heappop(heap)[2]
        pending[nid] = False
        old = values[nid]
        new = _evaluate(g, alg, codes, values, nid)
        stats.visits += 1
        if not seen[nid]:
            seen[nid] = True
            stats.first_pass += 1
        if monitor is not None:
            monitor(nid, old, new)
        if new != old:
            values[nid] = new
            stats.changes += 1
            for p in g.parents[nid]:
                if not pending[p]:
                    pending[p] = True
                    heapq.heappush(heap, key(p))
    stats.wall_time = time.perf_counter() - start
    return v


def dominates(alg: NSets, new: Forest, old: Forest) -> bool:
    """``new ⪰ old``: minimising ``new ∪ old`` gives back ``new``."""
    return alg.simplify(nsets.union(new, old)) == alg.simplify(new)


def chain_cutsets(v: Valuation, target: LocalState, rounds: int) -> list[frozenset[LocalState]]:
    """Enlarge the cut sets of ``target`` by substituting members with their own cut sets.

    Each round replaces one member ``b`` of a cut set by any cut set of
    ``b``.  Results are minimised but not bounded by N.
    """
    if rounds < 0:
        raise ValueError("rounds must be >= 0")
    fam = set(v.family(target))
    cache: dict[LocalState, list[frozenset[LocalState]]] = {}
    frontier = set(fam)
    for _ in range(rounds):
        new = set()
        for kps in frontier:
            for b in kps:
                if b not in v.glc:
                    continue
                if b not in cache:
                    cache[b] = v.family(b)
                for sub in cache[b]:
                    cand = (kps - {b}) | sub
                    if cand not in fam:
                        new.add(cand)
        if not new:
            break
        fam |= new
        frontier = new
    out = sorted(fam, key=lambda s: (len(s), sorted(s)))
    kept: list[frozenset[LocalState]] = []
    for s in out:
        if not any(k <= s for k in kept):
            kept.append(s)
    return kept


def trace_stats(v: Valuation, targets: Iterable[LocalState] = ()) -> dict:
    return {
        "nodes": len(v.glc),
        "visits": v.stats.visits,
        "first_pass": v.stats.first_pass,
        "revisits": v.stats.revisits,
        "wall_time": v.stats.wall_time,
        "family_sizes": {v.glc.net.fmt(t): len(v.family(t)) for t in targets},
    }
