"""Exact reference checks by explicit-state exploration.

Everything here is deliberately naive: breadth-first search over global
states encoded as mixed-radix integers, and cut-set enumeration by testing
every candidate subset.  Use it on small models only.
"""
from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .network import AutomataNetwork, Context, Label, LocalState, disable

DEFAULT_BUDGET = 10**6
_BITMAP_LIMIT = 1 << 24


class BudgetExceeded(RuntimeError):
    """The exploration visited more global states than allowed."""


@dataclass(frozen=True)
class ExplorationBudget:
    max_states: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.max_states < 1:
            raise ValueError("budget must be positive")


def _as_budget(budget) -> ExplorationBudget:
    if budget is None:
        return ExplorationBudget()
    if isinstance(budget, ExplorationBudget):
        return budget
    return ExplorationBudget(int(budget))


class _Encoding:
    def __init__(self, net: AutomataNetwork):
        self.sizes = net.sizes
        radix = []
        r = 1
        for k in net.sizes:
            radix.append(r)
            r *= k
        self.radix = radix
        self.total = r

    def encode(self, s) -> int:
        return sum((x - 1) * r for x, r in zip(s, self.radix))

    def decode(self, code: int) -> tuple[int, ...]:
        return tuple((code // r) % k + 1 for r, k in zip(self.radix, self.sizes))

    def compile(self, lab: Label):
        return [(self.radix[a], self.sizes[a], i - 1, (j - i) * self.radix[a])
                for a, i, j in lab.moves]


def find_trace(net: AutomataNetwork, ctx: Context, target: LocalState,
               budget=None) -> Optional[tuple[tuple[int, ...], list[str]]]:
    """Shortest witness ``(initial state, labels)`` reaching ``target``, or None.

    Raises BudgetExceeded once more than ``budget`` global states are visited.
    """
    net.check_local(target)
    limit = _as_budget(budget).max_states
    enc = _Encoding(net)
    labels = [(lab.name, enc.compile(lab)) for lab in net.labels]
    t_radix, t_size, t_state = enc.radix[target.automaton], net.sizes[target.automaton], target.state - 1
    if enc.total <= _BITMAP_LIMIT:
        seen_map = bytearray(enc.total)
        seen_set = None
    else:
        seen_map = None
        seen_set: set[int] = set()
    parent: dict[int, tuple[int, str]] = {}
    queue: deque[int] = deque()
    count = 0

    def visit(code: int) -> bool:
        nonlocal count
        if seen_map is not None:
            if seen_map[code]:
                return False
            seen_map[code] = 1
        else:
            if code in seen_set:
                return False
            seen_set.add(code)
        count += 1
        if count > limit:
            raise BudgetExceeded(f"more than {limit} global states explored")
        return True

    def witness(code: int):
        path = []
        while code in parent:
            code, name = parent[code]
            path.append(name)
        path.reverse()
        return enc.decode(code), path

    ctx.validate(net)
    for s in itertools.product(*(sorted(ctx[a]) for a in range(net.n_automata))):
        code = enc.encode(s)
        if visit(code):
            if (code // t_radix) % t_size == t_state:
                return witness(code)
            queue.append(code)
    while queue:
        code = queue.popleft()
        for name, moves in labels:
            nxt = code
            for radix, size, src, delta in moves:
                if (code // radix) % size != src:
                    break
                nxt += delta
            else:
                if visit(nxt):
                    parent[nxt] = (code, name)
                    if (nxt // t_radix) % t_size == t_state:
                        return witness(nxt)
                    queue.append(nxt)
    return None


def reachable(net: AutomataNetwork, ctx: Context, target: LocalState, budget=None) -> bool:
    return find_trace(net, ctx, target, budget) is not None


def is_cut_set(net: AutomataNetwork, ctx: Context, target: LocalState,
               kls: Iterable[LocalState], budget=None, *, self_cut: bool = True) -> bool:
    """True iff disabling ``kls`` makes ``target`` unreachable from the context.

    Disabling only removes labels leaving a local state, so it never stops
    the target from being entered.  With ``self_cut`` a set holding the
    target itself still counts as a cut when the target is not initially
    present, matching the ``{target}`` singleton the solver reports for
    observed states.  Pass ``self_cut=False`` for the bare reachability test.
    """
    kls = frozenset(kls)
    if self_cut and target in kls and target.state not in ctx[target.automaton]:
        net.check_local(target)
        return True
    return not reachable(disable(net, kls), ctx, target, budget)


def enumerate_cut_nsets(net: AutomataNetwork, ctx: Context, target: LocalState,
                        obs: Iterable[LocalState], n: int,
                        budget=None, *, self_cut: bool = True) -> list[frozenset[LocalState]]:
    """All inclusion-minimal cut sets of size <= n drawn from ``obs``.

    Candidates are tested by increasing cardinality; sursets of cut sets
    already found are skipped.
    """
    pool = sorted(set(obs))
    found: list[frozenset[LocalState]] = []
    for size in range(0, n + 1):
        for combo in itertools.combinations(pool, size):
            cand = frozenset(combo)
            if any(f <= cand for f in found):
                continue
            if is_cut_set(net, ctx, target, cand, budget, self_cut=self_cut):
                found.append(cand)
        if found and not found[0]:
            break
    return sorted(found, key=lambda s: (len(s), sorted(s)))


@dataclass(frozen=True)
class RandomSpec:
    n_automata: int = 4
    n_states: int = 3
    n_labels: int = 8
    max_sync: int = 3
    seed: int = 0

    def __post_init__(self):
        if min(self.n_automata, self.n_states, self.n_labels, self.max_sync) < 1:
            raise ValueError("random network bounds must be positive")


def random_network(spec: RandomSpec) -> tuple[AutomataNetwork, Context]:
    """Seeded random network: each label moves 1..max_sync distinct automata."""
    rng = random.Random(spec.seed)
    names = tuple(f"x{i}" for i in range(spec.n_automata))
    low = 1 if spec.n_states == 1 else 2
    sizes = tuple(rng.randint(low, spec.n_states) for _ in names)
    labels = []
    for li in range(spec.n_labels):
        m = rng.randint(1, min(spec.max_sync, spec.n_automata))
        touched = sorted(rng.sample(range(spec.n_automata), m))
        moves = tuple((a, rng.randint(1, sizes[a]), rng.randint(1, sizes[a])) for a in touched)
        labels.append(Label(f"t{li}", moves))
    net = AutomataNetwork(names, sizes, tuple(labels))
    ctx_states = []
    for k in sizes:
        if rng.random() < 0.7:
            ctx_states.append(frozenset({rng.randint(1, k)}))
        else:
            ctx_states.append(frozenset(rng.sample(range(1, k + 1), rng.randint(1, k))))
    return net, Context(tuple(ctx_states))
