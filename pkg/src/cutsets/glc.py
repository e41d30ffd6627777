"""Local solutions of objectives and the Graph of Local Causality (GLC).

The GLC links each local state to the objectives that could produce it from
the context, each objective to its local solutions, and each solution to the
local states it requires.  Nodes carry a topological rank computed from the
strongly connected component condensation, children never ranked above
their parents.
"""
from __future__ import annotations

import enum
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Union

from .network import AutomataNetwork, Context, LocalState


@dataclass(frozen=True, order=True)
class Objective:
    """Local reachability of ``target`` from ``source`` inside one automaton."""

    automaton: int
    source: int
    target: int

    @property
    def source_state(self) -> LocalState:
        return LocalState(self.automaton, self.source)

    @property
    def target_state(self) -> LocalState:
        return LocalState(self.automaton, self.target)


@dataclass(frozen=True)
class Solution:
    objective: Objective
    locals: frozenset[LocalState]


GlcNode = Union[LocalState, Objective, Solution]


class Kind(enum.IntEnum):
    LOCAL = 0
    OBJECTIVE = 1
    SOLUTION = 2


def node_kind(node: GlcNode) -> Kind:
    if isinstance(node, Objective):
        return Kind.OBJECTIVE
    if isinstance(node, Solution):
        return Kind.SOLUTION
    return Kind.LOCAL


def ext(net: AutomataNetwork, automaton: int, label: str) -> frozenset[LocalState]:
    """Source local states of ``label`` in automata other than ``automaton``."""
    lab = net.label(label)
    return frozenset(LocalState(b, i) for b, i, _ in lab.moves if b != automaton)


def acyclic_sequences(net: AutomataNetwork, automaton: int, source: int,
                      target: int) -> list[list[str]]:
    """Label sequences of all simple paths from ``source`` to ``target``.

    Exponential in the number of states of the automaton in the worst case.
    """
    if source == target:
        return [[]]
    succ: dict[int, list[tuple[str, int]]] = {}
    for i, lab, j in net.transitions(automaton):
        if i != j:
            succ.setdefault(i, []).append((lab, j))
    out: list[list[str]] = []
    path: list[str] = []
    on_path = {source}

    def dfs(i: int) -> None:
        for lab, j in succ.get(i, ()):
            if j == target:
                out.append(path + [lab])
            elif j not in on_path:
                on_path.add(j)
                path.append(lab)
                dfs(j)
                path.pop()
                on_path.discard(j)

    dfs(source)
    return out


def _minimal(family: Iterable[frozenset]) -> list[frozenset]:
    uniq = sorted(set(family), key=lambda s: (len(s), sorted(s)))
    kept: list[frozenset] = []
    for s in uniq:
        if not any(k <= s for k in kept):
            kept.append(s)
    return kept


def compute_sol(net: AutomataNetwork, obj: Objective) -> list[frozenset[LocalState]]:
    """Minimal local solutions of ``obj``, sorted by size then elements.

    Each acyclic path contributes the union of the external preconditions of
    its labels.  The objective's own source state is dropped from every
    solution before minimisation.
    """
    if obj.source == obj.target:
        return [frozenset()]
    ext_cache: dict[str, frozenset[LocalState]] = {}
    found = []
    for seq in acyclic_sequences(net, obj.automaton, obj.source, obj.target):
        ls: frozenset[LocalState] = frozenset()
        for lab in seq:
            if lab not in ext_cache:
                ext_cache[lab] = ext(net, obj.automaton, lab)
            ls = ls | ext_cache[lab]
        found.append(ls - {obj.source_state})
    return _minimal(found)


@dataclass
class Glc:
    net: AutomataNetwork
    context: Context
    omega: frozenset[LocalState]
    nodes: list[GlcNode] = field(default_factory=list)
    index: dict = field(default_factory=dict)
    children: list[list[int]] = field(default_factory=list)
    parents: list[list[int]] = field(default_factory=list)
    rank: list[int] = field(default_factory=list)
    scc: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, node) -> bool:
        return node in self.index

    def node_id(self, node: GlcNode) -> int:
        try:
            return self.index[node]
        except KeyError:
            raise KeyError(f"node {node!r} is not in the GLC") from None

    def kind(self, nid: int) -> Kind:
        return node_kind(self.nodes[nid])

    @property
    def n_edges(self) -> int:
        return sum(len(c) for c in self.children)

    def edges(self) -> list[tuple[int, int]]:
        return [(p, c) for p, cs in enumerate(self.children) for c in cs]

    def local_states(self) -> list[LocalState]:
        return [n for n in self.nodes if node_kind(n) is Kind.LOCAL]

    def components(self) -> list[list[int]]:
        """Strongly connected components as lists of node ids, by first member."""
        groups: dict[int, list[int]] = {}
        for nid, c in enumerate(self.scc):
            groups.setdefault(c, []).append(nid)
        return sorted(groups.values(), key=lambda g: g[0])

    def label(self, nid: int) -> str:
        node = self.nodes[nid]
        fmt = self.net.fmt
        if isinstance(node, Objective):
            return f"{fmt(node.source_state)} ->* {fmt(node.target_state)}"
        if isinstance(node, Solution):
            obj = node.objective
            return (f"<{fmt(obj.source_state)} ->* {fmt(obj.target_state)}, "
                    f"{self.net.fmt_set(node.locals)}>")
        return fmt(node)

    def size_bounds_hold(self) -> bool:
        """Node counts within |LS| and |Obj|; |E| <= |Obj| + |Sol| + sum of |ls|."""
        n_ls = sum(1 for n in self.nodes if node_kind(n) is Kind.LOCAL)
        objs = [n for n in self.nodes if node_kind(n) is Kind.OBJECTIVE]
        sols = [n for n in self.nodes if node_kind(n) is Kind.SOLUTION]
        return (n_ls <= self.net.n_local_states
                and len(objs) <= sum(k * k for k in self.net.sizes)
                and len(self.nodes) == n_ls + len(objs) + len(sols)
                and self.n_edges <= len(objs) + len(sols) + sum(len(s.locals) for s in sols))

    def to_json(self) -> dict:
        return {
            "nodes": [
                {"id": i, "kind": self.kind(i).name.lower(), "label": self.label(i),
                 "rank": self.rank[i]}
                for i in range(len(self.nodes))
            ],
            "edges": [[p, c] for p, c in self.edges()],
        }


def _mandated_children(net: AutomataNetwork, ctx: Context, node: GlcNode,
                       sol_cache: dict) -> list[GlcNode]:
    if isinstance(node, Objective):
        if node not in sol_cache:
            sol_cache[node] = compute_sol(net, node)
        return [Solution(node, ls) for ls in sol_cache[node]]
    if isinstance(node, Solution):
        return sorted(node.locals)
    return [Objective(node.automaton, i, node.state) for i in sorted(ctx[node.automaton])]


def build_glc(net: AutomataNetwork, ctx: Context, omega: Iterable[LocalState]) -> Glc:
    """Least closure from ``omega``; nodes are numbered in breadth-first creation order."""
    omega = frozenset(omega)
    for ls in omega:
        net.check_local(ls)
    g = Glc(net, ctx, omega)
    sol_cache: dict = {}

    def add(node: GlcNode) -> int:
        nid = g.index.get(node)
        if nid is None:
            nid = len(g.nodes)
            g.index[node] = nid
            g.nodes.append(node)
            g.children.append([])
            g.parents.append([])
            queue.append(nid)
        return nid

    queue: deque[int] = deque()
    for ls in sorted(omega):
        add(ls)
    while queue:
        nid = queue.popleft()
        for child in _mandated_children(net, ctx, g.nodes[nid], sol_cache):
            cid = add(child)
            g.children[nid].append(cid)
            g.parents[cid].append(nid)
    assign_ranks(g)
    return g


def tarjan(n: int, children: list[list[int]]) -> list[list[int]]:
    """Strongly connected components, emitted children-first (iterative)."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, pos = work[-1]
            kids = children[v]
            if pos < len(kids):
                work[-1] = (v, pos + 1)
                w = kids[pos]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def assign_ranks(g: Glc) -> None:
    """Rank = condensation level counted from the leaves, starting at 1."""
    n = len(g.nodes)
    comps = tarjan(n, g.children)
    scc = [0] * n
    for ci, comp in enumerate(comps):
        for v in comp:
            scc[v] = ci
    level = [0] * len(comps)
    for ci, comp in enumerate(comps):
        lv = 1
        for v in comp:
            for w in g.children[v]:
                cw = scc[w]
                if cw != ci and level[cw] + 1 > lv:
                    lv = level[cw] + 1
        level[ci] = lv
    g.scc = scc
    g.rank = [level[scc[v]] for v in range(n)]


def check_closure(g: Glc) -> None:
    """Raise AssertionError unless ``g`` is exactly the least closure from its seed."""
    sol_cache: dict = {}
    for nid, node in enumerate(g.nodes):
        want = [g.index.get(c) for c in _mandated_children(g.net, g.context, node, sol_cache)]
        if None in want or sorted(want) != sorted(g.children[nid]):
            raise AssertionError(f"children of {g.label(nid)} differ from the mandated set")
    seen = set()
    todo = [g.index[ls] for ls in g.omega]
    while todo:
        v = todo.pop()
        if v in seen:
            continue
        seen.add(v)
        todo.extend(g.children[v])
    if len(seen) != len(g.nodes):
        raise AssertionError("GLC contains nodes unreachable from the seed")


def prune_glc(g: Glc) -> Glc:
    """Drop objectives without solutions, then anything no longer reachable from the seed.

    An objective without solutions is valued ``{∅}``, the identity of the
    product its parent computes, so removing it leaves the remaining
    valuation unchanged.
    """
    keep = [not (g.kind(i) is Kind.OBJECTIVE and not g.children[i]) for i in range(len(g))]
    reach = [False] * len(g)
    todo = [g.index[ls] for ls in sorted(g.omega)]
    while todo:
        v = todo.pop()
        if reach[v] or not keep[v]:
            continue
        reach[v] = True
        todo.extend(g.children[v])
    old_ids = [i for i in range(len(g)) if reach[i]]
    new_id = {old: new for new, old in enumerate(old_ids)}
    out = Glc(g.net, g.context, g.omega)
    for old in old_ids:
        node = g.nodes[old]
        out.index[node] = len(out.nodes)
        out.nodes.append(node)
        out.children.append([new_id[c] for c in g.children[old] if c in new_id])
        out.parents.append([])
    for p, cs in enumerate(out.children):
        for c in cs:
            out.parents[c].append(p)
    assign_ranks(out)
    return out


def export_dot(g: Glc) -> str:
    """Deterministic DOT rendering: local states boxed, solutions as small circles."""
    if not g.nodes:
        return "digraph glc {}\n"
    lines = ["digraph glc {"]
    for i in range(len(g.nodes)):
        kind = g.kind(i)
        label = json.dumps(g.label(i))
        if kind is Kind.LOCAL:
            attrs = f"shape=box, label={label}"
        elif kind is Kind.OBJECTIVE:
            attrs = f"shape=plaintext, label={label}"
        else:
            attrs = f'shape=circle, width=0.15, fixedsize=true, label="", tooltip={label}'
        lines.append(f"  n{i} [{attrs}];")
    for p, c in g.edges():
        lines.append(f"  n{p} -> n{c};")
    lines.append("}")
    return "\n".join(lines) + "\n"
