"""Large seeded Boolean-style networks for scalability runs.

Each component is a two-state automaton (1 = absent, 2 = present).  Input
components are free in the context; every other component starts absent,
gets switched on by one of a few activation labels (each needing a handful
of regulators in given states) and off by one deactivation label.
Regulators are mostly upstream components, with some feedback.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .network import AutomataNetwork, Context, Label, LocalState


@dataclass(frozen=True)
class RegulatorySpec:
    n_components: int = 16000
    n_inputs: int = 300
    max_activations: int = 3
    max_regulators: int = 2
    inhibitor_rate: float = 0.2
    feedback_rate: float = 0.05
    seed: int = 0


def regulatory_network(spec: RegulatorySpec) -> tuple[AutomataNetwork, Context]:
    rng = random.Random(spec.seed)
    n = spec.n_components
    names = tuple(f"g{i}" for i in range(n))
    labels: list[Label] = []

    def regulators(i: int) -> list[tuple[int, int]]:
        m = rng.randint(1, spec.max_regulators)
        picked: set[int] = set()
        while len(picked) < m:
            if rng.random() < spec.feedback_rate or i == 0:
                r = rng.randrange(n)
            else:
                r = rng.randrange(i)
            if r != i:
                picked.add(r)
        return [(r, 1 if rng.random() < spec.inhibitor_rate else 2) for r in sorted(picked)]

    for i in range(spec.n_inputs, n):
        for k in range(rng.randint(1, spec.max_activations)):
            moves = [(r, s, s) for r, s in regulators(i)] + [(i, 1, 2)]
            labels.append(Label(f"on{i}_{k}", tuple(sorted(moves))))
        r, s = regulators(i)[0]
        labels.append(Label(f"off{i}", tuple(sorted([(r, s, s), (i, 2, 1)]))))
    ctx = Context(tuple(frozenset({1, 2}) if i < spec.n_inputs else frozenset({1})
                        for i in range(n)))
    return AutomataNetwork(names, (2,) * n, tuple(labels)), ctx


def default_targets(spec: RegulatorySpec, count: int = 3) -> list[LocalState]:
    return [LocalState(spec.n_components - 1 - k, 2) for k in range(count)]
