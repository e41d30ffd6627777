"""Automata networks: model types, the textual model format and step semantics.

A network is a set of finite automata whose local transitions synchronise on
shared labels.  A label fires when every automaton it touches sits in the
label's source state; all touched automata then move together.
"""
from __future__ import annotations

import itertools
from bisect import bisect_right
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

MAX_STATES = 64

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_AUTOMATON_RE = re.compile(rf"automaton[ \t]+({_NAME})[ \t]*:[ \t]*(\d+)")
_TRANSITION_RE = re.compile(rf"({_NAME})[ \t]+(\d+)[ \t]*->[ \t]*(\d+)[ \t]+on[ \t]+({_NAME})")
_INIT_RE = re.compile(rf"init[ \t]+({_NAME})[ \t]+in[ \t]*\{{([^}}]*)\}}")
_LOCAL_RE = re.compile(rf"\s*({_NAME})\s*=\s*(\d+)\s*")


class ModelError(ValueError):
    """Raised for malformed model documents or invalid model references."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class LocalState(NamedTuple):
    """State ``state`` (1-based) of the automaton at index ``automaton``.

    Tuple ordering gives the total order used everywhere: declaration index
    first, then state number.
    """

    automaton: int
    state: int


@dataclass(frozen=True)
class Label:
    """A synchronisation label with its per-automaton moves ``(automaton, src, dst)``."""

    name: str
    moves: tuple[tuple[int, int, int], ...]

    @property
    def precond(self) -> frozenset[LocalState]:
        return frozenset(LocalState(a, i) for a, i, _ in self.moves)

    @property
    def postcond(self) -> frozenset[LocalState]:
        return frozenset(LocalState(a, j) for a, _, j in self.moves)

    def touches(self, automaton: int) -> bool:
        return any(a == automaton for a, _, _ in self.moves)


@dataclass(frozen=True)
class AutomataNetwork:
    names: tuple[str, ...]
    sizes: tuple[int, ...]
    labels: tuple[Label, ...]
    _offsets: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)
    _labels: dict = field(init=False, repr=False, compare=False)
    _trans: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        offsets = [0]
        for k in self.sizes:
            offsets.append(offsets[-1] + k)
        trans: list[list[tuple[int, str, int]]] = [[] for _ in self.names]
        for lab in self.labels:
            for a, i, j in lab.moves:
                trans[a].append((i, lab.name, j))
        object.__setattr__(self, "_offsets", tuple(offsets))
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})
        object.__setattr__(self, "_labels", {lab.name: lab for lab in self.labels})
        object.__setattr__(self, "_trans", tuple(tuple(t) for t in trans))

    @property
    def n_automata(self) -> int:
        return len(self.names)

    @property
    def n_local_states(self) -> int:
        return self._offsets[-1]

    def automaton_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ModelError(f"unknown automaton {name!r}") from None

    def local_states(self) -> list[LocalState]:
        return [LocalState(a, i) for a, k in enumerate(self.sizes) for i in range(1, k + 1)]

    def transitions(self, automaton: int) -> list[tuple[int, str, int]]:
        """Local transitions ``(src, label name, dst)`` of one automaton."""
        return list(self._trans[automaton])

    def label(self, name: str) -> Label:
        try:
            return self._labels[name]
        except KeyError:
            raise ModelError(f"unknown label {name!r}") from None

    # dense integer codes follow the LocalState total order
    def code(self, ls: LocalState) -> int:
        return self._offsets[ls.automaton] + ls.state - 1

    def decode(self, code: int) -> LocalState:
        if not 0 <= code < self._offsets[-1]:
            raise ValueError(f"local state code {code} out of range")
        a = bisect_right(self._offsets, code) - 1
        return LocalState(a, code - self._offsets[a] + 1)

    def check_local(self, ls: LocalState) -> None:
        if not 0 <= ls.automaton < self.n_automata:
            raise ModelError(f"unknown automaton index {ls.automaton}")
        if not 1 <= ls.state <= self.sizes[ls.automaton]:
            raise ModelError(
                f"state {ls.state} out of range for automaton "
                f"{self.names[ls.automaton]!r} (1..{self.sizes[ls.automaton]})"
            )

    def fmt(self, ls: LocalState) -> str:
        return f"{self.names[ls.automaton]}={ls.state}"

    def fmt_set(self, lss: Iterable[LocalState]) -> str:
        return "{" + ", ".join(self.fmt(x) for x in sorted(lss)) + "}"

    def parse_local(self, text: str) -> LocalState:
        m = _LOCAL_RE.fullmatch(text)
        if not m:
            raise ModelError(f"malformed local state {text!r} (expected name=int)")
        ls = LocalState(self.automaton_index(m.group(1)), int(m.group(2)))
        self.check_local(ls)
        return ls

    def parse_locals(self, text: str) -> frozenset[LocalState]:
        """Parse a comma-separated list of ``name=i``; the empty string is the empty set."""
        parts = [p for p in text.replace("{", "").replace("}", "").split(",") if p.strip()]
        return frozenset(self.parse_local(p) for p in parts)


@dataclass(frozen=True)
class Context:
    """Admissible initial states per automaton, in declaration order."""

    states: tuple[frozenset[int], ...]

    def __getitem__(self, automaton: int) -> frozenset[int]:
        return self.states[automaton]

    def validate(self, net: AutomataNetwork) -> None:
        if len(self.states) != net.n_automata:
            raise ModelError("context does not cover every automaton")
        for a, allowed in enumerate(self.states):
            if not allowed:
                raise ModelError(f"empty context for automaton {net.names[a]!r}")
            for i in allowed:
                net.check_local(LocalState(a, i))


GlobalState = tuple[int, ...]


def parse_network(text: str) -> tuple[AutomataNetwork, Context]:
    """Parse a model document into a network and its context."""
    names: list[str] = []
    sizes: list[int] = []
    index: dict[str, int] = {}
    moves: dict[str, list[tuple[int, int, int]]] = {}
    label_order: list[str] = []
    inits: dict[int, frozenset[int]] = {}

    def lookup(name: str, lineno: int, col: int) -> int:
        if name not in index:
            raise ModelError(f"unknown automaton {name!r}", lineno, col)
        return index[name]

    def check_state(a: int, i: int, lineno: int, col: int) -> None:
        if not 1 <= i <= sizes[a]:
            raise ModelError(f"state {i} out of range for automaton {names[a]!r} (1..{sizes[a]})",
                             lineno, col)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.lstrip()
        if not stripped:
            continue
        col = len(line) - len(stripped) + 1
        if m := _AUTOMATON_RE.fullmatch(stripped):
            name, k = m.group(1), int(m.group(2))
            if name in ("automaton", "init"):
                raise ModelError(f"reserved word {name!r} used as automaton name", lineno, col)
            if name in index:
                raise ModelError(f"duplicate automaton {name!r}", lineno, col)
            if not 1 <= k <= MAX_STATES:
                raise ModelError(f"automaton {name!r} must have 1..{MAX_STATES} states", lineno, col)
            index[name] = len(names)
            names.append(name)
            sizes.append(k)
        elif m := _INIT_RE.fullmatch(stripped):
            a = lookup(m.group(1), lineno, col + m.start(1))
            if a in inits:
                raise ModelError(f"duplicate init for automaton {names[a]!r}", lineno, col)
            body = m.group(2).strip()
            if not body:
                raise ModelError(f"empty context set for automaton {names[a]!r}", lineno, col)
            states = set()
            for part in body.split(","):
                part = part.strip()
                if not part.isdigit():
                    raise ModelError(f"malformed state {part!r} in init", lineno, col + m.start(2))
                check_state(a, int(part), lineno, col + m.start(2))
                states.add(int(part))
            inits[a] = frozenset(states)
        elif m := _TRANSITION_RE.fullmatch(stripped):
            a = lookup(m.group(1), lineno, col)
            i, j, lab = int(m.group(2)), int(m.group(3)), m.group(4)
            check_state(a, i, lineno, col + m.start(2))
            check_state(a, j, lineno, col + m.start(3))
            if lab not in moves:
                moves[lab] = []
                label_order.append(lab)
            if any(b == a for b, _, _ in moves[lab]):
                raise ModelError(f"automaton {names[a]!r} already has a transition on label {lab!r}",
                                 lineno, col + m.start(4))
            moves[lab].append((a, i, j))
        else:
            raise ModelError(f"syntax error: {stripped!r}", lineno, col)

    missing = [names[a] for a in range(len(names)) if a not in inits]
    if missing:
        raise ModelError(f"missing init for automata: {', '.join(missing)}")
    net = AutomataNetwork(
        tuple(names), tuple(sizes),
        tuple(Label(lab, tuple(sorted(moves[lab]))) for lab in label_order),
    )
    return net, Context(tuple(inits[a] for a in range(len(names))))


def serialize_network(net: AutomataNetwork, ctx: Context) -> str:
    """Canonical document: declarations, transitions grouped by label, then inits."""
    lines = [f"automaton {n} : {k}" for n, k in zip(net.names, net.sizes)]
    for lab in net.labels:
        lines += [f"{net.names[a]} {i} -> {j} on {lab.name}" for a, i, j in lab.moves]
    lines += [
        f"init {n} in {{{','.join(str(i) for i in sorted(ctx[a]))}}}"
        for a, n in enumerate(net.names)
    ]
    return "\n".join(lines) + "\n"


def load_network(path) -> tuple[AutomataNetwork, Context]:
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read())


def disable(net: AutomataNetwork, lss: Iterable[LocalState]) -> AutomataNetwork:
    """Drop every label whose precondition meets ``lss``."""
    lss = frozenset(lss)
    for ls in lss:
        net.check_local(ls)
    if not lss:
        return net
    kept = tuple(lab for lab in net.labels
                 if not any(LocalState(a, i) in lss for a, i, _ in lab.moves))
    return AutomataNetwork(net.names, net.sizes, kept)


def _check_state(net: AutomataNetwork, s: GlobalState) -> None:
    if len(s) != net.n_automata or any(not 1 <= x <= k for x, k in zip(s, net.sizes)):
        raise ModelError(f"malformed global state {s!r}")


def is_enabled(lab: Label, s: GlobalState) -> bool:
    return all(s[a] == i for a, i, _ in lab.moves)


def enabled_labels(net: AutomataNetwork, s: GlobalState) -> list[Label]:
    _check_state(net, s)
    return [lab for lab in net.labels if is_enabled(lab, s)]


def step(net: AutomataNetwork, s: GlobalState, lab: Label | str) -> GlobalState:
    _check_state(net, s)
    if isinstance(lab, str):
        lab = net.label(lab)
    if not is_enabled(lab, s):
        raise ModelError(f"label {lab.name!r} is not enabled")
    out = list(s)
    for a, _, j in lab.moves:
        out[a] = j
    return tuple(out)


def initial_states(net: AutomataNetwork, ctx: Context) -> Iterator[GlobalState]:
    return itertools.product(*(sorted(ctx[a]) for a in range(net.n_automata)))
