"""Prefix forests encoding antichains of N-sets.

A forest is one of

* ``TOP``: the family ``{∅}``,
* ``BOT``: the empty family,
* a tuple of ``(element, forest)`` pairs with strictly increasing elements.

Every root-to-leaf path spells one set in increasing element order, so a
family of sets of cardinality at most N is a forest of height at most N + 1.
Forests are immutable; all operations build new values.  Pairs never map to
``BOT`` (such a prefix denotes no set and is dropped on construction).
"""
from __future__ import annotations

from bisect import bisect_right
from typing import Iterable, Iterator, Union


class _Leaf:
    __slots__ = ("_name",)

    def __init__(self, name: str):
        self._name = name

    def __repr__(self) -> str:
        return self._name

    def __reduce__(self):
        return self._name


TOP = _Leaf("TOP")
BOT = _Leaf("BOT")

Forest = Union[_Leaf, tuple]


def _mk(pairs: Iterable[tuple[int, Forest]]) -> Forest:
    out = tuple(p for p in pairs if p[1] is not BOT)
    return out if out else BOT


def inds(f: Forest) -> list[int]:
    """Top-level prefix elements, highest first."""
    if f is TOP or f is BOT:
        return []
    return [k for k, _ in reversed(f)]


def union(fa: Forest, fb: Forest) -> Forest:
    """Merge two forests.

    Only absorption of a set by its own proper prefix happens here (the
    encoding cannot hold both); general surset removal is ``simplify``'s job.
    """
    if fa is TOP or fb is TOP:
        return TOP
    if fa is BOT:
        return fb
    if fb is BOT:
        return fa
    out = []
    i = j = 0
    na, nb = len(fa), len(fb)
    while i < na and j < nb:
        ka, da = fa[i]
        kb, db = fb[j]
        if ka == kb:
            out.append((ka, union(da, db)))
            i += 1
            j += 1
        elif ka < kb:
            out.append(fa[i])
            i += 1
        else:
            out.append(fb[j])
            j += 1
    out.extend(fa[i:])
    out.extend(fb[j:])
    return tuple(out)


def family_size(f: Forest) -> int:
    if f is TOP:
        return 1
    if f is BOT:
        return 0
    return sum(family_size(d) for _, d in f)


def iter_sets(f: Forest, prefix: tuple[int, ...] = ()) -> Iterator[tuple[int, ...]]:
    """Yield the encoded sets as increasing tuples, in lexicographic order."""
    if f is TOP:
        yield prefix
    elif f is not BOT:
        for k, d in f:
            yield from iter_sets(d, prefix + (k,))


def to_sets(f: Forest) -> list[frozenset[int]]:
    return [frozenset(s) for s in iter_sets(f)]


def render(f: Forest) -> str:
    if f is TOP:
        return "T"
    if f is BOT:
        return "F"
    return "{" + ", ".join(f"{k} -> {render(d)}" for k, d in f) + "}"


def check_invariants(f: Forest, n: int) -> None:
    """Assert ordering, height and no-``BOT``-value invariants."""

    def walk(g: Forest, depth: int, lower: int | None) -> None:
        if g is TOP or g is BOT:
            if g is BOT and depth:
                raise AssertionError("prefix mapped to BOT")
            return
        if not isinstance(g, tuple) or not g:
            raise AssertionError(f"malformed forest node {g!r}")
        if depth >= n:
            raise AssertionError(f"forest deeper than N + 1 = {n + 1}")
        keys = [k for k, _ in g]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            raise AssertionError(f"sibling prefixes not sorted: {keys}")
        for k, d in g:
            if lower is not None and k <= lower:
                raise AssertionError(f"path not strictly increasing: {k} after {lower}")
            walk(d, depth + 1, k)

    walk(f, 0, None)


class NSets:
    """Forest operations for a fixed cardinality bound ``n``.

    Levels ``h`` are 1-based: the keys of the forest handed to an operation
    at level ``h`` are the ``h``-th elements of the sets they start.
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("N must be >= 1")
        self.n = n

    def __repr__(self) -> str:
        return f"NSets(n={self.n})"

    def from_sets(self, family: Iterable[Iterable[int]]) -> Forest:
        f: Forest = BOT
        for s in family:
            elems = sorted(set(s))
            if len(elems) > self.n:
                continue
            chain: Forest = TOP
            for e in reversed(elems):
                chain = ((e, chain),)
            f = union(f, chain)
        return self.simplify(f)

    def singleton(self, element: int) -> Forest:
        return ((element, TOP),)

    def up(self, f: Forest, h: int) -> Forest:
        """Drop the sets that could not take one more element at level ``h``."""
        if f is TOP or f is BOT:
            return f
        if h >= self.n:
            return BOT
        return _mk((k, self.up(d, h + 1)) for k, d in f)

    def product(self, fa: Forest, fb: Forest, h: int = 1) -> Forest:
        """Pairwise unions of members, keeping only results of size <= N."""
        if fa is TOP:
            return fb
        if fb is TOP:
            return fa
        if fa is BOT or fb is BOT:
            return BOT
        n = self.n
        acc: dict[int, Forest] = {}
        for i, da in fa:
            for j, db in fb:
                if i == j:
                    key, sub = i, self.product(da, db, h + 1)
                elif h >= n:
                    # the larger prefix would land at level h + 1 > N
                    continue
                elif i > j:
                    key = j
                    sub = self.product(_mk(((i, self.up(da, h + 1)),)), db, h + 1)
                else:
                    key = i
                    sub = self.product(da, _mk(((j, self.up(db, h + 1)),)), h + 1)
                if sub is not BOT:
                    prev = acc.get(key)
                    acc[key] = sub if prev is None else union(prev, sub)
        return _mk(sorted(acc.items(), key=lambda kv: kv[0]))

    def remove(self, fp: Forest, f: Forest, h: int = 1) -> Forest:
        """Remove from ``f`` every set that includes some set of ``fp``."""
        if fp is TOP:
            return BOT
        if f is TOP or f is BOT or fp is BOT:
            return f
        keys = [j for j, _ in fp]
        lifted = [(j, self.up(pj, h + 1)) for j, pj in fp]
        out = []
        for i, di in f:
            pos = bisect_right(keys, i)
            if pos and keys[pos - 1] == i:
                di = self.remove(fp[pos - 1][1], di, h + 1)
            if di is not BOT and pos < len(keys):
                # sets starting above i can only sit inside the suffix of i
                higher = _mk(lifted[pos:])
                if higher is not BOT:
                    di = self.remove(higher, di, h + 1)
            if di is not BOT:
                out.append((i, di))
        return tuple(out) if out else BOT

    def simplify(self, f: Forest, h: int = 1) -> Forest:
        """Minimise: keep only the sets with no proper subset in the family."""
        if f is TOP or f is BOT:
            return f
        acc: Forest = BOT
        for i, di in reversed(f):
            cur = _mk(((i, self.simplify(di, h + 1)),))
            cur = self.remove(acc, cur, h)
            acc = union(acc, cur)
        return acc

    def cap(self, f: Forest) -> Forest:
        """Truncate to sets of size <= N (for forests built under a larger bound)."""
        def go(g: Forest, depth: int) -> Forest:
            if g is TOP or g is BOT:
                return g
            if depth >= self.n:
                return BOT
            return _mk((k, go(d, depth + 1)) for k, d in g)
        return go(f, 0)
