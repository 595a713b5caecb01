"""Brute-force ground truth for small graphs.

Deletability here is tested by the definition (delete the edge, check strong
connectivity) on bitmask adjacency, independently of the path shortcut in
``orientation``.
"""
from __future__ import annotations

from typing import Iterator, Optional

from .errors import CapExceeded
from .graphio import Graph
from .orientation import Orientation

MAX_EDGES = 30
MAX_EDGES_COVER = 18


def _reach(masks, start: int) -> int:
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        x = frontier
        while x:
            low = x & -x
            nxt |= masks[low.bit_length() - 1]
            x ^= low
        frontier = nxt & ~seen
        seen |= frontier
    return seen


def _strong_without(g: Graph, bits, skip: int = -1) -> bool:
    n = g.n
    if n <= 1:
        return True
    out = [0] * n
    inn = [0] * n
    for e, (a, b) in enumerate(g.edges):
        if e == skip:
            continue
        if bits[e]:
            a, b = b, a
        out[a] |= 1 << b
        inn[b] |= 1 << a
    full = (1 << n) - 1
    return _reach(out, 0) == full and _reach(inn, 0) == full


def deletable_by_definition(g: Graph, o: Orientation, e: int) -> bool:
    """The restriction of o to G - e is strong (and o itself is strong)."""
    return _strong_without(g, o.bits) and _strong_without(g, o.bits, e)


def definitional_mask(g: Graph, bits) -> int:
    """D(G, o) as a bitmask: edges whose removal leaves a strong orientation."""
    n = g.n
    out = [0] * n
    inn = [0] * n
    arcs = []
    for e, (a, b) in enumerate(g.edges):
        if bits[e]:
            a, b = b, a
        out[a] |= 1 << b
        inn[b] |= 1 << a
        arcs.append((a, b))
    full = (1 << n) - 1
    if n > 1 and not (_reach(out, 0) == full and _reach(inn, 0) == full):
        return 0
    mask = 0
    for e, (a, b) in enumerate(arcs):
        out[a] ^= 1 << b
        inn[b] ^= 1 << a
        if _reach(out, 0) == full and _reach(inn, 0) == full:
            mask |= 1 << e
        out[a] ^= 1 << b
        inn[b] ^= 1 << a
    return mask


def strong_orientations(g: Graph, cap: int = MAX_EDGES) -> Iterator[Orientation]:
    """All strong orientations with edge 0 forward, in lexicographic order of bits."""
    if g.m > cap:
        raise CapExceeded(f"{g.m} edges exceeds the cap of {cap}")
    if g.m == 0 or len(_components_mask(g)) > 1:
        return
    last = [max((e for _, e in g.adj[v]), default=-1) for v in range(g.n)]
    closing = [[] for _ in range(g.m)]
    for v in range(g.n):
        if last[v] >= 0:
            closing[last[v]].append(v)
    bits = [0] * g.m
    outs = [0] * g.n

    def rec(e):
        if e == g.m:
            if _strong_without(g, bits):
                yield Orientation(g, bits)
            return
        a, b = g.edges[e]
        for bit in ((0,) if e == 0 else (0, 1)):
            bits[e] = bit
            t = b if bit else a
            outs[t] += 1
            # a vertex whose edges are all set must have an arc in and an arc out
            if all(0 < outs[v] < g.degree(v) for v in closing[e]):
                yield from rec(e + 1)
            outs[t] -= 1

    yield from rec(0)


def _components_mask(g: Graph) -> list:
    adj = [0] * g.n
    for a, b in g.edges:
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    left = (1 << g.n) - 1
    comps = []
    while left:
        v = (left & -left).bit_length() - 1
        c = _reach(adj, v)
        comps.append(c)
        left &= ~c
    return comps


def maximal_deletable_sets(g: Graph, cap: int = MAX_EDGES) -> list[int]:
    """Distinct inclusion-maximal D-sets over all strong orientations, as bitmasks."""
    sets = {definitional_mask(g, o.bits) for o in strong_orientations(g, cap)}
    sets.discard(0)
    ordered = sorted(sets, key=lambda s: -bin(s).count("1"))
    maximal = []
    for s in ordered:
        if not any(s | t == t for t in maximal):
            maximal.append(s)
    return maximal


def _cover_within(sets: list[int], full: int, k: int) -> Optional[list[int]]:
    def rec(covered, left, chosen):
        if covered == full:
            return list(chosen)
        if left == 0:
            return None
        low = (full & ~covered) & -(full & ~covered)
        for s in sets:
            if s & low:
                chosen.append(s)
                got = rec(covered | s, left - 1, chosen)
                if got is not None:
                    return got
                chosen.pop()
        return None

    return rec(0, k, [])


def frank_number_bruteforce(g: Graph, kmax: int) -> Optional[int]:
    """Least k <= kmax such that k orientations have D-sets covering E; None if none."""
    cap = MAX_EDGES if kmax <= 2 else MAX_EDGES_COVER
    if g.m > cap:
        raise CapExceeded(f"{g.m} edges exceeds the cap of {cap} for kmax={kmax}")
    sets = maximal_deletable_sets(g, cap)
    full = (1 << g.m) - 1
    for k in range(1, kmax + 1):
        if k == 2:
            if any(a | b == full for i, a in enumerate(sets) for b in sets[i:]):
                return 2
            continue
        if _cover_within(sets, full, k) is not None:
            return k
    return None


def pair_certificate(g: Graph) -> Optional[tuple[Orientation, Orientation]]:
    """Two strong orientations whose D-sets cover E, by exhaustive pair search."""
    full = (1 << g.m) - 1
    best = {}
    for o in strong_orientations(g):
        d = definitional_mask(g, o.bits)
        if d and d not in best:
            best[d] = o
    items = list(best.items())
    for i, (a, oa) in enumerate(items):
        for b, ob in items[i:]:
            if a | b == full:
                return oa, ob
    return None
