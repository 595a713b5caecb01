"""Connectivity, cuts, 2-factors, edge-colouring and graph surgery."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Optional

from .errors import (
    AdjacentEdges,
    DegreeTooSmall,
    NotCubic,
    NotPerfectMatching,
    NotSnark,
    PreconditionViolated,
    SuppressionCreatesLoop,
    SuppressionCreatesParallel,
)
from .graphio import Graph

EdgeSet = frozenset


# ---------------------------------------------------------------------------
# connectivity

def components(g: Graph, removed: Iterable[int] = ()) -> list[list[int]]:
    """Vertex sets of the connected components of ``g`` minus edges ``removed``."""
    removed = set(removed)
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            x = stack.pop()
            for y, e in g.adj[x]:
                if not seen[y] and e not in removed:
                    seen[y] = True
                    comp.append(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def _max_flow_at_least(g: Graph, s: int, t: int, k: int) -> bool:
    # unit capacity on each direction of every undirected edge
    flow = {}
    for _ in range(k):
        prev = {s: None}
        q = deque([s])
        while q and t not in prev:
            x = q.popleft()
            for y, e in g.adj[x]:
                if y in prev:
                    continue
                if flow.get((e, x, y), 0) - flow.get((e, y, x), 0) < 1:
                    prev[y] = (x, e)
                    q.append(y)
        if t not in prev:
            return False
        y = t
        while prev[y] is not None:
            x, e = prev[y]
            if flow.get((e, y, x), 0):
                flow[(e, y, x)] = 0
            else:
                flow[(e, x, y)] = 1
            y = x
    return True


def edge_connectivity_at_least(g: Graph, k: int) -> bool:
    """True iff no edge cut of fewer than ``k`` edges disconnects ``g``."""
    if k <= 0 or g.n <= 1:
        return True
    if len(components(g)) > 1:
        return False
    if min(g.degree(v) for v in range(g.n)) < k:
        return False
    return all(_max_flow_at_least(g, 0, t, k) for t in range(1, g.n))


def _component_has_cycle_flags(g: Graph, removed: set) -> list[bool]:
    # a connected component contains a cycle iff it has at least as many edges as vertices
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cyclic = [False] * g.n
    for e, (a, b) in enumerate(g.edges):
        if e in removed:
            continue
        ra, rb = find(a), find(b)
        if ra == rb:
            cyclic[ra] = True
        else:
            parent[ra] = rb
            cyclic[rb] = cyclic[rb] or cyclic[ra]
    return [cyclic[r] for r in range(g.n) if find(r) == r]


def is_cyclic_edge_cut(g: Graph, s: Iterable[int]) -> bool:
    """True iff ``g - s`` has at least two components that contain a cycle."""
    return sum(_component_has_cycle_flags(g, set(s))) >= 2


def cyclic_edge_connectivity_at_least(g: Graph, k: int) -> bool:
    """True iff no cyclic edge cut with fewer than ``k`` edges exists.

    Exhaustive over edge subsets, which is cheap for k <= 5 at the sizes we
    handle.  Graphs without two vertex-disjoint cycles have no cyclic cut at
    all and so pass for every ``k``.
    """
    for size in range(k):
        for s in combinations(range(g.m), size):
            if is_cyclic_edge_cut(g, s):
                return False
    return True


# ---------------------------------------------------------------------------
# smoothing and surgery

@dataclass
class Reduction:
    """Result of suppressing degree-2 vertices after deleting edges.

    ``origin[i]`` lists the original vertices along new edge ``i`` in order
    (first and last are its endpoints), ``vertex_map`` maps surviving original
    vertices to new labels.
    """

    graph: Graph
    vertex_map: dict
    origin: list

    def original_path_edges(self, source: Graph, e: int) -> list[int]:
        path = self.origin[e]
        return [source.edge_id(a, b) for a, b in zip(path, path[1:])]


def smooth_edges(g: Graph, deleted: Iterable[int]) -> Reduction:
    """Delete edges and suppress every vertex left with degree 2."""
    deleted = set(deleted)
    deg = [0] * g.n
    for e, (a, b) in enumerate(g.edges):
        if e not in deleted:
            deg[a] += 1
            deg[b] += 1
    kept = [v for v in range(g.n) if deg[v] != 2]
    vmap = {v: i for i, v in enumerate(kept)}
    used = set()
    paths = []
    for start in kept:
        for w, e in g.adj[start]:
            if e in deleted or e in used:
                continue
            path = [start]
            prev, cur, ce = start, w, e
            used.add(ce)
            while deg[cur] == 2:
                path.append(cur)
                nxt = [(y, f) for y, f in g.adj[cur] if f not in deleted and f != ce]
                if len(nxt) != 1:
                    raise SuppressionCreatesLoop(f"vertex {cur} cannot be suppressed")
                prev, (cur, ce) = cur, nxt[0]
                used.add(ce)
            path.append(cur)
            paths.append(path)
    if any(deg[v] == 2 for v in range(g.n)) and len(used) + len(deleted) < g.m:
        raise SuppressionCreatesLoop("a circuit of degree-2 vertices would become a loop")
    new_edges = {}
    for path in paths:
        a, b = vmap[path[0]], vmap[path[-1]]
        if a == b:
            raise SuppressionCreatesLoop(f"suppression joins vertex {path[0]} to itself")
        key = (min(a, b), max(a, b))
        if key in new_edges:
            raise SuppressionCreatesParallel(f"suppression duplicates edge {path[0]}-{path[-1]}")
        new_edges[key] = path if a < b else path[::-1]
    h = Graph(len(kept), new_edges)
    return Reduction(h, vmap, [new_edges[e] for e in h.edges])


def smooth_edge(g: Graph, e: int) -> Reduction:
    """The cubic graph G~e: delete ``e`` and suppress both endpoints."""
    if not g.is_cubic():
        raise NotCubic("smooth_edge needs a cubic graph")
    return smooth_edges(g, [e])


def compose(first: Reduction, second: Reduction) -> Reduction:
    """Reduction of ``second`` applied to ``first.graph``, expressed on the original graph."""
    inv = {v: k for k, v in first.vertex_map.items()}
    vmap = {}
    for orig, mid in first.vertex_map.items():
        if mid in second.vertex_map:
            vmap[orig] = second.vertex_map[mid]
    mid_graph = first.graph
    origin = []
    for path in second.origin:
        full = [inv[path[0]]]
        for a, b in zip(path, path[1:]):
            seg = first.origin[mid_graph.edge_id(a, b)]
            if inv[a] != seg[0]:
                seg = seg[::-1]
            full.extend(seg[1:])
        origin.append(full)
    return Reduction(second.graph, vmap, origin)


@dataclass
class Surgery:
    """Description of a subdivide-and-connect operation.

    ``kind='pair'``: subdivide ``e1``, ``e2`` by new x1, x2 and join x1x2.
    ``kind='triple'``: also subdivide ``f`` by y1, y2 (y1 next to ``w1``, one
    endpoint of ``f``) and add x1y1, x2y2.
    """

    kind: str
    e1: int
    e2: int
    f: Optional[int] = None
    w1: Optional[int] = None


@dataclass
class SurgeryResult:
    graph: Graph
    new_vertices: dict
    paths: dict = field(default_factory=dict)  # old edge -> new edges along it


def subdivide_and_connect(g: Graph, s: Surgery) -> SurgeryResult:
    named = [s.e1, s.e2] + ([s.f] if s.kind == "triple" else [])
    for a, b in combinations(named, 2):
        if a == b or set(g.edges[a]) & set(g.edges[b]):
            raise AdjacentEdges(f"edges {a} and {b} are not independent")
    n = g.n
    edges = [g.edges[e] for e in range(g.m) if e not in named]
    nv = {"x1": n, "x2": n + 1}
    pieces = {}
    for name, e in (("x1", s.e1), ("x2", s.e2)):
        a, b = g.edges[e]
        edges += [(a, nv[name]), (nv[name], b)]
        pieces[e] = [(a, nv[name]), (nv[name], b)]
    if s.kind == "pair":
        edges.append((nv["x1"], nv["x2"]))
    elif s.kind == "triple":
        a, b = g.edges[s.f]
        if s.w1 not in (a, b):
            raise ValueError("w1 must be an endpoint of f")
        w1, w2 = s.w1, b if s.w1 == a else a
        nv["y1"], nv["y2"] = n + 2, n + 3
        chain = [(w1, nv["y1"]), (nv["y1"], nv["y2"]), (nv["y2"], w2)]
        edges += chain + [(nv["x1"], nv["y1"]), (nv["x2"], nv["y2"])]
        pieces[s.f] = chain
    else:
        raise ValueError(f"unknown surgery kind {s.kind!r}")
    h = Graph(n + len(nv), edges)
    paths = {}
    for e in range(g.m):
        if e in pieces:
            paths[e] = [h.edge_id(a, b) for a, b in pieces[e]]
        else:
            paths[e] = [h.edge_id(*g.edges[e])]
    return SurgeryResult(h, nv, paths)


# ---------------------------------------------------------------------------
# matchings and 2-factors

def enumerate_perfect_matchings(g: Graph) -> Iterator[EdgeSet]:
    """Every perfect matching once; branch on the lowest unmatched vertex."""
    if g.n % 2:
        return
    matched = [False] * g.n
    chosen = []

    def rec(start):
        v = start
        while v < g.n and matched[v]:
            v += 1
        if v == g.n:
            yield frozenset(chosen)
            return
        matched[v] = True
        for w, e in sorted(g.adj[v], key=lambda t: t[1]):
            if not matched[w]:
                matched[w] = True
                chosen.append(e)
                yield from rec(v + 1)
                chosen.pop()
                matched[w] = False
        matched[v] = False

    yield from rec(0)


def is_perfect_matching(g: Graph, f: Iterable[int]) -> bool:
    cover = [0] * g.n
    for e in f:
        a, b = g.edges[e]
        cover[a] += 1
        cover[b] += 1
    return all(c == 1 for c in cover)


@dataclass(frozen=True)
class TwoFactor:
    matching: EdgeSet
    circuits: tuple   # vertex tuples in traversal order
    circuit_edges: tuple   # matching edge tuples, circuit_edges[i][j] joins circuits[i][j] and its successor

    @property
    def odd_circuits(self) -> list[tuple]:
        return [c for c in self.circuits if len(c) % 2]

    @property
    def even_circuits(self) -> list[tuple]:
        return [c for c in self.circuits if len(c) % 2 == 0]

    def circuit_of(self) -> dict:
        return {v: i for i, c in enumerate(self.circuits) for v in c}


def circuits_of_2_regular(g: Graph, edge_set: Iterable[int]) -> list[tuple[tuple, tuple]]:
    """Split a subgraph whose non-isolated vertices have degree 2 into circuits."""
    edge_set = set(edge_set)
    inc = {}
    for e in edge_set:
        for x in g.edges[e]:
            inc.setdefault(x, []).append(e)
    if any(len(v) != 2 for v in inc.values()):
        raise ValueError("edge set is not 2-regular on its support")
    seen = set()
    out = []
    for s in sorted(inc):
        if s in seen:
            continue
        verts, es = [s], []
        seen.add(s)
        prev_e = None
        cur = s
        while True:
            if prev_e is None:
                e = min(inc[cur])
            else:
                e = inc[cur][0] if inc[cur][1] == prev_e else inc[cur][1]
            es.append(e)
            nxt = g.other(e, cur)
            if nxt == s:
                break
            seen.add(nxt)
            verts.append(nxt)
            prev_e, cur = e, nxt
        out.append((tuple(verts), tuple(es)))
    return out


def two_factor(g: Graph, f: Iterable[int]) -> TwoFactor:
    f = frozenset(f)
    if not g.is_cubic():
        raise NotCubic("two_factor needs a cubic graph")
    if not is_perfect_matching(g, f):
        raise NotPerfectMatching("edge set is not a perfect matching")
    circ = circuits_of_2_regular(g, set(range(g.m)) - f)
    return TwoFactor(f, tuple(c for c, _ in circ), tuple(es for _, es in circ))


# ---------------------------------------------------------------------------
# edge colouring

def three_edge_colouring(g: Graph) -> Optional[list[int]]:
    """A proper colouring ``edge -> {0, 1, 2}`` or None.

    Backtracking over edges in index order, colours in order 0 < 1 < 2.
    A colour is opened only once all smaller colours are in use, which drops
    permuted duplicates without changing the first colouring found.
    """
    if not g.is_cubic():
        raise NotCubic("three_edge_colouring needs a cubic graph")
    m = g.m
    col = [-1] * m
    used = [0] * g.n  # bitmask of colours at each vertex
    ends = g.edges

    def rec(i, top):
        if i == m:
            return True
        a, b = ends[i]
        banned = used[a] | used[b]
        for c in range(min(top + 2, 3)):
            bit = 1 << c
            if banned & bit:
                continue
            col[i] = c
            used[a] |= bit
            used[b] |= bit
            if rec(i + 1, max(top, c)):
                return True
            used[a] &= ~bit
            used[b] &= ~bit
        col[i] = -1
        return False

    import sys
    limit = sys.getrecursionlimit()
    if limit < m + 100:
        sys.setrecursionlimit(m + 100)
    return list(col) if rec(0, -1) else None


def oddness(g: Graph):
    if not g.is_cubic():
        raise NotCubic("oddness needs a cubic graph")
    best = math.inf
    for f in enumerate_perfect_matchings(g):
        k = len(two_factor(g, f).odd_circuits)
        best = min(best, k)
        if best == 0:
            break
    return best


def is_strong_snark(g: Graph) -> bool:
    if not g.is_cubic() or three_edge_colouring(g) is not None:
        raise NotSnark("input is not a snark")
    for e in range(g.m):
        try:
            h = smooth_edge(g, e).graph
        except (SuppressionCreatesParallel, SuppressionCreatesLoop) as exc:
            raise PreconditionViolated(f"smoothing edge {e} is undefined for simple graphs") from exc
        if three_edge_colouring(h) is not None:
            return False
    return True


# ---------------------------------------------------------------------------
# local cubic modification

def _bridges(g: Graph, vertices: set) -> set:
    """Bridges of the subgraph induced by ``vertices``."""
    disc, low = {}, {}
    bridges = set()
    counter = [0]
    for root in sorted(vertices):
        if root in disc:
            continue
        disc[root] = low[root] = counter[0]
        counter[0] += 1
        stack = [(root, -1, iter(g.adj[root]))]
        while stack:
            x, pe, it = stack[-1]
            advanced = False
            for y, e in it:
                if y not in vertices or e == pe:
                    continue
                if y not in disc:
                    disc[y] = low[y] = counter[0]
                    counter[0] += 1
                    stack.append((y, e, iter(g.adj[y])))
                    advanced = True
                    break
                low[x] = min(low[x], disc[y])
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[x])
                    if low[x] > disc[p]:
                        bridges.add(pe)
    return bridges


def local_cubic_modification(g: Graph, v: int) -> Graph:
    """Replace ``v`` (degree d >= 4) by a d-circuit matched to its neighbours.

    The matching follows the leaf-component scheme that keeps the result
    3-edge-connected and cyclically 4-edge-connected.  The new circuit uses
    labels ``v`` (reused) and ``n .. n+d-2``.
    """
    d = g.degree(v)
    if d < 4:
        raise DegreeTooSmall(f"vertex {v} has degree {d}")
    if not edge_connectivity_at_least(g, 3) or not cyclic_edge_connectivity_at_least(g, 4):
        raise PreconditionViolated("graph must be 3-edge-connected and cyclically 4-edge-connected")
    rest = set(range(g.n)) - {v}
    bridges = _bridges(g, rest)
    # 2-edge-connected components of G - v
    comp_of = {}
    comps = []
    for s in sorted(rest):
        if s in comp_of:
            continue
        comp_of[s] = len(comps)
        members = [s]
        stack = [s]
        while stack:
            x = stack.pop()
            for y, e in g.adj[x]:
                if y in rest and e not in bridges and y not in comp_of:
                    comp_of[y] = len(comps)
                    members.append(y)
                    stack.append(y)
        comps.append(sorted(members))
    bridge_deg = [0] * len(comps)
    for e in bridges:
        a, b = g.edges[e]
        bridge_deg[comp_of[a]] += 1
        bridge_deg[comp_of[b]] += 1
    nbrs = sorted(g.neighbors(v))
    leaves = [i for i in range(len(comps)) if bridge_deg[i] <= 1]
    pools = {i: [x for x in nbrs if comp_of[x] == i] for i in leaves}
    order = []
    for i in leaves:
        order.append(pools[i][0])
    for i in leaves:
        order.append(pools[i][1])
    order += [x for x in nbrs if x not in order]
    ring = [v] + list(range(g.n, g.n + d - 1))
    edges = [e for e in g.edges if v not in e]
    edges += [(ring[i], ring[(i + 1) % d]) for i in range(d)]
    edges += [(ring[i], order[i]) for i in range(d)]
    h = Graph(g.n + d - 1, edges)
    if not edge_connectivity_at_least(h, 3) or not cyclic_edge_connectivity_at_least(h, 4):
        raise PreconditionViolated("modification lost connectivity; input does not meet the preconditions")
    return h
