"""Exact decision of fn(G) = 2 for cubic graphs.

For each strong orientation o we search for a complementary orientation o'
with D(o) and D(o') covering every edge.  The partial orientation o' is
extended by depth-first branching; after every committed arc the forced
orientations of the local rules below are propagated:

1. every vertex has an incoming and an outgoing arc;
2. if uv is not in D(o), the other two edges at u are one in, one out;
3. two edges at a vertex that are both outside D(o) point the same way
   relative to that vertex (both in or both out).
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import chain
from typing import Iterator, Optional

from . import topology
from .errors import BudgetExceeded, NotCubic, PreconditionViolated
from .graphio import Graph
from .orientation import FrankCertificate, Orientation, deletable_mask, is_strong_bits

UNSET = -1


@dataclass
class SearchStats:
    strong: int = 0  # outer strong orientations visited
    filtered: int = 0  # strong but rejected by the vertex filter
    nodes: int = 0  # inner branching nodes
    arcs: int = 0  # arcs committed by propagation


class SearchState:
    """Partial orientation o' relative to a fixed deletable set D.

    ``state[e]`` is UNSET or the orientation bit.  ``outdeg``/``indeg``
    count oriented arcs per vertex.  Snapshots are plain list copies.
    """

    __slots__ = ("g", "d", "state", "outdeg", "indeg", "stats")

    def __init__(self, g: Graph, d_mask: int, stats: Optional[SearchStats] = None):
        self.g = g
        self.d = d_mask
        self.state = [UNSET] * g.m
        self.outdeg = [0] * g.n
        self.indeg = [0] * g.n
        self.stats = stats or SearchStats()

    def in_d(self, e: int) -> bool:
        return bool(self.d >> e & 1)

    def snapshot(self):
        return self.state[:], self.outdeg[:], self.indeg[:]

    def restore(self, snap):
        self.state, self.outdeg, self.indeg = snap[0][:], snap[1][:], snap[2][:]

    def tail(self, e: int) -> int:
        return self.g.edges[e][self.state[e]]

    def is_out(self, e: int, v: int) -> bool:
        """Edge e is oriented and leaves v."""
        return self.state[e] != UNSET and self.tail(e) == v

    def is_in(self, e: int, v: int) -> bool:
        return self.state[e] != UNSET and self.tail(e) != v

    def orientation(self) -> Orientation:
        return Orientation(self.g, self.state)


def can_add_arc(s: SearchState, u: int, v: int) -> bool:
    """Feasibility of adding u->v under the rules, for an unoriented edge uv."""
    g = s.g
    if s.outdeg[u] == 2 or s.indeg[v] == 2:
        return False
    if s.in_d(g.edge_id(u, v)):
        for _, e in g.adj[u]:
            if s.in_d(e) and s.is_out(e, u):
                return False
        for _, e in g.adj[v]:
            if s.in_d(e) and s.is_in(e, v):
                return False
        return True
    if s.indeg[u] == 2 or s.outdeg[v] == 2:
        return False
    for _, e in g.adj[u]:
        if not s.in_d(e) and s.is_in(e, u):
            return False
    for _, e in g.adj[v]:
        if not s.in_d(e) and s.is_out(e, v):
            return False
    return True


def _unoriented_at(s: SearchState, v: int):
    for w, e in s.g.adj[v]:
        if s.state[e] == UNSET:
            return w
    return None


def add_arcs_recursively(s: SearchState, u: int, v: int) -> bool:
    """Commit u->v and everything it forces; False on contradiction (state is then poisoned)."""
    g = s.g
    e = g.edge_id(u, v)
    if s.state[e] != UNSET:
        return s.tail(e) == u
    if not can_add_arc(s, u, v):
        return False
    s.state[e] = 0 if g.edges[e][0] == u else 1
    s.outdeg[u] += 1
    s.indeg[v] += 1
    s.stats.arcs += 1
    return _orient_fixed_edges(s, u, v, e)


def _orient_fixed_edges(s: SearchState, u: int, v: int, e: int) -> bool:
    if s.outdeg[u] == 2 and s.indeg[u] == 0:
        if not add_arcs_recursively(s, _unoriented_at(s, u), u):
            return False
    if s.indeg[v] == 2 and s.outdeg[v] == 0:
        if not add_arcs_recursively(s, v, _unoriented_at(s, v)):
            return False
    if s.in_d(e):
        return _orient_deletable(s, u, v, e)
    return _orient_non_deletable(s, u, v, e)


def _orient_deletable(s: SearchState, u: int, v: int, e: int) -> bool:
    g = s.g
    for x, f in g.adj[u]:
        if f != e and s.in_d(f) and not add_arcs_recursively(s, x, u):
            return False
    for x, f in g.adj[v]:
        if f != e and s.in_d(f) and not add_arcs_recursively(s, v, x):
            return False
    others = [(x, f) for x, f in g.adj[u] if f != e]
    if not any(s.in_d(f) for _, f in others):
        for x, _ in others:
            if not add_arcs_recursively(s, x, u):
                return False
    others = [(x, f) for x, f in g.adj[v] if f != e]
    if not any(s.in_d(f) for _, f in others):
        for x, _ in others:
            if not add_arcs_recursively(s, v, x):
                return False
    return True


def _one_in_one_out(s: SearchState, v: int) -> bool:
    return s.outdeg[v] == 1 and s.indeg[v] == 1


def _orient_non_deletable(s: SearchState, u: int, v: int, e: int) -> bool:
    g = s.g
    if s.outdeg[u] + s.indeg[u] == 2 and _one_in_one_out(s, u):
        x = _unoriented_at(s, u)
        if not add_arcs_recursively(s, u, x):
            return False
    if s.outdeg[v] + s.indeg[v] == 2 and _one_in_one_out(s, v):
        x = _unoriented_at(s, v)
        if not add_arcs_recursively(s, x, v):
            return False
    for x, f in g.adj[u]:
        if x != v and not s.in_d(f) and not add_arcs_recursively(s, u, x):
            return False
    for y, f in g.adj[v]:
        if y != u and not s.in_d(f) and not add_arcs_recursively(s, y, v):
            return False
    return True


def _branch_edge(s: SearchState) -> int:
    """Unoriented edge with the most oriented neighbouring edges, lowest index on ties."""
    g = s.g
    best, best_score = -1, -1
    for e, st in enumerate(s.state):
        if st != UNSET:
            continue
        a, b = g.edges[e]
        score = sum(1 for _, f in g.adj[a] if s.state[f] != UNSET)
        score += sum(1 for _, f in g.adj[b] if s.state[f] != UNSET)
        if score > best_score:
            best, best_score = e, score
    return best


class _Budget:
    def __init__(self, nodes: Optional[int], timeout_ms: Optional[int], stats: SearchStats):
        self.nodes = nodes
        self.deadline = None if timeout_ms is None else time.monotonic() + timeout_ms / 1000
        self.stats = stats

    def tick(self):
        st = self.stats
        if self.nodes is not None and st.nodes + st.strong > self.nodes:
            raise BudgetExceeded(f"node budget {self.nodes} exhausted", st.nodes + st.strong)
        if self.deadline is not None and ((st.nodes + st.strong) & 255) == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded("time budget exhausted", st.nodes + st.strong)


def complete_orientation(s: SearchState, budget: Optional[_Budget] = None) -> Optional[Orientation]:
    """Depth-first completion of ``s``; an orientation whose D covers E \\ D(o), or None."""
    g = s.g
    full = (1 << g.m) - 1
    s.stats.nodes += 1
    if budget is not None:
        budget.tick()
    e = _branch_edge(s)
    if e < 0:
        if s.d | deletable_mask(g, s.state) == full:
            return s.orientation()
        return None
    saved = s.snapshot()
    a, b = g.edges[e]
    for u, v in ((a, b), (b, a)):
        if add_arcs_recursively(s, u, v):
            found = complete_orientation(s, budget)
            if found is not None:
                return found
        s.restore(saved)
    return None


def complementary_orientation(g: Graph, d_mask: int, stats: Optional[SearchStats] = None,
                              budget: Optional[_Budget] = None) -> Optional[Orientation]:
    """An orientation o' with D ∪ D(o') = E, edge 0 fixed forward; None if none exists."""
    s = SearchState(g, d_mask, stats)
    a, b = g.edges[0]
    if not add_arcs_recursively(s, a, b):
        return None
    return complete_orientation(s, budget)


def passes_vertex_filter(g: Graph, d_mask: int) -> bool:
    """Every vertex has a deletable incident edge (else no complement can exist)."""
    return all(any(d_mask >> e & 1 for _, e in g.adj[v]) for v in range(g.n))


def strong_orientation_bits(g: Graph) -> Iterator[list]:
    """Strong orientations with edge 0 forward, in lexicographic bit order.

    Depth-first over edges in index order; a branch dies as soon as some vertex
    has all its edges assigned in the same direction.
    """
    m, n = g.m, g.n
    if m == 0:
        return
    bits = [0] * m
    remaining = [g.degree(v) for v in range(n)]
    outs = [0] * n
    last = [max(e for _, e in g.adj[v]) if g.adj[v] else -1 for v in range(n)]

    def closed_ok(v):
        return 0 < outs[v] < g.degree(v)

    def rec(e):
        if e == m:
            if is_strong_bits(g, bits):
                yield bits
            return
        a, b = g.edges[e]
        for bit in ((0,) if e == 0 else (0, 1)):
            bits[e] = bit
            t = a if bit == 0 else b
            outs[t] += 1
            remaining[a] -= 1
            remaining[b] -= 1
            ok = (remaining[a] or closed_ok(a)) and (remaining[b] or closed_ok(b))
            if ok:
                yield from rec(e + 1)
            remaining[a] += 1
            remaining[b] += 1
            outs[t] -= 1

    if any(g.degree(v) == 0 for v in range(n)) and n > 1:
        return
    yield from rec(0)


@dataclass
class ExactResult:
    frank2: bool
    certificate: Optional[FrankCertificate]
    stats: SearchStats = field(default_factory=SearchStats)


def random_strong_bits(g: Graph, rng: random.Random) -> list:
    """A strong orientation from a randomised depth-first search (g must be 2-edge-connected).

    Tree edges point away from the root, back edges towards it; the result
    is normalised so that edge 0 is forward.
    """
    bits = [None] * g.m
    depth = [-1] * g.n
    root = rng.randrange(g.n)
    depth[root] = 0
    order = {v: rng.sample(g.adj[v], len(g.adj[v])) for v in range(g.n)}
    stack = [(root, iter(order[root]))]
    while stack:
        v, it = stack[-1]
        for w, e in it:
            if bits[e] is not None:
                continue
            # a visited w here is an ancestor, so both tree and back edges leave v
            bits[e] = 0 if g.edges[e][0] == v else 1
            if depth[w] < 0:
                depth[w] = depth[v] + 1
                stack.append((w, iter(order[w])))
                break
        else:
            stack.pop()
    if bits[0]:
        bits = [1 - b for b in bits]
    return bits


def climb_deletable(g: Graph, rng: random.Random, steps: int) -> list:
    """Hill-climb single-edge flips over strong orientations, never decreasing |D|."""
    bits = random_strong_bits(g, rng)
    best = bin(deletable_mask(g, bits)).count("1")
    for _ in range(steps):
        e = rng.randrange(g.m)
        bits[e] ^= 1
        d = deletable_mask(g, bits)
        size = bin(d).count("1")
        if d and size >= best:
            best = size
        else:
            bits[e] ^= 1
    if bits[0]:
        bits = [1 - b for b in bits]
    return bits


def _seed_orientations(g: Graph, climbs: int, seed: int):
    rng = random.Random(seed)
    seen = set()
    for _ in range(climbs):
        bits = climb_deletable(g, rng, 12 * g.m)
        key = tuple(bits)
        if key not in seen:
            seen.add(key)
            yield bits


def exact_frank2(g: Graph, budget_nodes: Optional[int] = None, timeout_ms: Optional[int] = None,
                 stats: Optional[SearchStats] = None, seed_climbs: int = 32,
                 seed: int = 0) -> ExactResult:
    """Decide fn(g) = 2; BudgetExceeded if a budget is set and runs out.

    Before the complete lexicographic enumeration, ``seed_climbs`` strong
    orientations with large deletable sets (found by hill-climbing) are tried
    as outer orientations.  This only reorders the outer loop; set it to 0
    for the plain enumeration.
    """
    if not g.is_cubic():
        raise NotCubic("exact search needs a cubic graph")
    if not topology.edge_connectivity_at_least(g, 3):
        raise PreconditionViolated("graph is not 3-edge-connected")
    stats = stats if stats is not None else SearchStats()
    limited = budget_nodes is not None or timeout_ms is not None
    budget = _Budget(budget_nodes, timeout_ms, stats) if limited else None
    outer = strong_orientation_bits(g)
    if seed_climbs:
        outer = chain(_seed_orientations(g, seed_climbs, seed), outer)
    for bits in outer:
        stats.strong += 1
        if budget is not None:
            budget.tick()
        d_mask = deletable_mask(g, bits)
        if not passes_vertex_filter(g, d_mask):
            stats.filtered += 1
            continue
        other = complementary_orientation(g, d_mask, stats, budget)
        if other is not None:
            first = Orientation(g, bits)
            d1 = frozenset(e for e in range(g.m) if d_mask >> e & 1)
            d2 = frozenset(e for e in range(g.m) if deletable_mask(g, other.bits) >> e & 1)
            return ExactResult(True, FrankCertificate([first, other], [d1, d2], "exact"), stats)
    return ExactResult(False, None, stats)
